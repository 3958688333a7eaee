use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_q, Q};

/// Univariate polynomial over the rationals, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Q>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * X^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(Q::one(), 1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&(Q::one() / l))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let lead_inv = Q::one() / d.lead();
        let n = self.coeffs.len();
        if n <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Division known to be exact.
    pub fn exact_div(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// True when the polynomial has no repeated roots over the algebraic closure.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Primitive integer polynomial with the same roots (positive leading coefficient).
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Distinct rational roots whose numerator and denominator are bounded by `height`,
    /// together with multiplicities, plus the cofactor left after dividing them out.
    pub fn rational_roots(&self, height: u64) -> (Vec<(Q, usize)>, UPoly) {
        let mut rest = self.clone();
        let mut roots = Vec::new();
        if rest.is_zero() {
            return (roots, rest);
        }
        let mut zero_mult = 0;
        while rest.coeff(0).is_zero() && !rest.is_zero() {
            rest = UPoly::new(rest.coeffs[1..].to_vec());
            zero_mult += 1;
        }
        if zero_mult > 0 {
            roots.push((Q::zero(), zero_mult));
        }
        if rest.degree().unwrap_or(0) == 0 {
            return (roots, rest);
        }
        let ints = rest.primitive_integer();
        let c0 = ints[0].abs();
        let lc = ints.last().unwrap().abs();
        let divisors = |n: &BigInt| -> Vec<u64> {
            (1..=height)
                .filter(|k| (n % BigInt::from(*k)).is_zero())
                .collect()
        };
        let nums = divisors(&c0);
        let dens = divisors(&lc);
        let mut cands: Vec<Q> = Vec::new();
        for &a in &nums {
            for &b in &dens {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let r = Q::new(BigInt::from(a), BigInt::from(b));
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        for r in cands {
            let lin = UPoly::new(vec![-r.clone(), Q::one()]);
            let mut mult = 0;
            loop {
                if rest.degree().unwrap_or(0) == 0 {
                    break;
                }
                let (quot, rem) = rest.div_rem(&lin);
                if rem.is_zero() {
                    rest = quot;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                roots.push((r, mult));
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        (roots, rest)
    }

    /// Coefficients of the power series expansion of `self / den` up to `X^(n-1)`.
    pub fn series_div(&self, den: &UPoly, n: usize) -> Vec<Q> {
        let d0 = den.coeff(0);
        assert!(!d0.is_zero(), "series division needs den(0) != 0");
        let inv0 = Q::one() / d0;
        let mut out: Vec<Q> = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = self.coeff(k);
            for j in 1..=k.min(den.coeffs.len().saturating_sub(1)) {
                s -= den.coeff(j) * &out[k - j];
            }
            out.push(s * &inv0);
        }
        out
    }

    /// Lagrange interpolation through pairwise distinct abscissae.
    pub fn interpolate(points: &[(Q, Q)]) -> UPoly {
        let mut acc = UPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = UPoly::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let lin = UPoly::new(vec![-xj.clone(), Q::one()]);
                    basis = &basis * &lin.scale(&(Q::one() / (xi - xj)));
                }
            }
            acc = &acc + &basis;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&fmt_q(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&a), mono));
            }
        }
        out
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    fn p(cs: &[i64]) -> UPoly {
        UPoly::new(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (t-1)(t+2) and (t-1)(t-3)
        let a = &p(&[-1, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[-3, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let (quo, rem) = a.div_rem(&p(&[-1, 1]));
        assert!(rem.is_zero());
        assert_eq!(quo, p(&[2, 1]));
    }

    #[test]
    fn squarefree_detection() {
        assert!(p(&[-1, -1, 1]).is_squarefree());
        let sq = &p(&[-1, 1]) * &p(&[-1, 1]);
        assert!(!sq.is_squarefree());
    }

    #[test]
    fn rational_roots_found_with_multiplicity() {
        // t^2 (t-1)(2t+3)
        let f = &(&p(&[0, 0, 1]) * &p(&[-1, 1])) * &p(&[3, 2]);
        let (roots, rest) = f.rational_roots(100);
        assert_eq!(rest.degree(), Some(0));
        assert_eq!(roots, vec![(qf(-3, 2), 1), (q(0), 2), (q(1), 1)]);
        // t^2 - 2 has no rational roots
        let (roots, rest) = p(&[-2, 0, 1]).rational_roots(100);
        assert!(roots.is_empty());
        assert_eq!(rest.degree(), Some(2));
    }

    #[test]
    fn series_expansion() {
        // 1/(1 - X - X^2) is Fibonacci
        let s = UPoly::one().series_div(&p(&[1, -1, -1]), 8);
        let want: Vec<Q> = [1, 1, 2, 3, 5, 8, 13, 21].iter().map(|&k| q(k)).collect();
        assert_eq!(s, want);
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let f = p(&[1, -2, 0, 3]);
        let pts: Vec<(Q, Q)> = (0..4).map(|x| (q(x), f.eval(&q(x)))).collect();
        assert_eq!(UPoly::interpolate(&pts), f);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[0, -1, 0, 1]).to_string(), "t^3 - t");
        assert_eq!(UPoly::new(vec![qf(1, 2), q(2)]).to_string(), "2*t + 1/2");
    }
}
