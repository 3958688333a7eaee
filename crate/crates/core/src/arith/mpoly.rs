use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{fmt_q, q_pow, UPoly, Q};

/// Sparse multivariate polynomial over the rationals.
///
/// Variables are identified by index; exponent vectors carry no trailing zeros,
/// so polynomials in different numbers of variables combine without padding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, Q>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, Q::one());
        MPoly { terms }
    }

    /// `c * prod_i x_i^{e_i}`
    pub fn monomial(c: Q, exps: &[u32]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exps.to_vec()), c);
        }
        MPoly { terms }
    }

    pub fn from_upoly(p: &UPoly, var: usize) -> Self {
        let mut out = MPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; var + 1];
            e[var] = k as u32;
            out.add_term(trim(e), c.clone());
        }
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let vanished = {
            let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
            *entry += c;
            entry.is_zero()
        };
        if vanished {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Number of variables actually occurring (highest index + 1).
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = MPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at a full assignment; missing variables count as an error.
    pub fn eval(&self, vals: &[Q]) -> Option<Q> {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            if e.len() > vals.len() {
                return None;
            }
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= q_pow(&vals[i], k);
                }
            }
            acc += t;
        }
        Some(acc)
    }

    /// Substitutes `vals[i]` for variable `i` where given, keeping the rest symbolic.
    pub fn substitute(&self, vals: &[Option<Q>]) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut ne = e.clone();
            for (i, k) in e.iter().enumerate() {
                if let Some(Some(v)) = vals.get(i) {
                    coeff *= q_pow(v, *k);
                    ne[i] = 0;
                }
            }
            out.add_term(trim(ne), coeff);
        }
        out
    }

    /// View as a univariate polynomial in variable `var`, if no other variable occurs.
    pub fn to_upoly(&self, var: usize) -> Option<UPoly> {
        let mut coeffs: Vec<Q> = Vec::new();
        for (e, c) in &self.terms {
            for (i, &k) in e.iter().enumerate() {
                if i != var && k != 0 {
                    return None;
                }
            }
            let k = e.get(var).copied().unwrap_or(0) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Q::zero());
            }
            coeffs[k] += c;
        }
        Some(UPoly::new(coeffs))
    }

    /// Renders with the given variable names (falls back to `x{i}`).
    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // highest total degree first, then reverse lexicographic
        let mut ts: Vec<(&Vec<u32>, &Q)> = self.terms.iter().collect();
        ts.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (e, c) in ts {
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, &k)| {
                    let n = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if k == 1 {
                        n
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&fmt_q(&a));
            } else if a.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&a), mono.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&[]))
    }
}

impl From<Q> for MPoly {
    fn from(c: Q) -> Self {
        MPoly::constant(c)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Q::one())
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(trim(e), c1 * c2);
            }
        }
        out
    }
}
