//! Exact arithmetic: rationals, polynomials and dense linear algebra.

mod matrix;
mod mpoly;
mod ratfunc;
mod upoly;

pub use matrix::{Field, Matrix};
pub use mpoly::MPoly;
pub use ratfunc::RatFunc;
pub use upoly::UPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Formats as `"n"` for integers and `"n/d"` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_pow(x: &Q, e: u32) -> Q {
    let mut acc = <Q as One>::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// If `x` is an exact nonnegative power of the integer `base`, returns the exponent.
pub fn exact_log(x: &Q, base: u64) -> Option<u32> {
    if !x.is_integer() || !x.is_positive() || base < 2 {
        return None;
    }
    let mut v = x.numer().clone();
    let b = BigInt::from(base);
    let mut e = 0u32;
    while v > BigInt::one() {
        if (&v % &b).is_zero() {
            v /= &b;
            e += 1;
        } else {
            return None;
        }
    }
    Some(e)
}
