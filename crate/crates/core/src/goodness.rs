//! Rational trace series, goodness evidence and the loyal-function classifier.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{fmt_q, q, UPoly, Q};
use crate::character::Character;
use crate::diagram::{Diagram, LinCombo};
use crate::endalg::QuotientAlgebra;
use crate::enumerate::{enumerate, Enumerator};
use crate::error::{Error, Result};
use crate::gram::{hom_dim, pair_combos, pair_diagrams, Saturation};

/// Coefficients required beyond the `deg P + deg Q + 1` that determine a fit
/// before it counts as found.
pub const SURPLUS_TERMS: usize = 3;

/// Number of seeded random combinations sampled per square arity.
pub const RANDOM_ENDOMORPHISMS: usize = 16;

/// Minimal-recurrence fit `P/Q` of a truncated power series.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSeriesFit {
    pub terms: Vec<Q>,
    /// Linear complexity found by Berlekamp–Massey.
    pub complexity: usize,
    /// `(P, Q)` reduced with `Q(0) = 1`, present when the fit was confirmed
    /// by at least `SURPLUS_TERMS` extra coefficients.
    pub fraction: Option<(UPoly, UPoly)>,
}

impl RationalSeriesFit {
    pub fn is_rational(&self) -> bool {
        self.fraction.is_some()
    }

    fn degs(&self) -> Option<(i64, i64)> {
        self.fraction.as_ref().map(|(p, q)| {
            (
                p.degree().map_or(-1, |d| d as i64),
                q.degree().map_or(-1, |d| d as i64),
            )
        })
    }

    pub fn deg_p_le_deg_q(&self) -> bool {
        self.degs().is_some_and(|(p, q)| p <= q)
    }

    pub fn q_squarefree(&self) -> bool {
        self.fraction.as_ref().is_some_and(|(_, q)| q.is_squarefree())
    }

    pub fn q0_nonzero(&self) -> bool {
        self.fraction.as_ref().is_some_and(|(_, q)| !q.coeff(0).is_zero())
    }

    /// `deg P ≤ deg Q`, `Q` squarefree, `Q(0) ≠ 0`.
    pub fn is_good(&self) -> bool {
        self.deg_p_le_deg_q() && self.q_squarefree() && self.q0_nonzero()
    }

    /// Membership in `span{1, X, 1/(1-λX)}`: good denominator and a
    /// polynomial part of degree at most one.
    pub fn is_loyal(&self) -> bool {
        self.q_squarefree() && self.q0_nonzero() && self.degs().is_some_and(|(p, q)| p <= q + 1)
    }

    pub fn summary(&self) -> FitSummary {
        FitSummary {
            terms: self.terms.iter().map(fmt_q).collect(),
            complexity: self.complexity,
            numerator: self.fraction.as_ref().map(|(p, _)| p.fmt_var("X")),
            denominator: self.fraction.as_ref().map(|(_, q)| q.fmt_var("X")),
            rational: self.is_rational(),
            deg_p_le_deg_q: self.deg_p_le_deg_q(),
            q_squarefree: self.q_squarefree(),
            q0_nonzero: self.q0_nonzero(),
            good: self.is_good(),
            loyal: self.is_loyal(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitSummary {
    pub terms: Vec<String>,
    pub complexity: usize,
    pub numerator: Option<String>,
    pub denominator: Option<String>,
    pub rational: bool,
    pub deg_p_le_deg_q: bool,
    pub q_squarefree: bool,
    pub q0_nonzero: bool,
    pub good: bool,
    pub loyal: bool,
}

/// Berlekamp–Massey over `Q`: the shortest `C` with `C(0)=1` annihilating the
/// series, and its length `L`.
pub fn berlekamp_massey(s: &[Q]) -> (UPoly, usize) {
    let mut c = vec![Q::one()];
    let mut b = vec![Q::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Q::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &c[i] * &s[n - i];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let mut next = c.clone();
        if next.len() < b.len() + m {
            next.resize(b.len() + m, Q::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            b = c;
            l = n + 1 - l;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
        c = next;
    }
    (UPoly::new(c), l)
}

/// Fits `Σ a_n X^n` by a rational function; at least 4 terms are required.
pub fn fit_rational(series: &[Q]) -> Result<RationalSeriesFit> {
    if series.len() < 4 {
        return Err(Error::InvalidParams(format!("need at least 4 terms, got {}", series.len())));
    }
    let (c, l) = berlekamp_massey(series);
    // the minimal recurrence is already in lowest terms: a common factor
    // would give a shorter one
    let reduced = {
        let a = UPoly::new(series.to_vec());
        let prod = &a * &c;
        (UPoly::new((0..l).map(|k| prod.coeff(k)).collect()), c.clone())
    };
    let unknowns = reduced.0.degree().map_or(0, |d| d + 1) + reduced.1.degree().unwrap_or(0);
    let fraction = (series.len() >= unknowns + SURPLUS_TERMS).then_some(reduced);
    Ok(RationalSeriesFit {
        terms: series.to_vec(),
        complexity: l,
        fraction,
    })
}

/// `[χ(Tr T^0), …, χ(Tr T^N)]` with `T^0` the identity.
pub fn trace_series(t: &LinCombo, chi: &Character, n: usize) -> Result<Vec<Q>> {
    let (p, qq) = t.arity();
    if p != qq {
        return Err(Error::Arity(format!("trace series needs an endomorphism, got ({p},{qq})")));
    }
    let id = LinCombo::from_diagram(&Diagram::identity(t.signature(), p));
    let mut power = id.clone();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let v = pair_combos(&power, &id, chi)?;
        out.push(
            v.as_constant()
                .ok_or_else(|| Error::MissingParams("trace series needs a specialized character".into()))?,
        );
        if k < n {
            power = power.compose(t)?;
        }
    }
    Ok(out)
}

/// Trace series of an element of a quotient algebra given by coordinates.
pub fn trace_series_in(alg: &QuotientAlgebra, x: &[Q], n: usize) -> Vec<Q> {
    let d = alg.dim();
    // column j of R_x is e_j·x
    let mut rx = vec![vec![Q::zero(); d]; d];
    for j in 0..d {
        let mut e = vec![Q::zero(); d];
        e[j] = Q::one();
        for (i, v) in alg.mul(&e, x).into_iter().enumerate() {
            rx[i][j] = v;
        }
    }
    let dot = |v: &[Q]| -> Q { v.iter().zip(&alg.trace).map(|(a, b)| a * b).sum() };
    let mut power = alg.unit.clone();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        out.push(dot(&power));
        if k < n {
            power = rx
                .iter()
                .map(|row| row.iter().zip(&power).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
                .collect();
        }
    }
    out
}

/// Inputs of `check_goodness`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoodnessConfig {
    pub enumerator: Enumerator,
    pub pq_list: Vec<(usize, usize)>,
    pub cutoffs: Vec<usize>,
    /// Series length is `n + 1`.
    pub n: usize,
    pub random_samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationRow {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
    pub saturation: Saturation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndoFit {
    pub endomorphism: String,
    pub fit: Option<FitSummary>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodnessReport {
    pub seed: u64,
    pub character: String,
    pub saturation: Vec<SaturationRow>,
    pub endomorphisms: Vec<EndoFit>,
    pub verdict: Verdict,
    pub witness: Option<String>,
    /// Realizability by a structure in a good category is not testable; only
    /// finite-codimension and trace-series evidence is reported.
    pub scope: String,
}

/// Classifies one trace series. `bounded` means the series is known to be
/// rational of complexity at most half its length (it was computed inside a
/// finite-dimensional algebra), so an unconfirmed fit is only a budget issue.
fn fit_entry(name: String, series: Result<Vec<Q>>, bounded: bool) -> (EndoFit, Option<(Verdict, String)>) {
    match series.and_then(|s| fit_rational(&s)) {
        Ok(fit) => {
            let len = fit.terms.len();
            let v = if fit.is_rational() && !fit.is_good() {
                Some((
                    Verdict::Fail,
                    format!(
                        "trace series of {name} is P/Q = ({})/({}), which is not good",
                        fit.fraction.as_ref().map_or(String::new(), |f| f.0.fmt_var("X")),
                        fit.fraction.as_ref().map_or(String::new(), |f| f.1.fmt_var("X"))
                    ),
                ))
            } else if !fit.is_rational() && !bounded && 2 * fit.complexity >= len {
                Some((
                    Verdict::Fail,
                    format!(
                        "trace series of {name} has linear complexity {} on {len} terms: the Hankel matrix of order {} is nonsingular, no recurrence within the cutoff",
                        fit.complexity,
                        len / 2
                    ),
                ))
            } else if !fit.is_rational() {
                Some((Verdict::Inconclusive, String::new()))
            } else {
                None
            };
            (
                EndoFit {
                    endomorphism: name,
                    fit: Some(fit.summary()),
                    error: None,
                },
                v,
            )
        }
        Err(e) => (
            EndoFit {
                endomorphism: name,
                fit: None,
                error: Some(e.to_string()),
            },
            Some((Verdict::Inconclusive, String::new())),
        ),
    }
}

/// Desk-scale goodness evidence for a parameter-free character.
pub fn check_goodness(chi: &Character, cfg: &GoodnessConfig) -> Result<GoodnessReport> {
    if !chi.params().is_empty() {
        return Err(Error::MissingParams("goodness needs a specialized character".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut saturation = Vec::new();
    let mut endos = Vec::new();
    let mut fail: Option<String> = None;
    let mut inconclusive = false;
    let top = cfg.cutoffs.last().copied().unwrap_or(0);
    for &(p, q_) in &cfg.pq_list {
        match hom_dim(cfg.enumerator, chi, p, q_, &cfg.cutoffs, None) {
            Ok((dim, sat)) => {
                if !sat.saturated {
                    inconclusive = true;
                }
                saturation.push(SaturationRow {
                    p,
                    q: q_,
                    dim,
                    saturation: sat,
                })
            }
            Err(Error::Budget(_) | Error::Domain(_)) => inconclusive = true,
            Err(e) => return Err(e),
        }
        if p != q_ {
            continue;
        }
        let set = enumerate(cfg.enumerator, chi.signature(), p, p, top)?;
        if set.is_empty() {
            continue;
        }
        // a nondegenerate truncated span always looks closed under products,
        // so the algebra is trusted only once the dimension has stabilised
        let stable = saturation.last().is_some_and(|r| (r.p, r.q) == (p, p) && r.saturation.saturated);
        let alg = match QuotientAlgebra::from_spanning_set(&set, chi) {
            Ok(a) if stable && a.warnings.is_empty() => Some(a),
            Ok(_) | Err(Error::Domain(_)) => None,
            Err(e) => return Err(e),
        };
        let mut record = |entry: EndoFit, v: Option<(Verdict, String)>| {
            match v {
                Some((Verdict::Fail, w)) if fail.is_none() => fail = Some(w),
                Some((Verdict::Inconclusive, _)) => inconclusive = true,
                _ => {}
            }
            endos.push(entry);
        };
        let Some(alg) = alg else {
            // diagram-level series only
            record(
                EndoFit {
                    endomorphism: format!("End({p}) modulo the radical"),
                    fit: None,
                    error: Some("hom-space dimension not saturated at this cutoff".into()),
                },
                Some((Verdict::Inconclusive, String::new())),
            );
            for d in &set.diagrams {
                let (entry, v) = fit_entry(d.to_literal(), trace_series(&LinCombo::from_diagram(d), chi, cfg.n), false);
                record(entry, v);
            }
            continue;
        };
        // minimal polynomials in the algebra have degree at most its dimension
        let len = cfg.n.max(2 * alg.dim() + SURPLUS_TERMS);
        let coords = diagram_coords(&alg, &set.diagrams, chi)?;
        for (d, x) in set.diagrams.iter().zip(&coords) {
            let (entry, v) = fit_entry(d.to_literal(), Ok(trace_series_in(&alg, x, len)), true);
            record(entry, v);
        }
        for k in 0..cfg.random_samples {
            let coeffs: Vec<i64> = (0..set.len()).map(|_| rng.gen_range(-3..=3)).collect();
            let mut x = vec![Q::zero(); alg.dim()];
            for (&c, v) in coeffs.iter().zip(&coords) {
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += q(c) * vi;
                }
            }
            let name = format!("random#{k}({p},{p}) coeffs={coeffs:?}");
            let (entry, v) = fit_entry(name, Ok(trace_series_in(&alg, &x, len)), true);
            record(entry, v);
        }
    }
    let verdict = if fail.is_some() {
        Verdict::Fail
    } else if inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(GoodnessReport {
        seed: cfg.seed,
        character: chi.provenance().to_string(),
        saturation,
        endomorphisms: endos,
        verdict,
        witness: fail,
        scope: "evidence for finite-codimension radicals and rational trace series only".into(),
    })
}

/// Coordinates of each diagram in the quotient-algebra basis, read off
/// from the nondegenerate pairing against that basis.
fn diagram_coords(alg: &QuotientAlgebra, ds: &[Diagram], chi: &Character) -> Result<Vec<Vec<Q>>> {
    let n = alg.dim();
    let numeric = |x: &Diagram, y: &Diagram| -> Result<Q> {
        pair_diagrams(x, y, chi)?
            .as_constant()
            .ok_or_else(|| Error::MissingParams("goodness needs a specialized character".into()))
    };
    let mut m = crate::arith::Matrix::zeros(n, n);
    for (j, bj) in alg.basis.iter().enumerate() {
        for (i, bi) in alg.basis.iter().enumerate() {
            m.set(j, i, numeric(bi, bj)?);
        }
    }
    let inv = m
        .inverse()
        .ok_or_else(|| Error::Inconsistent("quotient-algebra basis pairs degenerately".into()))?;
    ds.iter()
        .map(|d| Ok(inv.mul_vec(&alg.basis.iter().map(|b| numeric(d, b)).collect::<Result<Vec<_>>>()?)))
        .collect()
}

/// Loyalty of `Z(X) = Σ α_g X^g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoyalReport {
    pub fit: FitSummary,
    pub loyal: bool,
}

pub fn check_loyal(alpha: &[Q]) -> Result<LoyalReport> {
    let fit = fit_rational(alpha)?;
    Ok(LoyalReport {
        loyal: fit.is_loyal(),
        fit: fit.summary(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q_pow, qf};
    use crate::realize::{endo_model, gl_signature};

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn geometric_series() {
        let s: Vec<Q> = (0..10).map(|k| q_pow(&q(3), k)).collect();
        let f = fit_rational(&s).unwrap();
        let (p, qq) = f.fraction.clone().unwrap();
        assert_eq!(p, UPoly::one());
        assert_eq!(qq, UPoly::new(qs(&[1, -3])));
        assert!(f.is_good() && f.is_loyal());
    }

    #[test]
    fn affine_and_fibonacci() {
        let f = fit_rational(&qs(&[0, 2, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(f.fraction.clone().unwrap(), (UPoly::new(qs(&[0, 2])), UPoly::one()));
        assert!(f.is_loyal());
        assert!(!f.is_good());
        let fib = fit_rational(&qs(&[1, 1, 2, 3, 5, 8, 13, 21, 34])).unwrap();
        assert_eq!(fib.fraction.clone().unwrap().1, UPoly::new(qs(&[1, -1, -1])));
        assert!(fib.is_good());
    }

    #[test]
    fn factorials_are_not_rational() {
        let mut s = vec![q(1)];
        for k in 1..16 {
            let next = &s[k - 1] * q(k as i64);
            s.push(next);
        }
        let f = fit_rational(&s).unwrap();
        assert!(!f.is_rational());
    }

    #[test]
    fn loyal_basis_round_trip() {
        for lam in [1, 2, 5, -3] {
            let l = q(lam);
            let s: Vec<Q> = (0..8).map(|k| q_pow(&l, k)).collect();
            assert!(check_loyal(&s).unwrap().loyal);
            let scaled: Vec<Q> = s.iter().map(|x| x * qf(1, lam)).collect();
            let f = fit_rational(&scaled).unwrap();
            assert_eq!(f.fraction.unwrap().1, UPoly::new(vec![q(1), -l.clone()]));
        }
        assert!(check_loyal(&qs(&[1, 2, 0, 0, 0, 0])).unwrap().loyal);
        assert!(!check_loyal(&qs(&[0, 0, 1, 0, 0, 0, 0, 0])).unwrap().loyal);
    }

    #[test]
    fn series_of_generators() {
        let chi = Character::gl().specialize(&[q(4)]).unwrap();
        let id = LinCombo::from_diagram(&Diagram::identity(&gl_signature(), 1));
        assert_eq!(trace_series(&id, &chi, 3).unwrap(), qs(&[4, 4, 4, 4]));

        let chi = Character::endo(vec![(q(2), q(3))]);
        let t = LinCombo::from_diagram(&Diagram::generator(chi.signature(), "T").unwrap());
        assert_eq!(trace_series(&t, &chi, 3).unwrap(), qs(&[3, 6, 12, 24]));

        let m = endo_model(&[vec![q(2), q(0)], vec![q(0), q(3)]]).unwrap();
        let chi = Character::from_model(&m);
        let t = LinCombo::from_diagram(&Diagram::generator(chi.signature(), "T").unwrap());
        let f = fit_rational(&trace_series(&t, &chi, 8).unwrap()).unwrap();
        assert_eq!(f.fraction.unwrap().1, UPoly::new(qs(&[1, -5, 6])));
    }
}
