//! Endomorphism algebras modulo the radical at a numeric specialization.

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::arith::{fmt_q, q, Matrix, Q};
use crate::character::Character;
use crate::diagram::{Diagram, LinCombo};
use crate::enumerate::SpanningSet;
use crate::error::{Error, Result};
use crate::gram::{pair_combos, pair_diagrams, Gram};

/// Finite-dimensional algebra given by structure constants on a basis.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    /// Representatives of the basis (empty when built from raw constants).
    pub basis: Vec<Diagram>,
    /// `consts[i][j][k]`: coefficient of `b_k` in `b_i b_j`.
    pub consts: Vec<Vec<Vec<Q>>>,
    pub unit: Vec<Q>,
    /// `χ(Tr(b_i))`.
    pub trace: Vec<Q>,
    /// Products whose pairing vector was not reproduced by the basis; a
    /// sign the spanning set had not saturated.
    pub warnings: Vec<String>,
}

/// Outcome of `is_semisimple`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemisimplicityVerdict {
    pub semisimple: bool,
    /// A basis vector of the kernel of the regular trace form when degenerate.
    pub witness: Option<Vec<Q>>,
}

impl QuotientAlgebra {
    /// `End(W^{⊗p})` modulo the χ-radical, spanned by `set` (arity `(p,p)`),
    /// with `χ` free of parameters.
    pub fn from_spanning_set(set: &SpanningSet, chi: &Character) -> Result<Self> {
        if set.outputs != set.inputs {
            return Err(Error::Arity(format!("endomorphisms need square arity, got {:?}", set.arity())));
        }
        if !chi.params().is_empty() {
            return Err(Error::MissingParams("quotient algebras need a specialized character".into()));
        }
        let gram = Gram::compute(&set.diagrams, &set.diagrams, chi)?;
        let g = gram.specialize(&[])?;
        let rows = g.independent_rows();
        let basis: Vec<Diagram> = rows.iter().map(|&i| set.diagrams[i].clone()).collect();
        let gb = g.submatrix(&rows, &(0..set.len()).collect::<Vec<_>>());
        let cols = gb.transpose().independent_rows();
        let square = gb.submatrix(&(0..rows.len()).collect::<Vec<_>>(), &cols).transpose();
        let inv = square.inverse().expect("pivot block is invertible");
        let gbt = gb.transpose();
        let mut warnings = Vec::new();
        let coords = |x: &Diagram, warnings: &mut Vec<String>| -> Result<Vec<Q>> {
            let v = set
                .diagrams
                .iter()
                .map(|s| pair_diagrams(x, s, chi).map(|e| e.as_constant().expect("numeric")))
                .collect::<Result<Vec<Q>>>()?;
            let vp: Vec<Q> = cols.iter().map(|&j| v[j].clone()).collect();
            let c = inv.mul_vec(&vp);
            let back = gbt.mul_vec(&c);
            if back != v {
                warnings.push(format!("{x} is not in the span modulo the radical"));
            }
            Ok(c)
        };
        let n = basis.len();
        let mut consts = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                consts[i][j] = coords(&basis[i].compose(&basis[j])?, &mut warnings)?;
            }
        }
        let id = Diagram::identity(&set.signature, set.outputs);
        let unit = coords(&id, &mut warnings)?;
        let trace = basis
            .iter()
            .map(|b| chi.evaluate_q(&b.trace_close()?))
            .collect::<Result<Vec<Q>>>()?;
        Ok(QuotientAlgebra {
            basis,
            consts,
            unit,
            trace,
            warnings,
        })
    }

    /// An algebra entered directly by structure constants.
    pub fn from_structure(consts: Vec<Vec<Vec<Q>>>, unit: Vec<Q>) -> Result<Self> {
        let n = unit.len();
        if consts.len() != n || consts.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::InvalidParams("structure constants must be n×n×n".into()));
        }
        let mut a = QuotientAlgebra {
            basis: Vec::new(),
            consts,
            unit,
            trace: Vec::new(),
            warnings: Vec::new(),
        };
        a.trace = (0..n).map(|i| a.regular_trace_basis(i)).collect();
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    /// Coordinates of `x y`.
    pub fn mul(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim();
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let s = &x[i] * &y[j];
                for k in 0..n {
                    out[k] += &s * &self.consts[i][j][k];
                }
            }
        }
        out
    }

    fn e(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = q(1);
        v
    }

    fn regular_trace_basis(&self, i: usize) -> Q {
        (0..self.dim()).map(|j| self.consts[i][j][j].clone()).sum()
    }

    /// `Tr(L_x)`.
    pub fn regular_trace(&self, x: &[Q]) -> Q {
        x.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * self.regular_trace_basis(i))
            .sum()
    }

    /// `Tr_reg(b_i b_j)`.
    pub fn trace_form(&self) -> Matrix<Q> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.regular_trace(&self.consts[i][j]));
            }
        }
        m
    }

    /// Associativity on all basis triples.
    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let l = self.mul(&self.consts[i][j], &self.e(k));
                    let r = self.mul(&self.e(i), &self.consts[j][k]);
                    l == r
                })
            })
        })
    }

    pub fn unit_acts_as_identity(&self) -> bool {
        (0..self.dim()).all(|i| {
            let e = self.e(i);
            self.mul(&self.unit, &e) == e && self.mul(&e, &self.unit) == e
        })
    }

    /// Nondegeneracy of the regular trace form.
    pub fn is_semisimple(&self) -> SemisimplicityVerdict {
        let ker = self.trace_form().kernel();
        SemisimplicityVerdict {
            semisimple: ker.is_empty(),
            witness: ker.into_iter().next(),
        }
    }

    /// Dimension of the centre, which counts the simple blocks.
    pub fn simple_count(&self) -> Result<usize> {
        if !self.is_semisimple().semisimple {
            return Err(Error::NotSemisimple);
        }
        let n = self.dim();
        let mut rows = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|i| &self.consts[i][j][k] - &self.consts[j][i][k]).collect::<Vec<Q>>());
            }
        }
        let m = Matrix::new(rows.len(), n, rows.into_iter().flatten().collect());
        Ok(n - m.rank())
    }

    /// Same algebra in the basis `b'_i = b_{perm[i]}`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.dim();
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let consts = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let src = &self.consts[perm[i]][perm[j]];
                        (0..n).map(|k| src[perm[k]].clone()).collect()
                    })
                    .collect()
            })
            .collect();
        QuotientAlgebra {
            basis: perm.iter().filter_map(|&p| self.basis.get(p).cloned()).collect(),
            consts,
            unit: (0..n).map(|k| self.unit[perm[k]].clone()).collect(),
            trace: perm.iter().filter_map(|&p| self.trace.get(p).cloned()).collect(),
            warnings: self.warnings.clone(),
        }
    }

    pub fn report(&self) -> AlgebraReport {
        let v = self.is_semisimple();
        AlgebraReport {
            dim: self.dim(),
            basis: self.basis.iter().map(Diagram::to_literal).collect(),
            structure_constants: self
                .consts
                .iter()
                .map(|r| r.iter().map(|v| v.iter().map(fmt_q).collect()).collect())
                .collect(),
            unit: self.unit.iter().map(fmt_q).collect(),
            trace: self.trace.iter().map(fmt_q).collect(),
            semisimple: v.semisimple,
            witness: v.witness.map(|w| w.iter().map(fmt_q).collect()),
            simple_count: self.simple_count().ok(),
            warnings: self.warnings.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub dim: usize,
    pub basis: Vec<String>,
    pub structure_constants: Vec<Vec<Vec<String>>>,
    pub unit: Vec<String>,
    pub trace: Vec<String>,
    pub semisimple: bool,
    pub witness: Option<Vec<String>>,
    pub simple_count: Option<usize>,
    pub warnings: Vec<String>,
}

/// Outcome of the nilpotent-trace test.
#[derive(Clone, Debug, PartialEq)]
pub enum NilpotentVerdict {
    /// `T^r` is negligible and `χ(Tr T) = 0`.
    Pass { r: usize },
    /// `T^r` is negligible but `χ(Tr T)` is the given nonzero value.
    Fail { r: usize, trace: Q },
    /// No power up to `r_max` is negligible.
    Inconclusive { r_max: usize },
}

/// Least `r ≤ r_max` with `T^r` pairing to zero against `dual` (which should
/// span the dual hom-space), then checks `χ(Tr T) = 0`.
pub fn nilpotent_trace_check(t: &LinCombo, chi: &Character, dual: &[Diagram], r_max: usize) -> Result<NilpotentVerdict> {
    let (p, q) = t.arity();
    if p != q {
        return Err(Error::Arity(format!("nilpotency needs an endomorphism, got ({p},{q})")));
    }
    if !chi.params().is_empty() {
        return Err(Error::MissingParams("nilpotent check needs a specialized character".into()));
    }
    let mut power = t.clone();
    for r in 1..=r_max {
        let negligible = dual.iter().all(|y| {
            pair_combos(&power, &LinCombo::from_diagram(y), chi)
                .map(|v| v.is_zero())
                .unwrap_or(false)
        });
        if negligible {
            let id = LinCombo::from_diagram(&Diagram::identity(t.signature(), p));
            let tr = pair_combos(t, &id, chi)?.as_constant().expect("numeric");
            return Ok(if tr.is_zero() {
                NilpotentVerdict::Pass { r }
            } else {
                NilpotentVerdict::Fail { r, trace: tr }
            });
        }
        if r < r_max {
            power = power.compose(t)?;
        }
    }
    Ok(NilpotentVerdict::Inconclusive { r_max })
}

/// Three specialization points for probing generic behaviour: one random
/// rational of height at least 1000, and two more.
pub fn generic_points<R: Rng>(rng: &mut R) -> [Q; 3] {
    let mut pick = || {
        let num: i64 = rng.gen_range(1000..100_000) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let den: i64 = rng.gen_range(1..=97);
        Q::new(num.into(), den.into())
    };
    [pick(), pick(), pick()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_partition, enumerate_permutations};
    use crate::realize::gl_signature;

    #[test]
    fn group_algebra_of_s2() {
        let chi = Character::gl().specialize(&[q(5)]).unwrap();
        let s = enumerate_permutations(&gl_signature(), 2);
        let a = QuotientAlgebra::from_spanning_set(&s, &chi).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.warnings.is_empty());
        assert!(a.is_associative());
        assert!(a.unit_acts_as_identity());
        assert!(a.is_semisimple().semisimple);
        assert_eq!(a.simple_count().unwrap(), 2);
        assert_eq!(a.permuted(&[1, 0]).simple_count().unwrap(), 2);
    }

    #[test]
    fn dual_numbers_are_not_semisimple() {
        // basis (1, y), y² = 0
        let z = Q::zero;
        let consts = vec![vec![vec![q(1), z()], vec![z(), q(1)]], vec![vec![z(), q(1)], vec![z(), z()]]];
        let a = QuotientAlgebra::from_structure(consts, vec![q(1), z()]).unwrap();
        let v = a.is_semisimple();
        assert!(!v.semisimple);
        assert_eq!(v.witness, Some(vec![z(), q(1)]));
        assert!(matches!(a.simple_count(), Err(Error::NotSemisimple)));
    }

    #[test]
    fn partition_algebra_p1() {
        let chi = Character::sym().specialize(&[q(7)]).unwrap();
        let s = enumerate_partition(chi.signature(), 1, 1).unwrap();
        let a = QuotientAlgebra::from_spanning_set(&s, &chi).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.is_associative());
        assert!(a.is_semisimple().semisimple);
        assert_eq!(a.simple_count().unwrap(), 2);
    }

    #[test]
    fn identity_is_never_negligible() {
        let chi = Character::gl().specialize(&[q(3)]).unwrap();
        let sig = gl_signature();
        let id = LinCombo::from_diagram(&Diagram::identity(&sig, 1));
        let v = nilpotent_trace_check(&id, &chi, &[Diagram::identity(&sig, 1)], 4).unwrap();
        assert_eq!(v, NilpotentVerdict::Inconclusive { r_max: 4 });
    }
}
