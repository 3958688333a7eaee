//! The trace pairing, Gram matrices, generic ranks, exceptional values and radicals.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{fmt_q, MPoly, Matrix, RatFunc, UPoly, Q};
use crate::character::Character;
use crate::diagram::{Diagram, LinCombo};
use crate::enumerate::{enumerate, Enumerator, SpanningSet};
use crate::error::{Error, Result};
use crate::realize::Model;

/// Default height bound for the rational-root search over exceptional values.
pub const DEFAULT_ROOT_HEIGHT: u64 = 100;

/// `χ(Tr(x∘y))` for `x:(p,q)`, `y:(q,p)`.
pub fn pair_diagrams(x: &Diagram, y: &Diagram, chi: &Character) -> Result<MPoly> {
    if x.outputs() != y.inputs() || x.inputs() != y.outputs() {
        return Err(Error::Arity(format!(
            "cannot pair ({},{}) with ({},{})",
            x.outputs(),
            x.inputs(),
            y.outputs(),
            y.inputs()
        )));
    }
    chi.evaluate(&x.compose(y)?.trace_close()?)
}

/// Bilinear extension of `pair_diagrams`.
pub fn pair_combos(x: &LinCombo, y: &LinCombo, chi: &Character) -> Result<MPoly> {
    let mut acc = MPoly::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            acc = &acc + &(&(ca * cb) * &pair_diagrams(a, b, chi)?);
        }
    }
    Ok(acc)
}

/// Gram matrix of the pairing between two spanning lists.
#[derive(Clone, Debug)]
pub struct Gram {
    pub rows: Vec<Diagram>,
    pub cols: Vec<Diagram>,
    pub params: Vec<String>,
    pub entries: Vec<Vec<MPoly>>,
}

impl Gram {
    pub fn compute(rows: &[Diagram], cols: &[Diagram], chi: &Character) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|x| cols.iter().map(|y| pair_diagrams(x, y, chi)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Gram {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            params: chi.params().to_vec(),
            entries,
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows.len() == self.cols.len()
            && (0..self.rows.len()).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Entries with all parameters substituted.
    pub fn specialize(&self, vals: &[Q]) -> Result<Matrix<Q>> {
        let rows = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| {
                        e.eval(vals)
                            .ok_or_else(|| Error::MissingParams(format!("entry {e} needs {} values", e.nvars())))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(from_rows(rows, self.cols.len()))
    }

    /// Entries as polynomials in the single parameter (constants if there is none).
    pub fn univariate(&self) -> Result<Vec<Vec<UPoly>>> {
        if self.params.len() > 1 {
            return Err(Error::InvalidParams(format!(
                "generic rank needs at most one parameter, character has {:?}",
                self.params
            )));
        }
        Ok(self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.to_upoly(0).expect("univariate entry")).collect())
            .collect())
    }

    pub fn rank_at(&self, vals: &[Q]) -> Result<usize> {
        Ok(self.specialize(vals)?.rank())
    }

    /// Generic rank and the rank-drop locus, see `analyze_univariate`.
    pub fn analyze(&self, height: u64) -> Result<RankAnalysis> {
        analyze_univariate(&self.univariate()?, self.cols.len(), height)
    }

    /// Left kernel over `Q(t)` (coefficient vectors on `rows`), denominators cleared.
    pub fn generic_radical(&self) -> Result<Vec<Vec<UPoly>>> {
        let g = self.univariate()?;
        let m = from_rows(
            g.iter()
                .map(|r| r.iter().map(|e| RatFunc::from_poly(e.clone())).collect())
                .collect(),
            self.cols.len(),
        );
        Ok(m.transpose().kernel().into_iter().map(clear_denominators).collect())
    }

    /// Left kernel of the specialized matrix.
    pub fn radical_at(&self, vals: &[Q]) -> Result<Vec<Vec<Q>>> {
        Ok(self.specialize(vals)?.transpose().kernel())
    }
}

fn from_rows<T: crate::arith::Field>(rows: Vec<Vec<T>>, ncols: usize) -> Matrix<T> {
    let n = rows.len();
    Matrix::new(n, ncols, rows.into_iter().flatten().collect())
}

fn clear_denominators(v: Vec<RatFunc>) -> Vec<UPoly> {
    let lcm = v.iter().fold(UPoly::one(), |acc, x| {
        let g = acc.gcd(x.den());
        (&acc * x.den()).exact_div(&g)
    });
    let polys: Vec<UPoly> = v.iter().map(|x| (x.num() * &lcm).exact_div(x.den())).collect();
    let content = polys.iter().fold(UPoly::zero(), |acc, p| acc.gcd(p));
    if content.is_zero() {
        return polys;
    }
    polys.iter().map(|p| p.exact_div(&content)).collect()
}

/// Result of fraction-free elimination over `Q[t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankAnalysis {
    pub generic_rank: usize,
    /// An `r×r` minor on the pivot rows and columns (up to sign).
    pub pivot_minor: UPoly,
    /// Verified rational points where the rank drops, with the rank there.
    pub exceptional: Vec<(Q, usize)>,
    /// A positive-degree factor of the candidate locus with no rational roots remained.
    pub nonrational_locus: bool,
}

/// Bareiss elimination with full pivoting; returns rank, last pivot and the
/// pivot rows/columns.
pub fn bareiss(mut a: Vec<Vec<UPoly>>, ncols: usize) -> (usize, UPoly, Vec<usize>, Vec<usize>) {
    let n = a.len();
    let mut row_ids: Vec<usize> = (0..n).collect();
    let mut col_ids: Vec<usize> = (0..ncols).collect();
    let mut prev = UPoly::one();
    let mut r = 0;
    while r < n.min(ncols) {
        // pivot of least degree keeps intermediate growth down
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, x) in row.iter().enumerate().skip(r) {
                if let Some(dg) = x.degree() {
                    if best.map_or(true, |b| dg < b.2) {
                        best = Some((i, j, dg));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(r, pi);
        row_ids.swap(r, pi);
        for row in a.iter_mut() {
            row.swap(r, pj);
        }
        col_ids.swap(r, pj);
        for i in r + 1..n {
            for j in r + 1..ncols {
                let v = &(&a[r][r] * &a[i][j]) - &(&a[i][r] * &a[r][j]);
                a[i][j] = v.exact_div(&prev);
            }
            a[i][r] = UPoly::zero();
        }
        prev = a[r][r].clone();
        r += 1;
    }
    (r, prev, row_ids[..r].to_vec(), col_ids[..r].to_vec())
}

fn det_poly(m: &[Vec<UPoly>], rows: &[usize], cols: &[usize]) -> UPoly {
    let sub: Vec<Vec<UPoly>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
    let (r, piv, _, _) = bareiss(sub, cols.len());
    if r < rows.len() {
        UPoly::zero()
    } else {
        piv
    }
}

fn rank_at_point(m: &[Vec<UPoly>], ncols: usize, t: &Q) -> usize {
    from_rows(m.iter().map(|r| r.iter().map(|e| e.eval(t)).collect()).collect(), ncols).rank()
}

/// Generic rank via Bareiss; exceptional candidates are the rational roots of
/// the gcd of the pivot minor with its one-swap neighbours, each confirmed by
/// exact rank at that point.
pub fn analyze_univariate(m: &[Vec<UPoly>], ncols: usize, height: u64) -> Result<RankAnalysis> {
    let n = m.len();
    let (r, piv, prow, pcol) = bareiss(m.to_vec(), ncols);
    if r == 0 {
        return Ok(RankAnalysis {
            generic_rank: 0,
            pivot_minor: UPoly::zero(),
            exceptional: Vec::new(),
            nonrational_locus: false,
        });
    }
    let mut g = piv.clone();
    let other_rows: Vec<usize> = (0..n).filter(|i| !prow.contains(i)).collect();
    let other_cols: Vec<usize> = (0..ncols).filter(|j| !pcol.contains(j)).collect();
    'outer: for k in 0..r {
        for &o in &other_rows {
            if g.degree() == Some(0) {
                break 'outer;
            }
            let mut rows = prow.clone();
            rows[k] = o;
            g = g.gcd(&det_poly(m, &rows, &pcol));
        }
        for &o in &other_cols {
            if g.degree() == Some(0) {
                break 'outer;
            }
            let mut cols = pcol.clone();
            cols[k] = o;
            g = g.gcd(&det_poly(m, &prow, &cols));
        }
    }
    let (roots, rest) = g.rational_roots(height);
    let mut exceptional = Vec::new();
    for (t, _) in roots {
        let rk = rank_at_point(m, ncols, &t);
        if rk < r {
            exceptional.push((t, rk));
        }
    }
    Ok(RankAnalysis {
        generic_rank: r,
        pivot_minor: piv,
        exceptional,
        nonrational_locus: rest.degree().unwrap_or(0) > 0,
    })
}

/// Rank of the span of realized diagrams on a model.
pub fn realized_rank(diagrams: &[Diagram], model: &Model) -> Result<usize> {
    if diagrams.is_empty() {
        return Ok(0);
    }
    let rows = diagrams
        .iter()
        .map(|d| Ok(model.realize(d)?.data))
        .collect::<Result<Vec<_>>>()?;
    // realized tensors are sparse; drop columns that vanish in every row
    let support: Vec<usize> = (0..rows[0].len()).filter(|&j| rows.iter().any(|r| !r[j].is_zero())).collect();
    let packed = rows
        .into_iter()
        .map(|r| support.iter().map(|&j| r[j].clone()).collect())
        .collect();
    Ok(from_rows(packed, support.len()).rank())
}

/// Default dual spanning set: the set itself for square arity, else the
/// same enumerator at the transposed arity.
pub fn dual_set(s: &SpanningSet) -> Result<SpanningSet> {
    if s.outputs == s.inputs {
        return Ok(s.clone());
    }
    enumerate(s.enumerator, &s.signature, s.inputs, s.outputs, s.cutoff.unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalValue {
    pub value: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationStep {
    pub cutoff: usize,
    pub size: usize,
    pub rank: usize,
}

/// Rank per cutoff; saturated when the last two cutoffs agree (evidence only).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Saturation {
    pub saturated: bool,
    pub history: Vec<SaturationStep>,
}

/// Serializable summary of a Gram computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramReport {
    pub outputs: usize,
    pub inputs: usize,
    pub enumerator: Enumerator,
    pub cutoff: Option<usize>,
    pub params: Vec<String>,
    pub character: String,
    pub basis: Vec<String>,
    pub dual_basis: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    /// Parameter values substituted before elimination, if any.
    pub specialization: Option<Vec<String>>,
    pub generic_rank: usize,
    pub pivot_minor: Option<String>,
    pub exceptional_values: Vec<ExceptionalValue>,
    pub nonrational_locus: bool,
    /// Coefficient vectors on `basis` spanning the left radical.
    pub radical_basis: Vec<Vec<String>>,
    pub saturation: Option<Saturation>,
}

/// Full report for one spanning set: generic analysis when `at` is `None`,
/// otherwise rank and radical at the given parameter values.
pub fn gram_report(s: &SpanningSet, dual: &SpanningSet, chi: &Arc<Character>, at: Option<&[Q]>) -> Result<GramReport> {
    if dual.arity() != (s.inputs, s.outputs) {
        return Err(Error::Arity(format!(
            "dual set has arity {:?}, expected ({},{})",
            dual.arity(),
            s.inputs,
            s.outputs
        )));
    }
    let g = Gram::compute(&s.diagrams, &dual.diagrams, chi)?;
    let names = chi.params().to_vec();
    let matrix = g
        .entries
        .iter()
        .map(|r| r.iter().map(|e| e.fmt_with(&names)).collect())
        .collect();
    let var = names.first().cloned().unwrap_or_else(|| "t".into());
    let (generic_rank, pivot_minor, exceptional_values, nonrational_locus, radical_basis) = match at {
        None => {
            let a = g.analyze(DEFAULT_ROOT_HEIGHT)?;
            let rad = g
                .generic_radical()?
                .into_iter()
                .map(|v| v.iter().map(|p| p.fmt_var(&var)).collect())
                .collect();
            (
                a.generic_rank,
                Some(a.pivot_minor.fmt_var(&var)),
                a.exceptional
                    .iter()
                    .map(|(t, rank)| ExceptionalValue {
                        value: fmt_q(t),
                        rank: *rank,
                    })
                    .collect(),
                a.nonrational_locus,
                rad,
            )
        }
        Some(vals) => {
            let m = g.specialize(vals)?;
            let rad = m
                .transpose()
                .kernel()
                .into_iter()
                .map(|v| v.iter().map(fmt_q).collect())
                .collect();
            (m.rank(), None, Vec::new(), false, rad)
        }
    };
    Ok(GramReport {
        outputs: s.outputs,
        inputs: s.inputs,
        enumerator: s.enumerator,
        cutoff: s.cutoff,
        params: names,
        character: chi.provenance().to_string(),
        basis: s.diagrams.iter().map(Diagram::to_literal).collect(),
        dual_basis: dual.diagrams.iter().map(Diagram::to_literal).collect(),
        matrix,
        specialization: at.map(|v| v.iter().map(fmt_q).collect()),
        generic_rank,
        pivot_minor,
        exceptional_values,
        nonrational_locus,
        radical_basis,
        saturation: None,
    })
}

/// Rank of the Gram matrix on the enumerator's spanning set (generic when
/// `at` is `None`).
pub fn gram_rank(s: &SpanningSet, chi: &Character, at: Option<&[Q]>) -> Result<usize> {
    let dual = dual_set(s)?;
    let g = Gram::compute(&s.diagrams, &dual.diagrams, chi)?;
    match at {
        Some(v) => g.rank_at(v),
        None if chi.params().is_empty() => g.rank_at(&[]),
        None => generic_rank(&g.univariate()?, g.cols.len()),
    }
}

/// Rank over `Q(t)` by evaluation. A nonzero minor has degree at most the sum
/// of the row degrees `D`, so it cannot vanish at `D + 1` distinct points: the
/// largest rank seen at `D + 1` points is exact.
pub fn generic_rank(a: &[Vec<UPoly>], ncols: usize) -> Result<usize> {
    let full = a.len().min(ncols);
    let bound: usize = a
        .iter()
        .map(|row| row.iter().filter_map(|e| e.degree()).max().unwrap_or(0))
        .sum();
    let mut best = 0;
    for k in 0..=bound {
        if best == full {
            break;
        }
        let t = Q::from_integer((bound + 1 + k).into());
        let rows: Vec<Vec<Q>> = a.iter().map(|row| row.iter().map(|e| e.eval(&t)).collect()).collect();
        best = best.max(from_rows(rows, ncols).rank());
    }
    Ok(best)
}

/// Hom-space dimension of `C_χ` at `(p,q)`: the Gram rank on the chosen
/// enumerator, swept over `cutoffs` (box counts for the generic walker,
/// genus for cobordisms) with saturation evidence.
pub fn hom_dim(
    kind: Enumerator,
    chi: &Character,
    p: usize,
    q: usize,
    cutoffs: &[usize],
    at: Option<&[Q]>,
) -> Result<(usize, Saturation)> {
    let sig = chi.signature();
    let sweep: Vec<usize> = match kind {
        Enumerator::Generic | Enumerator::Cobordism if !cutoffs.is_empty() => cutoffs.to_vec(),
        _ => vec![cutoffs.last().copied().unwrap_or(0)],
    };
    let mut history = Vec::new();
    for c in sweep {
        let s = enumerate(kind, sig, p, q, c)?;
        let rank = gram_rank(&s, chi, at)?;
        history.push(SaturationStep {
            cutoff: c,
            size: s.len(),
            rank,
        });
    }
    let last = history.last().expect("at least one cutoff").rank;
    let saturated = match kind {
        Enumerator::Generic | Enumerator::Cobordism => history.len() >= 2 && history[history.len() - 2].rank == last,
        _ => true,
    };
    Ok((last, Saturation { saturated, history }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::enumerate::{enumerate_brauer, enumerate_partition, enumerate_permutations};
    use crate::realize::{gl_model, gl_signature, orth_model, pairing_signature};

    fn up(cs: &[i64]) -> UPoly {
        UPoly::new(cs.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn gl_pairing_counts_cycles() {
        let chi = Character::gl();
        let sig = gl_signature();
        let s = enumerate_permutations(&sig, 2);
        let g = Gram::compute(&s.diagrams, &s.diagrams, &chi).unwrap();
        assert!(g.is_symmetric());
        let t = MPoly::var(0);
        let t2 = &t * &t;
        let diag: Vec<&MPoly> = (0..2).map(|i| &g.entries[i][i]).collect();
        assert!(diag.iter().all(|e| **e == t2));
        assert_eq!(g.entries[0][1], t);
        let a = g.analyze(100).unwrap();
        assert_eq!(a.generic_rank, 2);
        let ex: Vec<(Q, usize)> = a.exceptional.clone();
        assert_eq!(ex, vec![(q(-1), 1), (q(0), 0), (q(1), 1)]);
    }

    #[test]
    fn evaluation_rank_matches_bareiss() {
        let chi = Character::gl();
        for p in 1..=3 {
            let s = enumerate_permutations(&gl_signature(), p);
            let g = Gram::compute(&s.diagrams, &s.diagrams, &chi).unwrap();
            let u = g.univariate().unwrap();
            assert_eq!(generic_rank(&u, s.len()).unwrap(), bareiss(u, s.len()).0);
        }
        let m = vec![vec![up(&[0, 1]), up(&[0, 0, 1])], vec![up(&[1]), up(&[0, 1])]];
        assert_eq!(generic_rank(&m, 2).unwrap(), 1);
    }

    #[test]
    fn bareiss_matches_field_rank() {
        // [[t, t^2], [1, t]] has rank 1 generically
        let m = vec![vec![up(&[0, 1]), up(&[0, 0, 1])], vec![up(&[1]), up(&[0, 1])]];
        assert_eq!(bareiss(m, 2).0, 1);
        let a = analyze_univariate(&[vec![up(&[0, 1])]], 1, 100).unwrap();
        assert_eq!(a.exceptional, vec![(q(0), 0)]);
    }

    #[test]
    fn radical_pairs_to_zero() {
        let chi = Character::orth().specialize(&[q(1)]).unwrap();
        let s = enumerate_brauer(&pairing_signature(), 2, 2).unwrap();
        let g = Gram::compute(&s.diagrams, &s.diagrams, &chi).unwrap();
        let rad = g.radical_at(&[]).unwrap();
        assert_eq!(rad.len(), 3 - g.rank_at(&[]).unwrap());
        for v in &rad {
            for j in 0..s.len() {
                let s: Q = (0..v.len()).map(|i| &v[i] * g.entries[i][j].as_constant().unwrap()).sum();
                assert!(s.is_zero());
            }
        }
        assert_eq!(g.rank_at(&[]).unwrap(), realized_rank(&s.diagrams, &orth_model(1)).unwrap());
    }

    #[test]
    fn generic_radical_is_empty_for_nondegenerate() {
        let chi = Character::sym();
        let s = enumerate_partition(chi.signature(), 1, 1).unwrap();
        let g = Gram::compute(&s.diagrams, &s.diagrams, &chi).unwrap();
        assert!(g.generic_radical().unwrap().is_empty());
        let rank_at_2 = g.rank_at(&[q(2)]).unwrap();
        assert_eq!(rank_at_2, realized_rank(&s.diagrams, &crate::realize::sep_algebra_model(2)).unwrap());
    }

    #[test]
    fn gl_realized_rank_matches() {
        let sig = gl_signature();
        let s = enumerate_permutations(&sig, 3);
        let g = Gram::compute(&s.diagrams, &s.diagrams, &Character::gl()).unwrap();
        for n in 1..=3 {
            assert_eq!(g.rank_at(&[q(n)]).unwrap(), realized_rank(&s.diagrams, &gl_model(n as usize)).unwrap());
        }
    }
}
