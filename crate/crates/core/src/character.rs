//! Characters of invariants: values on closed connected diagrams, extended
//! multiplicatively over components.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use num_traits::{One, Zero};

use crate::arith::{exact_log, q, q_pow, MPoly, UPoly, Q};
use crate::diagram::{ClosedDiagramKey, Diagram, LinCombo, Signature};
use crate::error::{Error, Result};
use crate::realize::{dvr_signature, group_algebra_model, Model, MAX_GROUP_ALGEBRA_DIM, MAX_TENSOR_ENTRIES};

/// Per-diagram bound on the parameter degree of an interpolated value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeBound {
    /// Wires plus free loops.
    Wires,
    /// Number of connected components.
    Components,
    Fixed(u32),
}

impl DegreeBound {
    pub fn bound(&self, d: &Diagram) -> u32 {
        match self {
            DegreeBound::Wires => (d.num_wires() + d.loops()) as u32,
            DegreeBound::Components => d.component_count().unwrap_or(1) as u32,
            DegreeBound::Fixed(n) => *n,
        }
    }
}

impl std::str::FromStr for DegreeBound {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wires" => Ok(DegreeBound::Wires),
            "components" | "loops" => Ok(DegreeBound::Components),
            _ => s
                .parse()
                .map(DegreeBound::Fixed)
                .map_err(|_| Error::Parse(format!("unknown degree bound {s:?}"))),
        }
    }
}

/// Closed-surface invariants `α_g` of a Frobenius character.
#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    /// `α_0, α_1, …`; genera beyond the list continue by the recurrence
    /// `α_n = Σ_k rec[k] α_{n-1-k}` if one is given.
    List { values: Vec<Q>, recurrence: Vec<Q> },
    /// Taylor coefficients of `num/den` with `den(0) ≠ 0`.
    Rational { num: UPoly, den: UPoly },
}

impl Alpha {
    pub fn list(values: Vec<Q>) -> Self {
        Alpha::List {
            values,
            recurrence: Vec::new(),
        }
    }

    /// Values beyond the list are zero.
    pub fn with_zero_tail(self) -> Self {
        match self {
            Alpha::List { values, .. } => Alpha::List {
                values,
                recurrence: vec![Q::zero()],
            },
            other => other,
        }
    }

    pub fn get(&self, g: usize) -> Result<Q> {
        match self {
            Alpha::List { values, recurrence } => {
                if g < values.len() {
                    return Ok(values[g].clone());
                }
                if recurrence.is_empty() || values.len() < recurrence.len() {
                    return Err(Error::Domain(format!("alpha_{g} is beyond the {} given values", values.len())));
                }
                let mut v = values.clone();
                while v.len() <= g {
                    let n = v.len();
                    let next = recurrence
                        .iter()
                        .enumerate()
                        .fold(Q::zero(), |a, (k, c)| a + c * &v[n - 1 - k]);
                    v.push(next);
                }
                Ok(v[g].clone())
            }
            Alpha::Rational { num, den } => {
                if den.coeff(0).is_zero() {
                    return Err(Error::InvalidParams("Z(X) denominator vanishes at 0".into()));
                }
                Ok(num.series_div(den, g + 1)[g].clone())
            }
        }
    }
}

#[derive(Debug)]
enum Rule {
    Model(Arc<Model>),
    Gl,
    Orth,
    Sym,
    Frobenius(Alpha),
    Endo(Vec<(Q, Q)>),
    Dvr(DvrEval),
    Interpolated {
        points: Vec<(Q, Arc<Model>)>,
        bound: DegreeBound,
    },
    Sum(Arc<Character>, Arc<Character>),
    Product(Arc<Character>, Arc<Character>),
    Scale(MPoly, Arc<Character>),
    Specialized(Vec<Q>, Arc<Character>),
}

/// χ on closed diagrams, valued in polynomials over the signature's parameters.
pub struct Character {
    sig: Arc<Signature>,
    rule: Rule,
    provenance: String,
    /// Closed-form rules are evaluated directly; canonical keys cost more.
    direct: bool,
    memo: RwLock<HashMap<ClosedDiagramKey, MPoly>>,
}

impl Rule {
    fn direct(&self) -> bool {
        match self {
            Rule::Gl | Rule::Orth | Rule::Sym | Rule::Frobenius(_) | Rule::Endo(_) => true,
            Rule::Sum(a, b) | Rule::Product(a, b) => a.direct && b.direct,
            Rule::Scale(_, a) | Rule::Specialized(_, a) => a.direct,
            Rule::Model(_) | Rule::Dvr(_) | Rule::Interpolated { .. } => false,
        }
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Character")
            .field("params", &self.sig.params())
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl Character {
    fn build(sig: Arc<Signature>, rule: Rule, provenance: impl Into<String>) -> Arc<Self> {
        Arc::new(Character {
            sig,
            direct: rule.direct(),
            rule,
            provenance: provenance.into(),
            memo: RwLock::new(HashMap::new()),
        })
    }

    /// The character of invariants of a concrete model (no parameters).
    pub fn from_model(m: &Model) -> Arc<Self> {
        Self::build(m.signature().with_params(&[]), Rule::Model(Arc::new(m.clone())), "model")
    }

    /// `D ↦ t` on the empty signature.
    pub fn gl() -> Arc<Self> {
        Self::build(crate::realize::gl_signature(), Rule::Gl, "closed_form:gl")
    }

    /// Every closed loop of cups and caps ↦ `t`.
    pub fn orth() -> Arc<Self> {
        Self::build(crate::realize::pairing_signature(), Rule::Orth, "closed_form:orth")
    }

    /// Every closed connected diagram in `{m, u, c}` ↦ `t`.
    pub fn sym() -> Arc<Self> {
        Self::build(crate::realize::sep_signature(), Rule::Sym, "closed_form:sym")
    }

    /// Genus-`g` connected surface ↦ `α_g`.
    pub fn frobenius(alpha: Alpha) -> Arc<Self> {
        Self::build(crate::realize::frobenius_signature(), Rule::Frobenius(alpha), "closed_form:frobenius")
    }

    /// `Tr(T^i) ↦ Σ_j t_j λ_j^i` for pairs `(λ_j, t_j)`.
    pub fn endo(pairs: Vec<(Q, Q)>) -> Arc<Self> {
        Self::build(crate::realize::endo_signature(), Rule::Endo(pairs), "closed_form:endo")
    }

    /// Monomial DVR character `Π t_j^{e_j}` with exponents read off group
    /// algebra models at each prime in `primes`; the primes must agree.
    pub fn dvr(r: usize, primes: &[u64]) -> Result<Arc<Self>> {
        let sig = dvr_signature(r)?;
        if primes.is_empty() {
            return Err(Error::InvalidParams("dvr character needs at least one prime".into()));
        }
        Ok(Self::build(
            sig,
            Rule::Dvr(DvrEval {
                r,
                primes: primes.to_vec(),
                models: Mutex::new(BTreeMap::new()),
            }),
            "closed_form:dvr",
        ))
    }

    /// One-parameter family through `(point, model)` pairs by per-diagram
    /// Lagrange interpolation; surplus points are checked as witnesses.
    pub fn interpolate(points: Vec<(Q, Model)>, bound: DegreeBound) -> Result<Arc<Self>> {
        let first = points
            .first()
            .ok_or_else(|| Error::InsufficientPoints("no interpolation points".into()))?;
        let sig = first.1.signature().with_params(&["t".to_string()]);
        for (i, (x, m)) in points.iter().enumerate() {
            if !m.signature().same_generators(&sig) {
                return Err(Error::SignatureMismatch);
            }
            if points[..i].iter().any(|(y, _)| y == x) {
                return Err(Error::InvalidParams(format!("repeated interpolation point {x}")));
            }
        }
        Ok(Self::build(
            sig,
            Rule::Interpolated {
                points: points.into_iter().map(|(x, m)| (x, Arc::new(m))).collect(),
                bound,
            },
            "interpolated",
        ))
    }

    fn check_pair(a: &Character, b: &Character) -> Result<()> {
        if !a.sig.same_generators(&b.sig) {
            return Err(Error::SignatureMismatch);
        }
        if a.sig.params() != b.sig.params() {
            return Err(Error::InvalidParams(format!(
                "parameter lists differ: {:?} vs {:?}",
                a.sig.params(),
                b.sig.params()
            )));
        }
        Ok(())
    }

    /// Pointwise sum on connected diagrams.
    pub fn add(self: &Arc<Self>, o: &Arc<Self>) -> Result<Arc<Self>> {
        Self::check_pair(self, o)?;
        Ok(Self::build(self.sig.clone(), Rule::Sum(self.clone(), o.clone()), "sum"))
    }

    /// Pointwise product on connected diagrams.
    pub fn mul(self: &Arc<Self>, o: &Arc<Self>) -> Result<Arc<Self>> {
        Self::check_pair(self, o)?;
        Ok(Self::build(self.sig.clone(), Rule::Product(self.clone(), o.clone()), "product"))
    }

    /// `s·χ` on connected diagrams; `s` may use the parameters.
    pub fn scale(self: &Arc<Self>, s: &MPoly) -> Result<Arc<Self>> {
        if s.nvars() > self.sig.params().len() {
            return Err(Error::InvalidParams(format!(
                "scale factor uses {} parameters, character has {}",
                s.nvars(),
                self.sig.params().len()
            )));
        }
        Ok(Self::build(self.sig.clone(), Rule::Scale(s.clone(), self.clone()), "scale"))
    }

    pub fn scale_q(self: &Arc<Self>, s: &Q) -> Arc<Self> {
        self.scale(&MPoly::constant(s.clone())).expect("constant scale")
    }

    /// Same values, parameter list replaced by `params` (which must extend the current one).
    pub fn with_params(self: &Arc<Self>, params: &[&str]) -> Result<Arc<Self>> {
        let cur = self.sig.params();
        if params.len() < cur.len() || cur.iter().zip(params).any(|(a, b)| a != b) {
            return Err(Error::InvalidParams(format!("{params:?} does not extend {cur:?}")));
        }
        let names: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        Ok(Self::build(
            self.sig.with_params(&names),
            Rule::Scale(MPoly::one(), self.clone()),
            self.provenance.clone(),
        ))
    }

    /// Substitutes numeric values for all parameters.
    pub fn specialize(self: &Arc<Self>, vals: &[Q]) -> Result<Arc<Self>> {
        if vals.len() != self.sig.params().len() {
            return Err(Error::MissingParams(format!(
                "{} values for parameters {:?}",
                vals.len(),
                self.sig.params()
            )));
        }
        Ok(Self::build(
            self.sig.with_params(&[]),
            Rule::Specialized(vals.to_vec(), self.clone()),
            format!("{}@{}", self.provenance, vals.iter().map(crate::arith::fmt_q).collect::<Vec<_>>().join(",")),
        ))
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn params(&self) -> &[String] {
        self.sig.params()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Upper bound on the parameter degree of `χ(d)`.
    pub fn degree_bound(&self, d: &Diagram) -> u32 {
        match &self.rule {
            Rule::Model(_) | Rule::Frobenius(_) | Rule::Endo(_) | Rule::Specialized(..) => 0,
            Rule::Gl | Rule::Orth | Rule::Sym => DegreeBound::Components.bound(d),
            Rule::Dvr(e) => (e.r * (e.r + 1) / 2) as u32 * DegreeBound::Wires.bound(d),
            Rule::Interpolated { bound, .. } => bound.bound(d),
            Rule::Sum(a, b) => a.degree_bound(d).max(b.degree_bound(d)),
            Rule::Product(a, b) => a.degree_bound(d) + b.degree_bound(d),
            Rule::Scale(s, a) => a.degree_bound(d) + s.total_degree() * d.component_count().unwrap_or(1) as u32,
        }
    }

    /// Value on a closed diagram: product of the values of its components.
    pub fn evaluate(&self, d: &Diagram) -> Result<MPoly> {
        if !self.sig.same_generators(d.signature()) {
            return Err(Error::Domain(format!(
                "diagram over a different signature than this {} character",
                self.provenance
            )));
        }
        let mut acc = MPoly::one();
        for c in d.connected_components()? {
            let v = self.connected(&c)?;
            acc = &acc * &v;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// Value of a parameter-free character on a closed diagram.
    pub fn evaluate_q(&self, d: &Diagram) -> Result<Q> {
        let v = self.evaluate(d)?;
        v.as_constant()
            .ok_or_else(|| Error::MissingParams(format!("value {v} depends on the parameters")))
    }

    /// Bilinear extension to closed combinations.
    pub fn evaluate_combo(&self, f: &LinCombo) -> Result<MPoly> {
        let mut acc = MPoly::zero();
        for (d, c) in f.terms() {
            acc = &acc + &(c * &self.evaluate(d)?);
        }
        Ok(acc)
    }

    /// Value on the isomorphism class named by `key`.
    pub fn value(&self, key: &ClosedDiagramKey) -> Result<MPoly> {
        if let Some(v) = self.memo.read().expect("memo lock").get(key) {
            return Ok(v.clone());
        }
        let d = Diagram::parse(&self.sig, key.as_str())?;
        self.evaluate(&d)
    }

    fn connected(&self, c: &Diagram) -> Result<MPoly> {
        if self.direct {
            return self.compute(c);
        }
        let key = c.closed_key()?;
        if let Some(v) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute(c)?;
        self.memo.write().expect("memo lock").insert(key, v.clone());
        Ok(v)
    }

    fn compute(&self, c: &Diagram) -> Result<MPoly> {
        let t = || MPoly::var(0);
        match &self.rule {
            Rule::Model(m) => Ok(MPoly::constant(m.evaluate_closed(c)?)),
            Rule::Gl | Rule::Orth | Rule::Sym => Ok(t()),
            Rule::Frobenius(alpha) => {
                let g = 1 + c.count_generator("c") as i64 - c.count_generator("eps") as i64;
                if g < 0 {
                    return Err(Error::Domain(format!("{c} is not a connected closed surface")));
                }
                Ok(MPoly::constant(alpha.get(g as usize)?))
            }
            Rule::Endo(pairs) => {
                let k = c.num_boxes() as u32;
                Ok(MPoly::constant(
                    pairs.iter().fold(Q::zero(), |a, (l, w)| a + w * q_pow(l, k)),
                ))
            }
            Rule::Dvr(e) => {
                let exps = e.exponents(c)?;
                Ok(MPoly::monomial(Q::one(), &exps))
            }
            Rule::Interpolated { points, bound } => {
                let b = bound.bound(c) as usize;
                if points.len() < b + 1 {
                    return Err(Error::InsufficientPoints(format!(
                        "degree bound {b} needs {} points, have {}",
                        b + 1,
                        points.len()
                    )));
                }
                let vals = points
                    .iter()
                    .map(|(x, m)| Ok((x.clone(), m.evaluate_closed(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                let poly = UPoly::interpolate(&vals[..b + 1]);
                for (x, y) in &vals[b + 1..] {
                    if &poly.eval(x) != y {
                        return Err(Error::Inconsistent(format!(
                            "{c}: interpolant {} gives {} at t={x}, model gives {y}",
                            poly.fmt_var("t"),
                            poly.eval(x)
                        )));
                    }
                }
                Ok(MPoly::from_upoly(&poly, 0))
            }
            Rule::Sum(a, b) => Ok(&a.connected(c)? + &b.connected(c)?),
            Rule::Product(a, b) => Ok(&a.connected(c)? * &b.connected(c)?),
            Rule::Scale(s, a) => Ok(s * &a.connected(c)?),
            Rule::Specialized(vals, a) => {
                let v = a.connected(c)?;
                v.eval(vals)
                    .map(MPoly::constant)
                    .ok_or_else(|| Error::MissingParams(format!("cannot specialize {v}")))
            }
        }
    }
}

/// Exponent recovery for the DVR family.
#[derive(Debug)]
struct DvrEval {
    r: usize,
    primes: Vec<u64>,
    models: Mutex<BTreeMap<(u64, Vec<usize>), Arc<Model>>>,
}

/// `|M_a| = p^{Σ i·a_i}` if the dense model fits, else `None`.
fn group_dim(p: u64, a: &[usize]) -> Option<usize> {
    let e: usize = a.iter().enumerate().map(|(i, &ai)| (i + 1) * ai).sum();
    let d = (p as usize).checked_pow(e as u32)?;
    (d <= MAX_GROUP_ALGEBRA_DIM && d.checked_pow(3)? <= MAX_TENSOR_ENTRIES).then_some(d)
}

impl DvrEval {
    fn model(&self, p: u64, a: &[usize]) -> Result<Arc<Model>> {
        let key = (p, a.to_vec());
        if let Some(m) = self.models.lock().expect("model cache").get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(group_algebra_model(p, self.r, a)?);
        self.models.lock().expect("model cache").insert(key, m.clone());
        Ok(m)
    }

    fn exponents(&self, c: &Diagram) -> Result<Vec<u32>> {
        dvr_exponents_with(c, self.r, &self.primes, &|p, a| self.model(p, a))
    }
}

/// Exponent vector `e` with `χ_a(c) = p^{Σ a_j e_j}`, read off at `a = δ_j`,
/// confirmed at the witnesses `2δ_j` and `(1,…,1)` that fit in memory, and
/// required to agree across all `primes`.
pub fn dvr_exponents(c: &Diagram, r: usize, primes: &[u64]) -> Result<Vec<u32>> {
    dvr_exponents_with(c, r, primes, &|p, a| Ok(Arc::new(group_algebra_model(p, r, a)?)))
}

fn dvr_exponents_with(
    c: &Diagram,
    r: usize,
    primes: &[u64],
    model: &dyn Fn(u64, &[usize]) -> Result<Arc<Model>>,
) -> Result<Vec<u32>> {
    let mut agreed: Option<Vec<u32>> = None;
    let mut witnessed = false;
    for &p in primes {
        let mut e = Vec::with_capacity(r);
        for j in 0..r {
            let mut a = vec![0; r];
            a[j] = 1;
            let v = model(p, &a)?.evaluate_closed(c)?;
            let k = exact_log(&v, p).ok_or_else(|| {
                Error::NonMonomial(format!("{c}: value {v} at a=δ_{} is not a power of {p}", j + 1))
            })?;
            e.push(k);
        }
        let mut witnesses: Vec<Vec<usize>> = (0..r)
            .map(|j| {
                let mut a = vec![0; r];
                a[j] = 2;
                a
            })
            .collect();
        if r > 1 {
            witnesses.push(vec![1; r]);
        }
        for a in witnesses {
            if group_dim(p, &a).is_none() {
                continue;
            }
            let v = model(p, &a)?.evaluate_closed(c)?;
            let exp: u32 = a.iter().zip(&e).map(|(&ai, &ei)| ai as u32 * ei).sum();
            if v != q_pow(&q(p as i64), exp) {
                return Err(Error::NonMonomial(format!(
                    "{c}: value {v} at a={a:?} (p={p}) is not p^{exp} as predicted by exponents {e:?}"
                )));
            }
            witnessed = true;
        }
        match &agreed {
            None => agreed = Some(e),
            Some(prev) if *prev != e => {
                return Err(Error::NonMonomial(format!(
                    "{c}: exponents {prev:?} and {e:?} disagree between primes"
                )))
            }
            _ => {}
        }
    }
    if !witnessed {
        return Err(Error::InsufficientPoints(format!("{c}: no witness model fits in memory")));
    }
    Ok(agreed.expect("at least one prime"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;
    use crate::diagram::sample::sample_connected;
    use crate::enumerate::{closed_surface, handle};
    use crate::realize::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn const_of(v: MPoly) -> Q {
        v.as_constant().expect("constant")
    }

    #[test]
    fn model_character_values() {
        let chi = Character::from_model(&orth_model(3));
        let lp = Diagram::loop_diagram(chi.signature());
        assert_eq!(chi.evaluate_q(&lp).unwrap(), q(3));
        let two = lp.tensor(&lp).unwrap();
        assert_eq!(chi.evaluate_q(&two).unwrap(), q(9));

        let jordan = Character::from_model(&endo_model(&[vec![q(0), q(1)], vec![q(0), q(0)]]).unwrap());
        let t = Diagram::generator(jordan.signature(), "T").unwrap();
        assert_eq!(jordan.evaluate_q(&t.trace_close().unwrap()).unwrap(), q(0));
    }

    #[test]
    fn sym_closed_form_matches_models() {
        let sig = sep_signature();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sample = sample_connected(&sig, 12, 5, &mut rng);
        let st = Character::sym();
        for n in 1..=3 {
            let m = Character::from_model(&sep_algebra_model(n));
            for d in &sample {
                assert_eq!(m.evaluate_q(d).unwrap(), q(n as i64));
                assert_eq!(st.evaluate(d).unwrap().eval(&[q(n as i64)]).unwrap(), q(n as i64));
            }
        }
    }

    #[test]
    fn interpolation_and_witnesses() {
        let pts: Vec<(Q, Model)> = (0..4).map(|n| (q(n), gl_model(n as usize))).collect();
        let chi = Character::interpolate(pts, DegreeBound::Components).unwrap();
        let sig = chi.signature().clone();
        let swap = Diagram::permutation(&sig, &[1, 0]).unwrap().trace_close().unwrap();
        assert_eq!(chi.evaluate(&swap).unwrap(), MPoly::var(0));

        // a deliberately wrong point triggers the witness check
        let bad = vec![(q(0), gl_model(0)), (q(1), gl_model(1)), (q(2), gl_model(3))];
        let chi = Character::interpolate(bad, DegreeBound::Fixed(1)).unwrap();
        let lp = Diagram::loop_diagram(chi.signature());
        assert!(matches!(chi.evaluate(&lp), Err(Error::Inconsistent(_))));

        let few = vec![(q(1), gl_model(1))];
        let chi = Character::interpolate(few, DegreeBound::Components).unwrap();
        assert!(matches!(chi.evaluate(&lp), Err(Error::InsufficientPoints(_))));
    }

    #[test]
    fn frobenius_closed_form_against_models() {
        let sig = frobenius_signature();
        let lam = q(3);
        let line = Character::from_model(&frobenius_line_model(&lam).unwrap());
        // Z = (1/λ)/(1-λX): α_g = λ^{g-1}
        let z = Character::frobenius(Alpha::Rational {
            num: UPoly::constant(qf(1, 3)),
            den: UPoly::new(vec![q(1), -lam.clone()]),
        });
        let a1 = Character::from_model(&dual_numbers_model(q(0), q(1)).unwrap());
        let z1 = Character::frobenius(Alpha::list(vec![q(0), q(2), q(0), q(0), q(0), q(0)]));
        for g in 0..5 {
            let s = closed_surface(&sig, g).unwrap();
            assert_eq!(line.evaluate_q(&s).unwrap(), const_of(z.evaluate(&s).unwrap()));
            assert_eq!(a1.evaluate_q(&s).unwrap(), const_of(z1.evaluate(&s).unwrap()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in sample_connected(&sig, 15, 6, &mut rng) {
            assert_eq!(line.evaluate_q(&d).unwrap(), const_of(z.evaluate(&d).unwrap()), "{d}");
        }
        let x = handle(&sig).unwrap();
        assert_eq!(a1.evaluate_q(&x.trace_close().unwrap()).unwrap(), q(0));
    }

    #[test]
    fn algebra_operations_follow_models() {
        let sig = sep_signature();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m1 = random_model(&sig, 2, &mut rng);
        let m2 = random_model(&sig, 2, &mut rng);
        let c1 = Character::from_model(&m1);
        let c2 = Character::from_model(&m2);
        let sum = c1.add(&c2).unwrap();
        let prod = c1.mul(&c2).unwrap();
        let ds = Character::from_model(&direct_sum(&m1, &m2).unwrap());
        let tp = Character::from_model(&tensor_product(&m1, &m2).unwrap());
        for d in sample_connected(&sig, 10, 4, &mut rng) {
            assert_eq!(sum.evaluate_q(&d).unwrap(), ds.evaluate_q(&d).unwrap());
            assert_eq!(prod.evaluate_q(&d).unwrap(), tp.evaluate_q(&d).unwrap());
        }
    }

    #[test]
    fn endo_closed_form() {
        let chi = Character::endo(vec![(q(2), q(3))]);
        let t = Diagram::generator(chi.signature(), "T").unwrap();
        for k in 0..4 {
            let d = t.power(k).unwrap().trace_close().unwrap();
            assert_eq!(const_of(chi.evaluate(&d).unwrap()), q(3) * q_pow(&q(2), k as u32));
        }
    }

    #[test]
    fn dvr_exponents_of_t_diagrams() {
        let sig = dvr_signature(2).unwrap();
        let t1 = Diagram::generator(&sig, &dvr_t_name(&[1, 1])).unwrap().trace_close().unwrap();
        assert_eq!(dvr_exponents(&t1, 2, &[2, 3]).unwrap(), vec![1, 1]);
        let lp = Diagram::loop_diagram(&sig);
        assert_eq!(dvr_exponents(&lp, 2, &[2]).unwrap(), vec![1, 2]);
    }
}
