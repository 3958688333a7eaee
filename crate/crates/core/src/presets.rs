//! Bundled example families: signature, spanning strategy, characters,
//! model family, special collection and expected dimension tables.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{fmt_q, q, q_pow, MPoly, Q};
use crate::character::{Alpha, Character, DegreeBound};
use crate::diagram::Signature;
use crate::enumerate::Enumerator;
use crate::error::{Error, Result};
use crate::realize::*;

/// Preset family names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetName {
    Gl,
    Endo,
    Orth,
    Symp,
    Sym,
    Frobenius,
    Wreath,
    Dvr,
}

pub const ALL_PRESETS: [PresetName; 8] = [
    PresetName::Gl,
    PresetName::Endo,
    PresetName::Orth,
    PresetName::Symp,
    PresetName::Sym,
    PresetName::Frobenius,
    PresetName::Wreath,
    PresetName::Dvr,
];

impl FromStr for PresetName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gl" => PresetName::Gl,
            "endo" => PresetName::Endo,
            "orth" => PresetName::Orth,
            "symp" => PresetName::Symp,
            "sym" => PresetName::Sym,
            "frobenius" => PresetName::Frobenius,
            "wreath" => PresetName::Wreath,
            "dvr" => PresetName::Dvr,
            _ => return Err(Error::InvalidParams(format!("unknown preset {s:?}"))),
        })
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PresetName::Gl => "gl",
            PresetName::Endo => "endo",
            PresetName::Orth => "orth",
            PresetName::Symp => "symp",
            PresetName::Sym => "sym",
            PresetName::Frobenius => "frobenius",
            PresetName::Wreath => "wreath",
            PresetName::Dvr => "dvr",
        };
        f.write_str(s)
    }
}

/// Family-specific inputs.
#[derive(Clone, Debug)]
pub enum PresetParams {
    None,
    /// Eigenvalues `λ_j`; the family parameter is the common multiplicity.
    Endo { lambdas: Vec<Q> },
    Frobenius { alpha: Alpha },
    /// Base structure `A` of `Ā = 1 ⊕ A`.
    Wreath { base: Box<Model> },
    /// Rank `r` and the residue characteristic used for models.
    Dvr { r: usize, prime: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedDim {
    pub p: usize,
    pub q: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedExceptional {
    pub p: usize,
    pub q: usize,
    /// `(value, rank)` pairs.
    pub values: Vec<(String, usize)>,
}

/// Everything needed to run one example family.
#[derive(Clone, Debug)]
pub struct PresetBundle {
    pub name: PresetName,
    pub signature: Arc<Signature>,
    pub enumerator: Enumerator,
    /// Box or genus cutoff passed to the enumerator.
    pub cutoff: usize,
    pub params: PresetParams,
    /// Leading points of the special collection.
    pub special_collection: Vec<Q>,
    pub special_description: String,
    pub expected_dims: Vec<ExpectedDim>,
    pub expected_exceptional: Vec<ExpectedExceptional>,
}

fn naturals(n: i64) -> Vec<Q> {
    (0..n).map(q).collect()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn double_factorial_odd(n: usize) -> usize {
    // (2n-1)!!
    (1..=n).map(|k| 2 * k - 1).product()
}

fn bell(n: usize) -> usize {
    crate::enumerate::set_partitions(n).len()
}

/// The 1-dimensional trivial structure over the empty signature with `dim = 0`
/// (so `Ā = 1`).
pub fn trivial_base() -> Model {
    Model::new(Signature::empty(), 0, Vec::new()).expect("empty model")
}

impl PresetBundle {
    pub fn new(name: PresetName, params: PresetParams) -> Result<Self> {
        let mut b = PresetBundle {
            name,
            signature: Signature::empty(),
            enumerator: Enumerator::Generic,
            cutoff: 0,
            params: PresetParams::None,
            special_collection: naturals(6),
            special_description: "0, 1, 2, 3, ...".into(),
            expected_dims: Vec::new(),
            expected_exceptional: Vec::new(),
        };
        match name {
            PresetName::Gl => {
                b.signature = gl_signature();
                b.enumerator = Enumerator::Permutation;
                b.expected_dims = (0..=4).map(|p| ExpectedDim { p, q: p, dim: factorial(p) }).collect();
                b.expected_exceptional = vec![ExpectedExceptional {
                    p: 2,
                    q: 2,
                    values: vec![("-1".into(), 1), ("0".into(), 0), ("1".into(), 1)],
                }];
            }
            PresetName::Endo => {
                let lambdas = match params {
                    PresetParams::Endo { lambdas } if !lambdas.is_empty() => lambdas,
                    PresetParams::None => vec![q(2)],
                    _ => return Err(Error::InvalidParams("endo preset takes eigenvalues".into())),
                };
                b.signature = endo_signature();
                b.enumerator = Enumerator::Generic;
                b.cutoff = 2;
                b.params = PresetParams::Endo { lambdas };
            }
            PresetName::Orth => {
                b.signature = pairing_signature();
                b.enumerator = Enumerator::Brauer;
                b.expected_dims = (0..=3)
                    .map(|p| ExpectedDim {
                        p,
                        q: p,
                        dim: double_factorial_odd(p),
                    })
                    .collect();
            }
            PresetName::Symp => {
                b.signature = pairing_signature();
                b.enumerator = Enumerator::Brauer;
                b.special_collection = (0..6).map(|n| q(2 * n)).collect();
                b.special_description = "0, 2, 4, 6, ... (even naturals)".into();
                b.expected_dims = (0..=3)
                    .map(|p| ExpectedDim {
                        p,
                        q: p,
                        dim: double_factorial_odd(p),
                    })
                    .collect();
            }
            PresetName::Sym => {
                b.signature = sep_signature();
                b.enumerator = Enumerator::Partition;
                b.expected_dims = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 1)]
                    .into_iter()
                    .map(|(p, q)| ExpectedDim { p, q, dim: bell(p + q) })
                    .collect();
            }
            PresetName::Frobenius => {
                let alpha = match params {
                    PresetParams::Frobenius { alpha } => alpha,
                    // Z = 2X, from k[y]/(y²) with ε(1)=0, ε(y)=1
                    PresetParams::None => Alpha::list(vec![q(0), q(2), q(0), q(0)]).with_zero_tail(),
                    _ => return Err(Error::InvalidParams("frobenius preset takes an alpha sequence".into())),
                };
                b.signature = frobenius_signature();
                b.enumerator = Enumerator::Cobordism;
                b.cutoff = 2;
                b.special_collection = Vec::new();
                b.special_description = "none (single character)".into();
                b.params = PresetParams::Frobenius { alpha };
            }
            PresetName::Wreath => {
                let base = match params {
                    PresetParams::Wreath { base } => base,
                    PresetParams::None => Box::new(trivial_base()),
                    _ => return Err(Error::InvalidParams("wreath preset takes a base model".into())),
                };
                let bar = wreath_bar_model(&base)?;
                b.signature = bar.signature().with_params(&["t".to_string()]);
                b.enumerator = Enumerator::Wreath;
                b.special_description = "0, 1, 2, 3, ... (copies of Ā)".into();
                if base.dim() == 0 && base.signature().generators().is_empty() {
                    b.expected_dims = [(1, 1), (2, 2)]
                        .into_iter()
                        .map(|(p, q)| ExpectedDim { p, q, dim: bell(p + q) })
                        .collect();
                }
                b.params = PresetParams::Wreath { base };
            }
            PresetName::Dvr => {
                let (r, prime) = match params {
                    PresetParams::Dvr { r, prime } => (r, prime),
                    PresetParams::None => (2, 2),
                    _ => return Err(Error::InvalidParams("dvr preset takes r and a prime".into())),
                };
                if r == 0 || r > 3 {
                    return Err(Error::InvalidParams(format!("dvr preset supports 1 <= r <= 3, got {r}")));
                }
                if prime != 2 && prime != 3 {
                    return Err(Error::InvalidParams(format!("dvr models use p in {{2, 3}}, got {prime}")));
                }
                b.signature = dvr_signature(r)?;
                b.enumerator = Enumerator::Generic;
                b.cutoff = 1;
                b.special_collection = Vec::new();
                b.special_description = format!("(t_1..t_{r}) = ({prime}^a_1, ..., {prime}^a_{r}), a in N^{r}");
                b.params = PresetParams::Dvr { r, prime };
            }
        }
        Ok(b)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Self::new(name.parse()?, PresetParams::None)
    }

    /// The family's character, parametric where the family has a parameter.
    pub fn character(&self) -> Result<Arc<Character>> {
        match (&self.name, &self.params) {
            (PresetName::Gl, _) => Ok(Character::gl()),
            (PresetName::Orth, _) => Ok(Character::orth()),
            (PresetName::Sym, _) => Ok(Character::sym()),
            (PresetName::Symp, _) => {
                let pts = (1..=5)
                    .map(|n| Ok((q(2 * n), symp_model(2 * n as usize)?)))
                    .collect::<Result<Vec<_>>>()?;
                Character::interpolate(pts, DegreeBound::Components)
            }
            (PresetName::Endo, PresetParams::Endo { lambdas }) => {
                // one multiplicity t per eigenvalue would need several
                // parameters; the family scales all of them together
                let base = Character::endo(lambdas.iter().map(|l| (l.clone(), q(1))).collect());
                base.with_params(&["t"])?.scale(&MPoly::var(0))
            }
            (PresetName::Frobenius, PresetParams::Frobenius { alpha }) => Ok(Character::frobenius(alpha.clone())),
            (PresetName::Wreath, PresetParams::Wreath { base }) => {
                let bar = Character::from_model(&wreath_bar_model(base)?);
                bar.with_params(&["t"])?.scale(&MPoly::var(0))
            }
            (PresetName::Dvr, PresetParams::Dvr { r, .. }) => Character::dvr(*r, &[2]),
            _ => Err(Error::InvalidParams(format!("preset {} has inconsistent parameters", self.name))),
        }
    }

    /// The concrete structure at a special-collection point (for `dvr`, the
    /// point is the multiplicity vector `a`).
    pub fn model_at(&self, point: &[usize]) -> Result<Model> {
        let one = || -> Result<usize> {
            match point {
                [n] => Ok(*n),
                _ => Err(Error::InvalidParams(format!("{} models take one point, got {point:?}", self.name))),
            }
        };
        match (&self.name, &self.params) {
            (PresetName::Gl, _) => Ok(gl_model(one()?)),
            (PresetName::Orth, _) => Ok(orth_model(one()?)),
            (PresetName::Symp, _) => symp_model(one()?),
            (PresetName::Sym, _) => Ok(sep_algebra_model(one()?)),
            (PresetName::Endo, PresetParams::Endo { lambdas }) => {
                let n = one()?;
                let d = n * lambdas.len();
                let mut m = vec![vec![Q::from_integer(0.into()); d]; d];
                for (j, l) in lambdas.iter().enumerate() {
                    for k in 0..n {
                        m[j * n + k][j * n + k] = l.clone();
                    }
                }
                endo_model(&m)
            }
            (PresetName::Wreath, PresetParams::Wreath { base }) => {
                let bar = wreath_bar_model(base)?;
                let n = one()?;
                let mut acc = Model::new(bar.signature().clone(), 0, bar.signature().generators().iter().map(|_| Vec::new()).collect())?;
                for _ in 0..n {
                    acc = direct_sum(&acc, &bar)?;
                }
                Ok(acc)
            }
            (PresetName::Dvr, PresetParams::Dvr { r, prime }) => group_algebra_model(*prime, *r, point),
            _ => Err(Error::InvalidParams(format!("preset {} has no model family", self.name))),
        }
    }

    /// Parameter values of the character matching `model_at(point)`.
    pub fn params_at(&self, point: &[usize]) -> Vec<Q> {
        match &self.params {
            PresetParams::Dvr { prime, .. } => point.iter().map(|&a| q_pow(&q(*prime as i64), a as u32)).collect(),
            PresetParams::Frobenius { .. } => Vec::new(),
            _ => point.iter().map(|&n| q(n as i64)).collect(),
        }
    }

    pub fn info(&self) -> PresetInfo {
        PresetInfo {
            name: self.name.to_string(),
            generators: self
                .signature
                .generators()
                .iter()
                .map(|g| format!("{}:({},{})", g.name, g.outputs, g.inputs))
                .collect(),
            params: self.character().map(|c| c.params().to_vec()).unwrap_or_default(),
            enumerator: self.enumerator.to_string(),
            cutoff: self.cutoff,
            special_collection: self.special_description.clone(),
            special_points: self.special_collection.iter().map(fmt_q).collect(),
            expected_dims: self.expected_dims.clone(),
            expected_exceptional: self.expected_exceptional.clone(),
        }
    }
}

/// `presets list` row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresetInfo {
    pub name: String,
    pub generators: Vec<String>,
    pub params: Vec<String>,
    pub enumerator: String,
    pub cutoff: usize,
    pub special_collection: String,
    pub special_points: Vec<String>,
    pub expected_dims: Vec<ExpectedDim>,
    pub expected_exceptional: Vec<ExpectedExceptional>,
}

pub fn list_presets() -> Vec<PresetInfo> {
    ALL_PRESETS
        .iter()
        .map(|&n| PresetBundle::new(n, PresetParams::None).expect("default preset").info())
        .collect()
}

/// `(Ā-signature, χ̄)` for a base model; scale with `Character::scale` for `t·χ̄`.
pub fn wreath_bar(base: &Model) -> Result<(Arc<Signature>, Arc<Character>)> {
    let bar = wreath_bar_model(base)?;
    Ok((bar.signature().clone(), Character::from_model(&bar)))
}

/// DVR character in formal parameters `t_1..t_r` (exponents checked at both
/// residue characteristics 2 and 3), or specialized when `values` is given.
pub fn dvr_character(r: usize, values: Option<&[Q]>) -> Result<Arc<Character>> {
    let chi = Character::dvr(r, &[2, 3])?;
    match values {
        Some(v) => chi.specialize(v),
        None => Ok(chi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::sample::sample_connected;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn special_collections() {
        let gl = PresetBundle::by_name("gl").unwrap();
        assert_eq!(gl.special_collection[..4], naturals(4)[..]);
        let sp = PresetBundle::by_name("symp").unwrap();
        assert!(sp.special_collection.iter().all(|x| (x / q(2)).is_integer()));
        assert_eq!(list_presets().len(), 8);
    }

    #[test]
    fn characters_agree_with_models_at_special_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for name in ["gl", "orth", "sym", "symp", "endo", "wreath"] {
            let b = PresetBundle::by_name(name).unwrap();
            let chi = b.character().unwrap();
            let sample = sample_connected(&b.signature, 8, 4, &mut rng);
            for &n in &[2usize, 4] {
                let m = Character::from_model(&b.model_at(&[n]).unwrap());
                let at = chi.specialize(&b.params_at(&[n])).unwrap();
                for d in &sample {
                    assert_eq!(m.evaluate_q(d).unwrap(), at.evaluate_q(d).unwrap(), "{name} n={n} {d}");
                }
            }
        }
    }

    #[test]
    fn dvr_matches_group_algebra() {
        let b = PresetBundle::by_name("dvr").unwrap();
        let chi = b.character().unwrap();
        let m = Character::from_model(&b.model_at(&[1, 1]).unwrap());
        let at = chi.specialize(&b.params_at(&[1, 1])).unwrap();
        let t = crate::diagram::Diagram::generator(&b.signature, &dvr_t_name(&[1, 1])).unwrap();
        let d = t.trace_close().unwrap();
        assert_eq!(m.evaluate_q(&d).unwrap(), at.evaluate_q(&d).unwrap());
        assert_eq!(at.evaluate_q(&d).unwrap(), q(4));
    }
}
