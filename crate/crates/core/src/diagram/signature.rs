use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A structure-tensor symbol: `outputs` copies of W out, `inputs` copies in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub outputs: usize,
    pub inputs: usize,
}

/// Generator symbols with arities plus interpolation parameter names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    generators: Vec<Generator>,
    #[serde(default)]
    params: Vec<String>,
}

fn valid_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "bnd"
}

impl Signature {
    pub fn new(generators: Vec<Generator>, params: Vec<String>) -> Result<Arc<Self>> {
        for (i, g) in generators.iter().enumerate() {
            if !valid_ident(&g.name) {
                return Err(Error::InvalidSignature(format!(
                    "generator name {:?} is not an identifier",
                    g.name
                )));
            }
            if g.outputs == 0 && g.inputs == 0 {
                return Err(Error::InvalidSignature(format!(
                    "generator {} has arity (0,0)",
                    g.name
                )));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate generator name {}",
                    g.name
                )));
            }
        }
        Ok(Arc::new(Signature { generators, params }))
    }

    /// Shorthand: `[("m", 1, 2), ("u", 1, 0)]` as (name, outputs, inputs).
    pub fn from_arities(gens: &[(&str, usize, usize)], params: &[&str]) -> Result<Arc<Self>> {
        Self::new(
            gens.iter()
                .map(|&(n, p, q)| Generator {
                    name: n.to_string(),
                    outputs: p,
                    inputs: q,
                })
                .collect(),
            params.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn empty() -> Arc<Self> {
        Arc::new(Signature {
            generators: Vec::new(),
            params: Vec::new(),
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, idx: usize) -> &Generator {
        &self.generators[idx]
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Same generators, different parameter names.
    pub fn with_params(&self, params: &[String]) -> Arc<Self> {
        Arc::new(Signature {
            generators: self.generators.clone(),
            params: params.to_vec(),
        })
    }

    /// Generator lists agree (parameters are not part of diagram identity).
    pub fn same_generators(&self, other: &Signature) -> bool {
        self.generators == other.generators
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_scalar_and_duplicate_generators() {
        assert!(Signature::from_arities(&[("x", 0, 0)], &[]).is_err());
        assert!(Signature::from_arities(&[("m", 1, 2), ("m", 1, 0)], &[]).is_err());
        assert!(Signature::from_arities(&[("bnd", 1, 1)], &[]).is_err());
        let s = Signature::from_arities(&[("m", 1, 2), ("u", 1, 0)], &["t"]).unwrap();
        assert_eq!(s.index_of("u"), Some(1));
        assert_eq!(s.params(), &["t".to_string()]);
    }
}
