use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Model;
use crate::arith::{fmt_q, parse_q, Q};
use crate::diagram::{Generator, Signature};
use crate::error::{Error, Result};

/// On-disk model: `dim`, optional generator arities, and per-generator flat
/// row-major arrays (outputs-major) of `"num/den"` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Generator>>,
    pub dim: usize,
    pub tensors: BTreeMap<String, Vec<String>>,
}

impl ModelFile {
    pub fn from_model(m: &Model) -> Self {
        ModelFile {
            generators: Some(m.signature().generators().to_vec()),
            dim: m.dim(),
            tensors: m
                .signature()
                .generators()
                .iter()
                .zip(m.tensors())
                .map(|(g, t)| (g.name.clone(), t.iter().map(fmt_q).collect()))
                .collect(),
        }
    }

    /// Builds the model, using `sig` when given, else the embedded generators.
    pub fn to_model(&self, sig: Option<&Arc<Signature>>) -> Result<Model> {
        let sig = match (sig, &self.generators) {
            (Some(s), _) => s.clone(),
            (None, Some(g)) => Signature::new(g.clone(), Vec::new())?,
            (None, None) => return Err(Error::Model("model file has no generators and none were supplied".into())),
        };
        let mut tensors = Vec::new();
        for g in sig.generators() {
            let raw = self
                .tensors
                .get(&g.name)
                .ok_or_else(|| Error::Model(format!("no tensor for generator {}", g.name)))?;
            let vals = raw
                .iter()
                .map(|s| parse_q(s).ok_or_else(|| Error::Model(format!("bad rational {s:?} in {}", g.name))))
                .collect::<Result<Vec<Q>>>()?;
            tensors.push(vals);
        }
        if let Some(extra) = self.tensors.keys().find(|k| sig.index_of(k).is_none()) {
            return Err(Error::Model(format!("tensor {extra} has no generator")));
        }
        Model::new(sig, self.dim, tensors)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}
