use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{Diagram, Signature};
use crate::arith::{MPoly, Q};
use crate::error::{Error, Result};

/// Formal combination of canonical diagrams with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct LinCombo {
    sig: Arc<Signature>,
    outputs: usize,
    inputs: usize,
    terms: BTreeMap<Diagram, MPoly>,
}

impl LinCombo {
    pub fn zero(sig: &Arc<Signature>, outputs: usize, inputs: usize) -> Self {
        LinCombo {
            sig: sig.clone(),
            outputs,
            inputs,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diagram(d: &Diagram) -> Self {
        let mut out = Self::zero(d.signature(), d.outputs(), d.inputs());
        out.terms.insert(d.canonical(), MPoly::one());
        out
    }

    pub fn from_terms(
        sig: &Arc<Signature>,
        outputs: usize,
        inputs: usize,
        terms: impl IntoIterator<Item = (MPoly, Diagram)>,
    ) -> Result<Self> {
        let mut out = Self::zero(sig, outputs, inputs);
        for (c, d) in terms {
            out.add_term(c, &d)?;
        }
        Ok(out)
    }

    pub fn add_term(&mut self, coeff: MPoly, d: &Diagram) -> Result<()> {
        if d.arity() != (self.outputs, self.inputs) {
            return Err(Error::Arity(format!(
                "term ({},{}) in a combination of arity ({},{})",
                d.outputs(),
                d.inputs(),
                self.outputs,
                self.inputs
            )));
        }
        if !self.sig.same_generators(d.signature()) {
            return Err(Error::SignatureMismatch);
        }
        if coeff.is_zero() {
            return Ok(());
        }
        let key = d.canonical();
        let sum = match self.terms.remove(&key) {
            Some(c) => &c + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.outputs, self.inputs)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &MPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LinCombo) -> Result<LinCombo> {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(c.clone(), d)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &MPoly) -> LinCombo {
        let mut out = Self::zero(&self.sig, self.outputs, self.inputs);
        if s.is_zero() {
            return out;
        }
        for (d, c) in &self.terms {
            out.terms.insert(d.clone(), c * s);
        }
        out
    }

    pub fn scale_q(&self, s: &Q) -> LinCombo {
        self.scale(&MPoly::constant(s.clone()))
    }

    fn bilinear(
        &self,
        other: &LinCombo,
        arity: (usize, usize),
        op: impl Fn(&Diagram, &Diagram) -> Result<Diagram>,
    ) -> Result<LinCombo> {
        let mut out = Self::zero(&self.sig, arity.0, arity.1);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(ca * cb, &op(a, b)?)?;
            }
        }
        Ok(out)
    }

    /// `self ∘ f`, extended bilinearly.
    pub fn compose(&self, f: &LinCombo) -> Result<LinCombo> {
        if self.inputs != f.outputs {
            return Err(Error::Arity(format!(
                "cannot compose g:({},{}) after f:({},{})",
                self.outputs, self.inputs, f.outputs, f.inputs
            )));
        }
        self.bilinear(f, (self.outputs, f.inputs), |a, b| a.compose(b))
    }

    pub fn tensor(&self, g: &LinCombo) -> Result<LinCombo> {
        self.bilinear(g, (self.outputs + g.outputs, self.inputs + g.inputs), |a, b| a.tensor(b))
    }

    /// Substitutes numeric parameter values, leaving a constant-coefficient combination.
    pub fn specialize(&self, vals: &[Q]) -> Result<LinCombo> {
        let mut out = Self::zero(&self.sig, self.outputs, self.inputs);
        for (d, c) in &self.terms {
            let v = c.eval(vals).ok_or_else(|| {
                Error::MissingParams(format!(
                    "coefficient {c} needs {} parameter values, got {}",
                    c.nvars(),
                    vals.len()
                ))
            })?;
            out.add_term(MPoly::constant(v), d)?;
        }
        Ok(out)
    }
}

impl fmt::Debug for LinCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LinCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<String> = self.sig.params().to_vec();
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) * [{}]", c.fmt_with(&names), d.to_literal())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn cancellation_and_composition() {
        let sig = Signature::empty();
        let id = Diagram::identity(&sig, 2);
        let swap = Diagram::permutation(&sig, &[1, 0]).unwrap();
        // (Id + swap)/2 is idempotent
        let mut e = LinCombo::zero(&sig, 2, 2);
        e.add_term(MPoly::constant(crate::arith::qf(1, 2)), &id).unwrap();
        e.add_term(MPoly::constant(crate::arith::qf(1, 2)), &swap).unwrap();
        assert_eq!(e.compose(&e).unwrap(), e);
        let diff = e.add(&e.scale_q(&q(-1))).unwrap();
        assert!(diff.is_empty());
    }
}
