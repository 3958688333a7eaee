//! Concrete models in Vec_K and realization of diagrams as exact tensors.

mod file;
mod models;
mod tensor;

use std::sync::Arc;

use num_traits::{One, Zero};

pub use file::ModelFile;
pub use models::*;
pub use tensor::Tensor;
use tensor::{dim_pow, Factor};

use crate::arith::{q_pow, Q};
use crate::diagram::{Diagram, LinCombo, Signature, Sink, Source};
use crate::error::{Error, Result};

/// Largest intermediate tensor (entries) the contraction will build.
pub const MAX_TENSOR_ENTRIES: usize = 1 << 24;

/// A vector space `K^dim` with one dense tensor per generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    sig: Arc<Signature>,
    dim: usize,
    tensors: Vec<Vec<Q>>,
}

impl Model {
    pub fn new(sig: Arc<Signature>, dim: usize, tensors: Vec<Vec<Q>>) -> Result<Self> {
        if tensors.len() != sig.generators().len() {
            return Err(Error::Model(format!(
                "{} tensors for {} generators",
                tensors.len(),
                sig.generators().len()
            )));
        }
        for (g, t) in sig.generators().iter().zip(&tensors) {
            let want = dim_pow(dim, g.outputs + g.inputs);
            if t.len() != want {
                return Err(Error::Model(format!(
                    "tensor {} has {} entries, expected {dim}^{} = {want}",
                    g.name,
                    t.len(),
                    g.outputs + g.inputs
                )));
            }
        }
        Ok(Model { sig, dim, tensors })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tensor(&self, name: &str) -> Option<&[Q]> {
        self.sig.index_of(name).map(|g| self.tensors[g].as_slice())
    }

    pub fn tensors(&self) -> &[Vec<Q>] {
        &self.tensors
    }

    /// The generator's tensor as a `Tensor`.
    pub fn generator_tensor(&self, g: usize) -> Tensor {
        let gen = self.sig.generator(g);
        Tensor {
            dim: self.dim,
            outputs: gen.outputs,
            inputs: gen.inputs,
            data: self.tensors[g].clone(),
        }
    }

    /// Multilinear contraction of the generator tensors along the wires.
    pub fn realize(&self, f: &Diagram) -> Result<Tensor> {
        if !self.sig.same_generators(f.signature()) {
            return Err(Error::SignatureMismatch);
        }
        let d = self.dim;
        let (p, q) = f.arity();
        let feeds = f.feeds();
        // edge id = sink index of the wire
        let mut next_edge = f.wires().len();
        let out_legs: Vec<usize> = (0..p).collect();
        let mut in_legs: Vec<usize> = Vec::with_capacity(q);
        let mut factors: Vec<Factor> = Vec::new();
        for sink in feeds.iter().take(q) {
            let e = f.sink_index(*sink);
            if let Sink::Output(_) = sink {
                // direct strand: open input j straight to an open output
                let fresh = next_edge;
                next_edge += 1;
                in_legs.push(fresh);
                factors.push(Factor {
                    legs: vec![e, fresh],
                    data: Tensor::identity(d, 1).data,
                });
            } else {
                in_legs.push(e);
            }
        }
        for (b, &g) in f.boxes().iter().enumerate() {
            let gen = self.sig.generator(g);
            let mut legs = Vec::with_capacity(gen.outputs + gen.inputs);
            for k in 0..gen.outputs {
                legs.push(f.sink_index(feeds[f.source_index(Source::BoxOut(b, k))]));
            }
            for j in 0..gen.inputs {
                legs.push(f.sink_index(Sink::BoxIn(b, j)));
            }
            factors.push(
                Factor {
                    legs,
                    data: self.tensors[g].clone(),
                }
                .trace_repeats(d),
            );
        }
        let open: Vec<usize> = out_legs.iter().chain(&in_legs).copied().collect();
        let mut result = contract_network(factors, &open, d)?;
        if f.loops() > 0 {
            let s = q_pow(&Q::from_integer((d as i64).into()), f.loops() as u32);
            result.iter_mut().for_each(|x| *x *= &s);
        }
        Ok(Tensor {
            dim: d,
            outputs: p,
            inputs: q,
            data: result,
        })
    }

    /// Scalar value of a closed diagram.
    pub fn evaluate_closed(&self, f: &Diagram) -> Result<Q> {
        if !f.is_closed() {
            return Err(Error::NotClosed {
                outputs: f.outputs(),
                inputs: f.inputs(),
            });
        }
        let mut acc = Q::one();
        for c in f.connected_components()? {
            let t = self.realize(&c)?;
            acc *= &t.data[0];
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// Realization of a combination; `params` substitutes the coefficient variables.
    pub fn realize_combo(&self, f: &LinCombo, params: &[Q]) -> Result<Tensor> {
        let (p, q) = f.arity();
        let mut acc = Tensor::zeros(self.dim, p, q);
        for (d, c) in f.terms() {
            let v = c.eval(params).ok_or_else(|| {
                Error::MissingParams(format!(
                    "coefficient {c} needs {} parameter values, got {}",
                    c.nvars(),
                    params.len()
                ))
            })?;
            if v.is_zero() {
                continue;
            }
            acc = acc.add(&self.realize(d)?.scale(&v));
        }
        Ok(acc)
    }
}

/// Greedy pairwise contraction: always merge the pair sharing an edge whose
/// result is smallest, ties broken by the smallest shared edge id.
fn contract_network(mut factors: Vec<Factor>, open: &[usize], d: usize) -> Result<Vec<Q>> {
    let mut scalar = Q::one();
    loop {
        // fold scalars eagerly
        factors.retain(|f| {
            if f.legs.is_empty() {
                scalar *= &f.data[0];
                false
            } else {
                true
            }
        });
        if factors.len() <= 1 {
            break;
        }
        let mut best: Option<(usize, usize, usize, usize)> = None; // (size, edge, i, j)
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                let shared: Vec<usize> = factors[i]
                    .legs
                    .iter()
                    .copied()
                    .filter(|l| factors[j].legs.contains(l))
                    .collect();
                let Some(&edge) = shared.iter().min() else {
                    continue;
                };
                let nlegs = factors[i].legs.len() + factors[j].legs.len() - 2 * shared.len();
                let size = dim_pow(d, nlegs);
                if best.map_or(true, |b| (size, edge) < (b.0, b.1)) {
                    best = Some((size, edge, i, j));
                }
            }
        }
        let (i, j) = match best {
            Some((size, _, i, j)) => {
                if size > MAX_TENSOR_ENTRIES {
                    return Err(Error::Model(format!("intermediate tensor with {size} entries")));
                }
                (i, j)
            }
            // disconnected open pieces: outer product of the two smallest
            None => {
                let mut idx: Vec<usize> = (0..factors.len()).collect();
                idx.sort_by_key(|&k| (factors[k].legs.len(), factors[k].legs.iter().min().copied()));
                (idx[0].min(idx[1]), idx[0].max(idx[1]))
            }
        };
        let b = factors.swap_remove(j);
        let a = factors.swap_remove(i);
        let c = a.contract(&b, d);
        if c.data.len() > MAX_TENSOR_ENTRIES {
            return Err(Error::Model(format!("intermediate tensor with {} entries", c.data.len())));
        }
        factors.push(c);
    }
    match factors.pop() {
        None => Ok(vec![scalar]),
        Some(f) => {
            let mut data = f.permute(open, d);
            if !scalar.is_one() {
                data.iter_mut().for_each(|x| *x *= &scalar);
            }
            Ok(data)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, Matrix};
    use crate::diagram::Builder;
    use crate::enumerate::{closed_surface, handle};

    fn zigzag(sig: &Arc<Signature>) -> Diagram {
        let mut b = Builder::new(sig, 1, 1);
        let d = b.add("d").unwrap();
        let c = b.add("c").unwrap();
        b.connect(Source::BoxOut(d, 0), Sink::BoxIn(c, 0)).unwrap();
        b.connect(Source::Input(0), Sink::BoxIn(c, 1)).unwrap();
        b.connect(Source::BoxOut(d, 1), Sink::Output(0)).unwrap();
        b.finish().unwrap()
    }

    #[test]
    fn identity_and_dimension() {
        let m = orth_model(3);
        let sig = m.signature().clone();
        assert_eq!(m.realize(&Diagram::identity(&sig, 1)).unwrap(), Tensor::identity(3, 1));
        assert_eq!(m.evaluate_closed(&Diagram::loop_diagram(&sig)).unwrap(), q(3));
        assert_eq!(gl_model(5).evaluate_closed(&Diagram::loop_diagram(&gl_signature())).unwrap(), q(5));
    }

    #[test]
    fn cyclic_permutation_matrix() {
        let sig = gl_signature();
        let sigma = [1, 2, 0];
        let t = gl_model(2).realize(&Diagram::permutation(&sig, &sigma).unwrap()).unwrap();
        // out[o0 o1 o2][i0 i1 i2] = Π_i δ(o_{σ(i)}, i_i)
        for o in 0..8usize {
            for i in 0..8usize {
                let bit = |x: usize, k: usize| (x >> (2 - k)) & 1;
                let want = (0..3).all(|k| bit(o, sigma[k]) == bit(i, k));
                assert_eq!(t.data[o * 8 + i], q(want as i64), "o={o} i={i}");
            }
        }
    }

    #[test]
    fn pairing_zigzags_are_identity() {
        let sig = pairing_signature();
        let z = zigzag(&sig);
        assert_eq!(orth_model(2).realize(&z).unwrap(), Tensor::identity(2, 1));
        assert_eq!(symp_model(4).unwrap().realize(&z).unwrap(), Tensor::identity(4, 1));
        assert!(symp_model(3).is_err());
        assert_eq!(symp_model(2).unwrap().evaluate_closed(&Diagram::loop_diagram(&sig)).unwrap(), q(2));
    }

    #[test]
    fn jordan_block_traces_vanish() {
        let m = endo_model(&[vec![q(0), q(1)], vec![q(0), q(0)]]).unwrap();
        let t = Diagram::generator(m.signature(), "T").unwrap();
        for n in 1..4 {
            let c = t.power(n).unwrap().trace_close().unwrap();
            assert_eq!(m.evaluate_closed(&c).unwrap(), q(0));
        }
    }

    #[test]
    fn frobenius_surfaces() {
        let a1 = dual_numbers_model(q(0), q(1)).unwrap();
        let a2 = dual_numbers_model(q(1), q(1)).unwrap();
        let sig = a1.signature().clone();
        assert_eq!(a1.evaluate_closed(&closed_surface(&sig, 1).unwrap()).unwrap(), q(2));
        assert_eq!(a1.evaluate_closed(&closed_surface(&sig, 0).unwrap()).unwrap(), q(0));
        assert_eq!(a2.evaluate_closed(&closed_surface(&sig, 0).unwrap()).unwrap(), q(1));
        // handle x: 1 -> 2y, y -> 0
        let x = a1.realize(&handle(&sig).unwrap()).unwrap();
        assert_eq!(x.data, vec![q(0), q(0), q(2), q(0)]);
    }

    #[test]
    fn group_algebra_fixed_points() {
        let m = group_algebra_model(2, 2, &[0, 1]).unwrap();
        let t = Diagram::generator(m.signature(), "T_11").unwrap();
        assert_eq!(m.evaluate_closed(&t.trace_close().unwrap()).unwrap(), q(2));
        assert_eq!(m.dim(), 4);
        assert!(group_algebra_model(4, 1, &[1]).is_err());
        assert!(group_algebra_model(2, 2, &[0, 7]).is_err());
    }

    #[test]
    fn composition_is_matrix_product() {
        let m = sep_algebra_model(2);
        let sig = m.signature().clone();
        let mult = Diagram::generator(&sig, "m").unwrap();
        let c = Diagram::generator(&sig, "c").unwrap();
        let mc = mult.compose(&c).unwrap();
        let lhs = m.realize(&mc).unwrap().as_matrix();
        let rhs: Matrix<Q> = m.realize(&mult).unwrap().as_matrix().mul_mat(&m.realize(&c).unwrap().as_matrix());
        assert_eq!(lhs, rhs);
        // separability: m∘c = u on K^n
        assert_eq!(m.realize(&mc).unwrap(), m.realize(&Diagram::generator(&sig, "u").unwrap()).unwrap());
    }

    #[test]
    fn model_file_round_trip() {
        let m = frobenius_line_model(&q(3)).unwrap();
        let f = ModelFile::from_model(&m);
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"1/3\""));
        let back: ModelFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_model(Some(m.signature())).unwrap(), m);
    }
}
