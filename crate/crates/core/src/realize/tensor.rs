use num_traits::{One, Zero};

use crate::arith::{Matrix, Q};

/// Dense tensor in `(K^d)^{⊗p} ⊗ (K^d)^{*⊗q}`, outputs-major then inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    pub dim: usize,
    pub outputs: usize,
    pub inputs: usize,
    pub data: Vec<Q>,
}

pub(crate) fn dim_pow(d: usize, k: usize) -> usize {
    (0..k).fold(1usize, |a, _| a.saturating_mul(d))
}

impl Tensor {
    pub fn zeros(dim: usize, outputs: usize, inputs: usize) -> Self {
        Tensor {
            dim,
            outputs,
            inputs,
            data: vec![Q::zero(); dim_pow(dim, outputs + inputs)],
        }
    }

    pub fn scalar(x: Q) -> Self {
        Tensor {
            dim: 0,
            outputs: 0,
            inputs: 0,
            data: vec![x],
        }
    }

    /// Value of a (0,0) tensor.
    pub fn as_scalar(&self) -> Option<&Q> {
        (self.outputs == 0 && self.inputs == 0).then(|| &self.data[0])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Rows indexed by the outputs, columns by the inputs.
    pub fn as_matrix(&self) -> Matrix<Q> {
        Matrix::new(
            dim_pow(self.dim, self.outputs),
            dim_pow(self.dim, self.inputs),
            self.data.clone(),
        )
    }

    pub fn trace(&self) -> Q {
        assert_eq!(self.outputs, self.inputs, "trace of a non-square tensor");
        let n = dim_pow(self.dim, self.outputs);
        (0..n).fold(Q::zero(), |acc, i| acc + &self.data[i * n + i])
    }

    pub fn add(&self, o: &Tensor) -> Tensor {
        assert_eq!((self.dim, self.outputs, self.inputs), (o.dim, o.outputs, o.inputs));
        Tensor {
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: &Q) -> Tensor {
        Tensor {
            data: self.data.iter().map(|a| a * s).collect(),
            ..self.clone()
        }
    }

    /// Kronecker-style tensor product matching diagram `tensor` boundary order.
    pub fn kron(&self, o: &Tensor) -> Tensor {
        let dim = if self.outputs + self.inputs == 0 { o.dim } else { self.dim };
        let (r1, c1) = (dim_pow(self.dim, self.outputs), dim_pow(self.dim, self.inputs));
        let (r2, c2) = (dim_pow(o.dim, o.outputs), dim_pow(o.dim, o.inputs));
        let mut data = vec![Q::zero(); r1 * r2 * c1 * c2];
        for a in 0..r1 {
            for b in 0..c1 {
                let x = &self.data[a * c1 + b];
                if x.is_zero() {
                    continue;
                }
                for c in 0..r2 {
                    for e in 0..c2 {
                        let y = &o.data[c * c2 + e];
                        if !y.is_zero() {
                            data[(a * r2 + c) * (c1 * c2) + b * c2 + e] = x * y;
                        }
                    }
                }
            }
        }
        Tensor {
            dim,
            outputs: self.outputs + o.outputs,
            inputs: self.inputs + o.inputs,
            data,
        }
    }

    pub fn identity(dim: usize, n: usize) -> Tensor {
        let m = dim_pow(dim, n);
        let mut t = Tensor::zeros(dim, n, n);
        for i in 0..m {
            t.data[i * m + i] = Q::one();
        }
        t
    }
}

/// A factor in a contraction network: legs are edge ids, data is row-major.
#[derive(Clone, Debug)]
pub(crate) struct Factor {
    pub legs: Vec<usize>,
    pub data: Vec<Q>,
}

fn decode(mut idx: usize, d: usize, n: usize, out: &mut [usize]) {
    for k in (0..n).rev() {
        out[k] = idx % d;
        idx /= d;
    }
}

impl Factor {
    /// Traces out legs that occur twice (wires from the box back to itself).
    pub fn trace_repeats(self, d: usize) -> Factor {
        let n = self.legs.len();
        let keep: Vec<usize> = (0..n)
            .filter(|&i| self.legs.iter().filter(|&&l| l == self.legs[i]).count() == 1)
            .collect();
        if keep.len() == n {
            return self;
        }
        // partner[i] = the other position carrying the same leg
        let partner: Vec<Option<usize>> = (0..n)
            .map(|i| (0..n).find(|&j| j != i && self.legs[j] == self.legs[i]))
            .collect();
        let mut out = vec![Q::zero(); dim_pow(d, keep.len())];
        let mut idx = vec![0; n];
        for (flat, v) in self.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            decode(flat, d, n, &mut idx);
            if (0..n).all(|i| partner[i].map_or(true, |j| idx[i] == idx[j])) {
                let o = keep.iter().fold(0, |a, &k| a * d + idx[k]);
                out[o] += v;
            }
        }
        Factor {
            legs: keep.iter().map(|&k| self.legs[k]).collect(),
            data: out,
        }
    }

    /// Contracts all shared legs; free legs of `self` come first.
    pub fn contract(&self, o: &Factor, d: usize) -> Factor {
        let shared: Vec<usize> = self.legs.iter().copied().filter(|l| o.legs.contains(l)).collect();
        let a_free: Vec<usize> = (0..self.legs.len()).filter(|&i| !shared.contains(&self.legs[i])).collect();
        let b_free: Vec<usize> = (0..o.legs.len()).filter(|&i| !shared.contains(&o.legs[i])).collect();
        let a_sh: Vec<usize> = shared.iter().map(|s| self.legs.iter().position(|l| l == s).unwrap()).collect();
        let b_sh: Vec<usize> = shared.iter().map(|s| o.legs.iter().position(|l| l == s).unwrap()).collect();
        let bsize = dim_pow(d, b_free.len());
        let mut index: std::collections::HashMap<u128, Vec<(usize, &Q)>> = std::collections::HashMap::new();
        let mut idx = vec![0; o.legs.len()];
        for (flat, v) in o.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            decode(flat, d, o.legs.len(), &mut idx);
            let key = b_sh.iter().fold(0u128, |a, &k| a * d as u128 + idx[k] as u128);
            let off = b_free.iter().fold(0usize, |a, &k| a * d + idx[k]);
            index.entry(key).or_default().push((off, v));
        }
        let mut legs: Vec<usize> = a_free.iter().map(|&i| self.legs[i]).collect();
        legs.extend(b_free.iter().map(|&i| o.legs[i]));
        let mut out = vec![Q::zero(); dim_pow(d, legs.len())];
        let mut idx = vec![0; self.legs.len()];
        for (flat, v) in self.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            decode(flat, d, self.legs.len(), &mut idx);
            let key = a_sh.iter().fold(0u128, |a, &k| a * d as u128 + idx[k] as u128);
            if let Some(hits) = index.get(&key) {
                let base = a_free.iter().fold(0usize, |a, &k| a * d + idx[k]) * bsize;
                for (off, w) in hits {
                    out[base + off] += v * *w;
                }
            }
        }
        Factor { legs, data: out }
    }

    /// Reorders legs to `order` (a permutation of the current legs).
    pub fn permute(&self, order: &[usize], d: usize) -> Vec<Q> {
        let n = self.legs.len();
        let pos: Vec<usize> = order.iter().map(|l| self.legs.iter().position(|x| x == l).unwrap()).collect();
        let mut out = vec![Q::zero(); self.data.len()];
        let mut idx = vec![0; n];
        for (flat, v) in self.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            decode(flat, d, n, &mut idx);
            let o = pos.iter().fold(0, |a, &p| a * d + idx[p]);
            out[o] = v.clone();
        }
        out
    }
}
