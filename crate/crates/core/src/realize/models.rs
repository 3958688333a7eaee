use std::sync::Arc;

use num_traits::{One, Zero};

use super::tensor::dim_pow;
use super::{Model, MAX_TENSOR_ENTRIES};
use crate::arith::{q, Matrix, Q};
use crate::diagram::{Generator, Signature};
use crate::error::{Error, Result};

/// Largest group-algebra dimension accepted by `group_algebra_model`.
pub const MAX_GROUP_ALGEBRA_DIM: usize = 4096;

pub fn gl_signature() -> Arc<Signature> {
    Signature::from_arities(&[], &["t"]).expect("valid")
}

pub fn endo_signature() -> Arc<Signature> {
    Signature::from_arities(&[("T", 1, 1)], &[]).expect("valid")
}

/// `c:(0,2)` pairing and `d:(2,0)` copairing, shared by the O and Sp families.
pub fn pairing_signature() -> Arc<Signature> {
    Signature::from_arities(&[("c", 0, 2), ("d", 2, 0)], &["t"]).expect("valid")
}

pub fn sep_signature() -> Arc<Signature> {
    Signature::from_arities(&[("m", 1, 2), ("u", 1, 0), ("c", 2, 0)], &["t"]).expect("valid")
}

pub fn frobenius_signature() -> Arc<Signature> {
    Signature::from_arities(&[("m", 1, 2), ("u", 1, 0), ("eps", 0, 1), ("c", 2, 0)], &[]).expect("valid")
}

/// Generator name of `T_x` for `x = Σ digits[k] π^k`.
pub fn dvr_t_name(digits: &[u8]) -> String {
    let s: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
    format!("T_{s}")
}

/// Hopf algebra generators plus `T_x` for every `x` with 0/1 digits.
pub fn dvr_signature(r: usize) -> Result<Arc<Signature>> {
    if r == 0 || r > 6 {
        return Err(Error::InvalidParams(format!("dvr needs 1 <= r <= 6, got {r}")));
    }
    let mut gens: Vec<(String, usize, usize)> = vec![
        ("m".into(), 1, 2),
        ("delta".into(), 2, 1),
        ("u".into(), 1, 0),
        ("eps".into(), 0, 1),
        ("S".into(), 1, 1),
    ];
    for mask in 0..(1u32 << r) {
        let digits: Vec<u8> = (0..r).map(|k| (mask >> k & 1) as u8).collect();
        gens.push((dvr_t_name(&digits), 1, 1));
    }
    Signature::new(
        gens.into_iter()
            .map(|(name, outputs, inputs)| Generator { name, outputs, inputs })
            .collect(),
        (1..=r).map(|j| format!("t{j}")).collect(),
    )
}

fn diag_tensor(d: usize, order: usize) -> Vec<Q> {
    let n = dim_pow(d, order);
    let mut t = vec![Q::zero(); n];
    for i in 0..d {
        let flat = (0..order).fold(0, |a, _| a * d + i);
        t[flat] = Q::one();
    }
    t
}

/// The empty structure on `K^n`.
pub fn gl_model(n: usize) -> Model {
    Model::new(gl_signature(), n, Vec::new()).expect("shapes match")
}

pub fn endo_model(matrix: &[Vec<Q>]) -> Result<Model> {
    let d = matrix.len();
    if matrix.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidParams("endomorphism matrix must be square".into()));
    }
    Model::new(endo_signature(), d, vec![matrix.iter().flatten().cloned().collect()])
}

/// `c_n = Σ e^i⊗e^i`, `d_n = Σ e_i⊗e_i`.
pub fn orth_model(n: usize) -> Model {
    Model::new(pairing_signature(), n, vec![diag_tensor(n, 2), diag_tensor(n, 2)]).expect("shapes match")
}

/// `c = Σ e^i⊗e^{i+n} − e^{i+n}⊗e^i` and likewise `d`, on `K^{2n}`.
pub fn symp_model(dim: usize) -> Result<Model> {
    if dim % 2 != 0 {
        return Err(Error::InvalidParams(format!("symplectic model needs even dimension, got {dim}")));
    }
    let n = dim / 2;
    let mut t = vec![Q::zero(); dim * dim];
    for i in 0..n {
        t[i * dim + i + n] = q(1);
        t[(i + n) * dim + i] = q(-1);
    }
    Model::new(pairing_signature(), dim, vec![t.clone(), t])
}

/// The algebra `K^n` with pointwise product.
pub fn sep_algebra_model(n: usize) -> Model {
    Model::new(sep_signature(), n, vec![diag_tensor(n, 3), vec![Q::one(); n], diag_tensor(n, 2)]).expect("shapes match")
}

/// Commutative Frobenius algebra from a unit vector, structure constants
/// `mult[k][i][j]` (coefficient of `e_k` in `e_i e_j`) and a counit; `c` is the
/// inverse of the pairing `εm`.
pub fn frobenius_model(unit: &[Q], mult: &[Vec<Vec<Q>>], counit: &[Q]) -> Result<Model> {
    let d = unit.len();
    if counit.len() != d || mult.len() != d || mult.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
        return Err(Error::InvalidParams("inconsistent Frobenius algebra shapes".into()));
    }
    let pairing = Matrix::from_rows(
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).fold(Q::zero(), |a, k| a + &counit[k] * &mult[k][i][j]))
                    .collect()
            })
            .collect(),
    );
    let inv_cols: Vec<Vec<Q>> = (0..d)
        .map(|j| {
            let mut e = vec![Q::zero(); d];
            e[j] = Q::one();
            pairing.solve(&e)
        })
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidParams("the pairing εm is degenerate".into()))?;
    let mut c = vec![Q::zero(); d * d];
    for (j, col) in inv_cols.iter().enumerate() {
        for i in 0..d {
            c[i * d + j] = col[i].clone();
        }
    }
    let m: Vec<Q> = mult.iter().flat_map(|a| a.iter().flatten().cloned()).collect();
    Model::new(frobenius_signature(), d, vec![m, unit.to_vec(), counit.to_vec(), c])
}

/// `A = K` with `ε = f/λ` and `c = λ e⊗e`.
pub fn frobenius_line_model(lambda: &Q) -> Result<Model> {
    if lambda.is_zero() {
        return Err(Error::InvalidParams("λ must be nonzero".into()));
    }
    frobenius_model(&[q(1)], &[vec![vec![q(1)]]], &[Q::one() / lambda])
}

/// `k[y]/(y²)` in the basis `(1, y)` with the given counit values `(ε(1), ε(y))`.
pub fn dual_numbers_model(eps_one: Q, eps_y: Q) -> Result<Model> {
    let (z, o) = (q(0), q(1));
    // mult[k][i][j]
    let mult = vec![
        vec![vec![o.clone(), z.clone()], vec![z.clone(), z.clone()]],
        vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]],
    ];
    frobenius_model(&[o, z], &mult, &[eps_one, eps_y])
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// The group algebra `K M` of `M = ⊕_i (Z/p^i)^{a_i}` with Hopf structure and
/// `T_x(U_m) = U_{xm}` for every `x` with 0/1 digits in base `p`.
pub fn group_algebra_model(p: u64, r: usize, a: &[usize]) -> Result<Model> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("residue characteristic {p} is not prime")));
    }
    if a.len() != r {
        return Err(Error::InvalidParams(format!("expected {r} multiplicities, got {}", a.len())));
    }
    let sig = dvr_signature(r)?;
    // cyclic factor orders
    let mut moduli: Vec<u64> = Vec::new();
    for (i, &ai) in a.iter().enumerate() {
        for _ in 0..ai {
            moduli.push(p.pow(i as u32 + 1));
        }
    }
    let size = moduli.iter().try_fold(1usize, |acc, &m| acc.checked_mul(m as usize));
    let d = match size {
        Some(d) if d <= MAX_GROUP_ALGEBRA_DIM => d,
        _ => {
            return Err(Error::InvalidParams(format!(
                "|M| exceeds the limit of {MAX_GROUP_ALGEBRA_DIM}"
            )))
        }
    };
    if dim_pow(d, 3) > MAX_TENSOR_ENTRIES {
        return Err(Error::InvalidParams(format!("dense tensors for |M| = {d} are too large")));
    }
    let decode = |mut idx: usize| -> Vec<u64> {
        let mut v = vec![0; moduli.len()];
        for k in (0..moduli.len()).rev() {
            v[k] = (idx % moduli[k] as usize) as u64;
            idx /= moduli[k] as usize;
        }
        v
    };
    let encode = |v: &[u64]| -> usize { v.iter().zip(&moduli).fold(0usize, |a, (&x, &m)| a * m as usize + x as usize) };
    let elems: Vec<Vec<u64>> = (0..d).map(decode).collect();
    let add = |x: &[u64], y: &[u64]| -> usize {
        let s: Vec<u64> = x.iter().zip(y).zip(&moduli).map(|((a, b), m)| (a + b) % m).collect();
        encode(&s)
    };
    let smul = |c: u64, x: &[u64]| -> usize {
        let s: Vec<u64> = x.iter().zip(&moduli).map(|(a, m)| (a * (c % m)) % m).collect();
        encode(&s)
    };
    let mut tensors = Vec::new();
    for g in sig.generators() {
        let t = match g.name.as_str() {
            "m" => {
                let mut t = vec![Q::zero(); d * d * d];
                for i in 0..d {
                    for j in 0..d {
                        t[add(&elems[i], &elems[j]) * d * d + i * d + j] = Q::one();
                    }
                }
                t
            }
            "delta" => {
                let mut t = vec![Q::zero(); d * d * d];
                for i in 0..d {
                    t[i * d * d + i * d + i] = Q::one();
                }
                t
            }
            "u" => {
                let mut t = vec![Q::zero(); d];
                t[0] = Q::one();
                t
            }
            "eps" => vec![Q::one(); d],
            "S" => {
                let mut t = vec![Q::zero(); d * d];
                for i in 0..d {
                    let neg: Vec<u64> = elems[i].iter().zip(&moduli).map(|(a, m)| (m - a) % m).collect();
                    t[encode(&neg) * d + i] = Q::one();
                }
                t
            }
            name => {
                let digits = name.strip_prefix("T_").expect("dvr generator");
                let x = digits
                    .bytes()
                    .enumerate()
                    .fold(0u64, |acc, (k, b)| acc + (b - b'0') as u64 * p.pow(k as u32));
                let mut t = vec![Q::zero(); d * d];
                for i in 0..d {
                    t[smul(x, &elems[i]) * d + i] = Q::one();
                }
                t
            }
        };
        tensors.push(t);
    }
    Model::new(sig, d, tensors)
}

fn prefixed(existing: &Signature, name: &str) -> String {
    let mut n = name.to_string();
    while existing.index_of(&n).is_some() {
        n = format!("w{n}");
    }
    n
}

/// Names used by `wreath_bar_model` for `(P, u, eps, m, c)` given a base signature.
pub fn wreath_names(base: &Signature) -> [String; 5] {
    ["P", "u", "eps", "m", "c"].map(|n| prefixed(base, n))
}

/// `Ā = 1 ⊕ A` (index 0 is the unit summand) with the base tensors extended
/// by zero and `P, u, ε, m = P⊗1, c = u⊗u` appended.
pub fn wreath_bar_model(base: &Model) -> Result<Model> {
    let bsig = base.signature();
    let names = wreath_names(bsig);
    let mut gens: Vec<Generator> = bsig.generators().to_vec();
    for (name, (o, i)) in names.iter().zip([(1, 1), (1, 0), (0, 1), (1, 2), (2, 0)]) {
        gens.push(Generator {
            name: name.clone(),
            outputs: o,
            inputs: i,
        });
    }
    let sig = Signature::new(gens, bsig.params().to_vec())?;
    let d = base.dim() + 1;
    let mut tensors = Vec::new();
    for (g, t) in bsig.generators().iter().zip(base.tensors()) {
        let order = g.outputs + g.inputs;
        let mut out = vec![Q::zero(); dim_pow(d, order)];
        let bd = base.dim();
        for (flat, v) in t.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let mut rem = flat;
            let mut idx = vec![0; order];
            for k in (0..order).rev() {
                idx[k] = rem % bd + 1;
                rem /= bd;
            }
            out[idx.iter().fold(0, |a, &x| a * d + x)] = v.clone();
        }
        tensors.push(out);
    }
    let mut pr = vec![Q::zero(); d * d];
    pr[0] = Q::one();
    let mut u = vec![Q::zero(); d];
    u[0] = Q::one();
    let mut m = vec![Q::zero(); d * d * d];
    for j in 0..d {
        m[j * d * d + j] = Q::one(); // m[k=j][i=0][j]
    }
    let mut c = vec![Q::zero(); d * d];
    c[0] = Q::one();
    tensors.extend([pr, u.clone(), u, m, c]);
    Model::new(sig, d, tensors)
}

fn check_same(a: &Model, b: &Model) -> Result<()> {
    if a.signature().same_generators(b.signature()) {
        Ok(())
    } else {
        Err(Error::SignatureMismatch)
    }
}

/// Block-diagonal sum of two structures of the same type.
pub fn direct_sum(a: &Model, b: &Model) -> Result<Model> {
    check_same(a, b)?;
    let (da, db) = (a.dim(), b.dim());
    let d = da + db;
    let mut tensors = Vec::new();
    for (g, (ta, tb)) in a.signature().generators().iter().zip(a.tensors().iter().zip(b.tensors())) {
        let order = g.outputs + g.inputs;
        let mut out = vec![Q::zero(); dim_pow(d, order)];
        for (t, dd, shift) in [(ta, da, 0), (tb, db, da)] {
            for (flat, v) in t.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let mut rem = flat;
                let mut idx = vec![0; order];
                for k in (0..order).rev() {
                    idx[k] = rem % dd + shift;
                    rem /= dd;
                }
                out[idx.iter().fold(0, |acc, &x| acc * d + x)] = v.clone();
            }
        }
        tensors.push(out);
    }
    Model::new(a.signature().clone(), d, tensors)
}

/// Tensor product structure on `A ⊗ B`, basis index `i·dim(B) + j`.
pub fn tensor_product(a: &Model, b: &Model) -> Result<Model> {
    check_same(a, b)?;
    let (da, db) = (a.dim(), b.dim());
    let d = da * db;
    let mut tensors = Vec::new();
    for (g, (ta, tb)) in a.signature().generators().iter().zip(a.tensors().iter().zip(b.tensors())) {
        let order = g.outputs + g.inputs;
        let mut out = vec![Q::zero(); dim_pow(d, order)];
        for (fa, va) in ta.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            let mut ia = vec![0; order];
            let mut rem = fa;
            for k in (0..order).rev() {
                ia[k] = rem % da;
                rem /= da;
            }
            for (fb, vb) in tb.iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                let mut rem = fb;
                let mut flat = 0;
                let mut ib = vec![0; order];
                for k in (0..order).rev() {
                    ib[k] = rem % db;
                    rem /= db;
                }
                for k in 0..order {
                    flat = flat * d + ia[k] * db + ib[k];
                }
                out[flat] = va * vb;
            }
        }
        tensors.push(out);
    }
    Model::new(a.signature().clone(), d, tensors)
}

/// A structure of the given type with entries drawn from `{-2..2}`.
pub fn random_model<R: rand::Rng>(sig: &Arc<Signature>, dim: usize, rng: &mut R) -> Model {
    let tensors = sig
        .generators()
        .iter()
        .map(|g| {
            (0..dim_pow(dim, g.outputs + g.inputs))
                .map(|_| q(rng.gen_range(-2..=2)))
                .collect()
        })
        .collect();
    Model::new(sig.clone(), dim, tensors).expect("shapes match")
}
