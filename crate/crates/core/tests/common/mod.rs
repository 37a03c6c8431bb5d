//! Shared generators and independent oracles for the integration tests.
//!
//! The oracles here are written with explicit index loops and do not call
//! into the library's own formulas.

#![allow(dead_code)]

use nalgebra::DMatrix;
use nilrym::StructureTuple;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn random_skew(rng: &mut impl Rng, q: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(q, q);
    for i in 0..q {
        for j in i + 1..q {
            let v = rng.gen_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let a = random_matrix(rng, n, n);
    (&a + a.transpose()) * 0.5
}

pub fn random_tuple(rng: &mut impl Rng, q: usize, p: usize) -> StructureTuple {
    StructureTuple::new(q, (0..p).map(|_| random_skew(rng, q)).collect()).unwrap()
}

/// Random shape with `q` in `2..=qmax` and `p` in `1..=pmax`.
pub fn random_shaped_tuple(rng: &mut impl Rng, qmax: usize, pmax: usize) -> StructureTuple {
    let q = rng.gen_range(2..=qmax);
    let p = rng.gen_range(1..=pmax);
    random_tuple(rng, q, p)
}

/// Orthogonal factor of a QR decomposition with sign-fixed diagonal.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let qr = random_matrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

pub fn condition_number(g: &DMatrix<f64>) -> f64 {
    let sv = g.clone().svd(false, false).singular_values;
    sv.max() / sv.min()
}

/// Random `g` with condition number below `bound`, built as `k · diag(s) · u`.
pub fn well_conditioned(rng: &mut impl Rng, n: usize, bound: f64) -> DMatrix<f64> {
    let k = random_orthogonal(rng, n);
    let u = random_orthogonal(rng, n);
    let s: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..bound.sqrt())).collect();
    k * diag(&s) * u
}

/// `−2 Σ_k (C^k)²` entry by entry: `2 Σ_k Σ_l C^k_il C^k_jl`.
pub fn m1_oracle(c: &StructureTuple) -> DMatrix<f64> {
    let q = c.q();
    let mut out = DMatrix::zeros(q, q);
    for k in 0..c.p() {
        let m = c.matrix(k);
        for i in 0..q {
            for j in 0..q {
                let mut s = 0.0;
                for l in 0..q {
                    s += m[(i, l)] * m[(j, l)];
                }
                out[(i, j)] += 2.0 * s;
            }
        }
    }
    out
}

/// Gram matrix `⟨C^i, C^j⟩` entry by entry.
pub fn m2_oracle(c: &StructureTuple) -> DMatrix<f64> {
    let p = c.p();
    let q = c.q();
    DMatrix::from_fn(p, p, |i, j| {
        let mut s = 0.0;
        for a in 0..q {
            for b in 0..q {
                s += c.matrix(i)[(a, b)] * c.matrix(j)[(a, b)];
            }
        }
        s
    })
}

/// Bracket from the defining sum over basis pairs.
pub fn bracket_oracle(c: &StructureTuple, u: &[f64], v: &[f64]) -> Vec<f64> {
    let q = c.q();
    let mut out = vec![0.0; q + c.p()];
    for i in 0..q {
        for j in 0..q {
            let w = u[i] * v[j];
            if w == 0.0 {
                continue;
            }
            for k in 0..c.p() {
                out[q + k] += w * c.matrix(k)[(i, j)];
            }
        }
    }
    out
}

/// Truncated exponential series; adequate for `‖A‖ ≤ 1e−3`.
pub fn expm_series(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..12 {
        term = &term * a / k as f64;
        sum += &term;
    }
    sum
}

pub fn tuple_max_abs_diff(a: &StructureTuple, b: &StructureTuple) -> f64 {
    a.matrices()
        .iter()
        .zip(b.matrices())
        .map(|(x, y)| (x - y).amax())
        .fold(0.0, f64::max)
}

pub fn rel_diff(a: &StructureTuple, b: &StructureTuple) -> f64 {
    a.sub(b).unwrap().norm() / (1.0 + a.norm().max(b.norm()))
}

pub fn diag(xs: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(xs))
}

pub fn j() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
}

/// `J ⊕ 0` inside `so(4)`.
pub fn j_plus_zero() -> StructureTuple {
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 1)] = 1.0;
    m[(1, 0)] = -1.0;
    StructureTuple::new(4, vec![m]).unwrap()
}

pub fn heisenberg() -> StructureTuple {
    StructureTuple::new(2, vec![j()]).unwrap()
}
