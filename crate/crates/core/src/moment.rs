//! Moment maps of the `GL_q × GL_p` representation on `so(q)^p`.
//!
//! ```text
//! m1(C)      = -2 Σ_α (C^α)²          (GL_q,  symmetric q × q)
//! m2(C)_{ij} = ⟨C^i, C^j⟩             (GL_p,  symmetric p × p)
//! m(C)       = m1(C) + m2(C)          (GL_q × GL_p)
//! m_slq(C)   = m1(C) - tr(m1)/q · Id  (SL_q)
//! ```
//!
//! with `⟨A, B⟩ = tr(A Bᵗ)` on matrices and the orthogonal sum of these on
//! tuples. The conventions are pinned by the defining identity
//! `⟨m1(C), X⟩ = ⟨X · C, C⟩` for symmetric `X` (and likewise for `m2`).

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::actions::{act_lie, TangentElement};
use crate::algebra::StructureTuple;
use crate::error::{Error, Result};

/// The curvature square of the horizontal distribution, with one index
/// raised, is `CURVATURE_SQUARE_FACTOR · m1(C)`.
pub const CURVATURE_SQUARE_FACTOR: f64 = 0.5;

/// Trace pairing `tr(A Bᵗ)`.
pub fn mat_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

/// `⟨C, D⟩ = Σ_α tr(C^α (D^α)ᵗ)`.
pub fn inner(c: &StructureTuple, d: &StructureTuple) -> Result<f64> {
    if !c.same_shape(d) {
        return Err(Error::Structural(format!(
            "inner product of tuples with shapes (p, q) = ({}, {}) and ({}, {})",
            c.p(),
            c.q(),
            d.p(),
            d.q()
        )));
    }
    Ok(c
        .matrices()
        .iter()
        .zip(d.matrices())
        .map(|(a, b)| mat_inner(a, b))
        .sum())
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

pub fn m1(c: &StructureTuple) -> DMatrix<f64> {
    let q = c.q();
    let mut acc = DMatrix::<f64>::zeros(q, q);
    for m in c.matrices() {
        acc += m * m;
    }
    acc *= -2.0;
    debug_assert!(
        !c.is_skew(1e-12) || (&acc - acc.transpose()).amax() <= 1e-12 * (1.0 + acc.amax()),
        "m1 lost symmetry before symmetrization"
    );
    symmetrize(acc)
}

/// Gram matrix of the coordinates.
pub fn m2(c: &StructureTuple) -> DMatrix<f64> {
    let p = c.p();
    let mut g = DMatrix::<f64>::zeros(p, p);
    for i in 0..p {
        for j in i..p {
            let v = mat_inner(c.matrix(i), c.matrix(j));
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

fn traceless(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let shift = m.trace() / n as f64;
    m - DMatrix::<f64>::identity(n, n) * shift
}

pub fn m_slq(c: &StructureTuple) -> DMatrix<f64> {
    traceless(&m1(c))
}

/// `m1`, `m2` and the traceless part of `m1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentValue {
    pub m1: DMatrix<f64>,
    pub m2: DMatrix<f64>,
    pub m1_traceless: DMatrix<f64>,
}

impl MomentValue {
    /// `‖m1‖² + ‖m2‖²`, the squared norm of the full moment map.
    pub fn norm_squared(&self) -> f64 {
        self.m1.norm_squared() + self.m2.norm_squared()
    }

    /// Curvature square `Ω̃²` of the associated bundle, as a `(1,1)` tensor.
    pub fn curvature_square(&self) -> DMatrix<f64> {
        &self.m1 * CURVATURE_SQUARE_FACTOR
    }
}

pub fn m_full(c: &StructureTuple) -> MomentValue {
    let m1 = m1(c);
    let m1_traceless = traceless(&m1);
    MomentValue {
        m1,
        m2: m2(c),
        m1_traceless,
    }
}

/// Which subgroup of `GL_q × GL_p` a moment map or flow refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    Glq,
    Slq,
    Full,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::Glq => "glq",
            Group::Slq => "slq",
            Group::Full => "full",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "glq" => Ok(Group::Glq),
            "slq" => Ok(Group::Slq),
            "full" => Ok(Group::Full),
            other => Err(Error::Lookup(format!("group '{other}' (expected glq, slq or full)"))),
        }
    }
}

/// `m_G(C)` as an element of `gl_q × gl_p`.
pub fn m_group(c: &StructureTuple, group: Group) -> TangentElement {
    match group {
        Group::Glq => TangentElement::glq(m1(c), c.p()),
        Group::Slq => TangentElement::glq(m_slq(c), c.p()),
        Group::Full => TangentElement {
            x: m1(c),
            y: m2(c),
        },
    }
}

/// `‖m_G(C)‖`, with the orthogonal sum norm on `gl_q × gl_p`.
pub fn moment_norm(t: &TangentElement) -> f64 {
    (t.x.norm_squared() + t.y.norm_squared()).sqrt()
}

/// `m_G(C) · C`, which is also the gradient of `‖m_G‖²` up to a constant.
pub fn moment_action(c: &StructureTuple, group: Group) -> StructureTuple {
    act_lie(&m_group(c, group), c).expect("moment map has matching shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
    }

    fn j_plus_zero() -> StructureTuple {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = 1.0;
        m[(1, 0)] = -1.0;
        StructureTuple::new(4, vec![m]).unwrap()
    }

    #[test]
    fn heisenberg_moments() {
        let c = StructureTuple::new(2, vec![j()]).unwrap();
        assert_eq!(inner(&c, &c).unwrap(), 2.0);
        assert_eq!(m1(&c), DMatrix::identity(2, 2) * 2.0);
        assert_eq!(m2(&c), DMatrix::from_element(1, 1, 2.0));
        assert_eq!(m_slq(&c), DMatrix::zeros(2, 2));
    }

    #[test]
    fn traceless_part_of_padded_heisenberg() {
        let c = j_plus_zero();
        assert_eq!(
            m1(&c),
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0, 0.0, 0.0]))
        );
        assert_eq!(
            m_slq(&c),
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, -1.0, -1.0]))
        );
    }

    #[test]
    fn zero_tuple() {
        let c = StructureTuple::zeros(3, 2).unwrap();
        assert_eq!(m1(&c), DMatrix::zeros(3, 3));
        assert_eq!(m2(&c), DMatrix::zeros(2, 2));
    }

    #[test]
    fn inner_shape_mismatch() {
        let a = StructureTuple::zeros(3, 2).unwrap();
        let b = StructureTuple::zeros(3, 1).unwrap();
        assert!(matches!(inner(&a, &b), Err(Error::Structural(_))));
    }

    #[test]
    fn homogeneity() {
        let c = j_plus_zero();
        assert_eq!(m1(&c.scaled(3.0)), m1(&c) * 9.0);
        assert_eq!(m2(&c.scaled(3.0)), m2(&c) * 9.0);
    }

    #[test]
    fn curvature_square_is_half_m1() {
        let mv = m_full(&j_plus_zero());
        assert_eq!(mv.curvature_square(), &mv.m1 * 0.5);
        assert!(mv.m1_traceless.trace().abs() < 1e-15);
    }

    #[test]
    fn moment_action_examples() {
        let c = StructureTuple::new(2, vec![j()]).unwrap();
        assert_eq!(moment_action(&c, Group::Glq), c.scaled(4.0));
        assert_eq!(moment_action(&c, Group::Full), c.scaled(6.0));
        assert!(moment_action(&c, Group::Slq).is_zero());
        let c = j_plus_zero();
        assert_eq!(moment_action(&c, Group::Slq), c.scaled(2.0));
    }

    #[test]
    fn group_names() {
        for g in [Group::Glq, Group::Slq, Group::Full] {
            assert_eq!(g.as_str().parse::<Group>().unwrap(), g);
        }
        assert!("sl2".parse::<Group>().is_err());
    }
}
