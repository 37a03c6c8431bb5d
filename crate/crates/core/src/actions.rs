//! The `GL_q × GL_p` action on `so(q)^p`, its derivative, and isometry
//! fingerprints.
//!
//! `g ∈ GL_q` acts coordinatewise by `C^k ↦ g C^k gᵗ`; `h ∈ GL_p` mixes
//! coordinates by `D^k = Σ_l h_{lk} C^l`. The two actions commute.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::algebra::{algebra_type, StructureTuple};
use crate::error::{Error, Result};
use crate::moment::{m1, m2};

pub const SINGULARITY_TOL: f64 = 1e-12;
pub const FINGERPRINT_TOL: f64 = 1e-10;

fn check_square(name: &str, m: &DMatrix<f64>, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Structural(format!(
            "{name} is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn check_invertible(name: &str, m: &DMatrix<f64>) -> Result<()> {
    let det = m.determinant();
    if !(det.abs() > SINGULARITY_TOL) {
        return Err(Error::InvalidElement(format!(
            "{name} is singular (|det| = {:e})",
            det.abs()
        )));
    }
    Ok(())
}

/// An element `(g, h)` of `GL_q × GL_p`; `None` stands for the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    g: Option<DMatrix<f64>>,
    h: Option<DMatrix<f64>>,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self { g: None, h: None }
    }

    pub fn new(g: Option<DMatrix<f64>>, h: Option<DMatrix<f64>>) -> Result<Self> {
        if let Some(g) = &g {
            if g.nrows() != g.ncols() {
                return Err(Error::Structural("g must be square".into()));
            }
            check_invertible("g", g)?;
        }
        if let Some(h) = &h {
            if h.nrows() != h.ncols() {
                return Err(Error::Structural("h must be square".into()));
            }
            check_invertible("h", h)?;
        }
        Ok(Self { g, h })
    }

    pub fn g(&self) -> Option<&DMatrix<f64>> {
        self.g.as_ref()
    }

    pub fn h(&self) -> Option<&DMatrix<f64>> {
        self.h.as_ref()
    }

    pub fn act(&self, c: &StructureTuple) -> Result<StructureTuple> {
        let mut out = c.clone();
        if let Some(g) = &self.g {
            out = act_glq(g, &out)?;
        }
        if let Some(h) = &self.h {
            out = act_glp(h, &out)?;
        }
        Ok(out)
    }
}

/// `g · C = (g C^1 gᵗ, ..., g C^p gᵗ)`.
pub fn act_glq(g: &DMatrix<f64>, c: &StructureTuple) -> Result<StructureTuple> {
    check_square("g", g, c.q())?;
    check_invertible("g", g)?;
    let gt = g.transpose();
    Ok(c.map(|m| g * m * &gt))
}

/// `h · C = D` with `D^k = Σ_l h_{lk} C^l`.
pub fn act_glp(h: &DMatrix<f64>, c: &StructureTuple) -> Result<StructureTuple> {
    check_square("h", h, c.p())?;
    check_invertible("h", h)?;
    Ok(mix_coordinates(h, c))
}

fn mix_coordinates(h: &DMatrix<f64>, c: &StructureTuple) -> StructureTuple {
    let q = c.q();
    let p = c.p();
    let matrices = (0..p)
        .map(|k| {
            let mut d = DMatrix::zeros(q, q);
            for l in 0..p {
                let w = h[(l, k)];
                if w != 0.0 {
                    d += c.matrix(l) * w;
                }
            }
            d
        })
        .collect();
    StructureTuple::new(q, matrices).expect("shape preserved")
}

/// An element `(X, Y)` of `gl_q × gl_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentElement {
    pub x: DMatrix<f64>,
    pub y: DMatrix<f64>,
}

impl TangentElement {
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>) -> Result<Self> {
        if x.nrows() != x.ncols() || y.nrows() != y.ncols() {
            return Err(Error::Structural("X and Y must be square".into()));
        }
        Ok(Self { x, y })
    }

    /// `(X, 0)` for a tuple with `p` coordinates.
    pub fn glq(x: DMatrix<f64>, p: usize) -> Self {
        Self {
            x,
            y: DMatrix::zeros(p, p),
        }
    }

    /// `(0, Y)` for a tuple over `so(q)`.
    pub fn glp(q: usize, y: DMatrix<f64>) -> Self {
        Self {
            x: DMatrix::zeros(q, q),
            y,
        }
    }
}

/// Infinitesimal action `(X, Y) · C = X · C + Y · C`, where
/// `X · C = (X C^k + C^k Xᵗ)_k` and `(Y · C)^k = Σ_l Y_{lk} C^l`.
pub fn act_lie(t: &TangentElement, c: &StructureTuple) -> Result<StructureTuple> {
    check_square("X", &t.x, c.q())?;
    check_square("Y", &t.y, c.p())?;
    let xc = act_lie_x(&t.x, c);
    let yc = mix_coordinates(&t.y, c);
    xc.add(&yc)
}

/// `X · C` alone; `X` must be `q × q`.
pub(crate) fn act_lie_x(x: &DMatrix<f64>, c: &StructureTuple) -> StructureTuple {
    let xt = x.transpose();
    c.map(|m| x * m + m * &xt)
}

/// Isometry invariants of `N_C`: type, sorted spectra of `m1` and `m2`, and
/// the tuple norm.
///
/// Equal fingerprints are necessary for `O(q) × O(p)` equivalence, so
/// unequal fingerprints certify non-isometry. Equality proves nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    pub algebra_type: (usize, usize),
    pub m1_spectrum: Vec<f64>,
    pub m2_spectrum: Vec<f64>,
    pub norm: f64,
}

impl Fingerprint {
    /// Largest absolute difference between the numeric parts, or `INFINITY`
    /// when the types or sizes differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.algebra_type != other.algebra_type
            || self.m1_spectrum.len() != other.m1_spectrum.len()
            || self.m2_spectrum.len() != other.m2_spectrum.len()
        {
            return f64::INFINITY;
        }
        let spectra = self
            .m1_spectrum
            .iter()
            .zip(&other.m1_spectrum)
            .chain(self.m2_spectrum.iter().zip(&other.m2_spectrum))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        spectra.max((self.norm - other.norm).abs())
    }

    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

pub(crate) fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn fingerprint(c: &StructureTuple) -> Fingerprint {
    Fingerprint {
        algebra_type: algebra_type(c),
        m1_spectrum: sorted_eigenvalues(&m1(c)),
        m2_spectrum: sorted_eigenvalues(&m2(c)),
        norm: c.norm(),
    }
}
