//! Example families of structure tuples, concatenation, and one-parameter
//! tuning to the Ricci Yang-Mills soliton condition.
//!
//! Families and their parameter keys (part of the CLI contract):
//!
//! | family       | keys                                   | tuple                                                         |
//! |--------------|----------------------------------------|---------------------------------------------------------------|
//! | `heisenberg` | –                                      | `(J)`                                                         |
//! | `a1`         | `k` (≥ 1), `a1` (default 1)            | `a1 · (J ⊕ … ⊕ J)`, `k` blocks                                 |
//! | `b_basis`    | `b` (1–6 coefficients, default 1,1,1)  | `(b_1 B_1, …, b_j B_j)`                                       |
//! | `will`       | `a` or `a2` (= a²)                     | Will's 6×6 triple in the `diag(a,a,1,1,1,1)` presentation     |
//! | `example2`   | `a1`, `k`, `pairs`, `d`                | `a1 A_1 +c (b_1 B_1, c_1 B_2) +c … +c (d_1 B_1, …, d_j B_j)`  |
//! | `example3`   | `a1`, `ell` or `ell2`, `b`             | `a1 (J) +c ell (J ⊕ 0, 0 ⊕ J) +c (b_1 B_1, …, b_j B_j)`       |
//!
//! `pairs` is written `b:c,b:c,...`; lists are comma separated. In
//! `example3` the middle pair lives in `so(3)` (J on coordinates {1,2}, then
//! on {2,3}), so `q = 2 + 3 + 4 = 9`. The key is `ell` rather than `lambda`
//! to keep it apart from the soliton constant.
//!
//! When a later summand has fewer coordinates than the running tuple (e.g.
//! `d = 1` after a pair block), the summand is padded with trailing zero
//! matrices; [`concat`] itself keeps the strict `p1 ≤ p2` contract.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::algebra::StructureTuple;
use crate::error::{Error, Result};
use crate::soliton::{certify_rym, rym_residual};

/// Named basis matrices `J` (2×2) and `B1`…`B6` (4×4).
pub fn basis_matrix(name: &str) -> Result<DMatrix<f64>> {
    // (row, col) positions of the +1 entries; the -1 entries are the transposes.
    let (n, ones, minus): (usize, &[(usize, usize)], &[(usize, usize)]) = match name {
        "J" | "j" => (2, &[(0, 1)], &[]),
        "B1" | "b1" => (4, &[(0, 1), (2, 3)], &[]),
        "B2" | "b2" => (4, &[(0, 3), (1, 2)], &[]),
        "B3" | "b3" => (4, &[(0, 2), (1, 3)], &[]),
        "B4" | "b4" => (4, &[(0, 1)], &[(2, 3)]),
        "B5" | "b5" => (4, &[(0, 3)], &[(1, 2)]),
        "B6" | "b6" => (4, &[(0, 2)], &[(1, 3)]),
        other => return Err(Error::Lookup(format!("basis matrix '{other}'"))),
    };
    let mut m = DMatrix::zeros(n, n);
    for &(i, j) in ones {
        m[(i, j)] = 1.0;
        m[(j, i)] = -1.0;
    }
    for &(i, j) in minus {
        m[(i, j)] = -1.0;
        m[(j, i)] = 1.0;
    }
    Ok(m)
}

fn b_matrix(i: usize) -> DMatrix<f64> {
    basis_matrix(&format!("B{i}")).expect("B1..B6")
}

fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (n1, n2) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(n1 + n2, n1 + n2);
    out.view_mut((0, 0), (n1, n1)).copy_from(a);
    out.view_mut((n1, n1), (n2, n2)).copy_from(b);
    out
}

fn concat_unchecked(a: &StructureTuple, b: &StructureTuple) -> Result<StructureTuple> {
    let p = a.p().max(b.p());
    let za = DMatrix::zeros(a.q(), a.q());
    let zb = DMatrix::zeros(b.q(), b.q());
    let matrices = (0..p)
        .map(|k| {
            let left = a.matrices().get(k).unwrap_or(&za);
            let right = b.matrices().get(k).unwrap_or(&zb);
            block_diag(left, right)
        })
        .collect();
    StructureTuple::new(a.q() + b.q(), matrices)
}

/// `A +c B`: coordinate `k` is `diag(A_k, B_k)`, with `A` padded by zero
/// matrices up to `B`'s length. Requires `p(A) ≤ p(B)`.
pub fn concat(a: &StructureTuple, b: &StructureTuple) -> Result<StructureTuple> {
    if a.p() > b.p() {
        return Err(Error::Structural(format!(
            "concatenation needs p1 ≤ p2, got p1 = {} and p2 = {}",
            a.p(),
            b.p()
        )));
    }
    concat_unchecked(a, b)
}

/// Concatenation padding whichever side is shorter with trailing zeros.
pub fn concat_padded(a: &StructureTuple, b: &StructureTuple) -> Result<StructureTuple> {
    concat_unchecked(a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Heisenberg,
    A1,
    BBasis,
    Will,
    Example2,
    Example3,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Heisenberg,
        Family::A1,
        Family::BBasis,
        Family::Will,
        Family::Example2,
        Family::Example3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Heisenberg => "heisenberg",
            Family::A1 => "a1",
            Family::BBasis => "b_basis",
            Family::Will => "will",
            Family::Example2 => "example2",
            Family::Example3 => "example3",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Family::Heisenberg => &[],
            Family::A1 => &["k", "a1"],
            Family::BBasis => &["b"],
            Family::Will => &["a", "a2"],
            Family::Example2 => &["a1", "k", "pairs", "d"],
            Family::Example3 => &["a1", "ell", "ell2", "b"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Lookup(format!("family '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Scalar(f64),
    List(Vec<f64>),
    Pairs(Vec<(f64, f64)>),
}

impl ParamValue {
    fn parse_number(s: &str) -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parameter(format!("'{s}' is not a number")))
    }
}

impl FromStr for ParamValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(':') {
            let pairs = s
                .split(',')
                .map(|item| {
                    let (b, c) = item
                        .split_once(':')
                        .ok_or_else(|| Error::Parameter(format!("'{item}' is not a b:c pair")))?;
                    Ok((Self::parse_number(b)?, Self::parse_number(c)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ParamValue::Pairs(pairs))
        } else if s.contains(',') {
            Ok(ParamValue::List(
                s.split(',').map(Self::parse_number).collect::<Result<_>>()?,
            ))
        } else {
            Ok(ParamValue::Scalar(Self::parse_number(s)?))
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Scalar(x) => write!(f, "{x}"),
            ParamValue::List(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join(","))
            }
            ParamValue::Pairs(ps) => {
                let parts: Vec<String> = ps.iter().map(|(b, c)| format!("{b}:{c}")).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// A family name with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub params: BTreeMap<String, ParamValue>,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: ParamValue) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }

    pub fn scalar(self, key: &str, x: f64) -> Self {
        self.with(key, ParamValue::Scalar(x))
    }

    pub fn list(self, key: &str, xs: &[f64]) -> Self {
        self.with(key, ParamValue::List(xs.to_vec()))
    }

    pub fn pairs(self, key: &str, ps: &[(f64, f64)]) -> Self {
        self.with(key, ParamValue::Pairs(ps.to_vec()))
    }

    /// Parses `key=value` assignments.
    pub fn parse(name: &str, assignments: &[String]) -> Result<Self> {
        let mut spec = Self::new(name.parse()?);
        for a in assignments {
            let (k, v) = a
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("'{a}' is not key=value")))?;
            spec.params.insert(k.trim().to_owned(), v.parse()?);
        }
        Ok(spec)
    }

    fn check_keys(&self) -> Result<()> {
        let allowed = self.family.keys();
        for k in self.params.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::Parameter(format!(
                    "family {} has no parameter '{k}' (allowed: {})",
                    self.family,
                    if allowed.is_empty() { "none".to_owned() } else { allowed.join(", ") }
                )));
            }
        }
        Ok(())
    }

    fn get_scalar(&self, key: &str) -> Result<Option<f64>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(ParamValue::Scalar(x)) => Ok(Some(*x)),
            Some(other) => Err(Error::Parameter(format!("'{key}' must be a scalar, got {other}"))),
        }
    }

    fn get_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(ParamValue::Scalar(x)) => Ok(Some(vec![*x])),
            Some(ParamValue::List(xs)) => Ok(Some(xs.clone())),
            Some(other) => Err(Error::Parameter(format!("'{key}' must be a list, got {other}"))),
        }
    }

    fn get_pairs(&self, key: &str) -> Result<Vec<(f64, f64)>> {
        match self.params.get(key) {
            None => Ok(Vec::new()),
            Some(ParamValue::Pairs(ps)) => Ok(ps.clone()),
            Some(other) => Err(Error::Parameter(format!(
                "'{key}' must be b:c pairs, got {other}"
            ))),
        }
    }

    fn positive(&self, key: &str, default: Option<f64>) -> Result<f64> {
        let v = match (self.get_scalar(key)?, default) {
            (Some(v), _) => v,
            (None, Some(d)) => d,
            (None, None) => {
                return Err(Error::Parameter(format!(
                    "family {} needs parameter '{key}'",
                    self.family
                )))
            }
        };
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Parameter(format!("'{key}' must be positive, got {v}")));
        }
        Ok(v)
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        match self.get_scalar(key)? {
            None => Ok(default),
            Some(x) if x >= 1.0 && x.fract() == 0.0 && x <= 32.0 => Ok(x as usize),
            Some(x) => Err(Error::Parameter(format!(
                "'{key}' must be a positive integer, got {x}"
            ))),
        }
    }

    /// Positive scalar given either directly (`key`) or squared (`key2`).
    fn root_or_square(&self, key: &str, squared: &str) -> Result<f64> {
        match (self.params.contains_key(key), self.params.contains_key(squared)) {
            (true, true) => Err(Error::Parameter(format!(
                "give only one of '{key}' and '{squared}'"
            ))),
            (_, true) => Ok(self.positive(squared, None)?.sqrt()),
            _ => self.positive(key, None),
        }
    }

    fn coefficient_list(&self, key: &str, default: Option<&[f64]>) -> Result<Vec<f64>> {
        let xs = match (self.get_list(key)?, default) {
            (Some(xs), _) => xs,
            (None, Some(d)) => d.to_vec(),
            (None, None) => {
                return Err(Error::Parameter(format!(
                    "family {} needs parameter '{key}'",
                    self.family
                )))
            }
        };
        if xs.is_empty() || xs.len() > 6 {
            return Err(Error::Parameter(format!(
                "'{key}' needs between 1 and 6 coefficients, got {}",
                xs.len()
            )));
        }
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter(format!("'{key}' has non-finite entries")));
        }
        Ok(xs)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if !self.params.is_empty() {
            let parts: Vec<String> =
                self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", parts.join("; "))?;
        }
        Ok(())
    }
}

fn a1_block(k: usize) -> DMatrix<f64> {
    let j = basis_matrix("J").expect("J");
    let mut m = DMatrix::zeros(2 * k, 2 * k);
    for b in 0..k {
        m.view_mut((2 * b, 2 * b), (2, 2)).copy_from(&j);
    }
    m
}

fn b_tuple(coeffs: &[f64]) -> StructureTuple {
    let ms = coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| b_matrix(i + 1) * c)
        .collect();
    StructureTuple::new(4, ms).expect("4x4")
}

/// Will's triple at parameter `a`, already conjugated by `diag(a,a,1,1,1,1)`.
pub fn will(a: f64) -> StructureTuple {
    let a2 = a * a;
    let mut c1 = DMatrix::zeros(6, 6);
    let mut c2 = DMatrix::zeros(6, 6);
    let mut c3 = DMatrix::zeros(6, 6);
    let put = |m: &mut DMatrix<f64>, i: usize, j: usize, v: f64| {
        m[(i, j)] = v;
        m[(j, i)] = -v;
    };
    put(&mut c1, 0, 1, a2);
    put(&mut c1, 2, 5, 1.0);
    put(&mut c1, 3, 4, -1.0);
    put(&mut c2, 0, 5, a);
    put(&mut c2, 1, 4, -a);
    put(&mut c3, 0, 3, a);
    put(&mut c3, 1, 2, -a);
    StructureTuple::new(6, vec![c1, c2, c3]).expect("6x6")
}

/// The conjugating element `diag(a, a, 1, 1, 1, 1)` relating Will's original
/// matrices to [`will`].
pub fn will_conjugator(a: f64) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![a, a, 1.0, 1.0, 1.0, 1.0]))
}

pub fn build(spec: &FamilySpec) -> Result<StructureTuple> {
    spec.check_keys()?;
    let tuple = match spec.family {
        Family::Heisenberg => StructureTuple::new(2, vec![basis_matrix("J")?])?,
        Family::A1 => {
            let k = spec.count("k", 1)?;
            let a1 = spec.positive("a1", Some(1.0))?;
            StructureTuple::new(2 * k, vec![a1_block(k) * a1])?
        }
        Family::BBasis => b_tuple(&spec.coefficient_list("b", Some(&[1.0, 1.0, 1.0]))?),
        Family::Will => will(spec.root_or_square("a", "a2")?),
        Family::Example2 => {
            let a1 = spec.positive("a1", None)?;
            let k = spec.count("k", 1)?;
            let pairs = spec.get_pairs("pairs")?;
            let d = spec.coefficient_list("d", None)?;
            let mut c = StructureTuple::new(2 * k, vec![a1_block(k) * a1])?;
            for &(b, cc) in &pairs {
                if !(b.is_finite() && cc.is_finite()) {
                    return Err(Error::Parameter("pairs must be finite".into()));
                }
                let pair = StructureTuple::new(4, vec![b_matrix(1) * b, b_matrix(2) * cc])?;
                c = concat_padded(&c, &pair)?;
            }
            concat_padded(&c, &b_tuple(&d))?
        }
        Family::Example3 => {
            let a1 = spec.positive("a1", None)?;
            let ell = spec.root_or_square("ell", "ell2")?;
            let b = spec.coefficient_list("b", None)?;
            let j = StructureTuple::new(2, vec![basis_matrix("J")? * a1])?;
            let mut first = DMatrix::zeros(3, 3);
            first[(0, 1)] = ell;
            first[(1, 0)] = -ell;
            let mut second = DMatrix::zeros(3, 3);
            second[(1, 2)] = ell;
            second[(2, 1)] = -ell;
            let middle = StructureTuple::new(3, vec![first, second])?;
            let c = concat(&j, &middle)?;
            concat_padded(&c, &b_tuple(&b))?
        }
    };
    Ok(tuple.with_label(spec.to_string()))
}

/// Result of [`tune_parameter`].
#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub value: f64,
    pub residual: f64,
    pub evaluations: usize,
}

pub const TUNE_SCAN_SAMPLES: usize = 200;

/// Finds the value of the scalar parameter `free` in `[lo, hi]` minimizing
/// the `GL_q`-distinguished residual: a uniform scan followed by
/// golden-section refinement around the best sample.
pub fn tune_parameter(
    spec: &FamilySpec,
    free: &str,
    bounds: (f64, f64),
    tol: f64,
) -> Result<TuneResult> {
    let (lo, hi) = bounds;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::Parameter(format!("invalid bounds [{lo}, {hi}]")));
    }
    if !spec.family.keys().contains(&free) {
        return Err(Error::Parameter(format!(
            "family {} has no parameter '{free}'",
            spec.family
        )));
    }
    // Fail early on problems with the fixed parameters.
    build(&spec.clone().scalar(free, 0.5 * (lo + hi)))?;

    let mut evaluations = 0;
    let mut eval = |x: f64| -> f64 {
        evaluations += 1;
        build(&spec.clone().scalar(free, x))
            .and_then(|c| rym_residual(&c))
            .unwrap_or(f64::INFINITY)
    };

    let n = TUNE_SCAN_SAMPLES;
    let dx = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| lo + dx * i as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| eval(x)).collect();
    let best = fs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty scan");

    let mut a = xs[best.saturating_sub(1)];
    let mut b = xs[(best + 1).min(n - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    let mut best_x = xs[best];
    let mut best_f = fs[best];
    for _ in 0..200 {
        if (b - a) <= 4.0 * f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2);
        }
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f < best_f {
                best_f = f;
                best_x = x;
            }
        }
    }

    let residual = build(&spec.clone().scalar(free, best_x))
        .and_then(|c| certify_rym(&c, tol))
        .map(|cert| cert.residual)
        .unwrap_or(f64::INFINITY);
    if residual < tol {
        Ok(TuneResult {
            value: best_x,
            residual,
            evaluations,
        })
    } else {
        Err(Error::NotFound {
            lo,
            hi,
            tol,
            best_value: best_x,
            best_residual: residual,
        })
    }
}
