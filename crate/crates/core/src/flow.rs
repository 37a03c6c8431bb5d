//! Negative gradient flow of `‖m_G‖²` on `so(q)^p`.
//!
//! The gradient of `‖m_G‖²` at `C` is (a positive multiple of) `m_G(C) · C`,
//! so integrating `Ċ = −m_G(C) · C` lowers `‖m_G‖²` and moves along the
//! `G`-orbit. Two variants are provided:
//!
//! * **projected** (default): the radial component `⟨v, C⟩ C / ‖C‖²` is removed
//!   from the vector field and the state is rescaled to `‖C₀‖` after each step.
//!   Fixed points are `G`-distinguished points.
//! * **plain**: the raw field. For `GL_q` it always shrinks `C`; for `SL_q` it
//!   converges to a minimal point on a closed orbit and drives `C → 0` when the
//!   orbit closure contains zero.
//!
//! Steps are classical RK4. A trial step is rejected and the step halved when
//! `‖m_G‖²` increases, when the state moves more than [`MAX_RELATIVE_MOVE`]
//! of its norm, or when the residual grows by more than [`MAX_RESIDUAL_GROWTH`]
//! (near a fixed point an overshooting step barely changes `‖m_G‖²` but does
//! show up in the residual); accepted steps grow the step by [`STEP_GROWTH`].
//!
//! Everything this module says about orbit closures is heuristic evidence:
//! a converged limit with preserved rank suggests a closed orbit, a collapse
//! to zero shows that zero lies in the closure.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{validate_default, StructureTuple};
use crate::error::{Error, Result};
use crate::moment::{inner, m1, m_group, moment_action, moment_norm, Group};

pub const MAX_HALVINGS: usize = 40;
pub const MAX_SAMPLES: usize = 1000;
pub const STEP_GROWTH: f64 = 1.2;
pub const MAX_RELATIVE_MOVE: f64 = 0.1;
pub const MAX_RESIDUAL_GROWTH: f64 = 2.0;
/// Per-step slack allowed in the monotonicity invariant of `‖m_G‖²`.
pub const MONOTONICITY_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub group: Group,
    /// Initial step, relative: the actual first step is `step / ‖m_G(C₀)‖`.
    pub step: f64,
    pub max_steps: usize,
    pub conv_tol: f64,
    pub projected: bool,
    /// Plain mode stops with `Degenerated` once `‖C‖ / ‖C₀‖` drops below this.
    pub blowdown_tol: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            group: Group::Slq,
            step: 1e-3,
            max_steps: 200_000,
            conv_tol: 1e-9,
            projected: true,
            blowdown_tol: 1e-6,
        }
    }
}

impl FlowConfig {
    pub fn new(group: Group) -> Self {
        Self {
            group,
            ..Self::default()
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Parameter(format!("step must be positive, got {}", self.step)));
        }
        if !(self.conv_tol > 0.0) {
            return Err(Error::Parameter(format!(
                "conv_tol must be positive, got {}",
                self.conv_tol
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::Parameter("max_steps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    ConvergedMinimal,
    ConvergedDistinguished,
    Degenerated,
    StepLimit,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::ConvergedMinimal => "converged_minimal",
            Outcome::ConvergedDistinguished => "converged_distinguished",
            Outcome::Degenerated => "degenerated",
            Outcome::StepLimit => "step_limit",
        }
    }
}

/// One row of the trace, also the CSV schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    #[serde(rename = "norm_C")]
    pub norm_c: f64,
    #[serde(rename = "norm_mG")]
    pub norm_mg: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub config: FlowConfig,
    /// Decimated states, at most [`MAX_SAMPLES`], uniform stride, starting at step 0.
    pub samples: Vec<(usize, StructureTuple)>,
    /// Scalars for every accepted step, including the initial state.
    pub records: Vec<StepRecord>,
    pub outcome: Outcome,
    pub initial_state: StructureTuple,
    pub final_state: StructureTuple,
    pub steps: usize,
    pub rejections: usize,
    pub time: f64,
}

impl FlowTrace {
    pub fn initial_norm(&self) -> f64 {
        self.initial_state.norm()
    }

    pub fn last(&self) -> &StepRecord {
        self.records.last().expect("trace always holds the initial record")
    }

    /// Writes the per-step scalars as CSV with a header row.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for r in &self.records {
            wtr.serialize(r)
                .map_err(|e| Error::Structural(format!("csv: {e}")))?;
        }
        wtr.flush()
            .map_err(|e| Error::Structural(format!("csv: {e}")))?;
        Ok(())
    }
}

/// `m_G(C) · C`.
pub fn gradient(c: &StructureTuple, group: Group) -> StructureTuple {
    moment_action(c, group)
}

fn project_out_radial(v: &StructureTuple, c: &StructureTuple) -> StructureTuple {
    let n2 = inner(c, c).expect("same shape");
    if n2 == 0.0 {
        return v.clone();
    }
    let coef = inner(v, c).expect("same shape") / n2;
    v.axpy(-coef, c).expect("same shape")
}

/// Quantities evaluated at a single state.
struct Probe {
    objective: f64,
    norm_mg: f64,
    residual: f64,
    radial_residual: f64,
}

fn probe(c: &StructureTuple, cfg: &FlowConfig) -> Probe {
    let mg = m_group(c, cfg.group);
    let norm_mg = moment_norm(&mg);
    let grad = gradient(c, cfg.group);
    let norm_c = c.norm();
    let (direction, denom) = if cfg.projected {
        (project_out_radial(&grad, c), norm_c * (1.0 + norm_mg))
    } else {
        (grad.clone(), norm_c * (norm_c * norm_c + norm_mg))
    };
    let (residual, radial_residual) = if denom > 0.0 {
        let radial = if norm_c > 0.0 {
            inner(&grad, c).expect("same shape").abs() / norm_c
        } else {
            0.0
        };
        (direction.norm() / denom, radial / denom)
    } else {
        (0.0, 0.0)
    };
    Probe {
        objective: norm_mg * norm_mg,
        norm_mg,
        residual,
        radial_residual,
    }
}

fn field(c: &StructureTuple, cfg: &FlowConfig) -> StructureTuple {
    let g = gradient(c, cfg.group);
    let v = if cfg.projected { project_out_radial(&g, c) } else { g };
    v.scaled(-1.0)
}

fn rk4(c: &StructureTuple, h: f64, cfg: &FlowConfig) -> StructureTuple {
    let k1 = field(c, cfg);
    let k2 = field(&c.axpy(0.5 * h, &k1).expect("shape"), cfg);
    let k3 = field(&c.axpy(0.5 * h, &k2).expect("shape"), cfg);
    let k4 = field(&c.axpy(h, &k3).expect("shape"), cfg);
    c.axpy(h / 6.0, &k1)
        .and_then(|s| s.axpy(h / 3.0, &k2))
        .and_then(|s| s.axpy(h / 3.0, &k3))
        .and_then(|s| s.axpy(h / 6.0, &k4))
        .expect("shape")
}

/// Roundoff floor when comparing `‖m_G‖²` between two nearby states.
fn objective_noise(objective: f64, c: &StructureTuple) -> f64 {
    let unit = (c.q() + c.p()) as f64 * f64::EPSILON * c.norm().powi(2);
    1e-12 * objective + 2.0 * objective.sqrt() * unit + unit * unit
}

struct Sampler {
    stride: usize,
    samples: Vec<(usize, StructureTuple)>,
}

impl Sampler {
    fn new() -> Self {
        Self {
            stride: 1,
            samples: Vec::new(),
        }
    }

    fn offer(&mut self, step: usize, c: &StructureTuple) {
        if step % self.stride != 0 {
            return;
        }
        self.samples.push((step, c.clone()));
        if self.samples.len() > MAX_SAMPLES {
            let stride = self.stride * 2;
            self.samples.retain(|(s, _)| s % stride == 0);
            self.stride = stride;
        }
    }
}

/// Integrates the negative gradient flow from `c0`.
pub fn integrate(c0: &StructureTuple, cfg: &FlowConfig) -> Result<FlowTrace> {
    cfg.check()?;
    if !c0.is_finite() {
        return Err(Error::IntegratorFailure {
            step: 0,
            reason: "initial state has non-finite entries".into(),
            last_good: Box::new(c0.clone()),
        });
    }
    let norm0 = c0.norm();
    if norm0 == 0.0 {
        return Err(Error::DegenerateInput("flow from the zero tuple".into()));
    }

    let mut c = c0.clone();
    let mut sampler = Sampler::new();
    let mut records = Vec::new();
    let mut rejections = 0;
    let mut time = 0.0;

    let first = probe(&c, cfg);
    let mut h = if first.norm_mg > 0.0 {
        cfg.step / first.norm_mg
    } else {
        cfg.step
    };
    let mut current = first;
    let mut step = 0;

    let outcome = loop {
        records.push(StepRecord {
            step,
            norm_c: c.norm(),
            norm_mg: current.norm_mg,
            residual: current.residual,
        });
        sampler.offer(step, &c);

        if current.residual < cfg.conv_tol {
            break if current.radial_residual <= cfg.conv_tol || !cfg.projected {
                Outcome::ConvergedMinimal
            } else {
                Outcome::ConvergedDistinguished
            };
        }
        if !cfg.projected && c.norm() / norm0 < cfg.blowdown_tol {
            break Outcome::Degenerated;
        }
        if step >= cfg.max_steps {
            break Outcome::StepLimit;
        }

        let mut accepted = None;
        for halving in 0..=MAX_HALVINGS {
            let mut trial = rk4(&c, h, cfg);
            if !trial.is_finite() {
                return Err(Error::IntegratorFailure {
                    step,
                    reason: format!("non-finite state after a step of size {h:e}"),
                    last_good: Box::new(c),
                });
            }
            if cfg.projected {
                let n = trial.norm();
                trial = trial.scaled(norm0 / n);
            }
            let next = probe(&trial, cfg);
            let moved = trial.sub(&c).expect("shape").norm() / c.norm();
            let decreased =
                next.objective <= current.objective + objective_noise(current.objective, &c);
            let settled = next.residual <= MAX_RESIDUAL_GROWTH * current.residual;
            if decreased && settled && moved <= MAX_RELATIVE_MOVE {
                accepted = Some((trial, next, halving));
                break;
            }
            rejections += 1;
            h *= 0.5;
        }
        let Some((trial, next, halvings)) = accepted else {
            return Err(Error::IntegratorFailure {
                step,
                reason: format!("‖m_G‖² kept increasing after {MAX_HALVINGS} step halvings"),
                last_good: Box::new(c),
            });
        };
        time += h;
        if halvings == 0 {
            h *= STEP_GROWTH;
        }
        c = trial;
        current = next;
        step += 1;
    };

    let mut final_state = c;
    final_state.set_label(c0.label().map(|l| format!("{l} (flow limit)")));
    Ok(FlowTrace {
        config: cfg.clone(),
        samples: sampler.samples,
        records,
        outcome,
        initial_state: c0.clone(),
        final_state,
        steps: step,
        rejections,
        time,
    })
}

/// Runs independent integrations in parallel; results are in input order.
pub fn integrate_batch(inputs: &[StructureTuple], cfg: &FlowConfig) -> Vec<Result<FlowTrace>> {
    inputs.par_iter().map(|c| integrate(c, cfg)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitClass {
    Minimal,
    Distinguished,
    Degenerated,
    Inconclusive,
}

impl LimitClass {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitClass::Minimal => "minimal",
            LimitClass::Distinguished => "distinguished",
            LimitClass::Degenerated => "degenerated",
            LimitClass::Inconclusive => "inconclusive",
        }
    }
}

/// Classification of a flow endpoint. Always heuristic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub class: LimitClass,
    pub heuristic: bool,
    /// `‖m_G(C) · C‖ / (‖C‖ (1 + ‖m_G(C)‖))`.
    pub minimality_residual: f64,
    /// `‖m_G(C) · C − r C‖ / (‖C‖ (1 + |r|))` with least-squares `r`.
    pub distinguished_residual: f64,
    pub r: f64,
    /// `‖m1 − tr(m1)/q · Id‖ / ‖m1‖`, reported separately from minimality.
    pub scalar_m1_residual: f64,
    pub effective_p_start: usize,
    pub effective_p_end: usize,
    pub rank_preserved: bool,
    pub norm_ratio: f64,
}

pub fn detect_limit(trace: &FlowTrace, tol: f64) -> LimitReport {
    let c = &trace.final_state;
    let group = trace.config.group;
    let n = c.norm();
    let mg = moment_norm(&m_group(c, group));
    let grad = gradient(c, group);
    let (minimality_residual, distinguished_residual, r) = if n > 0.0 {
        let r = inner(&grad, c).expect("shape") / (n * n);
        (
            grad.norm() / (n * (1.0 + mg)),
            grad.axpy(-r, c).expect("shape").norm() / (n * (1.0 + r.abs())),
            r,
        )
    } else {
        (0.0, 0.0, 0.0)
    };
    let m1c = m1(c);
    let q = c.q() as f64;
    let scalar_m1_residual = if m1c.norm() > 0.0 {
        (&m1c - nalgebra::DMatrix::<f64>::identity(c.q(), c.q()) * (m1c.trace() / q)).norm()
            / m1c.norm()
    } else {
        0.0
    };
    let effective_p_start = validate_default(&trace.initial_state).effective_p;
    let effective_p_end = validate_default(c).effective_p;

    let class = if trace.outcome == Outcome::Degenerated {
        LimitClass::Degenerated
    } else if minimality_residual <= tol {
        LimitClass::Minimal
    } else if trace.config.projected && group != Group::Slq && distinguished_residual <= tol {
        LimitClass::Distinguished
    } else {
        LimitClass::Inconclusive
    };

    LimitReport {
        class,
        heuristic: true,
        minimality_residual,
        distinguished_residual,
        r,
        scalar_m1_residual,
        effective_p_start,
        effective_p_end,
        rank_preserved: effective_p_start == effective_p_end,
        norm_ratio: n / trace.initial_norm(),
    }
}
