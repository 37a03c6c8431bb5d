//! Structured command results and their text / JSON renderings.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::actions::Fingerprint;
use crate::algebra::{StructureTuple, ValidationReport};
use crate::flow::{FlowTrace, LimitReport};
use crate::soliton::Certificate;

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputSummary {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub p: usize,
    pub q: usize,
    pub norm: f64,
}

impl InputSummary {
    pub fn new(source: impl Into<String>, t: &StructureTuple) -> Self {
        Self {
            source: source.into(),
            label: t.label().map(str::to_owned),
            p: t.p(),
            q: t.q(),
            norm: t.norm(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub is_skew: Vec<bool>,
    pub effective_p: usize,
    pub is_regular: bool,
    pub algebra_type: (usize, usize),
    pub messages: Vec<String>,
}

impl ValidationSummary {
    pub fn new(r: &ValidationReport, q: usize) -> Self {
        Self {
            is_skew: r.is_skew.clone(),
            effective_p: r.effective_p,
            is_regular: r.is_regular,
            algebra_type: (r.effective_p, q),
            messages: r.messages.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FingerprintSummary {
    pub algebra_type: (usize, usize),
    pub m1_spectrum: Vec<f64>,
    pub m2_spectrum: Vec<f64>,
    pub norm: f64,
}

impl From<&Fingerprint> for FingerprintSummary {
    fn from(f: &Fingerprint) -> Self {
        Self {
            algebra_type: f.algebra_type,
            m1_spectrum: f.m1_spectrum.clone(),
            m2_spectrum: f.m2_spectrum.clone(),
            norm: f.norm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateSummary {
    pub mode: String,
    pub verdict: bool,
    pub residual: f64,
    pub tol: f64,
    pub r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation: Option<Vec<Vec<f64>>>,
    pub distinguished_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation_residual: Option<f64>,
}

impl From<&Certificate> for CertificateSummary {
    fn from(c: &Certificate) -> Self {
        Self {
            mode: c.mode.as_str().to_owned(),
            verdict: c.verdict,
            residual: c.residual,
            tol: c.tol,
            r: c.r,
            s: c.s,
            lambda: c.lambda,
            derivation: c.derivation.as_ref().map(rows),
            distinguished_residual: c.distinguished_residual,
            derivation_residual: c.derivation_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowSummary {
    pub source: String,
    pub group: String,
    pub projected: bool,
    pub outcome: String,
    pub steps: usize,
    pub rejections: usize,
    pub conv_tol: f64,
    pub final_residual: f64,
    pub final_norm_mg: f64,
    pub limit: LimitReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl FlowSummary {
    pub fn new(source: impl Into<String>, trace: &FlowTrace, limit: LimitReport) -> Self {
        let last = trace.last();
        Self {
            source: source.into(),
            group: trace.config.group.as_str().to_owned(),
            projected: trace.config.projected,
            outcome: trace.outcome.as_str().to_owned(),
            steps: trace.steps,
            rejections: trace.rejections,
            conv_tol: trace.config.conv_tol,
            final_residual: last.residual,
            final_norm_mg: last.norm_mg,
            limit,
            csv: None,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuneSummary {
    pub family: String,
    pub free: String,
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub residual: f64,
    pub tol: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationSummary {
    pub mode: String,
    pub expected: bool,
    pub actual: bool,
    pub met: bool,
}

/// Result of a command. Everything in it is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<InputSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<FingerprintSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flows: Vec<FlowSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tune: Option<TuneSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expectation: Option<ExpectationSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            ..Self::default()
        }
    }

    /// 0 unless an expectation was stated and not met.
    pub fn exit_code(&self) -> i32 {
        match &self.expectation {
            Some(e) if !e.met => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "== {} ==", self.command);
        for i in &self.inputs {
            let _ = writeln!(
                w,
                "input   {}{}  p={} q={} ‖C‖={:.6e}",
                i.source,
                i.label.as_ref().map(|l| format!(" [{l}]")).unwrap_or_default(),
                i.p,
                i.q,
                i.norm
            );
        }
        if let Some(v) = &self.validation {
            let _ = writeln!(
                w,
                "type    ({}, {})  regular={}  skew={}",
                v.algebra_type.0,
                v.algebra_type.1,
                v.is_regular,
                v.is_skew.iter().all(|&s| s)
            );
            for m in &v.messages {
                let _ = writeln!(w, "warning {m}");
            }
        }
        if let Some(f) = &self.fingerprint {
            let _ = writeln!(w, "eig m1  {}", fmt_list(&f.m1_spectrum));
            let _ = writeln!(w, "eig m2  {}", fmt_list(&f.m2_spectrum));
        }
        for c in &self.certificates {
            let _ = write!(
                w,
                "{:<14}{:<6} residual={:.3e} tol={:.1e} r={:.10}",
                c.mode,
                if c.verdict { "true" } else { "false" },
                c.residual,
                c.tol,
                c.r
            );
            if let Some(s) = c.s {
                let _ = write!(w, " s={s:.10}");
            }
            if let Some(l) = c.lambda {
                let _ = write!(w, " lambda={l:.10}");
            }
            let _ = writeln!(w);
            if let Some(d) = &c.derivation {
                let diag: Vec<f64> = (0..d.len()).map(|i| d[i][i]).collect();
                let _ = writeln!(w, "              D diagonal {}", fmt_list(&diag));
            }
        }
        for f in &self.flows {
            let _ = writeln!(
                w,
                "flow    {} group={} {} outcome={} steps={} rejections={} residual={:.3e}",
                f.source,
                f.group,
                if f.projected { "projected" } else { "plain" },
                f.outcome,
                f.steps,
                f.rejections,
                f.final_residual
            );
            let l = &f.limit;
            let _ = writeln!(
                w,
                "limit   {} (heuristic)  minimality={:.3e} distinguished={:.3e} scalar_m1={:.3e} r={:.6e} |C|/|C0|={:.3e} effective_p {}->{}",
                l.class.as_str(),
                l.minimality_residual,
                l.distinguished_residual,
                l.scalar_m1_residual,
                l.r,
                l.norm_ratio,
                l.effective_p_start,
                l.effective_p_end
            );
            if let Some(p) = &f.csv {
                let _ = writeln!(w, "csv     {p}");
            }
            if let Some(p) = &f.out {
                let _ = writeln!(w, "out     {p}");
            }
        }
        if let Some(t) = &self.tune {
            let _ = writeln!(
                w,
                "tune    {} {}={:.12} in [{}, {}] residual={:.3e} tol={:.1e} evaluations={}",
                t.family, t.free, t.value, t.lo, t.hi, t.residual, t.tol, t.evaluations
            );
        }
        if let Some(e) = &self.expectation {
            let _ = writeln!(
                w,
                "expect  {} = {} -> {}",
                e.mode,
                e.expected,
                if e.met { "met" } else { "NOT met" }
            );
        }
        for n in &self.notes {
            let _ = writeln!(w, "note    {n}");
        }
        out
    }
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}
