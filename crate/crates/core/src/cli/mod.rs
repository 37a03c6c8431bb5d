//! Command-line front end. Every command returns a [`Report`]; the binary
//! only parses flags, prints, and maps results to exit codes
//! (0 success, 1 unmet `--expect`, 2 input error).

pub mod document;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::actions::fingerprint;
use crate::algebra::{StructureTuple, DEFAULT_RANK_TOL, DEFAULT_SKEW_TOL};
use crate::catalogue::{build, concat, concat_padded, tune_parameter, FamilySpec};
use crate::flow::{detect_limit, integrate_batch, FlowConfig};
use crate::soliton::{certify, Mode};
use crate::Error;

pub use document::{parse_document, parse_validated, serialize, TupleDocument};
pub use report::{
    CertificateSummary, ExpectationSummary, FingerprintSummary, FlowSummary, InputSummary, Report,
    TuneSummary, ValidationSummary,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Tolerances used when reading tuple files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputTolerances {
    pub skew_tol: f64,
    pub rank_tol: f64,
}

impl Default for InputTolerances {
    fn default() -> Self {
        Self {
            skew_tol: DEFAULT_SKEW_TOL,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_tuple(
    path: &Path,
    tols: InputTolerances,
) -> Result<(StructureTuple, crate::algebra::ValidationReport), CliError> {
    let text = read(path)?;
    parse_validated(&text, tols.skew_tol, tols.rank_tol).map_err(|e| match e {
        CliError::Parse { line, column, message } => CliError::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        CliError::Schema(m) => CliError::Schema(format!("{}: {m}", path.display())),
        CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Validation, fingerprint and all four certificates.
pub fn cmd_analyze(path: &Path, tol: f64, tols: InputTolerances) -> Result<Report, CliError> {
    let (tuple, validation) = load_tuple(path, tols)?;
    let mut report = Report::new("analyze");
    report.inputs.push(InputSummary::new(path.display().to_string(), &tuple));
    report.validation = Some(ValidationSummary::new(&validation, tuple.q()));
    report.fingerprint = Some(FingerprintSummary::from(&fingerprint(&tuple)));
    for mode in Mode::ALL {
        match certify(&tuple, mode, tol) {
            Ok(c) => report.certificates.push(CertificateSummary::from(&c)),
            Err(e) => report.notes.push(format!("{mode}: {e}")),
        }
    }
    Ok(report)
}

pub fn cmd_certify(
    path: &Path,
    mode: Mode,
    tol: f64,
    expect: Option<bool>,
    tols: InputTolerances,
) -> Result<Report, CliError> {
    let (tuple, _) = load_tuple(path, tols)?;
    let cert = certify(&tuple, mode, tol)?;
    let mut report = Report::new("certify");
    report.inputs.push(InputSummary::new(path.display().to_string(), &tuple));
    report.certificates.push(CertificateSummary::from(&cert));
    if let Some(expected) = expect {
        report.expectation = Some(ExpectationSummary {
            mode: mode.as_str().to_owned(),
            expected,
            actual: cert.verdict,
            met: expected == cert.verdict,
        });
    }
    Ok(report)
}

/// `trace.csv` → `trace.3.csv` when several inputs share one output name.
fn indexed_path(base: &Path, index: usize, count: usize) -> PathBuf {
    if count == 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}.{index}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{index}"),
    };
    base.with_file_name(name)
}

/// Flows every input (in parallel) and reports each in input order.
pub fn cmd_flow(
    paths: &[PathBuf],
    cfg: &FlowConfig,
    csv: Option<&Path>,
    out: Option<&Path>,
    tols: InputTolerances,
) -> Result<Report, CliError> {
    if paths.is_empty() {
        return Err(CliError::Usage("flow needs at least one input file".into()));
    }
    let tuples = paths
        .iter()
        .map(|p| load_tuple(p, tols).map(|(t, _)| t))
        .collect::<Result<Vec<_>, _>>()?;
    let traces = integrate_batch(&tuples, cfg);

    let mut report = Report::new("flow");
    for (i, (path, result)) in paths.iter().zip(traces).enumerate() {
        let source = path.display().to_string();
        report.inputs.push(InputSummary::new(&source, &tuples[i]));
        let trace = result?;
        let limit = detect_limit(&trace, 10.0 * cfg.conv_tol);
        let mut summary = FlowSummary::new(&source, &trace, limit);
        if let Some(base) = csv {
            let target = indexed_path(base, i, paths.len());
            let file = fs::File::create(&target).map_err(|source| CliError::Io {
                path: target.display().to_string(),
                source,
            })?;
            trace.write_csv(file)?;
            summary.csv = Some(target.display().to_string());
        }
        if let Some(base) = out {
            let target = indexed_path(base, i, paths.len());
            let prov = format!("flow limit of {source} ({} {})", cfg.group, trace.outcome.as_str());
            write(&target, &serialize(&trace.final_state, Some(prov)))?;
            summary.out = Some(target.display().to_string());
        }
        report.flows.push(summary);
    }
    report
        .notes
        .push("orbit-closure conclusions from flows are heuristic evidence, not proofs".into());
    Ok(report)
}

/// Builds a catalogue tuple and returns its document text; written to
/// `out` when given.
pub fn cmd_catalog(name: &str, params: &[String], out: Option<&Path>) -> Result<String, CliError> {
    let spec = FamilySpec::parse(name, params)?;
    let tuple = build(&spec)?;
    let mut argv = vec!["nilrym catalog".to_owned(), name.to_owned()];
    argv.extend(params.iter().map(|p| format!("-p {p}")));
    let text = serialize(&tuple, Some(argv.join(" ")));
    if let Some(path) = out {
        write(path, &text)?;
    }
    Ok(text)
}

pub fn cmd_tune(
    name: &str,
    params: &[String],
    free: &str,
    bounds: (f64, f64),
    tol: f64,
) -> Result<Report, CliError> {
    let spec = FamilySpec::parse(name, params)?;
    let tuned = tune_parameter(&spec, free, bounds, tol)?;
    let tuple = build(&spec.clone().scalar(free, tuned.value))?;
    let cert = certify(&tuple, Mode::Rym, tol)?;
    let mut report = Report::new("tune");
    report.inputs.push(InputSummary::new(spec.to_string(), &tuple));
    report.tune = Some(TuneSummary {
        family: spec.family.as_str().to_owned(),
        free: free.to_owned(),
        lo: bounds.0,
        hi: bounds.1,
        value: tuned.value,
        residual: tuned.residual,
        tol,
        evaluations: tuned.evaluations,
    });
    report.certificates.push(CertificateSummary::from(&cert));
    Ok(report)
}

pub fn cmd_concat(
    a: &Path,
    b: &Path,
    out: Option<&Path>,
    pad: bool,
    tols: InputTolerances,
) -> Result<String, CliError> {
    let (ta, _) = load_tuple(a, tols)?;
    let (tb, _) = load_tuple(b, tols)?;
    let mut c = if pad { concat_padded(&ta, &tb)? } else { concat(&ta, &tb)? };
    let label = format!(
        "{} +c {}",
        ta.label().unwrap_or(&a.display().to_string()),
        tb.label().unwrap_or(&b.display().to_string())
    );
    c.set_label(Some(label));
    let text = serialize(&c, Some(format!("concatenation of {} and {}", a.display(), b.display())));
    if let Some(path) = out {
        write(path, &text)?;
    }
    Ok(text)
}
