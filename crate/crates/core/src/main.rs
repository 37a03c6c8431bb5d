use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nilrym::cli::{
    cmd_analyze, cmd_catalog, cmd_certify, cmd_concat, cmd_flow, cmd_tune, CliError,
    InputTolerances, Report,
};
use nilrym::flow::FlowConfig;
use nilrym::{Group, Mode};

#[derive(Parser)]
#[command(name = "nilrym", version, about = "Moment-map certificates for 2-step nilpotent metric Lie algebras")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Skewness tolerance applied when reading tuple files.
    #[arg(long, global = true, default_value_t = nilrym::algebra::DEFAULT_SKEW_TOL)]
    skew_tol: f64,
    /// Relative singular-value cutoff for the tuple rank.
    #[arg(long, global = true, default_value_t = nilrym::algebra::DEFAULT_RANK_TOL)]
    rank_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate, fingerprint and run every certificate.
    Analyze {
        path: PathBuf,
        #[arg(long, default_value_t = nilrym::soliton::DEFAULT_TOL)]
        tol: f64,
    },
    /// Run one certificate; with --expect, exit 1 when the verdict differs.
    Certify {
        path: PathBuf,
        #[arg(long, default_value = "rym")]
        mode: String,
        #[arg(long, default_value_t = nilrym::soliton::DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        expect: Option<bool>,
    },
    /// Integrate the gradient flow of ‖m_G‖² from one or more tuples.
    Flow(FlowArgs),
    /// Write a catalogue tuple.
    Catalog {
        name: String,
        /// Family parameter, key=value (repeatable).
        #[arg(short = 'p', long = "param")]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tune one family parameter to the Ricci Yang-Mills soliton condition.
    Tune {
        name: String,
        #[arg(short = 'p', long = "param")]
        params: Vec<String>,
        #[arg(long)]
        free: String,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long, default_value_t = nilrym::soliton::DEFAULT_TOL)]
        tol: f64,
    },
    /// Concatenate two tuple files block-diagonally.
    Concat {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow the first tuple to be longer (pads the second with zeros).
        #[arg(long)]
        pad: bool,
    },
}

#[derive(Args)]
struct FlowArgs {
    paths: Vec<PathBuf>,
    #[arg(long, default_value = "slq")]
    group: String,
    /// Maximum number of accepted steps.
    #[arg(long, default_value_t = 200_000)]
    steps: usize,
    /// Initial step relative to 1/‖m_G(C0)‖.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// Convergence tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    blowdown: f64,
    #[arg(long, conflicts_with = "plain")]
    projected: bool,
    #[arg(long)]
    plain: bool,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(report: &Report, json: bool) {
    let text = if json { report.to_json() } else { report.to_text() };
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let tols = InputTolerances {
        skew_tol: cli.skew_tol,
        rank_tol: cli.rank_tol,
    };
    match cli.command {
        Command::Analyze { path, tol } => {
            let r = cmd_analyze(&path, tol, tols)?;
            emit(&r, cli.json);
            Ok(r.exit_code())
        }
        Command::Certify { path, mode, tol, expect } => {
            let mode: Mode = mode.parse()?;
            let r = cmd_certify(&path, mode, tol, expect, tols)?;
            emit(&r, cli.json);
            Ok(r.exit_code())
        }
        Command::Flow(a) => {
            let group: Group = a.group.parse()?;
            let cfg = FlowConfig {
                group,
                step: a.step,
                max_steps: a.steps,
                conv_tol: a.tol,
                projected: !a.plain,
                blowdown_tol: a.blowdown,
            };
            let r = cmd_flow(&a.paths, &cfg, a.csv.as_deref(), a.out.as_deref(), tols)?;
            emit(&r, cli.json);
            Ok(r.exit_code())
        }
        Command::Catalog { name, params, out } => {
            let text = cmd_catalog(&name, &params, out.as_deref())?;
            if out.is_none() {
                print!("{text}");
            }
            Ok(0)
        }
        Command::Tune { name, params, free, lo, hi, tol } => {
            let r = cmd_tune(&name, &params, &free, (lo, hi), tol)?;
            emit(&r, cli.json);
            Ok(r.exit_code())
        }
        Command::Concat { a, b, out, pad } => {
            let text = cmd_concat(&a, &b, out.as_deref(), pad, tols)?;
            if out.is_none() {
                print!("{text}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
