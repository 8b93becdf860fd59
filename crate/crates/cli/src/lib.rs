//! Command-line front end: argument parsing, dispatch and JSON reporting.

pub mod config;
pub mod json;

mod commands;
mod selftest;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

use config::{
    AlgebraCommand, Cli, Command, ConfigError, KzCommand, RepCommand, RunConfig, SugawaraCommand, SymbolsCommand,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Size the global worker pool from `KZM_THREADS` if set.
fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var("KZM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError::Validation(format!("KZM_THREADS must be a positive integer, got '{raw}'")))?;
    // a pool that already exists (e.g. in tests) is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Report plus whether the command's own checks passed.
struct Report {
    value: Value,
    passed: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, passed: true }
    }

    fn from_checked(value: Value) -> Self {
        let passed = value.get("passed").and_then(Value::as_bool).unwrap_or(true);
        Report { value, passed }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, ConfigError> {
    let base = RunConfig::new(cli.output.clone());
    match &cli.command {
        Command::Algebra { action: AlgebraCommand::Info { algebra, level } } => {
            let mut cfg = base.with_algebra(algebra)?;
            if let Some(l) = level {
                cfg = cfg.with_level(*l)?;
            }
            commands::algebra_info(&cfg).map(Report::ok)
        }
        Command::Rep { action: RepCommand::Build { algebra, weight, emit } } => {
            let cfg = base.with_algebra(algebra)?.with_weights(vec![weight.0.clone()])?;
            commands::rep_build(&cfg, emit.as_deref()).map(Report::ok)
        }
        Command::Invariants(args) => {
            let cfg = base.with_algebra(&args.algebra)?.with_weight_spec(&args.weights)?;
            commands::invariants(&cfg).map(Report::ok)
        }
        Command::Kz { action } => match action {
            KzCommand::Flatness { algebra, weights, mode, kappa } => {
                let mut cfg = base.with_algebra(algebra)?.with_weight_spec(weights)?.with_mode(mode);
                if let Some(k) = kappa {
                    cfg = cfg.with_kappa(*k)?;
                }
                commands::kz_flatness(&cfg).map(Report::from_checked)
            }
            KzCommand::Monodromy { algebra, weights, kappa, braid, tol, mode, emit } => {
                let cfg = base
                    .with_algebra(algebra)?
                    .with_weight_spec(weights)?
                    .with_kappa(*kappa)?
                    .with_tolerance(*tol)?
                    .with_mode(mode);
                commands::kz_monodromy(&cfg, braid, emit.as_deref()).map(Report::ok)
            }
        },
        Command::Sugawara { action: SugawaraCommand::Check { level, weight, depth, pairs } } => {
            commands::sugawara_check(*level, *weight, *depth, pairs.as_ref().map(|p| p.0.as_slice()))
                .map(Report::from_checked)
        }
        Command::Symbols { action: SymbolsCommand::Check { rank, trials, seed } } => {
            commands::symbols_check(*rank, *trials, *seed).map(Report::from_checked)
        }
        Command::Verlinde(args) => {
            let cfg = base.with_level(args.level)?.with_labels(&args.weights.0)?;
            let labels: Vec<i64> = cfg.weights.iter().map(|w| w.0[0]).collect();
            commands::verlinde(args.level, &labels, args.scan_levels).map(Report::ok)
        }
        Command::Selftest(args) => Ok(Report::from_checked(selftest::run(args.seed))),
    }
}

fn emit(value: &Value, pretty: bool, out: &mut dyn Write) {
    let text = if pretty {
        json::render_pretty(value)
    } else {
        serde_json::to_string(value).expect("JSON values serialize") + "\n"
    };
    let _ = out.write_all(text.as_bytes());
}

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = configure_threads().and_then(|_| dispatch(&cli));
    let (value, code) = match result {
        Ok(report) => {
            let code = if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED };
            (report.value, code)
        }
        Err(e) => (json::error_report(e.kind(), &e.to_string()), EXIT_INVALID),
    };
    if let Some(path) = &cli.output {
        if let Err(e) = commands::write_json_file(path, &value) {
            let report = json::error_report(e.kind(), &e.to_string());
            emit(&report, cli.pretty, out);
            return EXIT_INVALID;
        }
    }
    emit(&value, cli.pretty, out);
    let _ = out.flush();
    code
}
