//! Command-line front end for rectgf: bound states, Green's function sweeps,
//! resonance scans and oracle cross-checks, written as JSON or CSV.

pub mod args;
pub mod commands;
pub mod error;
pub mod record;
pub mod verify;

use std::io::Write;

use args::{Cli, Command};
use commands::{GreenSweep, ScanFlags, Source};
use error::{CliError, CliResult};
use record::{OutputRecord, Payload};

/// Exit code when --expect-peaks finds nothing.
pub const EXIT_NO_PEAKS: u8 = 4;
/// Exit code when a verify comparison fails.
pub const EXIT_VERIFY_FAILED: u8 = 5;

/// A finished command: the record to write and the exit code to return.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: OutputRecord,
    pub code: u8,
    pub message: Option<String>,
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let done = |record| Outcome {
        record,
        code: 0,
        message: None,
    };
    match &cli.command {
        Command::BoundStates { common, max_states } => {
            let source = Source::resolve(common.spec.as_ref(), common.preset.as_deref())?;
            Ok(done(commands::bound_states(&source, *max_states)?))
        }
        Command::Green {
            common,
            xi,
            xf,
            emin,
            emax,
            n_points,
            pole_threshold,
        } => {
            let source = Source::resolve(common.spec.as_ref(), common.preset.as_deref())?;
            let sweep = GreenSweep {
                x_i: *xi,
                x_f: *xf,
                e_min: *emin,
                e_max: *emax,
                n_points: *n_points,
                pole_threshold: *pole_threshold,
            };
            Ok(done(commands::green_sweep(&source, &sweep)?))
        }
        Command::Resonances {
            common,
            emin,
            emax,
            n_points,
            curve,
            expect_peaks,
        } => {
            let source = Source::resolve(common.spec.as_ref(), common.preset.as_deref())?;
            let flags = ScanFlags {
                e_min: *emin,
                e_max: *emax,
                n_points: *n_points,
                curve: *curve,
            };
            let record = commands::resonances(&source, &flags)?;
            let empty =
                matches!(&record.payload, Payload::Resonances(r) if r.resonances.is_empty());
            if *expect_peaks && empty {
                return Ok(Outcome {
                    record,
                    code: EXIT_NO_PEAKS,
                    message: Some("no resonance peaks found".into()),
                });
            }
            Ok(done(record))
        }
        Command::Verify { common, suite, tol } => {
            let source = Source::resolve(common.spec.as_ref(), common.preset.as_deref())?;
            if let Some(t) = tol {
                if !(t.is_finite() && *t >= 0.0) {
                    return Err(CliError::Usage(format!(
                        "--tol must be a non-negative number, got {t}"
                    )));
                }
            }
            let suites = if suite.is_empty() {
                verify::Suite::ALL.to_vec()
            } else {
                suite.clone()
            };
            let record = verify::verify(&source, &suites, *tol)?;
            let (code, message) = match &record.payload {
                Payload::Verify(v) if !v.passed => (EXIT_VERIFY_FAILED, Some(failure_report(v))),
                _ => (0, None),
            };
            Ok(Outcome {
                record,
                code,
                message,
            })
        }
        Command::Schema => Err(CliError::Usage("schema produces no record".into())),
    }
}

fn failure_report(v: &record::VerifyResult) -> String {
    let mut lines = vec!["verification failed:".to_string()];
    for c in v
        .checks
        .iter()
        .filter(|c| c.status == record::CheckStatus::Fail)
    {
        let err = c
            .max_error
            .map_or("n/a".to_string(), |e| format!("{e:.3e}"));
        lines.push(format!(
            "  {}: max error {err} > tol {:.1e} ({})",
            c.suite, c.tolerance, c.detail
        ));
    }
    lines.join("\n")
}

/// Runs the parsed command, writes its output and returns the exit code.
pub fn run(cli: &Cli) -> u8 {
    if let Command::Schema = cli.command {
        print!("{}", record::SCHEMA);
        return 0;
    }
    let common = cli
        .command
        .common()
        .expect("data commands carry common flags");
    let outcome = match execute(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written =
        record::render(&outcome.record, common.format).and_then(|bytes| match &common.out {
            Some(path) => std::fs::write(path, &bytes).map_err(CliError::from),
            None => std::io::stdout()
                .lock()
                .write_all(&bytes)
                .map_err(CliError::from),
        });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    if let Some(msg) = &outcome.message {
        eprintln!("{msg}");
    }
    outcome.code
}
