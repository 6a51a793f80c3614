//! Command-line runner: resolves a [`RunConfig`], executes the scenario and
//! emits a versioned [`ReportDocument`].

pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod settings;
pub mod text;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use config::{Cli, RunConfig, Scenario};
pub use error::CliError;
pub use report::{ReportDocument, SCHEMA_VERSION};
pub use run::run;

/// Parses arguments, runs, writes the report and returns the process exit code.
pub fn main_with<I, T>(
    args: I,
    env_tol_lp: Option<&str>,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => report::EXIT_PRECONDITION,
            };
        }
    };
    let config = match RunConfig::resolve(cli, env_tol_lp) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if matches!(e, CliError::Usage(_)) {
                let _ = writeln!(
                    stderr,
                    "\nUsage: steerkit <SCENARIO> [OPTIONS]\n\nFor more information, try '--help'."
                );
            }
            return report::EXIT_PRECONDITION;
        }
    };
    let doc = run(&config);
    if let report::ScenarioResult::Error(e) = &doc.result {
        let _ = writeln!(stderr, "error: {}", e.message);
    }
    let written = doc
        .render(config.format)
        .and_then(|body| match &config.output {
            Some(path) => fs::write(path, body).map_err(CliError::from),
            None => stdout.write_all(body.as_bytes()).map_err(CliError::from),
        });
    match written {
        Ok(()) => doc.exit_code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            report::EXIT_PRECONDITION
        }
    }
}
