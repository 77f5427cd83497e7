//! Command-line front end: argument parsing, artifact writing and run manifests.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod plot;
pub mod table;

use std::ffi::OsString;
use std::path::Path;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use error::CliError;
pub use manifest::{RunManifest, MANIFEST_FILE, SCHEMA_VERSION};
pub use plot::{render_plot, PlotError, PlotStyle};
pub use table::TableFile;

use args::Command;
use commands::Output;
use manifest::parameters_of;

/// What a successful invocation produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    /// Text echoed to standard output.
    pub stdout: String,
}

fn parse_cli<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let full = std::iter::once(OsString::from("tentlab")).chain(argv.into_iter().map(Into::into));
    Cli::try_parse_from(full)
}

/// Parse `argv` (without the program name) and run it, writing artifacts under `--out`.
pub fn execute<I, T>(argv: I) -> Result<RunOutcome, RunError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = parse_cli(argv).map_err(RunError::Usage)?;
    dispatch(cli.command, &cli.out).map_err(RunError::Run)
}

#[derive(Debug)]
pub enum RunError {
    Usage(clap::Error),
    Run(CliError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(e) => match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            },
            RunError::Run(e) => e.exit_code(),
        }
    }
}

fn dispatch(command: Command, out_dir: &Path) -> Result<RunOutcome, CliError> {
    if let Command::Replay(replay) = command {
        let recorded = RunManifest::read(&replay.manifest)?;
        let cli = parse_cli(recorded.to_argv()).map_err(|e| CliError::Usage(e.to_string()))?;
        if matches!(cli.command, Command::Replay(_)) {
            return Err(CliError::Usage("a manifest cannot record a replay".into()));
        }
        return dispatch(cli.command, out_dir);
    }

    std::fs::create_dir_all(out_dir)?;
    let started = Instant::now();
    let mut out = Output::new(out_dir);
    let (name, parameters, stdout) = match &command {
        Command::Simulate(a) => ("simulate", parameters_of(a)?, {
            commands::simulate(a, &mut out)?;
            String::new()
        }),
        Command::Cycles(a) => ("cycles", parameters_of(a)?, commands::cycles(a, &mut out)?),
        Command::Stabilize(a) => (
            "stabilize",
            parameters_of(a)?,
            commands::stabilize(a, &mut out)?,
        ),
        Command::Sweep(a) => (
            "sweep",
            parameters_of(a)?,
            commands::sweep_cmd(a, &mut out)?,
        ),
        Command::Escape(a) => ("escape", parameters_of(a)?, commands::escape(a, &mut out)?),
        Command::Series(a) => ("series", parameters_of(a)?, {
            commands::series(a, &mut out)?;
            String::new()
        }),
        Command::Sqrt2(a) => ("sqrt2", parameters_of(a)?, commands::sqrt2(a, &mut out)?),
        Command::Fib(a) => ("fib", parameters_of(a)?, commands::fib(a, &mut out)?),
        Command::Spectrum(a) => (
            "spectrum",
            parameters_of(a)?,
            commands::spectrum(a, &mut out)?,
        ),
        Command::Replay(_) => unreachable!("handled above"),
    };
    let mut artifacts = out.artifacts;
    artifacts.push(MANIFEST_FILE.to_string());
    let manifest = RunManifest {
        schema: SCHEMA_VERSION,
        command: name.to_string(),
        parameters,
        artifacts,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_ms: started.elapsed().as_millis() as u64,
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(out_dir.join(MANIFEST_FILE), text)?;
    Ok(RunOutcome { manifest, stdout })
}

/// Entry point used by the binary; returns the process exit status.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match execute(argv) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            0
        }
        Err(err) => {
            let code = err.exit_code();
            match err {
                RunError::Usage(e) => {
                    let _ = e.print();
                }
                RunError::Run(e) => eprintln!("error: {e}"),
            }
            code
        }
    }
}
