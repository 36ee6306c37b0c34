mod args;
mod commands;
mod config;
mod error;
mod report;

use std::ffi::OsString;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use report::{Files, Report};

fn run(argv: Vec<OsString>) -> Result<(), (i32, String)> {
    let argv = config::expand(argv).map_err(|e| (e.exit_code(), format!("error: {e}")))?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    return Ok(());
                }
                ErrorKind::ValueValidation | ErrorKind::InvalidValue | ErrorKind::ArgumentConflict => 2,
                _ => 1,
            };
            return Err((code, e.render().to_string()));
        }
    };
    let started = Instant::now();
    let mut files = Files::default();
    let (command, params, out) =
        commands::dispatch(&cli.command, &mut files).map_err(|e| (e.exit_code(), format!("error: {e}")))?;
    let report = Report {
        command,
        version: env!("CARGO_PKG_VERSION"),
        params,
        inputs: files.inputs,
        outputs: files.outputs,
        result: out.result,
        table: out.table,
        timing_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    report.emit(cli.format, cli.out.as_deref()).map_err(|e| (e.exit_code(), format!("error: {e}")))
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("{}", msg.trim_end());
            ExitCode::from(code as u8)
        }
    }
}
