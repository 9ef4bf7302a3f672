use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pgs_cli::{execute, init_threads, Cli, CliError, EXIT_IO};

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    init_threads()?;
    let report = execute(&cli.command)?;
    let io_err = |e: std::io::Error| CliError {
        code: EXIT_IO,
        message: e.to_string(),
    };
    match &cli.command.output().output {
        Some(path) => std::fs::write(path, report).map_err(io_err),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(report.as_bytes())
                .and_then(|_| out.flush())
                .map_err(io_err)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pgs: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
