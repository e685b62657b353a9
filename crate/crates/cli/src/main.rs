use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lts_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    match main2() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main2() -> Result<(), CliError> {
    let config = Cli::parse().into_config()?;
    let report = run(&config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let text = report.render(config.format)?;
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes()).map_err(|e| CliError::Output(e.to_string()))?;
    Ok(())
}
