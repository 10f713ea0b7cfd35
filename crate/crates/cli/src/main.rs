mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::{run, Failure};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.command.output();
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let payload = match (out.format, &outcome.text) {
        (Format::Json, _) => output::json(&outcome.value),
        (Format::Text, Some(t)) => t.clone(),
        (Format::Text, None) => output::text(&outcome.value),
    };
    let written = match &out.out {
        Some(path) => std::fs::write(path, payload.as_bytes()),
        None => std::io::stdout().lock().write_all(payload.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
