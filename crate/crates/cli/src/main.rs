use std::io::Write;
use std::process::ExitCode;

use arrovian::args::Cli;
use arrovian::{render, run, EXIT_OK, EXIT_USAGE};
use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            if code == EXIT_USAGE {
                emit(&render(&json!({"error": e.kind().to_string(), "exit": EXIT_USAGE})));
            }
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if !outcome.ok {
                eprintln!("arrovian: verification failed; witnesses are in the report");
            }
            emit(&render(&outcome.value));
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("arrovian: {e:#}");
            emit(&render(&json!({"error": format!("{e:#}"), "exit": EXIT_USAGE})));
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
