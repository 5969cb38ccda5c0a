use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use petri_causal::{run, Command, RunError};

fn main() -> ExitCode {
    let cmd = match Command::try_parse() {
        Ok(cmd) => cmd,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { RunError::EXIT_CODE as u8 } else { 0 });
        }
    };
    match run(&cmd) {
        Ok(out) => {
            if cmd.out.is_none() {
                let _ = std::io::stdout().write_all(out.json.as_bytes());
            }
            ExitCode::from(out.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(RunError::EXIT_CODE as u8)
        }
    }
}
