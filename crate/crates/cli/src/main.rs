//! `lexacq`: train, segment, evaluate, generate and inspect.
//!
//! Exit status is 0 on success, 1 when `eval --min-f1` is not met, and 2
//! on usage, I/O or format errors.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(a) => commands::train(a, cli.quiet),
        Command::Segment(a) => commands::segment(a),
        Command::Eval(a) => commands::eval(a),
        Command::Gen(a) => commands::gen(a, cli.quiet),
        Command::Inspect(a) => commands::inspect(a),
        Command::Transcribe(a) => commands::transcribe(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("lexacq: {e:#}");
            ExitCode::from(2)
        }
    }
}
