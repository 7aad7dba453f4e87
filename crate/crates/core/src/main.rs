use std::io;
use std::process::ExitCode;

use alpha_ring::cli::{run, Cli, ERROR_EXIT_CODE};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ERROR_EXIT_CODE } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(e) => {
            eprintln!("alpha-ring: {e}");
            ExitCode::from(ERROR_EXIT_CODE)
        }
    }
}
