use std::process::ExitCode;

use clap::Parser;
use secrecy_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    // usage errors share the exit code of malformed input files
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(CliError::PARSE as u8) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
