use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = bbf_cli::Cli::parse();
    match bbf_cli::run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
