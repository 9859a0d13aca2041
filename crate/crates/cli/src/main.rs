use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ccount_cli::Cli::parse();
    match ccount_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(ccount_cli::exit_code(&err))
        }
    }
}
