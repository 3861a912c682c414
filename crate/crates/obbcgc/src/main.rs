use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = obbcgc::cli::Args::parse();
    match obbcgc::cli::run(&args, &mut std::io::stdout()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
