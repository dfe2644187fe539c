use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use scoreseq::cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", render(&outcome.record, cli.format));
            eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
