use std::process::ExitCode;

mod args;
mod commands;
mod config;

use clap::Parser;

/// Exit codes: 0 success, 2 input error, 3 config error, 4 internal
/// invariant failure.
fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let result = std::panic::catch_unwind(|| commands::run(cli));
    match result {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
        Err(_) => {
            eprintln!("error: internal invariant failure");
            ExitCode::from(4)
        }
    }
}

fn exit_code_for(err: &tempo_miner::Error) -> u8 {
    use tempo_miner::Error::*;
    match err {
        Input(_) | Io(_) => 2,
        Config(_) | Domain(_) | DegenerateSeries(_) | Derivation(_) | OracleGuard(_) => 3,
        Internal(_) => 4,
    }
}
