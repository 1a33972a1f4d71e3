use std::process::ExitCode;

use clap::Parser;
use comednet_cli::{dispatch, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("COMEDNET_LOG", "warn")).init();

    // clap prints usage and exits 2 on bad arguments.
    let config = RunConfig::parse();
    match dispatch(config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
