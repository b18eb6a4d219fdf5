use std::path::PathBuf;
use std::process::ExitCode;

use beatfield_cli::{parse_config, run, ConfigError, EXIT_INVALID, OUT_DIR_ENV};

fn main() -> ExitCode {
    let default_out = std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    let config = match parse_config(std::env::args_os(), &default_out) {
        Ok(c) => c,
        Err(ConfigError::Clap(e)) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(ConfigError::Clap(e)) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INVALID);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    match run(&config) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
