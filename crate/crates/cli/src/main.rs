use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use hrg_cli::io::to_json;
use hrg_cli::{run, Cli, CliError};

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HRG_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("HRG_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Serialize)]
struct ErrorBody {
    exit_code: u8,
    message: String,
}

#[derive(Serialize)]
struct ErrorOutput {
    error: ErrorBody,
}

fn error_json(e: &CliError) -> String {
    to_json(&ErrorOutput {
        error: ErrorBody {
            exit_code: e.exit_code(),
            message: e.to_string(),
        },
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = configure_threads().and_then(|()| {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        run(&cli.command, &mut lock)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if cli.command.emits_json() && !matches!(e, CliError::ChecksFailed { .. }) {
                let _ = write!(std::io::stdout(), "{}", error_json(&e));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
