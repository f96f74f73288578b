mod config;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use config::{Cli, CliConfig, OutputFormat};
use report::{CommandResult, ReportEnvelope};

const EXIT_USAGE: u8 = 2;
const EXIT_AUDIT_FAILED: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match CliConfig::resolve(cli.command) {
        Ok(c) => c,
        Err(msg) => return usage(&msg),
    };
    let started = Instant::now();
    let result = match report::run(&config) {
        Ok(r) => r,
        Err(e) => return usage(&e.to_string()),
    };
    let duration_seconds = started.elapsed().as_secs_f64();

    let body = match render(&config, &result, duration_seconds) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::FAILURE;
        }
    };
    let written = match &config.output_path {
        Some(path) => std::fs::write(path, &body).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(&body).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::FAILURE;
    }
    exit_code(&result)
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn exit_code(result: &CommandResult) -> ExitCode {
    if result.audit_failed() {
        ExitCode::from(EXIT_AUDIT_FAILED)
    } else {
        ExitCode::SUCCESS
    }
}

fn render(config: &CliConfig, result: &CommandResult, duration_seconds: f64) -> Result<Vec<u8>, String> {
    match config.output_format {
        OutputFormat::Json => {
            let envelope = ReportEnvelope {
                version: env!("CARGO_PKG_VERSION"),
                command: config.command.name(),
                config,
                result,
                duration_seconds,
            };
            let mut out = serde_json::to_vec_pretty(&envelope).map_err(|e| e.to_string())?;
            out.push(b'\n');
            Ok(out)
        }
        OutputFormat::Csv => report::to_csv(result).map_err(|e| e.to_string()),
    }
}
