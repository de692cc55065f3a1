mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Map};

use args::{Cli, Command};
use report::{Outcome, RunReport, Status};

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate(_) => "validate",
        Command::Chains(_) => "chains",
        Command::Nets(_) => "nets",
        Command::Cover(_) => "cover",
        Command::Convexity(_) => "convexity",
        Command::Examples(_) => "examples",
        Command::VerifyPaper(_) => "verify-paper",
    }
}

fn dispatch(c: &Command) -> metriclab_core::Result<Outcome> {
    match c {
        Command::Validate(a) => commands::validate(&a.space),
        Command::Chains(a) => commands::chains(a),
        Command::Nets(a) => commands::nets(a),
        Command::Cover(a) => commands::cover(a),
        Command::Convexity(a) => commands::convexity(a),
        Command::Examples(a) => commands::examples(a),
        Command::VerifyPaper(a) => commands::verify_paper(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = dispatch(&cli.command).unwrap_or_else(|e| Outcome {
        inputs: Map::new(),
        results: json!({ "error": e.to_string() }),
        status: Status::Error,
    });
    if outcome.status == Status::Error {
        eprintln!(
            "error: {}",
            outcome.results["error"].as_str().unwrap_or_default()
        );
    }
    let report = RunReport {
        command: command_name(&cli.command).to_string(),
        inputs: outcome.inputs.into(),
        results: outcome.results,
        status: outcome.status,
        duration_ms: cli.timing.then(|| start.elapsed().as_millis() as u64),
    };
    let text = if cli.text {
        report.to_text()
    } else {
        report.to_json()
    };
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::from(2);
    }
    ExitCode::from(report.status.exit_code())
}
