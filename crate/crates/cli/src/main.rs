mod commands;
mod config;
mod output;
mod recipes;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, ExperimentConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config keys or parameter values.
    Usage(String),
    /// A recipe or verification did not hold.
    Failed(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid input: {m}"),
            CliError::Failed(m) => write!(f, "check failed: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

fn load() -> Result<ExperimentConfig, CliError> {
    let flags = match ExperimentConfig::try_parse() {
        Ok(f) => f,
        Err(e) if e.use_stderr() => return Err(CliError::Usage(e.to_string().trim_end().to_string())),
        Err(e) => {
            let _ = e.print();
            std::process::exit(0);
        }
    };
    let cfg = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?.overlay(flags)
        }
        None => flags,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("PNINDEX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("PNINDEX_THREADS: expected a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn run() -> Result<(), CliError> {
    threads()?;
    let cfg = load()?;
    let command = cfg
        .command
        .ok_or_else(|| config::usage("command", "missing (radius, index, min-degree, convexity, beta-classify, recipe)"))?;
    let outcome = match command {
        Command::Radius => commands::radius(&cfg),
        Command::Index => commands::index(&cfg),
        Command::MinDegree => commands::min_degree(&cfg),
        Command::Convexity => commands::convexity(&cfg),
        Command::BetaClassify => commands::beta(&cfg),
        Command::Recipe => commands::recipe(&cfg),
    }?;
    output::write_output(cfg.out.as_deref(), &outcome.text)?;
    if let (Some(path), Some(samples)) = (cfg.samples.as_deref(), outcome.samples.as_deref()) {
        output::write_output(Some(path), samples)?;
    }
    if !outcome.passed {
        return Err(CliError::Failed(format!("{} did not verify", command.name())));
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pnindex: {e}");
            ExitCode::from(e.code())
        }
    }
}
