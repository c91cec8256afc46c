//! Batch front-end: reads an experiment config, runs one pipeline stage and
//! writes a JSON report plus CSV tables.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::ValueEnum;
use sweepout::error::{Error, Result};

use crate::commands::Ctx;
use crate::config::ExperimentConfig;
use crate::report::{write_file, Echo, Outcome, Report, Status, TOOL, VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Decompose,
    LatticeCount,
    FindLambda,
    BuildEg,
    BuildWitness,
    Verify,
    Trace,
    CheckConditions,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Decompose => "decompose",
            Command::LatticeCount => "lattice-count",
            Command::FindLambda => "find-lambda",
            Command::BuildEg => "build-eg",
            Command::BuildWitness => "build-witness",
            Command::Verify => "verify",
            Command::Trace => "trace",
            Command::CheckConditions => "check-conditions",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
    pub precision_bits: Option<u32>,
    pub explicit_cap: Option<u64>,
    pub format: Format,
}

/// What a run produced: the report, what to print and the exit code.
pub struct RunOutput {
    pub report: Report,
    pub stdout: String,
    pub exit_code: i32,
}

fn execute(cmd: Command, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Command::Decompose => commands::decompose_cmd(ctx),
        Command::LatticeCount => commands::lattice_count_cmd(ctx),
        Command::FindLambda => commands::find_lambda_cmd(ctx),
        Command::BuildEg => commands::build_eg_cmd(ctx),
        Command::BuildWitness => commands::build_witness_cmd(ctx),
        Command::Verify => commands::verify_cmd(ctx),
        Command::Trace => commands::trace_cmd(ctx),
        Command::CheckConditions => commands::check_conditions_cmd(ctx),
    }
}

fn load(opts: &RunOptions) -> Result<(ExperimentConfig, Echo)> {
    let mut config = ExperimentConfig::load(&opts.config)?;
    if let Some(bits) = opts.precision_bits {
        config.basis.precision_cap = bits;
    }
    let explicit_cap = opts.explicit_cap.unwrap_or(config.params.explicit_cap);
    config.params.explicit_cap = explicit_cap;
    let echo = Echo {
        config: config.clone(),
        seed: opts.seed,
        precision_bits: config.basis.precision_cap,
        explicit_cap,
    };
    Ok((config, echo))
}

/// Runs `cmd` and writes `<out>/<cmd>.json`, any CSV tables and artifacts.
pub fn run(cmd: Command, opts: &RunOptions) -> RunOutput {
    let mut tables = Vec::new();
    let (report, failure) = match load(opts) {
        Err(e) => (error_report(cmd, None, &e), Some(e)),
        Ok((config, echo)) => {
            let outcome = config.basis().and_then(|basis| {
                let seq = config.sequence(&basis)?;
                let ctx = Ctx {
                    config: &config,
                    basis,
                    seq,
                    out: opts.out.clone(),
                    seed: opts.seed,
                    explicit_cap: echo.explicit_cap,
                };
                execute(cmd, &ctx)
            });
            match outcome {
                Err(e) => (error_report(cmd, Some(echo), &e), Some(e)),
                Ok(o) => {
                    let passed = o.checks.iter().all(|c| c.pass);
                    let status = if passed {
                        Status::Ok
                    } else {
                        Status::VerificationFailed
                    };
                    let files = o.files;
                    tables = o.tables;
                    let report = Report {
                        tool: TOOL,
                        version: VERSION,
                        command: cmd.name().into(),
                        status,
                        error: None,
                        parameters: Some(echo),
                        checks: o.checks,
                        result: o.result,
                    };
                    match write_artifacts(&files, &tables, opts) {
                        Ok(()) => (report, None),
                        Err(e) => (error_report(cmd, report.parameters.clone(), &e), Some(e)),
                    }
                }
            }
        }
    };
    let json = report.to_json();
    let mut exit_code = report.status.exit_code();
    if let Err(e) = write_file(&opts.out.join(format!("{}.json", cmd.name())), &json) {
        eprintln!("error: {e}");
        exit_code = exit_code.max(3);
    }
    if let Some(e) = &failure {
        eprintln!("error: {e}");
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!(
            "failed check {}: {} (computed {})",
            c.name, c.claim, c.computed
        );
    }
    let stdout = match (opts.format, tables.first()) {
        (Format::Csv, Some(t)) => t.to_csv().unwrap_or_default(),
        _ => json,
    };
    RunOutput {
        report,
        stdout,
        exit_code,
    }
}

fn write_artifacts(
    files: &[(String, String)],
    tables: &[report::Table],
    opts: &RunOptions,
) -> Result<()> {
    for (path, text) in files {
        write_file(&PathBuf::from(path), text)?;
    }
    for t in tables {
        write_file(&opts.out.join(format!("{}.csv", t.name)), &t.to_csv()?)?;
    }
    Ok(())
}

fn error_report(cmd: Command, echo: Option<Echo>, e: &Error) -> Report {
    Report {
        tool: TOOL,
        version: VERSION,
        command: cmd.name().into(),
        status: Status::of_error(e),
        error: Some(e.to_string()),
        parameters: echo,
        checks: Vec::new(),
        result: serde_json::Value::Null,
    }
}
