use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sweepout_cli::{run, Command, Format, RunOptions};

/// Builds and verifies sweeping-out witness sets for discrete measures on the circle.
#[derive(Parser, Debug)]
#[command(name = "sweepout", version)]
struct Args {
    /// Pipeline stage to run.
    #[arg(value_enum)]
    command: Command,
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Directory for reports and artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Seed for sampled verification and trace sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides the basis precision cap.
    #[arg(long)]
    precision_bits: Option<u32>,
    /// Largest #G + #E enumerated by explicit verification.
    #[arg(long)]
    explicit_cap: Option<u64>,
    /// Format printed to stdout; CSV prints the command's main table.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions {
        config: args.config,
        out: args.out,
        seed: args.seed,
        precision_bits: args.precision_bits,
        explicit_cap: args.explicit_cap,
        format: args.format,
    };
    let output = run(args.command, &opts);
    print!("{}", output.stdout);
    ExitCode::from(output.exit_code as u8)
}
