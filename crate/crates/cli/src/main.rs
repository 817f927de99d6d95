mod config;
mod experiments;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::{parse_config, ConfigFile, ExperimentKind, DEFAULT_SEED};
use experiments::*;
use report::emit_report;

/// Environment variable naming the default output directory.
const OUT_ENV: &str = "PIMKIT_OUT";
const DEFAULT_OUT: &str = "pimkit-out";

/// Processing-in-memory models: bit-serial DRAM arithmetic, BNN inference,
/// accelerator scheduling, near-bank GEMV and roofline analysis.
///
/// Settings resolve as: command-line flag, then config file, then the
/// PIMKIT_OUT environment variable (output directory only), then defaults.
#[derive(Debug, Parser)]
#[command(name = "pimkit", version)]
struct Cli {
    /// Experiment config file (`key = value` lines with `[section]` headers)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized inputs
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for CSV and summary files
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check in-DRAM operations against the scalar reference
    Verify(VerifyArgs),
    /// Command counts and modeled throughput of in-DRAM operations
    Throughput(ThroughputArgs),
    /// Binary neural network experiments
    #[command(subcommand)]
    Bnn(BnnCommand),
    /// Evaluate models on the baseline and heterogeneous accelerator systems
    Mensa(MensaArgs),
    /// Near-bank processor GEMV experiments
    #[command(subcommand)]
    Upmem(UpmemCommand),
    /// Roofline sweep over arithmetic intensity
    Roofline(RooflineArgs),
    /// Run the experiment named by `kind` in the config file
    Run,
}

#[derive(Debug, Subcommand)]
enum BnnCommand {
    /// End-to-end speedup from accelerating part of the runtime
    Amdahl(AmdahlArgs),
    /// Run a binary network in DRAM and compare with the host
    Infer(InferArgs),
}

#[derive(Debug, Subcommand)]
enum UpmemCommand {
    /// Modeled GEMV time across DPU counts
    Scale(ScaleArgs),
    /// Partitioned GEMV checked against a sequential reference
    Gemv(GemvArgs),
    /// Normalize PIM time against reference platforms
    Compare(CompareArgs),
}

fn run(cli: Cli) -> Result<Vec<String>> {
    let experiment = match &cli.config {
        Some(path) if matches!(cli.command, Command::Run) => Some(parse_config(path)?),
        _ => None,
    };
    let file = match (&experiment, &cli.config) {
        (Some(e), _) => Some(e.params.clone()),
        (None, Some(path)) => Some(ConfigFile::load(path)?),
        (None, None) => None,
    };
    let seed = cli
        .seed
        .or_else(|| file.as_ref().and_then(|f| f.int("experiment", "seed")).map(|s| s as u64))
        .unwrap_or(DEFAULT_SEED);
    let out = cli
        .out
        .clone()
        .or_else(|| file.as_ref().and_then(|f| f.text("experiment", "out")).map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let ctx = Ctx {
        seed,
        config: file.as_ref(),
    };

    let outcome = match &cli.command {
        Command::Verify(a) => verify(a, &ctx)?,
        Command::Throughput(a) => throughput(a, &ctx)?,
        Command::Bnn(BnnCommand::Amdahl(a)) => bnn_amdahl(a, &ctx)?,
        Command::Bnn(BnnCommand::Infer(a)) => bnn_infer_cmd(a, &ctx)?,
        Command::Mensa(a) => mensa(a, &ctx)?,
        Command::Upmem(UpmemCommand::Scale(a)) => upmem_scale(a, &ctx)?,
        Command::Upmem(UpmemCommand::Gemv(a)) => upmem_gemv(a, &ctx)?,
        Command::Upmem(UpmemCommand::Compare(a)) => upmem_compare(a, &ctx)?,
        Command::Roofline(a) => roofline(a, &ctx)?,
        Command::Run => {
            let e = experiment.context("`run` needs --config naming an experiment kind")?;
            let mode = |section: &str, default: &str| {
                e.params.text(section, "mode").unwrap_or_else(|| default.to_string())
            };
            match e.kind {
                ExperimentKind::PumVerify => verify(&VerifyArgs::default(), &ctx)?,
                ExperimentKind::PumThroughput => throughput(&ThroughputArgs::default(), &ctx)?,
                ExperimentKind::Bnn if mode("bnn", "amdahl") == "infer" => {
                    bnn_infer_cmd(&InferArgs::default(), &ctx)?
                }
                ExperimentKind::Bnn => bnn_amdahl(&AmdahlArgs::default(), &ctx)?,
                ExperimentKind::Mensa => mensa(&MensaArgs::default(), &ctx)?,
                ExperimentKind::UpmemGemv => match mode("upmem", "gemv").as_str() {
                    "scale" => upmem_scale(&ScaleArgs::default(), &ctx)?,
                    "compare" => upmem_compare(&CompareArgs::default(), &ctx)?,
                    _ => upmem_gemv(&GemvArgs::default(), &ctx)?,
                },
                ExperimentKind::Roofline => roofline(&RooflineArgs::default(), &ctx)?,
            }
        }
    };

    for report in &outcome.reports {
        let paths = emit_report(&out, report)?;
        for line in &report.summary {
            println!("{line}");
        }
        println!("wrote {}", paths[0].display());
    }
    Ok(outcome.errors)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(errors) if errors.is_empty() => ExitCode::SUCCESS,
        Ok(errors) => {
            for e in errors {
                eprintln!("error: {e}");
            }
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
