//! `ergm`: edge-triangle exponential random graph numerics from the command line.

mod commands;
mod error;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ergm_core::sampler::SamplerConfig;
use serde::Serialize;

use commands::Context;
use error::CliError;
use manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ergm", version, about = "Edge-triangle exponential random graph numerics")]
struct Cli {
    /// Directory for default output paths.
    #[arg(long, global = true, env = "ERGM_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Format of tabular outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form and optimized free energy on both tangent cones.
    Table1 {
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower and upper boundary of the edge-triangle density region.
    Boundary {
        #[arg(long, default_value_t = 201)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ground-state decision between k+1 and k+2 classes along o_k.
    Compare {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        r: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ground-state decisions over a (k, r) grid.
    Sweep {
        /// `a..b` inclusive, or a comma list.
        #[arg(long, default_value = "1..5")]
        k: String,
        /// `a..b` sampled at --r-points values, or a comma list.
        #[arg(long, default_value = "20..200")]
        r: String,
        #[arg(long, default_value_t = 10)]
        r_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Metropolis chains for the finite-n model.
    Sample {
        #[arg(long, default_value_t = 60)]
        n: usize,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        beta1: f64,
        #[arg(long, default_value_t = -7.5, allow_negative_numbers = true)]
        beta2: f64,
        #[arg(long, default_value_t = 5_000_000)]
        steps: u64,
        #[arg(long, default_value_t = 1_000_000)]
        burn_in: u64,
        #[arg(long, default_value_t = 1_000)]
        thin: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        chains: usize,
        /// Comma list of empty, complete, bipartite, random(p); cycled over chains.
        #[arg(long, default_value = "random(0.5),empty,complete,bipartite")]
        init: String,
        /// File name prefix for the outputs in --out-dir.
        #[arg(long, default_value = "sample")]
        prefix: String,
    },
    /// Exhaustive finite-n free energy for n ≤ 7.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        beta1: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta2: f64,
        /// Also write the probability of every labeled graph.
        #[arg(long)]
        distribution: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the command recorded in a manifest.
    Replay { manifest: PathBuf },
}

fn run(cli: Cli, mut args: Vec<String>) -> Result<(), CliError> {
    // Recorded arguments must not depend on ERGM_OUT_DIR.
    if !args.iter().any(|a| a == "--out-dir" || a.starts_with("--out-dir=")) {
        args.splice(0..0, ["--out-dir".to_string(), cli.out_dir.display().to_string()]);
    }
    let ctx = Context {
        out_dir: cli.out_dir,
        format: cli.format,
        args,
    };
    match cli.command {
        Command::Table1 { r, k, out } => commands::table1(&ctx, r, k, out),
        Command::Boundary { resolution, out } => commands::boundary(&ctx, resolution, out),
        Command::Compare { k, r, out } => commands::compare(&ctx, k, r, out),
        Command::Sweep { k, r, r_points, out } => commands::sweep_cmd(&ctx, &k, &r, r_points, out),
        Command::Sample {
            n,
            beta1,
            beta2,
            steps,
            burn_in,
            thin,
            seed,
            chains,
            init,
            prefix,
        } => {
            let config = SamplerConfig {
                n,
                beta: [beta1, beta2],
                steps,
                burn_in,
                thin,
                seed,
                chains,
                initial: commands::parse_initials(&init)?,
            };
            config.validate()?;
            commands::sample(&ctx, config, &prefix)
        }
        Command::Exact {
            n,
            beta1,
            beta2,
            distribution,
            out,
        } => commands::exact(&ctx, n, [beta1, beta2], distribution, out),
        Command::Replay { manifest } => {
            let m = RunManifest::read(&manifest)?;
            std::env::set_current_dir(&m.working_dir).map_err(|e| CliError::io(&m.working_dir, e))?;
            let argv = std::iter::once("ergm".to_string()).chain(m.args.iter().cloned());
            let cli = Cli::try_parse_from(argv)
                .map_err(|e| CliError::Usage(format!("manifest arguments: {e}")))?;
            if matches!(cli.command, Command::Replay { .. }) {
                return Err(CliError::Usage("a manifest cannot replay another replay".into()));
            }
            run(cli, m.args)
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
