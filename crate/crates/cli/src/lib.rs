//! Command-line front end for `entrate-core`.
//!
//! Subcommands read a JSON model file and write data to stdout: a table or
//! JSON record (`entropy`), CSV (`sweep`, `support`, `oracle`), or a
//! condition report (`validate`). Diagnostics go to stderr, controlled by
//! `ENTRATE_LOG={quiet|info|debug}`.

pub mod config;
pub mod output;

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entrate_core::{
    block_entropies, build_symbol_matrices, check_condition1, compute_support, entropy_rate,
    stationary_distribution, LogBase, DEFAULT_DEDUP_TOL,
};
use log::{debug, info};
use thiserror::Error;

use crate::config::{parse_config, ConfigError, ModelConfig};

#[derive(Debug, Parser)]
#[command(name = "entrate", version, about = "Entropy rate of a hidden Markov process with one unambiguous symbol")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated entropy rate H_N with its error bound.
    Entropy {
        #[command(flatten)]
        common: CommonArgs,
        /// Truncation depth N (defaults to the config's n_terms, else 100).
        #[arg(long)]
        n_terms: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// CSV of (N, H_N, err_bound) for N = from, from+step, …, ≤ to.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = 1, value_parser = parse_step)]
        step: usize,
    },
    /// CSV of the support atlas: chain j, orbit index m, point, c_{j,m}.
    Support {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        n_terms: Option<usize>,
    },
    /// Exact block entropies S_k for k = 1..n by full word enumeration.
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        block_len: usize,
    },
    /// Check the model assumptions; exit 0 iff everything holds.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON model file.
    pub config: PathBuf,
    /// Logarithm base: 2, e, or q (the alphabet size).
    #[arg(long, value_parser = parse_log_base)]
    pub log_base: Option<LogBase>,
}

fn parse_log_base(s: &str) -> Result<LogBase, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Model(#[from] entrate_core::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("write failed: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 1 for invalid input, 2 for numerical failures, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(ConfigError::FileNotFound(_) | ConfigError::Io { .. }) => 3,
            CliError::Config(_) | CliError::Invalid(_) => 1,
            CliError::Model(e) if e.is_validation() => 1,
            CliError::Model(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn load(common: &CommonArgs) -> Result<(ModelConfig, LogBase), CliError> {
    let cfg = parse_config(&common.config)?;
    let base = common.log_base.unwrap_or(cfg.log_base);
    debug!("loaded {} (q = {}, log base {base})", common.config.display(), cfg.q);
    Ok((cfg, base))
}

/// Runs one subcommand, writing its data to `out`. Returns the process exit
/// status on success (`validate` may return 1 without an error).
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Entropy { common, n_terms, format } => {
            let (cfg, base) = load(&common)?;
            let model = cfg.validate()?;
            let depth = n_terms.unwrap_or(cfg.n_terms);
            let sol = entropy_rate(&model, depth, base)?;
            info!("H_{depth} = {} (mass {})", sol.h_n, sol.total_mass);
            let text = match format {
                Format::Table => output::entropy_table(&sol),
                Format::Json => output::entropy_json(&sol),
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Sweep { common, from, to, step } => {
            if from > to {
                return Err(CliError::Invalid(format!("--from {from} exceeds --to {to}")));
            }
            let (cfg, base) = load(&common)?;
            let model = cfg.validate()?;
            out.write_all(output::sweep_header().as_bytes())?;
            for depth in (from..=to).step_by(step) {
                let sol = entropy_rate(&model, depth, base)?;
                out.write_all(output::sweep_row(&sol).as_bytes())?;
            }
        }
        Command::Support { common, n_terms } => {
            let (cfg, _) = load(&common)?;
            let model = cfg.validate()?;
            let sym = build_symbol_matrices(&model);
            let depth = n_terms.unwrap_or(cfg.n_terms);
            let atlas = compute_support(&sym, depth, DEFAULT_DEDUP_TOL)?;
            info!(
                "atlas: {} points, finite support {}, tau_bar {:?}",
                atlas.len(),
                atlas.finite_support,
                atlas.tau_bar.as_slice()
            );
            out.write_all(output::support_csv(&atlas, model.q()).as_bytes())?;
        }
        Command::Oracle { common, block_len } => {
            let (cfg, base) = load(&common)?;
            let model = cfg.validate()?;
            let sym = build_symbol_matrices(&model);
            let st = stationary_distribution(model.transition())?;
            let s = block_entropies(&sym, &st, block_len, base)?;
            out.write_all(output::oracle_csv(&s).as_bytes())?;
        }
        Command::Validate { common } => {
            let (cfg, _) = load(&common)?;
            let model = cfg.validate()?;
            let report = check_condition1(&model);
            let lines = [
                format!("assumption1: ok (p = {}, P = {}, eps_max = {})",
                    output::sig(model.p_min()), output::sig(model.p_max()), output::sig(model.eps_max())),
                format!("condition1.product: {} (c = {}, closed form {})",
                    pass(report.product_check_passed), output::sig(report.c_witness),
                    if report.closed_form_witness { "used" } else { "failed, fell back to the largest valid c" }),
                format!("condition1.perron_simple: {} (a0 = {})", pass(report.perron_simple), report.a0),
                format!("condition1.irreducible: {}", pass(report.irreducible)),
                format!("e0_hadamard_ratio: {}", output::sig(report.e0_hadamard_ratio)),
            ];
            for l in lines {
                writeln!(out, "{l}")?;
            }
            return Ok(if report.all_passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn pass(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

/// Maps `ENTRATE_LOG` to a stderr logger. Unset means quiet.
pub fn init_logging() {
    let level = match std::env::var("ENTRATE_LOG").as_deref() {
        Ok("debug") => log::LevelFilter::Debug,
        Ok("info") => log::LevelFilter::Info,
        _ => log::LevelFilter::Off,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .init();
}

fn parse_step(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("step must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}
