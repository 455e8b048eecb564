//! Command line driver for prime difference statistics: sieving, exact
//! difference and gap counts, champion traces, singular series values,
//! pair-count model evaluation, verification checks, and figure data.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on
//! usage or computation errors.

mod checkpoint;
mod commands;
mod config;
mod figures;
mod output;
mod verify;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::RunConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "primediff", version, about = "Prime difference statistics and champions")]
struct Cli {
    /// Optional TOML config file; flags override its values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory for default-named artifacts
    #[arg(long, global = true, value_name = "PATH")]
    out_dir: Option<PathBuf>,
    /// Worker threads for the model scans; defaults to all cores
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Champion sweep snapshot file, enables resumable runs
    #[arg(long, global = true, value_name = "PATH")]
    checkpoint: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve primes up to a bound and write them out
    Sieve {
        #[arg(long)]
        bound: u64,
        /// Output file; defaults to primes.bin (or primes.txt with --text)
        #[arg(long)]
        out: Option<PathBuf>,
        /// One prime per line instead of the binary format
        #[arg(long)]
        text: bool,
    },
    /// Exact difference counts G(x,d) at one threshold
    Diffs {
        #[arg(long)]
        x: Option<u64>,
        /// Keep only even differences
        #[arg(long)]
        even_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jump champion trace N*(x) over consecutive prime gaps
    Gaps {
        #[arg(long)]
        max: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Champion trace D*(x) at every prime threshold, resumable
    Champions {
        #[arg(long)]
        max: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stop after the first row at or past this threshold (the
        /// checkpoint and a partial trace are still written)
        #[arg(long, value_name = "X")]
        halt_at: Option<u64>,
    },
    /// First and last championship reign per primorial
    Transitions {
        #[arg(long)]
        max: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Singular series value for one difference, as JSON
    Singular {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The primorial ladder up to index K, as JSON
    Primorials {
        #[arg(long, value_name = "K")]
        max_k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mertens-style product over primes up to y, as JSON
    Mertens {
        #[arg(long)]
        y: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair-count model against exact counts at one threshold
    Hl {
        #[arg(long)]
        x: Option<u64>,
        /// Evaluate a single difference
        #[arg(long, conflicts_with = "all_even")]
        d: Option<u64>,
        /// Evaluate every even difference in [2, x-3]
        #[arg(long)]
        all_even: bool,
        /// Quadrature relative tolerance
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate model error statistics over a threshold list
    HlStats {
        /// Comma-separated thresholds, e.g. 1e4,3e4,1e5; each snaps down
        /// to the nearest prime
        #[arg(long, value_name = "LIST")]
        x_list: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification checks and write a JSON report
    Verify {
        #[arg(long)]
        max: Option<u64>,
        /// Comma-separated subset of primorial,envelope,lemma4,lemma5,factors
        #[arg(long, value_name = "LIST")]
        checks: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        envelope_slack: Option<f64>,
        #[arg(long)]
        sieve_c: Option<f64>,
        #[arg(long)]
        sieve_slack: Option<f64>,
        #[arg(long)]
        lemma5_slack: Option<f64>,
    },
    /// Emit plot data for one of the nine figures
    Figures {
        #[arg(long)]
        which: u8,
        #[arg(long)]
        x: Option<u64>,
        /// Thresholds for figures 8 and 9
        #[arg(long, value_name = "LIST")]
        x_list: Option<String>,
        /// Oscillation pair for figure 5, e.g. 210,2310
        #[arg(long, value_name = "A,B")]
        pair: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(dir) = cli.out_dir {
        cfg.out_dir = dir;
    }
    if let Some(ckpt) = cli.checkpoint {
        cfg.checkpoint = Some(ckpt);
    }
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot size the worker pool")?;
    }
    match cli.command {
        Command::Sieve { bound, out, text } => commands::sieve(bound, out, text, &cfg)?,
        Command::Diffs { x, even_only, out } => commands::diffs(x, even_only, out, &cfg)?,
        Command::Gaps { max, out } => commands::gaps(max, out, &cfg)?,
        Command::Champions { max, out, halt_at } => commands::champions(max, out, halt_at, &cfg)?,
        Command::Transitions { max, out } => commands::transitions(max, out, &cfg)?,
        Command::Singular { d, out } => commands::singular(d, out, &cfg)?,
        Command::Primorials { max_k, out } => commands::primorial_ladder(max_k, out)?,
        Command::Mertens { y, out } => commands::mertens(y, out)?,
        Command::Hl {
            x,
            d,
            all_even,
            tol,
            out,
        } => commands::hl(x, d, all_even, tol, out, &cfg)?,
        Command::HlStats { x_list, tol, out } => commands::hl_stats(&x_list, tol, out, &cfg)?,
        Command::Verify {
            max,
            checks,
            report,
            envelope_slack,
            sieve_c,
            sieve_slack,
            lemma5_slack,
        } => {
            return verify::verify(
                verify::VerifyArgs {
                    max,
                    checks,
                    report,
                    envelope_slack,
                    sieve_c,
                    sieve_slack,
                    lemma5_slack,
                },
                &cfg,
            );
        }
        Command::Figures {
            which,
            x,
            x_list,
            pair,
            tol,
        } => figures::figures(
            figures::FigureArgs {
                which,
                x,
                x_list,
                pair,
                tol,
            },
            &cfg,
        )?,
    }
    Ok(ExitCode::SUCCESS)
}
