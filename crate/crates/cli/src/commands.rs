//! Data-emitting subcommands. Verification and figure reproduction live
//! in their own modules.

use crate::checkpoint;
use crate::config::RunConfig;
use crate::output::{emit_json, join_champions, write_csv};
use anyhow::{bail, Context, Result};
use primediff::{
    aggregate_stats, build_table, champion_trace, count_differences, gap_trace, mertens_product,
    model_row, model_rows_even, primorials, singular_series, transition_table,
    twin_prime_constant, ChampionSweep, ModelRow, PrimeTable,
};
use serde_json::json;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub const TRACE_HEADER: &str = "x,max_count,champions";
const CHECKPOINT_EVERY: u64 = 4_096;

fn resolve_out(out: Option<PathBuf>, cfg: &RunConfig, default_name: &str) -> PathBuf {
    out.unwrap_or_else(|| cfg.out_path(default_name))
}

pub fn c2_value(cfg: &RunConfig) -> Result<f64> {
    Ok(twin_prime_constant(cfg.c2_prime_bound)?.0)
}

pub fn sieve(bound: u64, out: Option<PathBuf>, text: bool, cfg: &RunConfig) -> Result<()> {
    let table = build_table(bound)?;
    let default_name = if text { "primes.txt" } else { "primes.bin" };
    let path = resolve_out(out, cfg, default_name);
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let file =
        fs::File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    if text {
        for &p in table.primes() {
            writeln!(w, "{p}")?;
        }
    } else {
        w.write_all(&(table.count() as u64).to_le_bytes())?;
        for &p in table.primes() {
            w.write_all(&p.to_le_bytes())?;
        }
    }
    w.flush()?;
    println!(
        "sieve: {} primes up to {} -> {}",
        table.count(),
        bound,
        path.display()
    );
    Ok(())
}

pub fn diffs(
    x: Option<u64>,
    even_only: bool,
    out: Option<PathBuf>,
    cfg: &RunConfig,
) -> Result<()> {
    let x = x.unwrap_or(cfg.x_max);
    let table = build_table(x)?;
    let hist = count_differences(&table, x)?;
    let rows: Vec<String> = hist
        .counts()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(d, &c)| c > 0 && (!even_only || d % 2 == 0))
        .map(|(d, &c)| format!("{d},{c}"))
        .collect();
    let path = resolve_out(out, cfg, "diffs.csv");
    write_csv(&path, "d,G", &rows)?;
    println!("diffs: {} rows at x = {x} -> {}", rows.len(), path.display());
    Ok(())
}

pub fn gaps(max: Option<u64>, out: Option<PathBuf>, cfg: &RunConfig) -> Result<()> {
    let x_max = max.unwrap_or(cfg.x_max);
    let table = build_table(x_max)?;
    let rows: Vec<String> = gap_trace(&table, x_max)?
        .iter()
        .map(|r| format!("{},{},{}", r.x, r.max_count, join_champions(&r.champions)))
        .collect();
    let path = resolve_out(out, cfg, "gaps.csv");
    write_csv(&path, TRACE_HEADER, &rows)?;
    println!(
        "gaps: {} rows to x = {x_max} -> {}",
        rows.len(),
        path.display()
    );
    Ok(())
}

/// Reads back rows of a partially written trace, keeping those at or
/// below the checkpointed threshold. Lines are kept verbatim so a
/// resumed run reproduces the uninterrupted file byte for byte.
fn read_trace_prefix(path: &Path, x_cap: u64) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| {
        format!(
            "checkpoint exists but trace {} is unreadable; delete the checkpoint to restart",
            path.display()
        )
    })?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TRACE_HEADER => {}
        other => bail!(
            "trace {} does not look like a champion trace (header {:?})",
            path.display(),
            other
        ),
    }
    let mut rows = Vec::new();
    for line in lines {
        let x: u64 = line
            .split(',')
            .next()
            .unwrap_or("")
            .parse()
            .with_context(|| format!("bad row in {}: {line:?}", path.display()))?;
        if x <= x_cap {
            rows.push(line.to_string());
        }
    }
    Ok(rows)
}

pub fn champions(
    max: Option<u64>,
    out: Option<PathBuf>,
    halt_at: Option<u64>,
    cfg: &RunConfig,
) -> Result<()> {
    let x_max = max.unwrap_or(cfg.x_max);
    let path = resolve_out(out, cfg, "trace.csv");
    let table = build_table(x_max)?;
    let ckpt = cfg.checkpoint.as_deref();
    let mut rows: Vec<String>;
    let mut sweep = match ckpt.filter(|p| p.exists()) {
        Some(ck) => {
            let hist = checkpoint::load(ck)?;
            let resume_x = hist.x();
            rows = read_trace_prefix(&path, resume_x)?;
            let sweep = ChampionSweep::resume(&table, x_max, hist)?;
            // the trace has one row per odd prime consumed
            if rows.len() as u64 + 1 != sweep.state().n() {
                bail!(
                    "trace {} has {} rows below x = {resume_x} but the checkpoint consumed {} primes",
                    path.display(),
                    rows.len(),
                    sweep.state().n()
                );
            }
            eprintln!("champions: resuming from x = {resume_x}");
            sweep
        }
        None => {
            rows = Vec::new();
            ChampionSweep::new(&table, x_max)?
        }
    };
    let mut emitted = 0u64;
    while let Some(row) = sweep.next_row() {
        rows.push(format!(
            "{},{},{}",
            row.x,
            row.max_count,
            join_champions(&row.champions)
        ));
        emitted += 1;
        let halted = halt_at.is_some_and(|h| row.x >= h);
        if let Some(ck) = ckpt {
            if halted || emitted.is_multiple_of(CHECKPOINT_EVERY) {
                checkpoint::save(ck, sweep.state())?;
            }
        }
        if halted {
            write_csv(&path, TRACE_HEADER, &rows)?;
            println!(
                "champions: halted at x = {} with {} rows -> {}",
                row.x,
                rows.len(),
                path.display()
            );
            return Ok(());
        }
    }
    if let Some(ck) = ckpt {
        checkpoint::save(ck, sweep.state())?;
    }
    write_csv(&path, TRACE_HEADER, &rows)?;
    println!(
        "champions: {} rows to x = {x_max} -> {}",
        rows.len(),
        path.display()
    );
    Ok(())
}

pub fn transitions(max: Option<u64>, out: Option<PathBuf>, cfg: &RunConfig) -> Result<()> {
    let x_max = max.unwrap_or(cfg.x_max);
    let table = build_table(x_max)?;
    let trace = champion_trace(&table, x_max)?;
    let rows: Vec<String> = transition_table(&trace)?
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{}",
                r.primorial, r.first_x, r.last_x, r.open_ended
            )
        })
        .collect();
    let path = resolve_out(out, cfg, "transitions.csv");
    write_csv(&path, "primorial,first_x,last_x,open_ended", &rows)?;
    println!(
        "transitions: {} reigns to x = {x_max} -> {}",
        rows.len(),
        path.display()
    );
    Ok(())
}

pub fn singular(d: u64, out: Option<PathBuf>, cfg: &RunConfig) -> Result<()> {
    // trial division needs primes past sqrt(d) to certify a cofactor
    let bound = 1_000u64.max((d as f64).sqrt() as u64 + 2);
    let table = build_table(bound)?;
    let c2 = c2_value(cfg)?;
    let s = singular_series(d, c2, &table)?;
    emit_json(
        out.as_deref(),
        &json!({
            "d": s.d,
            "value": s.value,
            "c2": s.c2_used,
            "exact_ratio_num": s.ratio_num,
            "exact_ratio_den": s.ratio_den,
        }),
    )
}

pub fn primorial_ladder(max_k: u32, out: Option<PathBuf>) -> Result<()> {
    let items: Vec<serde_json::Value> = primorials(max_k)?
        .iter()
        .map(|p| {
            json!({
                "k": p.k,
                "value": p.value,
                "largest_prime": p.largest_prime,
            })
        })
        .collect();
    emit_json(out.as_deref(), &serde_json::Value::Array(items))
}

pub fn mertens(y: f64, out: Option<PathBuf>) -> Result<()> {
    if y.is_nan() || y < 3.0 {
        bail!("mertens needs y >= 3, got {y}");
    }
    let table = build_table(1_000u64.max(y.ceil() as u64))?;
    let value = mertens_product(y, &table)?;
    emit_json(
        out.as_deref(),
        &json!({
            "y": y,
            "value": value,
            "value_over_log_y": value / y.ln(),
        }),
    )
}

fn model_csv_row(r: &ModelRow) -> String {
    format!(
        "{},{},{},{},{}",
        r.d, r.g_exact, r.g_model, r.error, r.h_factor
    )
}

pub fn hl(
    x: Option<u64>,
    d: Option<u64>,
    all_even: bool,
    tol: Option<f64>,
    out: Option<PathBuf>,
    cfg: &RunConfig,
) -> Result<()> {
    let x = x.unwrap_or(cfg.x_max);
    let tol = tol.unwrap_or(cfg.quad_rel_tol);
    let table = build_table(x)?;
    let c2 = c2_value(cfg)?;
    let rows: Vec<ModelRow> = match (d, all_even) {
        (Some(d), false) => vec![model_row(x, d, &table, c2, tol)?],
        (None, true) => model_rows_even(x, &table, c2, tol)?,
        (None, false) => bail!("hl needs either --d D or --all-even"),
        (Some(_), true) => unreachable!("clap rejects --d with --all-even"),
    };
    let lines: Vec<String> = rows.iter().map(model_csv_row).collect();
    let path = resolve_out(out, cfg, "model.csv");
    write_csv(&path, "d,G,G_model,E,H", &lines)?;
    println!(
        "hl: {} rows at x = {x}, tol {tol:e} -> {}",
        lines.len(),
        path.display()
    );
    Ok(())
}

/// Parses a threshold list such as `1e4,3e4,1e5` or plain integers.
pub fn parse_x_list(list: &str) -> Result<Vec<u64>> {
    let mut xs = Vec::new();
    for part in list.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v: f64 = part
            .parse()
            .with_context(|| format!("bad threshold {part:?}"))?;
        if !v.is_finite() || !(3.0..=9e15).contains(&v) {
            bail!("threshold {part:?} out of range");
        }
        xs.push(v as u64);
    }
    if xs.is_empty() {
        bail!("empty threshold list");
    }
    Ok(xs)
}

/// Largest prime at or below `x`; model statistics are defined at prime
/// thresholds only.
pub fn snap_to_prime(table: &PrimeTable, x: u64) -> Result<u64> {
    let k = table.prime_count(x)?;
    if k == 0 {
        bail!("no prime at or below {x}");
    }
    Ok(table.nth_prime(k)?)
}

pub fn hl_stats(
    x_list: &str,
    tol: Option<f64>,
    out: Option<PathBuf>,
    cfg: &RunConfig,
) -> Result<()> {
    let xs = parse_x_list(x_list)?;
    let tol = tol.unwrap_or(cfg.quad_rel_tol);
    let bound = *xs.iter().max().expect("list is nonempty");
    let table = build_table(bound)?;
    let c2 = c2_value(cfg)?;
    let mut rows = Vec::new();
    for &x in &xs {
        let p = snap_to_prime(&table, x)?;
        let s = aggregate_stats(p, &table, c2, tol)?;
        rows.push(format!(
            "{},{},{},{},{}",
            s.x, s.pi_x, s.mu, s.nu, s.nu_normalized
        ));
    }
    let path = resolve_out(out, cfg, "stats.csv");
    write_csv(&path, "x,pi,mu,nu,nu_over_pi2", &rows)?;
    println!("hl-stats: {} thresholds -> {}", rows.len(), path.display());
    Ok(())
}
