//! Plot-data reproduction. Each figure number emits one CSV of raw
//! values; any log scaling is the plotting consumer's concern.

use crate::commands::{c2_value, parse_x_list, snap_to_prime};
use crate::config::RunConfig;
use crate::output::{join_champions, write_csv};
use anyhow::{bail, Context, Result};
use primediff::{
    aggregate_stats, build_table, champion_trace, count_differences, count_gaps, model_rows_even,
    transition_oscillation,
};

pub struct FigureArgs {
    pub which: u8,
    pub x: Option<u64>,
    pub x_list: Option<String>,
    pub pair: Option<String>,
    pub tol: Option<f64>,
}

const DEFAULT_STATS_LIST: &str = "1e4,3e4,1e5";
const ZOOM_D_MAX: usize = 10_000;

fn parse_pair(text: &str) -> Result<(u64, u64)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        bail!("expected --pair A,B, got {text:?}");
    }
    let a = parts[0]
        .parse()
        .with_context(|| format!("bad difference {:?}", parts[0]))?;
    let b = parts[1]
        .parse()
        .with_context(|| format!("bad difference {:?}", parts[1]))?;
    Ok((a, b))
}

pub fn figures(args: FigureArgs, cfg: &RunConfig) -> Result<()> {
    let x = args.x.unwrap_or(cfg.x_max);
    let tol = args.tol.unwrap_or(cfg.quad_rel_tol);
    let (header, rows): (&str, Vec<String>) = match args.which {
        1 => {
            let table = build_table(x)?;
            let hist = count_gaps(&table, x)?;
            let rows = hist
                .gap_counts()
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0)
                .map(|(d, &c)| format!("{d},{c}"))
                .collect();
            ("d,N", rows)
        }
        2 => {
            let table = build_table(x)?;
            let hist = count_differences(&table, x)?;
            let rows = hist
                .counts()
                .iter()
                .enumerate()
                .filter(|&(d, &c)| c > 0 && d % 2 == 0)
                .map(|(d, &c)| format!("{d},{c}"))
                .collect();
            ("d,G", rows)
        }
        3 => {
            let table = build_table(x)?;
            let hist = count_differences(&table, x)?;
            let rows = hist
                .counts()
                .iter()
                .enumerate()
                .take(ZOOM_D_MAX + 1)
                .filter(|&(d, &c)| c > 0 && d % 2 == 0)
                .map(|(d, &c)| {
                    let mark = u64::from(hist.champions().contains(&(d as u64)));
                    format!("{d},{c},{mark}")
                })
                .collect();
            ("d,G,is_champion", rows)
        }
        4 => {
            let table = build_table(x)?;
            let rows = champion_trace(&table, x)?
                .iter()
                .map(|r| {
                    let l = (r.x as f64).ln();
                    format!(
                        "{},{},{},{}",
                        r.x,
                        join_champions(&r.champions),
                        r.x as f64 / (l * l),
                        r.x as f64 / l
                    )
                })
                .collect();
            ("x,champions,lower_env,upper_env", rows)
        }
        5 => {
            let pair = parse_pair(args.pair.as_deref().unwrap_or("2310,30030"))?;
            let table = build_table(x)?;
            let trace = champion_trace(&table, x)?;
            let report = transition_oscillation(&trace, pair).with_context(|| {
                format!(
                    "oscillation window for {},{} is not covered at x = {x}; raise --x",
                    pair.0, pair.1
                )
            })?;
            let rows = trace
                .iter()
                .filter(|r| r.x >= report.window_lo && r.x <= report.window_hi)
                .map(|r| format!("{},{},{}", r.x, r.max_count, join_champions(&r.champions)))
                .collect();
            (crate::commands::TRACE_HEADER, rows)
        }
        6 | 7 => {
            let table = build_table(x)?;
            let c2 = c2_value(cfg)?;
            let model = model_rows_even(x, &table, c2, tol)?;
            if args.which == 6 {
                let rows = model
                    .iter()
                    .map(|r| format!("{},{},{}", r.d, r.g_exact, r.g_model))
                    .collect();
                ("d,G,G_model", rows)
            } else {
                let rows = model
                    .iter()
                    .map(|r| format!("{},{}", r.d, r.error))
                    .collect();
                ("d,E", rows)
            }
        }
        8 | 9 => {
            let list = args.x_list.as_deref().unwrap_or(DEFAULT_STATS_LIST);
            let xs = parse_x_list(list)?;
            let bound = *xs.iter().max().expect("list is nonempty");
            let table = build_table(bound)?;
            let c2 = c2_value(cfg)?;
            let mut rows = Vec::new();
            for &raw in &xs {
                let p = snap_to_prime(&table, raw)?;
                let s = aggregate_stats(p, &table, c2, tol)?;
                if args.which == 8 {
                    let guide = 1.0 / (s.pi_x as f64).sqrt();
                    rows.push(format!("{},{},{guide}", s.x, s.mu));
                } else {
                    rows.push(format!("{},{}", s.x, s.nu_normalized));
                }
            }
            if args.which == 8 {
                ("x,mu,guide", rows)
            } else {
                ("x,nu_over_pi2", rows)
            }
        }
        other => bail!("no figure {other}; figures are numbered 1 through 9"),
    };
    let path = cfg.out_path(&format!("figure{}.csv", args.which));
    write_csv(&path, header, &rows)?;
    println!(
        "figure {}: {} rows -> {}",
        args.which,
        rows.len(),
        path.display()
    );
    Ok(())
}
