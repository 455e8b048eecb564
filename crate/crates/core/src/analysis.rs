//! Structural checks on champion traces: transition points between
//! primorial champions, primoriality of champion sets, envelope and
//! sieve-bound verification, and factor profiles of champions.

use crate::diffcount::{self, ChampionTraceRow};
use crate::error::{Error, Result};
use crate::sieve::PrimeTable;
use crate::singular;

/// Reign of one primorial within a champion sweep. `open_ended` marks a
/// reign still in progress when the sweep stopped; its `last_x` is an
/// artifact of the sweep bound, not a transition point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRow {
    pub primorial: u64,
    pub first_x: u64,
    pub last_x: u64,
    pub open_ended: bool,
}

/// Envelope check for one trace row: is every champion inside
/// `[lower_env / slack, upper_env * slack]`?
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub x: u64,
    pub pdc_set: Vec<u64>,
    /// `x / (log x)^2`, without slack.
    pub lower_env: f64,
    /// `x / log x`, without slack.
    pub upper_env: f64,
    /// Parallel to `pdc_set`.
    pub within: Vec<bool>,
}

/// Extremes over a slice of [`BoundReport`]s. The margin ratios are
/// slack-free, so one summary serves any slack factor.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSummary {
    pub rows_checked: u64,
    pub failures: Vec<(u64, u64)>,
    /// Smallest `d / (x / (log x)^2)` seen, with its `(x, d)`.
    pub min_lower_ratio: f64,
    pub min_lower_at: (u64, u64),
    /// Largest `d / (x / log x)` seen, with its `(x, d)`.
    pub max_upper_ratio: f64,
    pub max_upper_at: (u64, u64),
}

/// Behaviour of a champion pair inside its transition window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OscillationReport {
    pub d_small: u64,
    pub d_large: u64,
    /// First x with the larger difference in `D*(x)`.
    pub window_lo: u64,
    /// Last x with the smaller difference in `D*(x)`.
    pub window_hi: u64,
    pub rows: u64,
    /// x values whose champion set is exactly the pair.
    pub tie_rows: Vec<u64>,
    /// x values whose champion set is not a subset of the pair.
    pub violations: Vec<u64>,
}

/// Outcome of the upper-bound scan `G(x,d) <= C S(d) x/(log x)^2 (1+slack)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveBoundReport {
    pub x: u64,
    pub c: f64,
    pub slack: f64,
    /// Largest `G(x,d) / (S(d) x/(log x)^2)` over even d with G > 0.
    pub max_ratio: f64,
    pub max_ratio_d: u64,
    pub pass: bool,
}

/// Lower-bound check at `x`: the pointwise bound against `G*(x)` and the
/// averaged inequality over multiples of `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub x: u64,
    /// Largest primorial not exceeding `x / (log x)^2`.
    pub q: u64,
    pub phi_q: u64,
    /// `(1/2)(q/phi(q))(x/(log x)^2 - q/log x)`.
    pub pointwise_bound: f64,
    pub g_star: u32,
    /// `sum over m <= x/q of G(x, m q)`.
    pub averaged_lhs: u64,
    /// `(1/2)(x^2/(phi(q)(log x)^2) - x/log x)`, without slack.
    pub averaged_rhs: f64,
    pub slack: f64,
    pub pointwise_pass: bool,
    pub averaged_pass: bool,
    /// Set when a bound is non-positive and the check holds vacuously.
    pub vacuous: bool,
}

/// Multiplicative structure of one champion.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorProfile {
    pub x: u64,
    pub d_star: u64,
    pub omega: u32,
    /// `M(d*) = sum of 1/p over primes p | d*`.
    pub m_value: f64,
    /// `sum of 1/p over primes p <= 2 log x not dividing d*`.
    pub deficiency: f64,
    /// `deficiency <= 2.08`, the asymptotic expectation.
    pub within_asymptotic_bound: bool,
    /// `deficiency > 2.08 * 1.5`, a real structural anomaly.
    pub flagged: bool,
    /// d* is even with an odd prime factor at most 25583.
    pub corollary3_ok: bool,
}

pub const DEFICIENCY_BOUND: f64 = 2.08;
pub const COROLLARY3_PRIME_CAP: u64 = 25_583;

fn require_full_trace(trace: &[ChampionTraceRow]) -> Result<()> {
    let first = trace.first().ok_or(Error::EmptyTrace)?;
    let last = trace.last().expect("nonempty");
    if first.x != 3 {
        return Err(Error::WindowNotCovered {
            have_lo: first.x,
            have_hi: last.x,
            want_lo: 3,
            want_hi: last.x,
        });
    }
    Ok(())
}

/// Reigns of every primorial that appears in some champion set, ordered
/// by first occurrence. The trace must start at x = 3 so that first
/// occurrences are genuine.
pub fn transition_table(trace: &[ChampionTraceRow]) -> Result<Vec<TransitionRow>> {
    require_full_trace(trace)?;
    let primorials: Vec<u64> = singular::primorials(singular::MAX_PRIMORIAL_K)?
        .iter()
        .map(|p| p.value)
        .collect();
    let sweep_end = trace.last().expect("nonempty").x;
    let mut rows: Vec<TransitionRow> = Vec::new();
    for row in trace {
        for &d in &row.champions {
            if primorials.binary_search(&d).is_err() {
                continue;
            }
            match rows.iter_mut().find(|r| r.primorial == d) {
                Some(r) => r.last_x = row.x,
                None => rows.push(TransitionRow {
                    primorial: d,
                    first_x: row.x,
                    last_x: row.x,
                    open_ended: false,
                }),
            }
        }
    }
    for r in &mut rows {
        r.open_ended = r.last_x == sweep_end;
    }
    Ok(rows)
}

/// Every `(x, d)` with `d` a champion at `x` outside the expected set
/// `{1, 3, 4}` plus the primorials. Expected empty over the explored
/// range.
pub fn primoriality_violations(trace: &[ChampionTraceRow]) -> Vec<(u64, u64)> {
    let primorials: Vec<u64> = singular::primorials(singular::MAX_PRIMORIAL_K)
        .expect("static table")
        .iter()
        .map(|p| p.value)
        .collect();
    let mut out = Vec::new();
    for row in trace {
        for &d in &row.champions {
            let ok = d == 1 || d == 3 || d == 4 || primorials.binary_search(&d).is_ok();
            if !ok {
                out.push((row.x, d));
            }
        }
    }
    out
}

/// Champion behaviour across the handover from `d_small` to `d_large`.
/// The window runs from the first appearance of the larger to the last
/// appearance of the smaller; inside it each champion set should be a
/// nonempty subset of the pair, with at least one exact tie.
pub fn transition_oscillation(
    trace: &[ChampionTraceRow],
    pair: (u64, u64),
) -> Result<OscillationReport> {
    let (d_small, d_large) = (pair.0.min(pair.1), pair.0.max(pair.1));
    if d_small == d_large {
        return Err(Error::DegeneratePair(d_small));
    }
    let table = transition_table(trace)?;
    let find = |d: u64| -> Result<&TransitionRow> {
        table
            .iter()
            .find(|r| r.primorial == d)
            .ok_or(Error::ChampionAbsent(d))
    };
    let small_row = find(d_small)?;
    let large_row = find(d_large)?;
    if small_row.open_ended {
        // the smaller is still reigning; its true last occurrence lies
        // beyond the sweep
        let last = trace.last().expect("nonempty").x;
        return Err(Error::WindowNotCovered {
            have_lo: trace[0].x,
            have_hi: last,
            want_lo: large_row.first_x,
            want_hi: last + 1,
        });
    }
    let (window_lo, window_hi) = (large_row.first_x, small_row.last_x);
    let mut rows = 0;
    let mut tie_rows = Vec::new();
    let mut violations = Vec::new();
    for row in trace {
        if row.x < window_lo || row.x > window_hi {
            continue;
        }
        rows += 1;
        let subset = row.champions.iter().all(|&d| d == d_small || d == d_large);
        if !subset {
            violations.push(row.x);
        } else if row.champions.len() == 2 {
            tie_rows.push(row.x);
        }
    }
    Ok(OscillationReport {
        d_small,
        d_large,
        window_lo,
        window_hi,
        rows,
        tie_rows,
        violations,
    })
}

/// Envelope check `x/(slack (log x)^2) <= d <= slack x/log x` for every
/// champion, on rows with `x >= 100`.
pub fn theorem1_envelope(trace: &[ChampionTraceRow], slack: f64) -> Result<Vec<BoundReport>> {
    if slack.is_nan() || slack < 1.0 {
        return Err(Error::SlackBelowOne(slack));
    }
    let mut out = Vec::new();
    for row in trace {
        if row.x < 100 {
            continue;
        }
        let x = row.x as f64;
        let l = x.ln();
        let lower_env = x / (l * l);
        let upper_env = x / l;
        let within = row
            .champions
            .iter()
            .map(|&d| lower_env / slack <= d as f64 && d as f64 <= slack * upper_env)
            .collect();
        out.push(BoundReport {
            x: row.x,
            pdc_set: row.champions.clone(),
            lower_env,
            upper_env,
            within,
        });
    }
    Ok(out)
}

/// Failures and extreme margins over envelope reports.
pub fn envelope_summary(reports: &[BoundReport]) -> EnvelopeSummary {
    let mut s = EnvelopeSummary {
        rows_checked: reports.len() as u64,
        failures: Vec::new(),
        min_lower_ratio: f64::INFINITY,
        min_lower_at: (0, 0),
        max_upper_ratio: 0.0,
        max_upper_at: (0, 0),
    };
    for r in reports {
        for (i, &d) in r.pdc_set.iter().enumerate() {
            if !r.within[i] {
                s.failures.push((r.x, d));
            }
            let lo = d as f64 / r.lower_env;
            if lo < s.min_lower_ratio {
                s.min_lower_ratio = lo;
                s.min_lower_at = (r.x, d);
            }
            let hi = d as f64 / r.upper_env;
            if hi > s.max_upper_ratio {
                s.max_upper_ratio = hi;
                s.max_upper_at = (r.x, d);
            }
        }
    }
    s
}

/// Scans all even `d` for violations of
/// `G(x,d) <= C S(d) x/(log x)^2 (1 + slack)` and reports the largest
/// ratio `G / (S(d) x/(log x)^2)` attained. Odd `d` carry no series mass
/// and `G <= 1` there, so they are excluded.
pub fn sieve_bound_check(
    x: u64,
    table: &PrimeTable,
    c2: f64,
    c: f64,
    slack_frac: f64,
) -> Result<SieveBoundReport> {
    if !(0.0..1.0).contains(&slack_frac) {
        return Err(Error::SlackFractionOutOfRange(slack_frac));
    }
    if x < 100 {
        return Err(Error::ThresholdTooSmall(x));
    }
    let hist = diffcount::count_differences(table, x)?;
    let ratios = singular::singular_ratio_sieve(x as usize, table)?;
    let l = (x as f64).ln();
    let scale = x as f64 / (l * l);
    let mut max_ratio = 0.0f64;
    let mut max_ratio_d = 0u64;
    let counts = hist.counts();
    let mut d = 2usize;
    while d < counts.len() {
        if counts[d] > 0 {
            let series = 2.0 * c2 * ratios[d];
            let ratio = counts[d] as f64 / (series * scale);
            if ratio > max_ratio {
                max_ratio = ratio;
                max_ratio_d = d as u64;
            }
        }
        d += 2;
    }
    Ok(SieveBoundReport {
        x,
        c,
        slack: slack_frac,
        max_ratio,
        max_ratio_d,
        pass: max_ratio <= c * (1.0 + slack_frac),
    })
}

/// The ratio `G(x,d) / (S(d) x/(log x)^2)` for a single even difference.
pub fn sieve_bound_ratio(x: u64, d: u64, table: &PrimeTable, c2: f64) -> Result<f64> {
    let s = singular::singular_series(d, c2, table)?;
    if s.value == 0.0 {
        return Ok(0.0);
    }
    let g = crate::hlmodel::exact_count(table, x, d)?;
    let l = (x as f64).ln();
    Ok(g as f64 * l * l / (s.value * x as f64))
}

/// Lower-bound checks with `q` the largest primorial not exceeding
/// `x/(log x)^2`: the pointwise bound must fall below `G*(x)`, and the
/// average of `G(x, m q)` over `m <= x/q` must reach the main term up to
/// the slack fraction.
pub fn lemma5_lower_bound(x: u64, table: &PrimeTable, slack_frac: f64) -> Result<LowerBoundReport> {
    if !(0.0..1.0).contains(&slack_frac) {
        return Err(Error::SlackFractionOutOfRange(slack_frac));
    }
    if x < 1_000 {
        return Err(Error::ThresholdTooSmall(x));
    }
    let xf = x as f64;
    let l = xf.ln();
    let q = singular::primorial_floor(xf / (l * l))?.value;
    let phi_q = singular::euler_phi(q, table)?;
    let pointwise_bound = 0.5 * (q as f64 / phi_q as f64) * (xf / (l * l) - q as f64 / l);
    let hist = diffcount::count_differences(table, x)?;
    let g_star = hist.max_count();
    let mut averaged_lhs = 0u64;
    let mut m = q;
    while m <= x {
        averaged_lhs += hist.count(m) as u64;
        m += q;
    }
    let averaged_rhs = 0.5 * (xf * xf / (phi_q as f64 * l * l) - xf / l);
    let vacuous = pointwise_bound <= 0.0 || averaged_rhs <= 0.0;
    Ok(LowerBoundReport {
        x,
        q,
        phi_q,
        pointwise_bound,
        g_star,
        averaged_lhs,
        averaged_rhs,
        slack: slack_frac,
        pointwise_pass: vacuous || (g_star as f64) > pointwise_bound,
        averaged_pass: vacuous || averaged_lhs as f64 >= averaged_rhs * (1.0 - slack_frac),
        vacuous,
    })
}

/// Factor structure of the champion `d_star` at threshold `x`.
pub fn factor_profile(x: u64, d_star: u64, table: &PrimeTable) -> Result<FactorProfile> {
    if x < 3 {
        return Err(Error::ThresholdTooSmall(x));
    }
    let fac = singular::factorize(d_star, table)?;
    let m_value = singular::mertens_divisor_sum(d_star, table)?;
    let cap = 2.0 * (x as f64).ln();
    let mut deficiency = 0.0;
    for &p in table.primes() {
        if p as f64 > cap {
            break;
        }
        if !fac.divisible_by(p) {
            deficiency += 1.0 / p as f64;
        }
    }
    let corollary3_ok = d_star.is_multiple_of(2)
        && fac
            .factors
            .iter()
            .any(|&(p, _)| p > 2 && p <= COROLLARY3_PRIME_CAP);
    Ok(FactorProfile {
        x,
        d_star,
        omega: fac.omega(),
        m_value,
        deficiency,
        within_asymptotic_bound: deficiency <= DEFICIENCY_BOUND,
        flagged: deficiency > DEFICIENCY_BOUND * 1.5,
        corollary3_ok,
    })
}

/// Profiles for every champion in one trace row.
pub fn factor_profiles(row: &ChampionTraceRow, table: &PrimeTable) -> Result<Vec<FactorProfile>> {
    row.champions
        .iter()
        .map(|&d| factor_profile(row.x, d, table))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffcount::champion_trace;
    use crate::sieve::build_table;
    use std::sync::LazyLock;

    static TRACE_2000: LazyLock<Vec<ChampionTraceRow>> = LazyLock::new(|| {
        let table = build_table(2_000).unwrap();
        champion_trace(&table, 2_000).unwrap()
    });

    #[test]
    fn transition_table_small_sweep() {
        let rows = transition_table(&TRACE_2000).unwrap();
        let expect = [
            (2, 5, 19, false),
            (6, 17, 179, false),
            (30, 131, 1723, false),
            (210, 1423, 1999, true),
        ];
        assert_eq!(rows.len(), expect.len());
        for (row, &(p, first, last, open)) in rows.iter().zip(&expect) {
            assert_eq!(
                (row.primorial, row.first_x, row.last_x, row.open_ended),
                (p, first, last, open)
            );
        }
    }

    #[test]
    fn transition_table_rejects_partial_trace() {
        assert_eq!(transition_table(&[]), Err(Error::EmptyTrace));
        let tail = &TRACE_2000[5..];
        assert!(matches!(
            transition_table(tail),
            Err(Error::WindowNotCovered { .. })
        ));
    }

    #[test]
    fn primoriality_holds_on_small_sweep() {
        assert!(primoriality_violations(&TRACE_2000).is_empty());
        let fake = vec![ChampionTraceRow {
            x: 11,
            max_count: 9,
            champions: vec![6, 8],
        }];
        assert_eq!(primoriality_violations(&fake), vec![(11, 8)]);
    }

    #[test]
    fn oscillation_window_six_thirty() {
        let rep = transition_oscillation(&TRACE_2000, (6, 30)).unwrap();
        assert_eq!((rep.window_lo, rep.window_hi), (131, 179));
        assert_eq!(rep.rows, 10);
        assert_eq!(rep.tie_rows.len(), 5);
        assert_eq!(rep.tie_rows[0], 131);
        assert!(rep.violations.is_empty());
        // order of the pair does not matter
        let swapped = transition_oscillation(&TRACE_2000, (30, 6)).unwrap();
        assert_eq!(rep, swapped);
    }

    #[test]
    fn oscillation_window_thirty_to_two_ten() {
        let rep = transition_oscillation(&TRACE_2000, (30, 210)).unwrap();
        assert_eq!((rep.window_lo, rep.window_hi), (1423, 1723));
        assert_eq!(rep.rows, 46);
        assert_eq!(rep.tie_rows.len(), 8);
        assert_eq!(rep.tie_rows[0], 1423);
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn oscillation_window_errors() {
        assert_eq!(
            transition_oscillation(&TRACE_2000, (6, 6)),
            Err(Error::DegeneratePair(6))
        );
        assert_eq!(
            transition_oscillation(&TRACE_2000, (210, 2310)),
            Err(Error::ChampionAbsent(2310))
        );
        // smaller member still reigning at the sweep end: window unclosed
        let synth = vec![
            ChampionTraceRow {
                x: 3,
                max_count: 1,
                champions: vec![30],
            },
            ChampionTraceRow {
                x: 5,
                max_count: 2,
                champions: vec![6],
            },
        ];
        assert!(matches!(
            transition_oscillation(&synth, (6, 30)).unwrap_err(),
            Error::WindowNotCovered { .. }
        ));
    }

    #[test]
    fn envelope_small_sweep() {
        let reports = theorem1_envelope(&TRACE_2000, 2.0).unwrap();
        assert_eq!(reports.len(), 278);
        let summary = envelope_summary(&reports);
        assert!(summary.failures.is_empty());
        assert!((summary.min_lower_ratio - 0.9019766982783733).abs() < 1e-12);
        assert_eq!(summary.min_lower_at, (179, 6));
        assert!((summary.max_upper_ratio - 1.1164574022598055).abs() < 1e-12);
        assert_eq!(summary.max_upper_at, (131, 30));
    }

    #[test]
    fn envelope_flags_synthetic_violation() {
        let fake = vec![ChampionTraceRow {
            x: 100_000,
            max_count: 1,
            champions: vec![2],
        }];
        let reports = theorem1_envelope(&fake, 2.0).unwrap();
        assert_eq!(reports[0].within, vec![false]);
        let summary = envelope_summary(&reports);
        assert_eq!(summary.failures, vec![(100_000, 2)]);
        assert!(theorem1_envelope(&fake, 0.9).is_err());
    }

    #[test]
    fn sieve_bound_at_ten_thousand() {
        let table = build_table(10_000).unwrap();
        let (c2, _) = singular::twin_prime_constant(1_000_000).unwrap();
        let rep = sieve_bound_check(10_000, &table, c2, 4.0, 0.2).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.max_ratio_d, 26);
        assert!((rep.max_ratio - 1.4134928464520295).abs() < 1e-9);
        let r2 = sieve_bound_ratio(10_000, 2, &table, c2).unwrap();
        assert!((r2 - 1.3171183341939368).abs() < 1e-9);
        assert_eq!(sieve_bound_ratio(10_000, 7, &table, c2).unwrap(), 0.0);
        assert!(sieve_bound_check(10_000, &table, c2, 4.0, 1.0).is_err());
    }

    #[test]
    fn lower_bound_at_ten_thousand() {
        let table = build_table(10_000).unwrap();
        let rep = lemma5_lower_bound(10_000, &table, 0.1).unwrap();
        assert_eq!(rep.q, 30);
        assert_eq!(rep.phi_q, 8);
        assert_eq!(rep.g_star, 629);
        assert_eq!(rep.averaged_lhs, 93_339);
        assert!((rep.pointwise_bound - 214.92).abs() < 0.05);
        assert!((rep.averaged_rhs - 73_133.6).abs() < 2.0);
        assert!(rep.pointwise_pass && rep.averaged_pass);
        assert!(!rep.vacuous);
        assert!(lemma5_lower_bound(500, &table, 0.1).is_err());
    }

    #[test]
    fn factor_profile_of_large_champion() {
        let table = build_table(100_000).unwrap();
        let p = factor_profile(100_000, 2_310, &table).unwrap();
        assert_eq!(p.omega, 5);
        assert!((p.m_value - 1.2670995670995668).abs() < 1e-15);
        // 2 log(1e5) ~ 23.0; missing primes are 13, 17, 19, 23
        let expect = 1.0 / 13.0 + 1.0 / 17.0 + 1.0 / 19.0 + 1.0 / 23.0;
        assert!((p.deficiency - expect).abs() < 1e-15);
        assert!(p.within_asymptotic_bound);
        assert!(!p.flagged);
        assert!(p.corollary3_ok);
    }

    #[test]
    fn factor_profile_mertens_ratio_near_one() {
        // champions stay close to the primorial that maximizes M
        let table = build_table(10_000).unwrap();
        let p = factor_profile(10_000, 210, &table).unwrap();
        let m_star = singular::mertens_divisor_sum(
            singular::primorial_floor(10_000.0).unwrap().value,
            &table,
        )
        .unwrap();
        let ratio = p.m_value / m_star;
        assert!(ratio >= 0.9);
        assert!((ratio - 0.9282541851725317).abs() < 1e-12);
    }

    #[test]
    fn factor_profile_small_champions() {
        let table = build_table(100).unwrap();
        let p4 = factor_profile(19, 4, &table).unwrap();
        assert_eq!(p4.omega, 1);
        assert!(!p4.corollary3_ok, "4 has no odd prime factor");
        let p6 = factor_profile(19, 6, &table).unwrap();
        assert_eq!(p6.omega, 2);
        assert!(p6.corollary3_ok);
        let profiles = factor_profiles(
            &ChampionTraceRow {
                x: 19,
                max_count: 4,
                champions: vec![2, 6],
            },
            &table,
        )
        .unwrap();
        assert_eq!(profiles.len(), 2);
        assert_eq!(profiles[1].d_star, 6);
    }
}
