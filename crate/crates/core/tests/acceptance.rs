//! End-to-end acceptance checks. Each test is one numbered criterion and
//! prints a single summary line; shared sweeps are built once.

use primediff::{
    aggregate_stats, build_table, champion_trace, count_differences, envelope_summary, gap_trace,
    lemma5_lower_bound, mertens_product, model_rows_even, pair_integral, primorials,
    primoriality_violations, sieve_bound_check, singular_series, sum_identity_check,
    theorem1_envelope, transition_table, twin_prime_constant, ChampionSweep, ChampionTraceRow,
    PrimeTable,
};
use std::sync::LazyLock;
use std::time::Instant;

static TABLE: LazyLock<PrimeTable> = LazyLock::new(|| build_table(1_000_000).unwrap());
static TRACE: LazyLock<Vec<ChampionTraceRow>> =
    LazyLock::new(|| champion_trace(&TABLE, 1_000_000).unwrap());
static C2: LazyLock<f64> = LazyLock::new(|| twin_prime_constant(1_000_000).unwrap().0);

#[test]
fn criterion_01_small_champion_sets() {
    let table = build_table(100).unwrap();
    let start = Instant::now();
    let trace = champion_trace(&table, 17).unwrap();
    let elapsed = start.elapsed();
    let expect: &[(u64, &[u64])] = &[
        (3, &[1]),
        (5, &[1, 2, 3]),
        (7, &[2]),
        (11, &[2, 4]),
        (13, &[2]),
        (17, &[2, 4, 6]),
    ];
    assert_eq!(trace.len(), expect.len());
    for (row, &(x, set)) in trace.iter().zip(expect) {
        assert_eq!(row.x, x);
        assert_eq!(row.champions, set, "champion set at x = {x}");
    }
    assert!(elapsed.as_micros() < 1_000, "sweep took {elapsed:?}");
    println!("criterion 01: PASS - small champion sets exact, {elapsed:?}");
}

#[test]
fn criterion_02_transition_points() {
    let half: Vec<ChampionTraceRow> = TRACE
        .iter()
        .take_while(|r| r.x <= 500_000)
        .cloned()
        .collect();
    assert_eq!(half.last().unwrap().x, 499_979);
    let rows = transition_table(&half).unwrap();
    let get = |p: u64| rows.iter().find(|r| r.primorial == p).unwrap();
    for (p, first, last) in [
        (6, 17, 179),
        (30, 131, 1_723),
        (210, 1_423, 32_843),
        (2_310, 24_499, 414_977),
    ] {
        let row = get(p);
        assert_eq!((row.first_x, row.last_x), (first, last), "primorial {p}");
        assert!(!row.open_ended);
    }
    let last = get(30_030);
    assert_eq!(last.first_x, 413_863);
    assert!(last.open_ended);
    println!("criterion 02: PASS - transition points to 5e5 exact, 30030 first at 413863");
}

#[test]
fn criterion_03_sum_identity() {
    let table = build_table(100_000).unwrap();
    let mut sweep = ChampionSweep::new(&table, 100_000).unwrap();
    let mut rows = 0u64;
    while sweep.next_row().is_some() {
        assert!(
            sum_identity_check(sweep.state()),
            "sum identity failed at x = {}",
            sweep.state().x()
        );
        rows += 1;
    }
    assert_eq!(rows, 9_591);
    println!("criterion 03: PASS - sum identity exact at all {rows} traced primes");
}

#[test]
fn criterion_04_primoriality() {
    let primorial_values: Vec<u64> = primorials(15)
        .unwrap()
        .iter()
        .map(|p| p.value)
        .collect();
    for row in TRACE.iter() {
        for &d in &row.champions {
            if row.x < 19 {
                assert!(
                    [1, 2, 3, 4, 6].contains(&d),
                    "unexpected small-x champion {d} at x = {}",
                    row.x
                );
            } else {
                assert!(
                    primorial_values.binary_search(&d).is_ok(),
                    "non-primorial champion {d} at x = {}",
                    row.x
                );
            }
        }
    }
    assert!(primoriality_violations(&TRACE).is_empty());
    println!("criterion 04: PASS - all champions primorial for 19 <= x <= 1e6");
}

#[test]
fn criterion_05_gap_champions() {
    let rows = gap_trace(&TABLE, 1_000_000).unwrap();
    let at = |x: u64| rows.iter().find(|r| r.x == x).unwrap();
    assert_eq!(at(941).champions, vec![4, 6]);
    assert_eq!(at(947).champions, vec![6]);
    let mut checked = 0u64;
    for row in rows.iter().filter(|r| r.x >= 947) {
        assert_eq!(row.champions, vec![6], "J*({}) != {{6}}", row.x);
        checked += 1;
    }
    assert_eq!(checked, 78_498 - 160);
    println!("criterion 05: PASS - gap champion is 6 at every prime in [947, 1e6]");
}

#[test]
fn criterion_06_singular_series() {
    assert_eq!(format!("{:.5}", *C2), "0.66016");
    // consecutive primorial ratio 1 + 1/(p_k - 2), exact in rationals
    let prim = primorials(8).unwrap();
    for k in 2..=8usize {
        let a = singular_series(prim[k - 1].value, *C2, &TABLE).unwrap();
        let b = singular_series(prim[k - 2].value, *C2, &TABLE).unwrap();
        let p = prim[k - 1].largest_prime as u128;
        let lhs = a.ratio_num as u128 * b.ratio_den as u128 * (p - 2);
        let rhs = b.ratio_num as u128 * a.ratio_den as u128 * (p - 1);
        assert_eq!(lhs, rhs, "ratio mismatch at k = {k}");
    }
    // exhaustive maximality below the 6th primorial, exact in rationals
    let top = singular_series(30_030, *C2, &TABLE).unwrap();
    for d in (2..30_030u64).step_by(2) {
        let s = singular_series(d, *C2, &TABLE).unwrap();
        let lhs = s.ratio_num as u128 * top.ratio_den as u128;
        let rhs = top.ratio_num as u128 * s.ratio_den as u128;
        assert!(lhs < rhs, "S({d}) >= S(30030)");
    }
    println!("criterion 06: PASS - C2 = 0.66016, exact ratios k <= 8, strict maximum at 30030");
}

#[test]
fn criterion_07_quadrature() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let x = 1e3 * 10f64.powf(i as f64 / 3.0);
        for j in 0..10 {
            let frac = 0.05 + 0.09 * j as f64;
            let d = 2.0 * ((frac * x) / 2.0).floor().max(1.0);
            let coarse = pair_integral(x, d, 1e-10).unwrap();
            let fine = pair_integral(x, d, 1e-12).unwrap();
            worst = worst.max(((coarse - fine) / fine).abs());
        }
    }
    assert!(worst <= 1e-10, "nesting drift {worst:.3e}");
    // fixed-step left Riemann oracle at (1e4, 2)
    let (h, mut sum) = (1e-2, 0.0);
    let steps = ((1e4 - 2.0 - 2.0) / h) as u64;
    for i in 0..steps {
        let t = 2.0 + i as f64 * h;
        sum += h / (t.ln() * (t + 2.0).ln());
    }
    let quad = pair_integral(1e4, 2.0, 1e-10).unwrap();
    let rel = ((quad - sum) / quad).abs();
    assert!(rel < 5e-3, "Riemann disagreement {rel:.3e}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10);
    println!(
        "criterion 07: PASS - nesting drift {worst:.2e} on 100-point grid, Riemann gap {rel:.2e}, {elapsed:?}"
    );
}

#[test]
fn criterion_08_model_tracks_champion() {
    let rows = model_rows_even(100_000, &TABLE, *C2, 1e-6).unwrap();
    let best = rows
        .iter()
        .filter(|r| r.d <= 10_000)
        .max_by(|a, b| a.g_model.total_cmp(&b.g_model))
        .unwrap();
    assert_eq!(best.d, 2_310);
    let exact = count_differences(&TABLE, 100_000).unwrap();
    assert_eq!(exact.champions(), &[2_310]);
    println!("criterion 08: PASS - model argmax 2310 matches exact champion at x = 1e5");
}

#[test]
fn criterion_09_model_statistics() {
    let expect = [
        (9_973u64, 0.022879854747187362, 0.15186430790457886),
        (29_989, 0.018969475573421667, 0.17305556945675693),
        (99_991, 0.007698695959234924, 0.14404940908865949),
    ];
    for (x, mu_ref, nu_ref) in expect {
        let stats = aggregate_stats(x, &TABLE, *C2, 1e-6).unwrap();
        let band = 5.0 / (stats.pi_x as f64).sqrt();
        assert!(
            stats.mu.abs() <= band,
            "|mu({x})| = {} above {band}",
            stats.mu.abs()
        );
        assert!((stats.mu - mu_ref).abs() < 1e-9, "mu({x}) drifted");
        assert!(
            (stats.nu_normalized - nu_ref).abs() < 1e-9,
            "nu({x}) drifted"
        );
    }
    let near_1e5 = aggregate_stats(99_991, &TABLE, *C2, 1e-6).unwrap();
    assert!((0.10..=0.25).contains(&near_1e5.nu_normalized));
    println!(
        "criterion 09: PASS - |mu| within 5/sqrt(pi) at all samples, nu/pi^2 = {:.4}",
        near_1e5.nu_normalized
    );
}

#[test]
fn criterion_10_bound_sandwich() {
    for x in [10_000u64, 100_000] {
        let upper = sieve_bound_check(x, &TABLE, *C2, 4.0, 0.2).unwrap();
        assert!(
            upper.pass,
            "upper bound failed at {x}: ratio {} at d = {}",
            upper.max_ratio, upper.max_ratio_d
        );
        assert!(upper.max_ratio < 4.0);
        let lower = lemma5_lower_bound(x, &TABLE, 0.1).unwrap();
        assert!(!lower.vacuous);
        assert!(lower.pointwise_pass, "pointwise bound failed at {x}");
        assert!(lower.averaged_pass, "averaged bound failed at {x}");
        assert_eq!(lower.q, if x == 10_000 { 30 } else { 210 });
    }
    println!("criterion 10: PASS - upper bound (C=4) and lower bounds hold at 1e4 and 1e5");
}

#[test]
fn criterion_11_envelope() {
    let reports = theorem1_envelope(&TRACE, 2.0).unwrap();
    let summary = envelope_summary(&reports);
    assert!(
        summary.failures.is_empty(),
        "envelope violations: {:?}",
        &summary.failures[..summary.failures.len().min(5)]
    );
    assert!((summary.min_lower_ratio - 0.6915138525347273).abs() < 1e-12);
    assert_eq!(summary.min_lower_at, (32_843, 210));
    assert!((summary.max_upper_ratio - 1.1164574022598055).abs() < 1e-12);
    assert_eq!(summary.max_upper_at, (131, 30));
    println!(
        "criterion 11: PASS - all {} rows inside slack-2 envelope",
        summary.rows_checked
    );
}

#[test]
fn criterion_12_corollary_constants() {
    assert_eq!(TABLE.nth_prime(2_817).unwrap(), 25_583);
    let mut sum = 0.0;
    for &p in TABLE.primes() {
        if p < 3 {
            continue;
        }
        if p > 25_583 {
            break;
        }
        sum += 1.0 / p as f64;
    }
    assert!(sum > 8f64.ln(), "sum {sum} vs log 8 = {}", 8f64.ln());
    println!(
        "criterion 12: PASS - p_2817 = 25583 and sum 1/p = {sum:.4} > log 8 = {:.4}",
        8f64.ln()
    );
}

#[test]
fn criterion_13_mertens_ratio() {
    let product = mertens_product(1e6, &TABLE).unwrap();
    let ratio = product / 1e6f64.ln();
    assert!((1.7..=1.9).contains(&ratio), "ratio {ratio}");
    assert!((ratio - 1.7811417713726503).abs() < 1e-12);
    println!("criterion 13: PASS - Mertens ratio {ratio:.6} inside [1.7, 1.9]");
}
