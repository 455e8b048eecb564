//! Exact difference counts G(x,d), consecutive-gap counts N(x,d), and
//! incremental champion tracking across prime thresholds.

use crate::error::{Error, Result};
use crate::sieve::PrimeTable;
use rayon::prelude::*;

/// Counts of all prime differences up to a threshold `x`:
/// `counts[d] = #{(p, p') : p < p' <= x, p' - p = d}`.
///
/// `max_count` and `champions` track the argmax set incrementally. Any
/// single increment can exceed the running max by at most 1, so the set
/// update on each increment is O(1) amortized.
#[derive(Debug, Clone)]
pub struct DiffHistogram {
    x: u64,
    n: u64,
    counts: Vec<u32>,
    max_count: u32,
    champions: Vec<u64>,
}

impl DiffHistogram {
    fn new(capacity: u64) -> Self {
        Self {
            x: 0,
            n: 0,
            counts: vec![0u32; capacity as usize + 1],
            max_count: 0,
            champions: Vec::new(),
        }
    }

    /// Rebuilds histogram state from a raw counts snapshot, recomputing
    /// the argmax set. `n` must be the number of primes consumed.
    pub fn from_parts(x: u64, n: u64, counts: Vec<u32>) -> Result<Self> {
        if n >= 2 && counts.iter().all(|&c| c == 0) {
            return Err(Error::CorruptHistogram(format!(
                "{n} primes consumed but all counts are zero"
            )));
        }
        let mut max_count = 0u32;
        for &c in &counts {
            max_count = max_count.max(c);
        }
        let champions = if max_count == 0 {
            Vec::new()
        } else {
            counts
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c == max_count)
                .map(|(d, _)| d as u64)
                .collect()
        };
        Ok(Self {
            x,
            n,
            counts,
            max_count,
            champions,
        })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    /// Number of primes `<= x` consumed so far.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, d: u64) -> u32 {
        self.counts.get(d as usize).copied().unwrap_or(0)
    }

    /// `G*(x)`, the maximal count.
    pub fn max_count(&self) -> u32 {
        self.max_count
    }

    /// `D*(x)`, ascending.
    pub fn champions(&self) -> &[u64] {
        &self.champions
    }

    #[inline]
    fn bump(&mut self, d: u64) {
        let c = self.counts[d as usize] + 1;
        self.counts[d as usize] = c;
        if c > self.max_count {
            self.max_count = c;
            self.champions.clear();
            self.champions.push(d);
        } else if c == self.max_count {
            // d was one below the max, so it cannot already be present
            let pos = self.champions.partition_point(|&e| e < d);
            self.champions.insert(pos, d);
        }
    }

    #[cfg(test)]
    fn corrupt_decrement(&mut self, d: u64) {
        self.counts[d as usize] -= 1;
    }
}

/// One `D*(x)` snapshot; emitted at every prime `x >= 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChampionTraceRow {
    pub x: u64,
    pub max_count: u32,
    pub champions: Vec<u64>,
}

/// Counts of gaps between consecutive primes up to `x`, with the argmax
/// set `J*(x)` tracked the same way as [`DiffHistogram`].
#[derive(Debug, Clone)]
pub struct GapHistogram {
    x: u64,
    n: u64,
    gap_counts: Vec<u32>,
    max_count: u32,
    jump_champions: Vec<u64>,
}

impl GapHistogram {
    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn gap_counts(&self) -> &[u32] {
        &self.gap_counts
    }

    pub fn count(&self, d: u64) -> u32 {
        self.gap_counts.get(d as usize).copied().unwrap_or(0)
    }

    /// `N*(x)`.
    pub fn max_count(&self) -> u32 {
        self.max_count
    }

    /// `J*(x)`, ascending.
    pub fn jump_champions(&self) -> &[u64] {
        &self.jump_champions
    }

    /// Total gaps seen, which must equal `pi(x) - 1`.
    pub fn total(&self) -> u64 {
        self.gap_counts.iter().map(|&c| c as u64).sum()
    }

    fn bump(&mut self, d: u64) {
        if d as usize >= self.gap_counts.len() {
            self.gap_counts.resize(d as usize + 1, 0);
        }
        let c = self.gap_counts[d as usize] + 1;
        self.gap_counts[d as usize] = c;
        if c > self.max_count {
            self.max_count = c;
            self.jump_champions.clear();
            self.jump_champions.push(d);
        } else if c == self.max_count {
            let pos = self.jump_champions.partition_point(|&e| e < d);
            self.jump_champions.insert(pos, d);
        }
    }
}

/// Sequential prime-by-prime sweep producing one champion row per prime.
/// Exposes its internal histogram so long runs can be snapshotted and
/// resumed.
#[derive(Debug)]
pub struct ChampionSweep<'a> {
    primes: &'a [u64],
    hist: DiffHistogram,
    next: usize,
}

impl<'a> ChampionSweep<'a> {
    pub fn new(table: &'a PrimeTable, x_max: u64) -> Result<Self> {
        if x_max > table.bound() {
            return Err(Error::ExceedsTableBound {
                value: x_max,
                bound: table.bound(),
            });
        }
        if x_max < 2 {
            return Err(Error::ThresholdTooSmall(x_max));
        }
        let n_total = table.prime_count(x_max)? as usize;
        let primes = &table.primes()[..n_total];
        let mut hist = DiffHistogram::new(x_max);
        hist.n = 1.min(n_total as u64);
        hist.x = 2;
        Ok(Self {
            primes,
            hist,
            next: 1,
        })
    }

    /// Resumes a sweep from a snapshot taken after fully consuming the
    /// prime `hist.x()`.
    pub fn resume(table: &'a PrimeTable, x_max: u64, hist: DiffHistogram) -> Result<Self> {
        if x_max > table.bound() {
            return Err(Error::ExceedsTableBound {
                value: x_max,
                bound: table.bound(),
            });
        }
        if hist.counts.len() != x_max as usize + 1 {
            return Err(Error::CorruptHistogram(format!(
                "counts length {} does not match sweep bound {}",
                hist.counts.len(),
                x_max
            )));
        }
        let consumed = table.prime_count(hist.x())?;
        if consumed != hist.n() {
            return Err(Error::CorruptHistogram(format!(
                "snapshot says {} primes consumed but pi({}) = {}",
                hist.n(),
                hist.x(),
                consumed
            )));
        }
        if !sum_identity_check(&hist) {
            return Err(Error::CorruptHistogram(
                "count total does not match n(n-1)/2".into(),
            ));
        }
        let n_total = table.prime_count(x_max)? as usize;
        Ok(Self {
            primes: &table.primes()[..n_total],
            hist,
            next: consumed as usize,
        })
    }

    pub fn state(&self) -> &DiffHistogram {
        &self.hist
    }

    /// Consumes the next prime and returns its trace row, or `None` when
    /// the sweep is complete.
    #[allow(clippy::should_implement_trait)]
    pub fn next_row(&mut self) -> Option<ChampionTraceRow> {
        if self.next >= self.primes.len() {
            return None;
        }
        let p = self.primes[self.next];
        for &q in &self.primes[..self.next] {
            self.hist.bump(p - q);
        }
        self.next += 1;
        self.hist.n = self.next as u64;
        self.hist.x = p;
        Some(ChampionTraceRow {
            x: p,
            max_count: self.hist.max_count,
            champions: self.hist.champions.clone(),
        })
    }
}

/// All champion rows for prime thresholds in `[3, x_max]`.
pub fn champion_trace(table: &PrimeTable, x_max: u64) -> Result<Vec<ChampionTraceRow>> {
    let mut sweep = ChampionSweep::new(table, x_max)?;
    let mut rows = Vec::with_capacity(sweep.primes.len().saturating_sub(1));
    while let Some(row) = sweep.next_row() {
        rows.push(row);
    }
    Ok(rows)
}

/// Fixed-threshold difference histogram. The outer prime index is
/// partitioned across threads; per-block histograms merge by addition,
/// which is order-independent, so the result is deterministic.
pub fn count_differences(table: &PrimeTable, x: u64) -> Result<DiffHistogram> {
    if x < 2 {
        return Err(Error::ThresholdTooSmall(x));
    }
    if x > table.bound() {
        return Err(Error::ExceedsTableBound {
            value: x,
            bound: table.bound(),
        });
    }
    let n = table.prime_count(x)? as usize;
    let primes = &table.primes()[..n];
    let len = x as usize + 1;
    let counts = primes
        .par_iter()
        .enumerate()
        .with_min_len(512)
        .fold(
            || vec![0u32; len],
            |mut acc, (i, &p)| {
                for &q in &primes[..i] {
                    acc[(p - q) as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u32; len],
            |mut a, b| {
                for (av, bv) in a.iter_mut().zip(b) {
                    *av += bv;
                }
                a
            },
        );
    DiffHistogram::from_parts(x, n as u64, counts)
}

/// One `J*(x)` snapshot per prime threshold in `[3, x_max]`.
pub fn gap_trace(table: &PrimeTable, x_max: u64) -> Result<Vec<ChampionTraceRow>> {
    if x_max > table.bound() {
        return Err(Error::ExceedsTableBound {
            value: x_max,
            bound: table.bound(),
        });
    }
    if x_max < 2 {
        return Err(Error::ThresholdTooSmall(x_max));
    }
    let n = table.prime_count(x_max)? as usize;
    let primes = &table.primes()[..n];
    let mut hist = GapHistogram {
        x: 2,
        n: 1,
        gap_counts: Vec::new(),
        max_count: 0,
        jump_champions: Vec::new(),
    };
    let mut rows = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        hist.bump(primes[i] - primes[i - 1]);
        hist.x = primes[i];
        hist.n = (i + 1) as u64;
        rows.push(ChampionTraceRow {
            x: primes[i],
            max_count: hist.max_count,
            champions: hist.jump_champions.clone(),
        });
    }
    Ok(rows)
}

/// Full gap histogram at a fixed threshold.
pub fn count_gaps(table: &PrimeTable, x: u64) -> Result<GapHistogram> {
    if x < 2 {
        return Err(Error::ThresholdTooSmall(x));
    }
    if x > table.bound() {
        return Err(Error::ExceedsTableBound {
            value: x,
            bound: table.bound(),
        });
    }
    let n = table.prime_count(x)? as usize;
    let primes = &table.primes()[..n];
    let mut hist = GapHistogram {
        x,
        n: n as u64,
        gap_counts: Vec::new(),
        max_count: 0,
        jump_champions: Vec::new(),
    };
    for w in primes.windows(2) {
        hist.bump(w[1] - w[0]);
    }
    Ok(hist)
}

/// True iff the histogram total equals `n(n-1)/2` exactly.
pub fn sum_identity_check(hist: &DiffHistogram) -> bool {
    let total: u64 = hist.counts.iter().map(|&c| c as u64).sum();
    let n = hist.n();
    total == n * (n - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_table;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn histogram_at_11() {
        let t = build_table(100).unwrap();
        let h = count_differences(&t, 11).unwrap();
        let expect = [
            (1, 1),
            (2, 2),
            (3, 1),
            (4, 2),
            (5, 1),
            (6, 1),
            (8, 1),
            (9, 1),
        ];
        for (d, c) in expect {
            assert_eq!(h.count(d), c, "d = {d}");
        }
        assert_eq!(h.counts().iter().map(|&c| c as u64).sum::<u64>(), 10);
        assert_eq!(h.champions(), &[2, 4]);
        assert_eq!(h.max_count(), 2);
        assert!(sum_identity_check(&h));
    }

    #[test]
    fn histogram_at_2_is_empty() {
        let t = build_table(100).unwrap();
        let h = count_differences(&t, 2).unwrap();
        assert_eq!(h.counts().iter().map(|&c| c as u64).sum::<u64>(), 0);
        assert_eq!(h.max_count(), 0);
        assert!(h.champions().is_empty());
        assert!(sum_identity_check(&h));
    }

    #[test]
    fn rejects_bad_thresholds() {
        let t = build_table(100).unwrap();
        assert!(count_differences(&t, 1).is_err());
        assert!(count_differences(&t, 101).is_err());
    }

    #[test]
    fn small_champion_sets_match_known_values() {
        let t = build_table(100).unwrap();
        let rows = champion_trace(&t, 20).unwrap();
        let expect: &[(u64, &[u64])] = &[
            (3, &[1]),
            (5, &[1, 2, 3]),
            (7, &[2]),
            (11, &[2, 4]),
            (13, &[2]),
            (17, &[2, 4, 6]),
            (19, &[2, 6]),
        ];
        assert_eq!(rows.len(), expect.len());
        for (row, &(x, champs)) in rows.iter().zip(expect) {
            assert_eq!(row.x, x);
            assert_eq!(row.champions.as_slice(), champs, "at x = {x}");
        }
    }

    #[test]
    fn trace_at_3_is_single_row() {
        let t = build_table(10).unwrap();
        let rows = champion_trace(&t, 3).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0], ChampionTraceRow { x: 3, max_count: 1, champions: vec![1] });
    }

    #[test]
    fn trace_matches_fixed_recount_at_random_thresholds() {
        let t = build_table(100_000).unwrap();
        let rows = champion_trace(&t, 100_000).unwrap();
        let mut rng = StdRng::seed_from_u64(0x9e3779b97f4a7c15);
        for _ in 0..50 {
            let row = &rows[rng.gen_range(0..rows.len())];
            let h = count_differences(&t, row.x).unwrap();
            assert_eq!(h.max_count(), row.max_count, "x = {}", row.x);
            assert_eq!(h.champions(), row.champions.as_slice(), "x = {}", row.x);
            assert!(sum_identity_check(&h));
        }
    }

    #[test]
    fn count_monotone_in_x() {
        let t = build_table(2_000).unwrap();
        let a = count_differences(&t, 1_000).unwrap();
        let b = count_differences(&t, 2_000).unwrap();
        for d in 0..=1_000u64 {
            assert!(b.count(d) >= a.count(d), "d = {d}");
        }
    }

    #[test]
    fn odd_differences_need_the_even_prime() {
        let t = build_table(50_000).unwrap();
        let h = count_differences(&t, 50_000).unwrap();
        for d in (1..49_998u64).step_by(2) {
            let c = h.count(d);
            assert!(c <= 1, "odd d = {d} has count {c}");
            let partner_is_prime = t.is_prime(d + 2).unwrap();
            assert_eq!(c == 1, partner_is_prime, "odd d = {d}");
        }
        // the largest odd difference would need 2 + 49999 = 50001 > x
        assert_eq!(h.count(49_999), 0);
    }

    #[test]
    fn sum_identity_at_1e4() {
        let t = build_table(10_000).unwrap();
        let h = count_differences(&t, 10_000).unwrap();
        assert_eq!(h.n(), 1229);
        let total: u64 = h.counts().iter().map(|&c| c as u64).sum();
        assert_eq!(total, 754_606);
        assert!(sum_identity_check(&h));
    }

    #[test]
    fn sum_identity_detects_corruption() {
        let t = build_table(1_000).unwrap();
        let mut h = count_differences(&t, 1_000).unwrap();
        assert!(sum_identity_check(&h));
        h.corrupt_decrement(10);
        assert!(!sum_identity_check(&h));
    }

    #[test]
    fn gap_trace_small() {
        let t = build_table(100).unwrap();
        let rows = gap_trace(&t, 10).unwrap();
        // x = 5: gaps {1, 2} tie
        assert_eq!(rows[1].x, 5);
        assert_eq!(rows[1].champions, vec![1, 2]);
        assert_eq!(rows[1].max_count, 1);
    }

    #[test]
    fn gap_histogram_values_at_1e5() {
        let t = build_table(100_000).unwrap();
        let h = count_gaps(&t, 100_000).unwrap();
        assert_eq!(h.count(2), 1224);
        assert_eq!(h.count(6), 1940);
        assert_eq!(h.max_count(), 1940);
        assert_eq!(h.jump_champions(), &[6]);
        assert_eq!(h.total(), 9591);
    }

    #[test]
    fn gap_trace_totals_match_pi() {
        let t = build_table(10_000).unwrap();
        let rows = gap_trace(&t, 10_000).unwrap();
        let h = count_gaps(&t, 10_000).unwrap();
        let last = rows.last().unwrap();
        assert_eq!(last.champions, h.jump_champions());
        assert_eq!(h.total() + 1, t.prime_count(10_000).unwrap());
    }

    #[test]
    fn jump_champion_transition_at_947() {
        let t = build_table(1_000).unwrap();
        let rows = gap_trace(&t, 1_000).unwrap();
        let at = |x: u64| rows.iter().find(|r| r.x == x).unwrap();
        assert_eq!(at(941).champions, vec![4, 6]);
        assert_eq!(at(947).champions, vec![6]);
        assert_eq!(at(953).champions, vec![6]);
    }

    #[test]
    fn sweep_resume_equals_uninterrupted() {
        let t = build_table(5_000).unwrap();
        let full = champion_trace(&t, 5_000).unwrap();

        let mut first = ChampionSweep::new(&t, 5_000).unwrap();
        let mut rows = Vec::new();
        while first.state().x() < 2_000 {
            rows.push(first.next_row().unwrap());
        }
        let snapshot = first.state().clone();
        drop(first);

        let mut resumed = ChampionSweep::resume(&t, 5_000, snapshot).unwrap();
        while let Some(row) = resumed.next_row() {
            rows.push(row);
        }
        assert_eq!(rows, full);
    }

    #[test]
    fn resume_rejects_corrupt_snapshot() {
        let t = build_table(1_000).unwrap();
        let mut sweep = ChampionSweep::new(&t, 1_000).unwrap();
        for _ in 0..20 {
            sweep.next_row().unwrap();
        }
        let mut snap = sweep.state().clone();
        snap.corrupt_decrement(2);
        assert!(matches!(
            ChampionSweep::resume(&t, 1_000, snap).unwrap_err(),
            Error::CorruptHistogram(_)
        ));
    }

    #[test]
    fn from_parts_recomputes_argmax() {
        let mut counts = vec![0u32; 11];
        counts[2] = 2;
        counts[4] = 2;
        counts[1] = 1;
        counts[3] = 1;
        counts[5] = 1;
        let h = DiffHistogram::from_parts(10, 4, counts).unwrap();
        assert_eq!(h.max_count(), 2);
        assert_eq!(h.champions(), &[2, 4]);
    }
}
