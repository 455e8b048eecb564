//! Segmented sieve of Eratosthenes and the prime table every other
//! module is built on.

use crate::error::{Error, Result};

/// Bounds above this require an explicit opt-in (memory guard).
pub const DEFAULT_BOUND_CAP: u64 = 1 << 31;

/// Odd-number flags per segment. One flag is one byte, so the default
/// segment stays L1/L2 friendly while covering a window of 2^19 integers.
pub const DEFAULT_SEGMENT_FLAGS: usize = 1 << 18;

#[derive(Debug, Clone)]
pub struct SieveConfig {
    pub segment_flags: usize,
    pub allow_large: bool,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_flags: DEFAULT_SEGMENT_FLAGS,
            allow_large: false,
        }
    }
}

/// Ordered primes `2 = p_1 < p_2 < ... <= bound` with indexed access.
///
/// Immutable after construction; cheap to share across threads.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    bound: u64,
    primes: Vec<u64>,
}

/// Builds a [`PrimeTable`] with default sieve settings.
pub fn build_table(bound: u64) -> Result<PrimeTable> {
    build_table_with(bound, &SieveConfig::default())
}

/// Builds a [`PrimeTable`] with explicit segment size and cap opt-in.
pub fn build_table_with(bound: u64, cfg: &SieveConfig) -> Result<PrimeTable> {
    if bound < 2 {
        return Err(Error::SieveBoundTooSmall(bound));
    }
    if bound > DEFAULT_BOUND_CAP && !cfg.allow_large {
        return Err(Error::SieveBoundExceedsCap {
            bound,
            cap: DEFAULT_BOUND_CAP,
        });
    }
    let mut primes = vec![2u64];
    if bound >= 3 {
        sieve_odds(bound, cfg.segment_flags.max(64), &mut primes);
    }
    Ok(PrimeTable { bound, primes })
}

impl PrimeTable {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of primes in the table, `pi(bound)`.
    pub fn count(&self) -> usize {
        self.primes.len()
    }

    /// `p_n`, 1-indexed as in the usual convention `p_1 = 2`.
    pub fn nth_prime(&self, n: u64) -> Result<u64> {
        if n == 0 || n > self.primes.len() as u64 {
            return Err(Error::PrimeIndexOutOfRange {
                index: n,
                count: self.primes.len() as u64,
            });
        }
        Ok(self.primes[(n - 1) as usize])
    }

    /// `pi(x)` for any `x <= bound`, by binary search.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        if x > self.bound {
            return Err(Error::ExceedsTableBound {
                value: x,
                bound: self.bound,
            });
        }
        Ok(self.primes.partition_point(|&p| p <= x) as u64)
    }

    /// Membership test for `v <= bound`.
    pub fn is_prime(&self, v: u64) -> Result<bool> {
        if v > self.bound {
            return Err(Error::ExceedsTableBound {
                value: v,
                bound: self.bound,
            });
        }
        Ok(self.primes.binary_search(&v).is_ok())
    }
}

/// Odd primes up to `limit` by a plain in-memory sieve over odd indices.
/// Used for the base primes of the segmented pass, so `limit` is at most
/// around sqrt of the real bound.
fn simple_odd_sieve(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let m = ((limit - 3) / 2 + 1) as usize;
    let mut composite = vec![false; m];
    let mut i = 0usize;
    loop {
        let p = 2 * i as u64 + 3;
        if p * p > limit {
            break;
        }
        if !composite[i] {
            // start at p^2; step p in odd-index space is step 2p in values
            let mut j = ((p * p - 3) / 2) as usize;
            while j < m {
                composite[j] = true;
                j += p as usize;
            }
        }
        i += 1;
    }
    composite
        .iter()
        .enumerate()
        .filter(|&(_, &c)| !c)
        .map(|(i, _)| 2 * i as u64 + 3)
        .collect()
}

/// Appends all odd primes in [3, bound] to `out`, sieving one segment of
/// odd flags at a time.
fn sieve_odds(bound: u64, seg_flags: usize, out: &mut Vec<u64>) {
    let sqrt = (bound as f64).sqrt() as u64 + 1;
    let base = simple_odd_sieve(sqrt.min(bound));
    let total = ((bound - 3) / 2 + 1) as usize;
    let mut seg = vec![false; seg_flags.min(total)];
    let mut lo = 0usize;
    while lo < total {
        let len = seg_flags.min(total - lo);
        let flags = &mut seg[..len];
        flags.fill(false);
        let lo_val = 2 * lo as u64 + 3;
        let hi_val = 2 * (lo + len - 1) as u64 + 3;
        for &p in &base {
            if p * p > hi_val {
                break;
            }
            let start = first_odd_multiple(p, lo_val);
            if start > hi_val {
                continue;
            }
            let mut idx = ((start - 3) / 2) as usize - lo;
            while idx < len {
                flags[idx] = true;
                idx += p as usize;
            }
        }
        for (i, &c) in flags.iter().enumerate() {
            if !c {
                out.push(2 * (lo + i) as u64 + 3);
            }
        }
        lo += len;
    }
}

/// Smallest odd multiple of odd prime `p` that is >= max(p^2, lo).
fn first_odd_multiple(p: u64, lo: u64) -> u64 {
    let p2 = p * p;
    if p2 >= lo {
        return p2;
    }
    let mut m = lo.div_ceil(p) * p;
    if m.is_multiple_of(2) {
        m += p;
    }
    m
}
