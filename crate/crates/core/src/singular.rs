//! Singular series arithmetic, primorials, totients, and Mertens-type
//! prime sums and products.
//!
//! Singular-series ratios are carried as exact integer rationals and
//! converted to floating point once, at the end, so that comparisons
//! between nearby values can never be flipped by accumulated rounding.

use crate::error::{Error, Result};
use crate::sieve::PrimeTable;

/// Euler's constant to 20 digits. Cross-checked in tests against a
/// harmonic-sum evaluation at N = 10^8.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// The first 15 primes; their running products are exactly the
/// primorials representable in 64 bits with margin.
const PRIMORIAL_PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Largest supported primorial index.
pub const MAX_PRIMORIAL_K: u32 = 15;

/// First primorial that does not fit the supported range, as u128.
const PRIMORIAL_16: u128 = 614_889_782_588_491_410u128 * 53;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub d: u64,
    /// Sorted `(prime, multiplicity)` pairs whose product is `d`.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn divisible_by(&self, p: u64) -> bool {
        self.factors.iter().any(|&(q, _)| q == p)
    }
}

/// Singular series value together with the exact rational
/// `value / c2_used = ratio_num / ratio_den` (0/1 for odd `d`).
#[derive(Debug, Clone, PartialEq)]
pub struct SingularValue {
    pub d: u64,
    pub value: f64,
    pub c2_used: f64,
    pub c2_tail_bound: f64,
    pub ratio_num: u64,
    pub ratio_den: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Primorial {
    pub k: u32,
    pub value: u64,
    pub largest_prime: u64,
}

/// Complete prime factorization by trial division against table primes.
/// A leftover cofactor is provably prime when trial division passed its
/// square root, or when it exceeds the table bound but not the bound
/// squared; anything larger is rejected rather than misreported.
pub fn factorize(d: u64, table: &PrimeTable) -> Result<Factorization> {
    let mut rest = d;
    let mut factors = Vec::new();
    let mut passed_sqrt = false;
    for &p in table.primes() {
        if (p as u128) * (p as u128) > rest as u128 {
            passed_sqrt = true;
            break;
        }
        if rest.is_multiple_of(p) {
            let mut mult = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                mult += 1;
            }
            factors.push((p, mult));
        }
    }
    if rest > 1 {
        let bound = table.bound();
        if !passed_sqrt && rest as u128 > (bound as u128) * (bound as u128) {
            return Err(Error::FactorTableTooSmall { d, bound });
        }
        factors.push((rest, 1));
    }
    Ok(Factorization { d, factors })
}

/// Truncated twin-prime constant: the product of `1 - (p-1)^-2` over odd
/// primes `p <= p_bound`, plus a rigorous relative bound on the omitted
/// tail. The true constant lies in `[value * (1 - tail_bound), value]`.
pub fn twin_prime_constant(p_bound: u64) -> Result<(f64, f64)> {
    if p_bound < 1_000 {
        return Err(Error::C2CutoffTooSmall(p_bound));
    }
    let table = crate::sieve::build_table(p_bound)?;
    let mut value = 1.0f64;
    for &p in &table.primes()[1..] {
        let q = (p - 1) as f64;
        value *= 1.0 - 1.0 / (q * q);
    }
    // sum over p > p_bound of (p-1)^-2 <= sum over m >= p_bound of m^-2
    //                                  <= 1 / (p_bound - 2)
    let tail_bound = 1.0 / (p_bound as f64 - 2.0);
    Ok((value, tail_bound))
}

/// Singular series for the difference `d`: zero when `d` is odd,
/// `2 * c2 * prod_{p | d, p > 2} (p-1)/(p-2)` when `d` is even.
pub fn singular_series(d: u64, c2: f64, table: &PrimeTable) -> Result<SingularValue> {
    if d == 0 {
        return Err(Error::SingularSeriesAtZero);
    }
    if d % 2 == 1 {
        return Ok(SingularValue {
            d,
            value: 0.0,
            c2_used: c2,
            c2_tail_bound: 0.0,
            ratio_num: 0,
            ratio_den: 1,
        });
    }
    let fac = factorize(d, table)?;
    let mut num: u128 = 2;
    let mut den: u128 = 1;
    for &(p, _) in &fac.factors {
        if p > 2 {
            num *= (p - 1) as u128;
            den *= (p - 2) as u128;
        }
    }
    let g = gcd_u128(num, den);
    let (num, den) = (num / g, den / g);
    debug_assert!(num <= u64::MAX as u128 && den <= u64::MAX as u128);
    let (ratio_num, ratio_den) = (num as u64, den as u64);
    Ok(SingularValue {
        d,
        value: c2 * (ratio_num as f64 / ratio_den as f64),
        c2_used: c2,
        c2_tail_bound: 0.0,
        ratio_num,
        ratio_den,
    })
}

/// Bulk variant of the singular-series product: `r[m] = prod_{p | m, p > 2}
/// (p-1)/(p-2)` for every `m <= bound`, so the series for even `d` is
/// `2 * c2 * r[d]`. Sieve-style accumulation in ascending prime order is
/// deterministic; relative drift is at most a few ulps per prime factor.
pub fn singular_ratio_sieve(bound: usize, table: &PrimeTable) -> Result<Vec<f64>> {
    if (bound as u64) > table.bound() {
        return Err(Error::ExceedsTableBound {
            value: bound as u64,
            bound: table.bound(),
        });
    }
    let mut r = vec![1.0f64; bound + 1];
    for &p in &table.primes()[1..] {
        let p = p as usize;
        if p > bound {
            break;
        }
        let f = (p as f64 - 1.0) / (p as f64 - 2.0);
        let mut m = p;
        while m <= bound {
            r[m] *= f;
            m += p;
        }
    }
    Ok(r)
}

/// The exact k-th primorial, `k <= 15`.
pub fn primorial(k: u32) -> Result<Primorial> {
    if k == 0 || k > MAX_PRIMORIAL_K {
        return Err(Error::PrimorialIndexOutOfRange(k));
    }
    let mut value = 1u64;
    for &p in &PRIMORIAL_PRIMES[..k as usize] {
        value *= p;
    }
    Ok(Primorial {
        k,
        value,
        largest_prime: PRIMORIAL_PRIMES[k as usize - 1],
    })
}

/// All primorials up to index `k_max`.
pub fn primorials(k_max: u32) -> Result<Vec<Primorial>> {
    (1..=k_max).map(primorial).collect()
}

/// Largest primorial `<= x`. The comparison happens in integer space on
/// `floor(x)` because the larger primorials are not exactly representable
/// in an f64.
pub fn primorial_floor(x: f64) -> Result<Primorial> {
    if x.is_nan() || x < 2.0 {
        return Err(Error::PrimorialArgumentOutOfRange(x));
    }
    let xi = x.floor() as u128;
    if xi >= PRIMORIAL_16 {
        return Err(Error::PrimorialArgumentOutOfRange(x));
    }
    let mut best = primorial(1)?;
    for k in 2..=MAX_PRIMORIAL_K {
        let cand = primorial(k)?;
        if cand.value as u128 <= xi {
            best = cand;
        } else {
            break;
        }
    }
    Ok(best)
}

/// Smallest primorial `>= x`; arguments at or below 2 map to the first
/// primorial.
pub fn primorial_ceiling(x: f64) -> Result<Primorial> {
    if x <= 2.0 {
        return primorial(1);
    }
    let xi = x.ceil() as u128;
    for k in 1..=MAX_PRIMORIAL_K {
        let cand = primorial(k)?;
        if cand.value as u128 >= xi {
            return Ok(cand);
        }
    }
    Err(Error::PrimorialArgumentOutOfRange(x))
}

/// Divisor sum `M(d) = sum_{p | d} 1/p`.
pub fn mertens_divisor_sum(d: u64, table: &PrimeTable) -> Result<f64> {
    let fac = factorize(d, table)?;
    Ok(fac.factors.iter().map(|&(p, _)| 1.0 / p as f64).sum())
}

/// `prod_{p <= y} (1 - 1/p)^-1` as a straight floating product in
/// ascending prime order.
pub fn mertens_product(y: f64, table: &PrimeTable) -> Result<f64> {
    if y.is_nan() || y < 3.0 || y > table.bound() as f64 {
        return Err(Error::MertensRange {
            y,
            bound: table.bound(),
        });
    }
    let mut value = 1.0f64;
    for &p in table.primes() {
        if p as f64 > y {
            break;
        }
        value *= 1.0 / (1.0 - 1.0 / p as f64);
    }
    Ok(value)
}

/// Euler's totient via the factorization.
pub fn euler_phi(q: u64, table: &PrimeTable) -> Result<u64> {
    if q == 0 {
        return Err(Error::ThresholdTooSmall(0));
    }
    let fac = factorize(q, table)?;
    let mut phi = 1u64;
    for &(p, mult) in &fac.factors {
        phi *= p.pow(mult - 1) * (p - 1);
    }
    Ok(phi)
}

/// `|log(p_k#) / p_k - 1|`, the relative deviation of the primorial
/// logarithm from its limit behavior. Reported by tests and the CLI;
/// not monotone in k at these small indices.
pub fn primorial_log_deviation(k: u32) -> Result<f64> {
    let pk = primorial(k)?;
    Ok(((pk.value as f64).ln() / pk.largest_prime as f64 - 1.0).abs())
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
