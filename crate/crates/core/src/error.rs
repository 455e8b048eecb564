use thiserror::Error;

/// Unified error type for the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sieve bound {0} must be at least 2")]
    SieveBoundTooSmall(u64),
    #[error("sieve bound {bound} exceeds the default cap {cap}; enable allow_large to opt in")]
    SieveBoundExceedsCap { bound: u64, cap: u64 },
    #[error("prime index {index} out of range; table holds {count} primes")]
    PrimeIndexOutOfRange { index: u64, count: u64 },
    #[error("argument {value} exceeds the table bound {bound}")]
    ExceedsTableBound { value: u64, bound: u64 },
    #[error("threshold {0} must be at least 2")]
    ThresholdTooSmall(u64),
    #[error("factorizing {d} requires table bound squared >= d; bound is {bound}")]
    FactorTableTooSmall { d: u64, bound: u64 },
    #[error("singular series is undefined for d = 0")]
    SingularSeriesAtZero,
    #[error("truncation cutoff {0} must be at least 1000")]
    C2CutoffTooSmall(u64),
    #[error("primorial index {0} out of supported range 1..=15")]
    PrimorialIndexOutOfRange(u32),
    #[error("no primorial available for argument {0}")]
    PrimorialArgumentOutOfRange(f64),
    #[error("product cutoff y = {y} outside supported range [3, {bound}]")]
    MertensRange { y: f64, bound: u64 },
    #[error("empty integration range: need x - d > 2, got x = {x}, d = {d}")]
    EmptyIntegrationRange { x: f64, d: f64 },
    #[error("relative tolerance {0} outside supported range [1e-14, 1e-4]")]
    ToleranceOutOfRange(f64),
    #[error("aggregate statistics require a prime threshold x >= 1000, got {0}")]
    StatsThreshold(u64),
    #[error("champion trace is empty")]
    EmptyTrace,
    #[error("trace spans [{have_lo}, {have_hi}] but the window [{want_lo}, {want_hi}] is required")]
    WindowNotCovered {
        have_lo: u64,
        have_hi: u64,
        want_lo: u64,
        want_hi: u64,
    },
    #[error("difference {0} never achieves championship in the supplied trace")]
    ChampionAbsent(u64),
    #[error("oscillation pair must be two distinct differences, got {0} twice")]
    DegeneratePair(u64),
    #[error("slack factor {0} must be at least 1")]
    SlackBelowOne(f64),
    #[error("slack fraction {0} must lie in [0, 1)")]
    SlackFractionOutOfRange(f64),
    #[error("histogram state is inconsistent: {0}")]
    CorruptHistogram(String),
}

pub type Result<T> = std::result::Result<T, Error>;
