//! Statistics of differences between primes.
//!
//! The library computes, for all primes up to a threshold `x`:
//!
//! - `G(x,d)`: how many ordered prime pairs `p < p' <= x` differ by `d`,
//!   for every `d` at once, plus the champion set `D*(x)` of most common
//!   differences ([`diffcount`]);
//! - gap counts between consecutive primes and their champions;
//! - the singular series `S(d)` and related primorial and divisor-sum
//!   arithmetic ([`singular`]);
//! - the smooth pair-count model `S(d) * I(x,d)` with
//!   `I(x,d) = integral of dt/(log t log(t+d)) over [2, x-d]`, its
//!   deviation from the exact counts, and the aggregate error statistics
//!   mu(x) and nu(x) ([`hlmodel`], [`quad`]);
//! - structural checks on champion sweeps: transition points between
//!   primorial champions, envelope bounds, sieve-type upper bounds and
//!   averaged lower bounds, and factor profiles ([`analysis`]).
//!
//! Champion sets are maintained incrementally during a sweep, so a full
//! trace over all prime thresholds costs no more than the final
//! histogram. All floating-point reductions run in a fixed order, so
//! results are reproducible run to run at any thread count.

pub mod analysis;
pub mod diffcount;
pub mod error;
pub mod hlmodel;
pub mod quad;
pub mod sieve;
pub mod singular;

pub use analysis::{
    envelope_summary, factor_profile, factor_profiles, lemma5_lower_bound,
    primoriality_violations, sieve_bound_check, sieve_bound_ratio, theorem1_envelope,
    transition_oscillation, transition_table, BoundReport, EnvelopeSummary, FactorProfile,
    LowerBoundReport, OscillationReport, SieveBoundReport, TransitionRow,
};
pub use diffcount::{
    champion_trace, count_differences, count_gaps, gap_trace, sum_identity_check,
    ChampionSweep, ChampionTraceRow, DiffHistogram, GapHistogram,
};
pub use error::{Error, Result};
pub use hlmodel::{
    aggregate_stats, exact_count, h_expansion, h_factor, model_count, model_row,
    model_rows_even, pair_integral, AggregateStats, BulkIntegrals, ModelRow,
};
pub use sieve::{build_table, build_table_with, PrimeTable, SieveConfig};
pub use singular::{
    euler_phi, factorize, mertens_divisor_sum, mertens_product, primorial, primorial_ceiling,
    primorial_floor, primorial_log_deviation, primorials, singular_ratio_sieve, singular_series,
    twin_prime_constant, Factorization, Primorial, SingularValue, EULER_GAMMA,
};
