//! Pairs of integers whose product has a digit sum equal to their
//! difference, in any radix.
//!
//! - [`digitsum`]: digit sums and their cross-check formulas
//! - [`primes`]: segmented sieve, `pi(x)`, deterministic primality
//! - [`rules`]: admissible difference classes, found by residue search
//! - [`sand`]: pair predicate, pair counter, decimal witness families
//! - [`enumerate`]: prime-pair histograms, threshold tables, listings
//! - [`checkpoint`]: resumable line-delimited run records
//! - [`asymptotics`]: density constants, `Li_2`, estimators, `theta`
//! - [`fluct`]: Gaussian surrogate model and restricted product counts

pub mod asymptotics;
pub mod checkpoint;
pub mod digitsum;
pub mod enumerate;
pub mod error;
pub mod fluct;
pub mod primes;
pub mod rules;
pub mod sand;

pub use digitsum::{digit_sum, digit_sum_legendre, max_digit_sum_below, ogf_digit_sums, Base};
pub use enumerate::{
    count_sand_primes, enumerate_table, list_sand_primes, sand_prime_pairs, DeltaHistogram,
    EnumerationConfig, RangeTally, TableRow,
};
pub use error::{Result, SandError, X_CAP};
pub use primes::{is_prime, prime_count, sieve_segment, PrimeCount, Segment};
pub use rules::{admissible_delta_rule, DeltaRule, Kind, SandPair};
pub use sand::{count_sand_numbers, is_sand_number_pair, witness};

/// Run `f` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| SandError::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
