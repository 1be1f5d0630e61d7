//! Segmented sieve of Eratosthenes over odd integers, exact prime counting,
//! and a deterministic Miller-Rabin test for the whole `u64` range.
//!
//! A [`Segment`] covers a half-open interval `[lo, hi)` with one bit per odd
//! integer. Base primes up to `sqrt(hi)` live in a [`BasePrimes`] table that
//! is built once and shared read-only by every worker.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SandError};

pub const DEFAULT_SEGMENT_SIZE: u64 = 10_000_000;

/// Odd primes `p` with `p * p < limit`, in ascending order.
#[derive(Clone, Debug)]
pub struct BasePrimes {
    limit: u64,
    primes: Vec<u32>,
}

impl BasePrimes {
    /// Table sufficient to sieve any segment whose upper end is `<= limit`.
    pub fn for_limit(limit: u64) -> Self {
        let root = isqrt(limit) + 1;
        let n = root as usize + 1;
        let mut composite = vec![false; n];
        let mut primes = Vec::new();
        let mut i = 3usize;
        while i < n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += 2 * i;
                }
            }
            i += 2;
        }
        BasePrimes { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn odd_primes(&self) -> &[u32] {
        &self.primes
    }
}

/// Primality flags for `[lo, hi)`. Bit `i` stands for the odd number
/// `first_odd + 2 i`; 2 is tracked separately.
#[derive(Clone, Debug)]
pub struct Segment {
    lo: u64,
    hi: u64,
    first_odd: u64,
    len: usize,
    bits: Vec<u64>,
    has_two: bool,
}

impl Segment {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    #[inline]
    pub fn contains(&self, n: u64) -> bool {
        n >= self.lo && n < self.hi
    }

    /// Primality of `n`, which must lie inside the segment.
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        debug_assert!(self.contains(n), "{n} outside [{}, {})", self.lo, self.hi);
        if n.is_multiple_of(2) {
            return n == 2 && self.has_two;
        }
        let i = ((n - self.first_odd) / 2) as usize;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// Primes in the segment, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let two = self.has_two.then_some(2u64);
        let first = self.first_odd;
        let len = self.len;
        two.into_iter().chain(
            self.bits
                .iter()
                .enumerate()
                .flat_map(move |(w, &word)| BitIter { word, base: w * 64 })
                .take_while(move |&i| i < len)
                .map(move |i| first + 2 * i as u64),
        )
    }

    pub fn count(&self) -> u64 {
        let ones: u64 = self.bits.iter().map(|w| w.count_ones() as u64).sum();
        ones + self.has_two as u64
    }
}

struct BitIter {
    word: u64,
    base: usize,
}

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let t = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + t)
    }
}

/// Sieve `[lo, hi)` with a freshly built base-prime table.
pub fn sieve_segment(lo: u64, hi: u64) -> Result<Segment> {
    let base = BasePrimes::for_limit(hi);
    sieve_segment_with(&base, lo, hi)
}

/// Sieve `[lo, hi)` using a shared base-prime table.
pub fn sieve_segment_with(base: &BasePrimes, lo: u64, hi: u64) -> Result<Segment> {
    if hi <= lo {
        return Err(SandError::InvalidRange {
            lo,
            hi,
            reason: "empty or reversed",
        });
    }
    if hi > base.limit {
        return Err(SandError::InvalidRange {
            lo,
            hi,
            reason: "base prime table too small for this segment",
        });
    }
    let first_odd = lo | 1;
    let len = if first_odd >= hi {
        0
    } else {
        (hi - first_odd).div_ceil(2) as usize
    };
    let mut bits = vec![u64::MAX; len.div_ceil(64)];
    if len % 64 != 0 {
        if let Some(last) = bits.last_mut() {
            *last = (1u64 << (len % 64)) - 1;
        }
    }
    let mut clear = |i: usize| bits[i / 64] &= !(1u64 << (i % 64));
    if first_odd == 1 && len > 0 {
        clear(0);
    }
    for &p in &base.primes {
        let p = p as u64;
        let sq = p * p;
        if sq >= hi {
            break;
        }
        let mut start = if sq >= first_odd {
            sq
        } else {
            let m = first_odd.div_ceil(p) * p;
            if m.is_multiple_of(2) {
                m + p
            } else {
                m
            }
        };
        if start < first_odd {
            start += 2 * p;
        }
        let mut i = ((start - first_odd) / 2) as usize;
        let step = p as usize;
        while i < len {
            clear(i);
            i += step;
        }
    }
    Ok(Segment {
        lo,
        hi,
        first_odd,
        len,
        bits,
        has_two: lo <= 2 && 2 < hi,
    })
}

/// `pi(x)`: number of primes `<= x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCount {
    pub x: u64,
    pub pi_x: u64,
}

pub fn prime_count(x: u64) -> PrimeCount {
    prime_count_with(x, DEFAULT_SEGMENT_SIZE)
}

/// Exact `pi(x)` from independently sieved segments of `segment_size`
/// integers, summed in parallel on the current rayon pool.
pub fn prime_count_with(x: u64, segment_size: u64) -> PrimeCount {
    if x < 2 {
        return PrimeCount { x, pi_x: 0 };
    }
    let hi = x + 1;
    let base = BasePrimes::for_limit(hi);
    let pi_x = count_primes_in(&base, 0, hi, segment_size);
    PrimeCount { x, pi_x }
}

/// Number of primes in `[lo, hi)`.
pub fn count_primes_in(base: &BasePrimes, lo: u64, hi: u64, segment_size: u64) -> u64 {
    let step = segment_size.max(128);
    let starts: Vec<u64> = (0..)
        .map(|k| lo + k * step)
        .take_while(|&s| s < hi)
        .collect();
    starts
        .into_par_iter()
        .map(|s| {
            sieve_segment_with(base, s, (s + step).min(hi))
                .map(|seg| seg.count())
                .unwrap_or(0)
        })
        .sum()
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for every `u64`.
///
/// Miller-Rabin with bases {2, 7, 61} below 2^32 and the first twelve primes
/// above; both sets have no strong pseudoprimes in their ranges.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    if n < 1 << 32 {
        [2u64, 7, 61]
            .iter()
            .all(|&a| strong_probable_prime_u32(n, a))
    } else {
        SMALL_PRIMES
            .iter()
            .all(|&a| strong_probable_prime_u64(n, a))
    }
}

fn strong_probable_prime_u32(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    let mulmod = |x: u64, y: u64| x * y % n;
    let mut x = powmod(a, d, n, mulmod);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod(x, x);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % n as u128) as u64;
    let mut x = powmod(a, d, n, mulmod);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod(x, x);
        if x == n - 1 {
            return true;
        }
    }
    false
}

#[inline]
fn powmod(mut base: u64, mut exp: u64, n: u64, mulmod: impl Fn(u64, u64) -> u64) -> u64 {
    let mut acc = 1 % n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base);
        }
        base = mulmod(base, base);
        exp >>= 1;
    }
    acc
}
