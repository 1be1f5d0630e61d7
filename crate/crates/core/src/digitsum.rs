//! Digit sums in an arbitrary radix.
//!
//! [`digit_sum`] is the hot path used by every enumerator. The two other
//! routes, [`digit_sum_legendre`] (floor-sum identity) and
//! [`ogf_digit_sums`] (power-series expansion of the generating function),
//! exist to cross-check it.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SandError};

/// A radix `b >= 2` together with the modulus `b - 1` and its distinct prime
/// factors. The factors drive both the admissible difference classes and the
/// density constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Base {
    radix: u32,
    prime_factors: Vec<u32>,
}

impl Base {
    pub fn new(radix: u32) -> Result<Self> {
        if radix < 2 {
            return Err(SandError::InvalidBase(radix as u64));
        }
        Ok(Base {
            radix,
            prime_factors: distinct_prime_factors(radix - 1),
        })
    }

    pub fn decimal() -> Self {
        Base::new(10).expect("10 is a valid radix")
    }

    pub fn binary() -> Self {
        Base::new(2).expect("2 is a valid radix")
    }

    #[inline]
    pub fn radix(&self) -> u32 {
        self.radix
    }

    /// `b - 1`. Every number is congruent to its digit sum modulo this value.
    #[inline]
    pub fn modulus(&self) -> u32 {
        self.radix - 1
    }

    /// Distinct primes dividing `b - 1`, ascending. Empty for `b = 2`.
    pub fn prime_factors(&self) -> &[u32] {
        &self.prime_factors
    }

    pub fn is_even(&self) -> bool {
        self.radix.is_multiple_of(2)
    }
}

impl std::fmt::Display for Base {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.radix)
    }
}

fn distinct_prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= n as u64 {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[inline]
fn digit_sum_u64_dec(mut n: u64) -> u32 {
    let mut s = 0u32;
    while n >= 100 {
        let r = (n % 100) as u32;
        n /= 100;
        s += r / 10 + r % 10;
    }
    let r = n as u32;
    s + r / 10 + r % 10
}

#[inline]
fn digit_sum_u64(mut n: u64, radix: u64) -> u32 {
    let mut s = 0u64;
    while n > 0 {
        s += n % radix;
        n /= radix;
    }
    s as u32
}

/// Sum of the base-`b` digits of `n`.
#[inline]
pub fn digit_sum(n: u128, base: &Base) -> u32 {
    let radix = base.radix;
    if radix == 2 {
        return n.count_ones();
    }
    if let Ok(small) = u64::try_from(n) {
        return if radix == 10 {
            digit_sum_u64_dec(small)
        } else {
            digit_sum_u64(small, radix as u64)
        };
    }
    // Peel off a u64-sized block of low digits so the rest runs on u64.
    let block = wide_block(radix);
    let mut s = 0u32;
    let mut rest = n;
    while rest > u64::MAX as u128 {
        let low = (rest % block) as u64;
        rest /= block;
        s += if radix == 10 {
            digit_sum_u64_dec(low)
        } else {
            digit_sum_u64(low, radix as u64)
        };
    }
    s + if radix == 10 {
        digit_sum_u64_dec(rest as u64)
    } else {
        digit_sum_u64(rest as u64, radix as u64)
    }
}

/// Largest power of the radix that fits in a u64.
fn wide_block(radix: u32) -> u128 {
    let r = radix as u128;
    let mut p = 1u128;
    while p * r <= u64::MAX as u128 {
        p *= r;
    }
    p
}

/// Digit sum through the floor-sum identity
/// `s_b(n) = n - (b-1) * sum_{j>=1} floor(n / b^j)`.
pub fn digit_sum_legendre(n: u128, base: &Base) -> u32 {
    let radix = base.radix as u128;
    let mut floors: u128 = 0;
    let mut q = n / radix;
    while q > 0 {
        floors += q;
        q /= radix;
    }
    (n - (radix - 1) * floors) as u32
}

/// First `count` coefficients of the ordinary generating function
///
/// ```text
///   1/(1-z) * sum_{m>=0} (z^{b^m} - b z^{b^{m+1}} + (b-1) z^{(b+1) b^m})
///                        / ((1 - z^{b^m}) (1 - z^{b^{m+1}}))
/// ```
///
/// expanded as a truncated power series. Coefficient `k` is `s_b(k)`.
pub fn ogf_digit_sums(base: &Base, count: usize) -> Result<Vec<u64>> {
    if count == 0 {
        return Err(SandError::InvalidArgument(
            "series length must be at least 1".into(),
        ));
    }
    let b = base.radix as usize;
    let mut total = vec![0i64; count];
    let mut bm: usize = 1;
    while bm < count {
        let bm1 = bm.saturating_mul(b);
        let mut term = vec![0i64; count];
        term[bm] += 1;
        if bm1 < count {
            term[bm1] -= b as i64;
        }
        let top = bm.saturating_mul(b + 1);
        if top < count {
            term[top] += (b - 1) as i64;
        }
        divide_by_one_minus_power(&mut term, bm);
        divide_by_one_minus_power(&mut term, bm1);
        for (t, c) in total.iter_mut().zip(&term) {
            *t += c;
        }
        bm = bm1;
    }
    divide_by_one_minus_power(&mut total, 1);
    total
        .into_iter()
        .map(|c| {
            u64::try_from(c)
                .map_err(|_| SandError::InvalidArgument(format!("negative series coefficient {c}")))
        })
        .collect()
}

/// In-place multiplication by `1/(1 - z^k)` on a truncated series.
fn divide_by_one_minus_power(series: &mut [i64], k: usize) {
    if k == 0 || k >= series.len() {
        return;
    }
    for i in k..series.len() {
        series[i] += series[i - k];
    }
}

/// Number of base-`b` digits of `n` (one for `n = 0`).
pub fn digit_count(n: u128, base: &Base) -> u32 {
    let radix = base.radix as u128;
    let mut d = 1;
    let mut q = n / radix;
    while q > 0 {
        d += 1;
        q /= radix;
    }
    d
}

/// `(b-1) * digits(x-1)`: no `n < x` has a larger digit sum.
pub fn max_digit_sum_below(x: u128, base: &Base) -> u32 {
    let top = x.saturating_sub(1);
    base.modulus() * digit_count(top, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain digit loop, kept separate from the optimized paths.
    fn naive(mut n: u128, b: u128) -> u32 {
        let mut s = 0;
        while n > 0 {
            s += (n % b) as u32;
            n /= b;
        }
        s
    }

    fn base(b: u32) -> Base {
        Base::new(b).unwrap()
    }

    #[test]
    fn base_factors() {
        assert_eq!(base(10).prime_factors(), &[3]);
        assert_eq!(base(16).prime_factors(), &[3, 5]);
        assert_eq!(base(2).prime_factors(), &[] as &[u32]);
        assert_eq!(base(31).prime_factors(), &[2, 3, 5]);
        assert_eq!(base(10).modulus(), 9);
        assert!(Base::new(1).is_err());
        assert!(Base::new(0).is_err());
    }

    #[test]
    fn decimal_examples() {
        let b = Base::decimal();
        assert_eq!(digit_sum(14, &b), 5);
        assert_eq!(digit_sum(95, &b), 14);
        assert_eq!(digit_sum(0, &b), 0);
        assert_eq!(digit_sum(0, &base(7)), 0);
        for k in 0..127 {
            assert_eq!(digit_sum(1u128 << k, &Base::binary()), 1);
        }
    }

    #[test]
    fn legendre_examples() {
        let b = Base::decimal();
        assert_eq!(digit_sum_legendre(14, &b), 5);
        assert_eq!(digit_sum_legendre(99, &b), 18);
    }

    #[test]
    fn wide_values() {
        let b = Base::decimal();
        let n: u128 = 999_999_999_999_999_999_999_999;
        assert_eq!(digit_sum(n, &b), 9 * 24);
        assert_eq!(digit_sum(u128::MAX, &b), naive(u128::MAX, 10));
        for r in [3u32, 6, 7, 16, 36] {
            let x = u128::MAX - 12345;
            assert_eq!(digit_sum(x, &base(r)), naive(x, r as u128));
        }
    }

    #[test]
    fn legendre_agrees_below_million() {
        for r in [2u32, 4, 6, 8, 10, 16] {
            let b = base(r);
            for n in 0..1_000_000u128 {
                assert_eq!(digit_sum(n, &b), digit_sum_legendre(n, &b), "n={n} b={r}");
            }
        }
    }

    #[test]
    fn legendre_agrees_random_large() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let b = Base::decimal();
        for _ in 0..10_000 {
            let n: u128 = rng.gen_range(0..1_000_000_000_000u128);
            let s = naive(n, 10);
            assert_eq!(digit_sum(n, &b), s);
            assert_eq!(digit_sum_legendre(n, &b), s);
        }
    }

    #[test]
    fn ogf_small() {
        let ten = ogf_digit_sums(&Base::decimal(), 10).unwrap();
        assert_eq!(ten, (0..10).collect::<Vec<u64>>());
        let two = ogf_digit_sums(&Base::binary(), 8).unwrap();
        assert_eq!(two, vec![0, 1, 1, 2, 1, 2, 2, 3]);
        assert!(ogf_digit_sums(&Base::decimal(), 0).is_err());
        assert_eq!(ogf_digit_sums(&Base::decimal(), 1).unwrap(), vec![0]);
    }

    #[test]
    fn ogf_matches_digit_loop() {
        for r in [2u32, 3, 10] {
            let b = base(r);
            let series = ogf_digit_sums(&b, 10_000).unwrap();
            for (k, c) in series.iter().enumerate() {
                assert_eq!(*c as u32, naive(k as u128, r as u128), "k={k} b={r}");
            }
        }
    }

    #[test]
    fn ceiling_examples() {
        let b = Base::decimal();
        for d in 1..=12u32 {
            assert_eq!(max_digit_sum_below(10u128.pow(d), &b), 9 * d);
        }
        assert_eq!(max_digit_sum_below(2, &b), 9);
        assert_eq!(max_digit_sum_below(1_000_000, &Base::binary()), 20);
        let scan = (0u128..1_000_000).map(|n| n.count_ones()).max().unwrap();
        assert!(scan <= 20);
    }

    proptest! {
        #[test]
        fn congruent_mod_radix_minus_one(n in 0u128..u128::MAX, r in 3u32..40) {
            let b = base(r);
            prop_assert_eq!(digit_sum(n, &b) % (r - 1), (n % (r as u128 - 1)) as u32);
        }

        #[test]
        fn bounded_by_ceiling(n in 0u128..(1u128 << 100), r in 2u32..40) {
            let b = base(r);
            prop_assert!(digit_sum(n, &b) <= max_digit_sum_below(n + 1, &b));
            prop_assert_eq!(digit_sum(n, &b), naive(n, r as u128));
        }
    }
}
