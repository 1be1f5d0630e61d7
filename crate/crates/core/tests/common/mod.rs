//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

pub fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n)
        .filter(|&k| (2..).take_while(|d| d * d <= k).all(|d| k % d != 0))
        .collect()
}

pub fn dsum(mut n: u64, b: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % b;
        n /= b;
    }
    s
}

/// All prime pairs `p < q <= x` with `s_b(p q) = q - p`, by direct search.
pub fn brute_prime_pairs(x: u64, b: u64) -> Vec<(u64, u64)> {
    let ps = primes_upto(x);
    let mut out = Vec::new();
    for (i, &q) in ps.iter().enumerate() {
        for &p in &ps[..i] {
            if dsum(p * q, b) == q - p {
                out.push((p, q));
            }
        }
    }
    out
}

pub fn delta_counts(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
    let mut m = BTreeMap::new();
    for &(p, q) in pairs {
        *m.entry(q - p).or_insert(0) += 1;
    }
    m
}

pub fn brute_number_pairs(x: u64, b: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for a in 1..=x {
        for c in a + 1..=x {
            if dsum(a * c, b) == c - a {
                out.push((a, c));
            }
        }
    }
    out
}
