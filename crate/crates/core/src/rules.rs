//! Admissible differences.
//!
//! Since `s_b(n) ≡ n (mod b-1)`, a pair `(a, a + d)` can only satisfy
//! `s_b(a (a + d)) = d` if `a (a + d) ≡ d (mod b-1)` has a solution. For prime
//! pairs, both elements must additionally be units modulo `b-1` and, apart from
//! pairs containing 2, odd, which forces `d` even. The rule is found by
//! exhaustive search over residues; nothing is tabulated.

use serde::{Deserialize, Serialize};

use crate::digitsum::{digit_count, digit_sum, Base};
use crate::primes::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Numbers,
    Primes,
}

/// An ordered pair `(small, large)` with its difference, product and the
/// digit sum of the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SandPair {
    pub small: u64,
    pub large: u64,
    pub delta: u64,
    pub product: u128,
    pub dsum: u32,
}

impl SandPair {
    pub fn new(small: u64, large: u64, base: &Base) -> Self {
        let product = small as u128 * large as u128;
        SandPair {
            small,
            large,
            delta: large - small,
            product,
            dsum: digit_sum(product, base),
        }
    }

    /// Digit sum of the product equals the difference.
    pub fn holds(&self) -> bool {
        self.small < self.large && self.dsum as u64 == self.delta
    }
}

/// Residue classes `d mod period` that a difference may occupy, plus
/// isolated pairs outside those classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaRule {
    pub base: Base,
    pub kind: Kind,
    pub period: u32,
    pub residues: Vec<u32>,
    pub sporadic: Vec<SandPair>,
}

impl DeltaRule {
    #[inline]
    pub fn admits(&self, delta: u64) -> bool {
        delta > 0
            && self
                .residues
                .binary_search(&((delta % self.period as u64) as u32))
                .is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.sporadic.is_empty()
    }

    /// Admissible differences in `1..=max`, ascending.
    pub fn deltas_up_to(&self, max: u64) -> Vec<u64> {
        if self.residues.is_empty() {
            return Vec::new();
        }
        let period = self.period as u64;
        let mut out = Vec::new();
        let mut block = 0u64;
        'outer: loop {
            for &r in &self.residues {
                let d = block + r as u64;
                if d > max {
                    break 'outer;
                }
                if d > 0 {
                    out.push(d);
                }
            }
            block += period;
        }
        out
    }

    pub fn sporadic_deltas(&self) -> impl Iterator<Item = u64> + '_ {
        self.sporadic.iter().map(|p| p.delta)
    }

    /// Human-readable class list, e.g. `14 mod 18; sporadic (2, 7)`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self
            .residues
            .iter()
            .map(|r| format!("{r} mod {}", self.period))
            .collect();
        for p in &self.sporadic {
            parts.push(format!("sporadic ({}, {})", p.small, p.large));
        }
        if parts.is_empty() {
            "none".to_string()
        } else {
            parts.join("; ")
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn is_unit(n: u64, m: u64) -> bool {
    m == 1 || gcd(n, m) == 1
}

pub fn admissible_delta_rule(base: &Base, kind: Kind) -> DeltaRule {
    let m = base.modulus() as u64;
    let solvable = |d: u64, units_only: bool| {
        (0..m).any(|n| {
            let n2 = (n + d) % m;
            (!units_only || (is_unit(n, m) && is_unit(n2, m))) && (n * n2) % m == d % m
        })
    };
    match kind {
        Kind::Numbers => {
            let residues = (0..m)
                .filter(|&d| solvable(d, false))
                .map(|d| d as u32)
                .collect();
            DeltaRule {
                base: base.clone(),
                kind,
                period: m as u32,
                residues,
                sporadic: Vec::new(),
            }
        }
        Kind::Primes => {
            // Both elements odd, so d even, unless one of them is 2.
            let period = if m.is_multiple_of(2) { m } else { 2 * m };
            let residues = (0..period)
                .filter(|&d| d % 2 == 0 && solvable(d, true))
                .map(|d| d as u32)
                .collect();
            DeltaRule {
                base: base.clone(),
                kind,
                period: period as u32,
                residues,
                sporadic: special_prime_pairs(base),
            }
        }
    }
}

/// Prime pairs with an element in `{2} ∪ {q : q | b-1}`: these escape the
/// unit/parity argument and are found by a finite search. For `(r, large)`
/// the difference is at most `(b-1) * digits(r * large)`, which bounds `large`.
fn special_prime_pairs(base: &Base) -> Vec<SandPair> {
    let mut specials: Vec<u64> = std::iter::once(2)
        .chain(base.prime_factors().iter().map(|&q| q as u64))
        .collect();
    specials.sort_unstable();
    specials.dedup();
    let m = base.modulus() as u64;
    let mut found = Vec::new();
    for &r in &specials {
        // r as the larger element.
        for small in 2..r {
            if is_prime(small) {
                let pair = SandPair::new(small, r, base);
                if pair.holds() {
                    found.push(pair);
                }
            }
        }
        // r as the smaller element.
        let mut large = r + 1;
        loop {
            let ceiling = m * digit_count(r as u128 * large as u128, base) as u64;
            if large - r > ceiling {
                break;
            }
            if is_prime(large) {
                let pair = SandPair::new(r, large, base);
                if pair.holds() {
                    found.push(pair);
                }
            }
            large += 1;
        }
    }
    found.sort_by_key(|p| (p.small, p.large));
    found.dedup();
    found
}
