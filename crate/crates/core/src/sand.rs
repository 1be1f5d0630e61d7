//! Integer pairs whose product has digit sum equal to their difference:
//! the pair predicate, the pair counter, and explicit decimal witness
//! families.

use rayon::prelude::*;

use crate::digitsum::{digit_sum, max_digit_sum_below, Base};
use crate::error::{Result, SandError, X_CAP};
use crate::rules::{admissible_delta_rule, Kind, SandPair};

pub fn is_sand_number_pair(a: u64, b: u64, base: &Base) -> Result<bool> {
    if a >= b {
        return Err(SandError::UnorderedPair { a, b });
    }
    Ok(digit_sum(a as u128 * b as u128, base) as u64 == b - a)
}

/// `#{(a, b) : 1 <= a < b <= x, s_b(a b) = b - a}`. Several `b` for the same
/// `a` are all counted.
pub fn count_sand_numbers(x: u64, base: &Base) -> Result<u64> {
    if x > X_CAP {
        return Err(SandError::CapExceeded { x, cap: X_CAP });
    }
    if x < 2 {
        return Ok(0);
    }
    let rule = admissible_delta_rule(base, Kind::Numbers);
    let global = max_digit_sum_below(x as u128 * x as u128 + 1, base) as u64 + rule.period as u64;
    let deltas = rule.deltas_up_to(global);
    const CHUNK: u64 = 1 << 14;
    let chunks: Vec<u64> = (0..x.div_ceil(CHUNK)).collect();
    let total = chunks
        .into_par_iter()
        .map(|c| {
            let start = (c * CHUNK).max(1);
            let end = ((c + 1) * CHUNK).min(x);
            let mut n = 0u64;
            for a in start..end {
                let a128 = a as u128;
                // Two rounds of the digit-sum ceiling on a (a + d).
                let first = max_digit_sum_below(a128 * (a128 + global as u128) + 1, base) as u64;
                let bound = max_digit_sum_below(a128 * (a128 + first as u128) + 1, base) as u64;
                let bound = bound.min(x - a);
                for &d in deltas.iter().take_while(|&&d| d <= bound) {
                    if digit_sum(a128 * (a128 + d as u128), base) as u64 == d {
                        n += 1;
                    }
                }
            }
            n
        })
        .sum();
    Ok(total)
}

/// Differences with an explicit decimal witness family.
pub const WITNESS_DELTAS: [u64; 3] = [14, 32, 50];

/// A term `coeff * 10^exp` of the expanded product `S (S + delta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductTerm {
    pub coeff: u64,
    pub exp: u32,
}

const MAX_WITNESS_EXP: u32 = 18;

/// `S = 3 + 10^r + 10^s` for differences 14 and 32, and
/// `S = 7 + 3 10^r + 10^s` for 50, expanded as
/// `S (S + d) = c0 (c0 + d) + (2 c0 + d)(c1 10^r + c2 10^s) + (c1 10^r + c2 10^s)^2`.
fn witness_terms(delta: u64, r: u32, s: u32) -> (u128, Vec<ProductTerm>) {
    let (c0, c1, c2) = if delta == 50 {
        (7u64, 3u64, 1u64)
    } else {
        (3, 1, 1)
    };
    let p10 = |e: u32| 10u128.pow(e);
    let value = c0 as u128 + c1 as u128 * p10(r) + c2 as u128 * p10(s);
    let lin = 2 * c0 + delta;
    let terms = vec![
        ProductTerm {
            coeff: c0 * (c0 + delta),
            exp: 0,
        },
        ProductTerm {
            coeff: lin * c1,
            exp: r,
        },
        ProductTerm {
            coeff: lin * c2,
            exp: s,
        },
        ProductTerm {
            coeff: c1 * c1,
            exp: 2 * r,
        },
        ProductTerm {
            coeff: c2 * c2,
            exp: 2 * s,
        },
        ProductTerm {
            coeff: 2 * c1 * c2,
            exp: r + s,
        },
    ];
    (value, terms)
}

/// Digit positions where the expanded terms would carry when added column
/// by column.
pub fn carry_positions(terms: &[ProductTerm]) -> Vec<u32> {
    let mut columns: std::collections::BTreeMap<u32, u64> = Default::default();
    for t in terms {
        let mut c = t.coeff;
        let mut pos = t.exp;
        while c > 0 {
            *columns.entry(pos).or_insert(0) += c % 10;
            c /= 10;
            pos += 1;
        }
    }
    columns
        .into_iter()
        .filter(|&(_, v)| v >= 10)
        .map(|(p, _)| p)
        .collect()
}

/// Build the witness `S` for `delta` and exponents `r != s`, returning the
/// candidate pair `(S, S + delta)`. The digit-sum identity is checked on the
/// exact product; primality of either element is not implied.
pub fn witness(delta: u64, r: u32, s: u32) -> Result<SandPair> {
    if !WITNESS_DELTAS.contains(&delta) {
        return Err(SandError::InvalidArgument(format!(
            "no witness family for difference {delta}; expected one of {WITNESS_DELTAS:?}"
        )));
    }
    if r == 0 || s == 0 || r == s {
        return Err(SandError::InvalidArgument(format!(
            "exponents must be positive and distinct, got r={r} s={s}"
        )));
    }
    if r.max(s) > MAX_WITNESS_EXP {
        return Err(SandError::InvalidArgument(format!(
            "exponents above {MAX_WITNESS_EXP} overflow 128-bit products"
        )));
    }
    let (value, terms) = witness_terms(delta, r, s);
    let small = u64::try_from(value)
        .map_err(|_| SandError::InvalidArgument("witness exceeds 64 bits".into()))?;
    let base = Base::decimal();
    let pair = SandPair::new(small, small + delta, &base);
    if pair.holds() {
        return Ok(pair);
    }
    let carries = carry_positions(&terms);
    let reason = if carries.is_empty() {
        format!("digit sum of S(S+{delta}) is {} without carries", pair.dsum)
    } else {
        format!(
            "expanded terms carry at digit positions {carries:?}; digit sum is {}",
            pair.dsum
        )
    };
    Err(SandError::WitnessRejected(format!("S = {small}: {reason}")))
}
