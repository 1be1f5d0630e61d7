//! Gaussian surrogate for decimal digit sums of products.
//!
//! The digit sum of a product `u = a b` is modelled as a normal variable with
//! mean `M = (9/2) log10 u` and variance `V = (33/4) log10 u`. Restricting the
//! difference to `b - a = 18 j - 4` gives a population density `W(u)` that is
//! evaluated three ways:
//!
//! * [`w_direct`]: the lattice sum of Gaussians,
//! * [`w_poisson`]: its Poisson-summation dual, which converges much faster,
//! * [`w_truncated`]: the dual truncated to `j = 0, ±1`.
//!
//! [`count_restricted_pairs`] counts the actual pairs so the model can be set
//! against data.

use std::f64::consts::{LN_10, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digitsum::{digit_sum, max_digit_sum_below, Base};
use crate::error::{Result, SandError};

/// Differences are restricted to `SPACING * j - OFFSET`.
pub const SPACING: u64 = 18;
pub const OFFSET: u64 = 4;
/// First restricted difference.
pub const FIRST_DELTA: u64 = SPACING - OFFSET;

/// Decay exponent of the `j = ±1` terms: `11 pi^2 / (216 ln 10)`.
pub fn decay_exponent() -> f64 {
    11.0 * PI * PI / (216.0 * LN_10)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianModel {
    pub u: f64,
    pub mean: f64,
    pub variance: f64,
}

impl GaussianModel {
    pub fn new(u: f64) -> Result<Self> {
        if !u.is_finite() || u <= 1.0 {
            return Err(SandError::InvalidArgument(format!(
                "product magnitude must be finite and > 1, got {u}"
            )));
        }
        let l = u.log10();
        Ok(GaussianModel {
            u,
            mean: 4.5 * l,
            variance: 8.25 * l,
        })
    }

    /// Centre of the Gaussian in units of the lattice index `j`.
    fn lattice_centre(&self) -> f64 {
        (OFFSET as f64 + self.mean) / SPACING as f64
    }
}

/// Probability that `s10(a b) = b - a` under the Gaussian model.
pub fn pair_probability(a: u64, b: u64) -> Result<f64> {
    if a >= b {
        return Err(SandError::UnorderedPair { a, b });
    }
    let g = GaussianModel::new(a as f64 * b as f64)?;
    let dev = (b - a) as f64 - g.mean;
    Ok((-dev * dev / (2.0 * g.variance)).exp() / (2.0 * PI * g.variance).sqrt())
}

/// Lattice sum over `|j| <= j_max` of the Gaussian density at the restricted
/// differences, times the lattice spacing so the large-`u` limit is 1.
pub fn w_direct(u: f64, j_max: u32) -> Result<f64> {
    let g = GaussianModel::new(u)?;
    let c = g.lattice_centre();
    let k = (SPACING * SPACING) as f64 / 2.0;
    let j_max = j_max as i64;
    let sum: f64 = (-j_max..=j_max)
        .map(|j| {
            let t = j as f64 - c;
            (-k * t * t / g.variance).exp()
        })
        .sum();
    Ok(SPACING as f64 * sum / (2.0 * PI * g.variance).sqrt())
}

/// Smallest `j_max` for which [`w_direct`] has converged to double precision.
pub fn w_direct_converged_j_max(u: f64) -> Result<u32> {
    let g = GaussianModel::new(u)?;
    let reach = g.lattice_centre() + 8.0 * g.variance.sqrt() / SPACING as f64;
    Ok(reach.ceil() as u32 + 1)
}

/// Poisson-dual sum `sum_{|j|<=j_max} exp(-V pi^2 j^2 / 162 + i pi j (4+M)/9)`,
/// with conjugate terms paired into cosines.
pub fn w_poisson(u: f64, j_max: u32) -> Result<f64> {
    let g = GaussianModel::new(u)?;
    let damping = g.variance * PI * PI / ((SPACING * SPACING) as f64 / 2.0);
    let phase = PI * (OFFSET as f64 + g.mean) / (SPACING as f64 / 2.0);
    let mut total = 1.0;
    for j in 1..=j_max {
        let jf = j as f64;
        total += 2.0 * (-damping * jf * jf).exp() * (phase * jf).cos();
    }
    Ok(total)
}

/// `1 + 2 u^(-a) cos((pi/2)(log10 u + 8/9))`.
pub fn w_truncated(u: f64) -> Result<f64> {
    GaussianModel::new(u)?;
    Ok(1.0 + truncated_deviation(u))
}

fn truncated_deviation(u: f64) -> f64 {
    2.0 * u.powf(-decay_exponent()) * (PI / 2.0 * (u.log10() + 8.0 / 9.0)).cos()
}

/// Predicted density of restricted pairs at product `u`: `W(u) / (12 sqrt u)`.
pub fn density_p(u: f64) -> Result<f64> {
    Ok(w_truncated(u)? / (12.0 * u.sqrt()))
}

/// Restricted pairs `(a, a + d)`, `d ≡ 14 (mod 18)`, `s10(a (a+d)) = d`,
/// with `a (a + d) <= max_product`. Returns their products, ascending.
pub fn restricted_pair_products(max_product: u64) -> Vec<u64> {
    let base = Base::decimal();
    let ceiling = max_digit_sum_below(max_product as u128 + 1, &base) as u64;
    let deltas: Vec<u64> = (FIRST_DELTA..=ceiling.max(FIRST_DELTA))
        .step_by(SPACING as usize)
        .filter(|&d| d <= ceiling)
        .collect();
    let mut a_max = 0u64;
    while (a_max + 1) * (a_max + 1 + FIRST_DELTA) <= max_product {
        a_max += 1;
    }
    const CHUNK: u64 = 4096;
    let mut products: Vec<u64> = (0..a_max.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(a_max);
            let base = &base;
            let deltas = &deltas;
            (lo..=hi).flat_map(move |a| {
                deltas
                    .iter()
                    .map(move |&d| (d, a * (a + d)))
                    .take_while(move |&(_, p)| p <= max_product)
                    .filter(move |&(d, p)| digit_sum(p as u128, base) as u64 == d)
                    .map(|(_, p)| p)
            })
        })
        .collect();
    products.sort_unstable();
    products
}

/// Number of restricted pairs with product `<= max_product`.
pub fn count_restricted_pairs(max_product: u64) -> u64 {
    restricted_pair_products(max_product).len() as u64
}

/// Number of restricted pairs with `a b < u`.
pub fn count_by_product(u: f64) -> Result<u64> {
    if !u.is_finite() || !(1.0..=1e18).contains(&u) {
        return Err(SandError::InvalidArgument(format!(
            "product bound must lie in [1, 1e18], got {u}"
        )));
    }
    let max_product = u.ceil() as u64 - 1;
    Ok(count_restricted_pairs(max_product))
}

/// Largest integer strictly below `10^(n/5)`, computed exactly.
pub fn largest_product_below_power(n: u32) -> u64 {
    let guess = 10f64.powf(n as f64 / 5.0).floor() as u64;
    let below = |p: u64| pow5_below_pow10(p, n);
    let mut r = guess.saturating_sub(2);
    while below(r + 1) {
        r += 1;
    }
    while r > 0 && !below(r) {
        r -= 1;
    }
    r
}

/// `p^5 < 10^n` in exact 256-bit arithmetic.
fn pow5_below_pow10(p: u64, n: u32) -> bool {
    let mut lhs = Wide::from(1);
    for _ in 0..5 {
        lhs = lhs.mul_small(p);
    }
    let mut rhs = Wide::from(1);
    for _ in 0..n {
        rhs = rhs.mul_small(10);
    }
    lhs < rhs
}

/// Little-endian 4x64-bit unsigned integer, just enough for the bound above.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Wide([u64; 4]);

impl Wide {
    fn from(v: u64) -> Self {
        Wide([v, 0, 0, 0])
    }

    fn mul_small(self, m: u64) -> Self {
        let mut out = [0u64; 4];
        let mut carry = 0u128;
        for (o, &limb) in out.iter_mut().zip(&self.0) {
            let t = limb as u128 * m as u128 + carry;
            *o = t as u64;
            carry = t >> 64;
        }
        assert!(carry == 0, "256-bit overflow");
        Wide(out)
    }
}

impl PartialOrd for Wide {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Wide {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

/// `d(n)`: restricted pairs with `a b < 10^(n/5)`.
pub fn d_count(n: u32) -> u64 {
    count_restricted_pairs(largest_product_below_power(n))
}

/// `d(n)` for every `n` in `range`, from a single enumeration.
pub fn d_counts(range: std::ops::RangeInclusive<u32>) -> Vec<(u32, u64)> {
    let top = *range.end();
    let products = restricted_pair_products(largest_product_below_power(top));
    range
        .map(|n| {
            let bound = largest_product_below_power(n);
            (n, products.partition_point(|&p| p <= bound) as u64)
        })
        .collect()
}

pub const MAX_SERIES_N: u32 = 70;

/// One point of the fluctuation comparison at `u = 10^(n/5)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluctuationRow {
    pub n: u32,
    pub u: f64,
    pub d_n: u64,
    pub d_prime: f64,
    pub d_fluc_scaled: f64,
    pub p_fluc_scaled: f64,
}

/// Rows for `n_min..=n_max` from enumerated counts.
pub fn fluctuation_series(n_min: u32, n_max: u32) -> Result<Vec<FluctuationRow>> {
    check_series_range(n_min, n_max)?;
    let counts = d_counts(n_min - 1..=n_max + 1);
    fluctuation_rows(n_min, n_max, |n| counts[(n - (n_min - 1)) as usize].1)
}

fn check_series_range(n_min: u32, n_max: u32) -> Result<()> {
    if n_min < 1 || n_min >= n_max || n_max + 1 > MAX_SERIES_N {
        return Err(SandError::InvalidArgument(format!(
            "series needs 1 <= n_min < n_max < {MAX_SERIES_N}, got {n_min}..{n_max}"
        )));
    }
    Ok(())
}

/// Rows for `n_min..=n_max` from any count function defined on
/// `n_min - 1 ..= n_max + 1`.
pub fn fluctuation_rows(
    n_min: u32,
    n_max: u32,
    d: impl Fn(u32) -> u64,
) -> Result<Vec<FluctuationRow>> {
    check_series_range(n_min, n_max)?;
    let pow = |n: u32| 10f64.powf(n as f64 / 5.0);
    (n_min..=n_max)
        .map(|n| {
            let u = pow(n);
            let scale = 12.0 * u.sqrt();
            let d_prime = (d(n + 1) as f64 - d(n - 1) as f64) / (pow(n + 1) - pow(n - 1));
            let d_fluc = d_prime - 1.0 / scale;
            let p_fluc = density_p(u)? - 1.0 / scale;
            Ok(FluctuationRow {
                n,
                u,
                d_n: d(n),
                d_prime,
                d_fluc_scaled: d_fluc * scale,
                p_fluc_scaled: p_fluc * scale,
            })
        })
        .collect()
}
