//! Prime-pair enumeration.
//!
//! Pairs are enumerated by their larger element `q`: a segment of `q` values
//! is sieved together with a lower margin wide enough to hold every candidate
//! `p = q - d`, so one forward pass over the sieve answers all primality
//! probes. A pair is counted at threshold `x` when `q <= x`.
//!
//! Work is split into [`RangeTally`] units that never straddle a threshold.
//! Units are independent, merge by pointwise addition, and are the records
//! written to a checkpoint file.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digitsum::{digit_sum, digit_sum_legendre, max_digit_sum_below, Base};
use crate::error::{Result, SandError, X_CAP};
use crate::primes::{is_prime, sieve_segment_with, BasePrimes, DEFAULT_SEGMENT_SIZE};
use crate::rules::{admissible_delta_rule, DeltaRule, Kind, SandPair};

/// Hits between two independent re-verifications during a scan.
const VERIFY_EVERY: u64 = 100;

/// Per-difference counts of prime pairs with larger element `<= x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaHistogram {
    pub x: u64,
    pub base: Base,
    /// Nonzero counts for the residue-class differences.
    pub counts: BTreeMap<u64, u64>,
    /// Sporadic pairs with larger element `<= x`; not part of `counts`.
    pub sporadic: u64,
    pub total: u64,
}

impl DeltaHistogram {
    pub fn count(&self, delta: u64) -> u64 {
        self.counts.get(&delta).copied().unwrap_or(0)
    }
}

/// Counts for larger elements in `[lo, hi)`, plus the number of primes there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeTally {
    pub lo: u64,
    pub hi: u64,
    pub primes: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl RangeTally {
    pub fn merge_counts(into: &mut BTreeMap<u64, u64>, from: &BTreeMap<u64, u64>) {
        for (&d, &c) in from {
            *into.entry(d).or_insert(0) += c;
        }
    }
}

fn check_cap(x: u64) -> Result<()> {
    if x > X_CAP {
        return Err(SandError::CapExceeded { x, cap: X_CAP });
    }
    Ok(())
}

/// Visit every residue-class prime pair `(p, q)` with `q` in `[lo, hi)`.
/// Returns the number of primes in `[lo, hi)`.
pub fn scan_range(
    rule: &DeltaRule,
    base_primes: &BasePrimes,
    lo: u64,
    hi: u64,
    mut visit: impl FnMut(u64, u64, u64),
) -> Result<u64> {
    let base = &rule.base;
    let top = hi - 1;
    let dmax = max_digit_sum_below(top as u128 * top as u128, base) as u64;
    let deltas = rule.deltas_up_to(dmax);
    let m = base.modulus() as u64;
    let delta_mod: Vec<u64> = deltas.iter().map(|d| d % m).collect();

    let window_lo = lo.saturating_sub(dmax);
    let seg = sieve_segment_with(base_primes, window_lo, hi)?;
    let mut primes_in_range = 0u64;
    let mut hits = 0u64;
    for q in seg.primes().skip_while(|&q| q < lo) {
        primes_in_range += 1;
        let qm = q % m;
        for (i, &d) in deltas.iter().enumerate() {
            // p = q - d must be an odd prime; 2 only occurs in sporadic pairs.
            if d + 3 > q {
                break;
            }
            let p = q - d;
            if m > 1 {
                let pm = (qm + m - delta_mod[i]) % m;
                if pm * qm % m != delta_mod[i] {
                    continue;
                }
            }
            let product = p as u128 * q as u128;
            if digit_sum(product, base) as u64 != d || !seg.is_prime(p) {
                continue;
            }
            hits += 1;
            if hits % VERIFY_EVERY == 1 {
                verify_hit(p, q, d, base)?;
            }
            visit(p, q, d);
        }
    }
    Ok(primes_in_range)
}

fn verify_hit(p: u64, q: u64, d: u64, base: &Base) -> Result<()> {
    let product = p as u128 * q as u128;
    if digit_sum_legendre(product, base) as u64 != d || !is_prime(p) || !is_prime(q) {
        return Err(SandError::Verification(format!(
            "pair ({p}, {q}) with difference {d} failed re-verification"
        )));
    }
    Ok(())
}

pub fn tally_range(
    rule: &DeltaRule,
    base_primes: &BasePrimes,
    lo: u64,
    hi: u64,
) -> Result<RangeTally> {
    let mut counts = BTreeMap::new();
    let primes = scan_range(rule, base_primes, lo, hi, |_, _, d| {
        *counts.entry(d).or_insert(0) += 1;
    })?;
    Ok(RangeTally {
        lo,
        hi,
        primes,
        counts,
    })
}

/// Work units covering larger elements `[0, max(thresholds)]`, cut at every
/// `t + 1` and otherwise every `segment_size` integers.
pub fn plan_units(thresholds: &[u64], segment_size: u64) -> Vec<(u64, u64)> {
    let step = segment_size.max(1024);
    let mut units = Vec::new();
    let mut lo = 0u64;
    for &t in thresholds {
        let end = t + 1;
        while lo < end {
            let hi = (lo + step).min(end);
            units.push((lo, hi));
            lo = hi;
        }
    }
    units
}

/// One threshold of the output table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub x: u64,
    pub pi_x: u64,
    pub histogram: DeltaHistogram,
}

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    pub base: Base,
    pub thresholds: Vec<u64>,
    pub segment_size: u64,
}

impl EnumerationConfig {
    pub fn new(base: Base, thresholds: Vec<u64>) -> Self {
        EnumerationConfig {
            base,
            thresholds,
            segment_size: DEFAULT_SEGMENT_SIZE,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.thresholds.is_empty() {
            return Err(SandError::InvalidArgument("no thresholds given".into()));
        }
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SandError::InvalidArgument(
                "thresholds must be strictly ascending".into(),
            ));
        }
        check_cap(*self.thresholds.last().unwrap())
    }
}

/// Count prime pairs at every threshold.
///
/// Units already present in `completed` (from a checkpoint) are reused
/// instead of recomputed; every freshly computed unit is passed to
/// `on_unit` as soon as it finishes. Runs on the current rayon pool; results
/// do not depend on its size.
pub fn enumerate_table(
    config: &EnumerationConfig,
    completed: &[RangeTally],
    on_unit: impl Fn(&RangeTally) -> Result<()> + Sync,
) -> Result<Vec<TableRow>> {
    let (rule, tallies) = run_units(config, completed, |_| true, on_unit)?;
    let mut rows = Vec::with_capacity(config.thresholds.len());
    let mut counts = BTreeMap::new();
    let mut pi_x = 0u64;
    let mut next = tallies.iter().peekable();
    for &x in &config.thresholds {
        while let Some(t) = next.next_if(|t| t.hi <= x + 1) {
            RangeTally::merge_counts(&mut counts, &t.counts);
            pi_x += t.primes;
        }
        let sporadic = rule.sporadic.iter().filter(|p| p.large <= x).count() as u64;
        let total = counts.values().sum::<u64>() + sporadic;
        rows.push(TableRow {
            x,
            pi_x,
            histogram: DeltaHistogram {
                x,
                base: config.base.clone(),
                counts: counts.clone(),
                sporadic,
                total,
            },
        });
    }
    Ok(rows)
}

/// Compute only the work units whose plan index is `shard mod of`, for
/// splitting one table across machines. The shards' checkpoint records
/// together cover the full plan.
pub fn enumerate_shard(
    config: &EnumerationConfig,
    shard: usize,
    of: usize,
    completed: &[RangeTally],
    on_unit: impl Fn(&RangeTally) -> Result<()> + Sync,
) -> Result<Vec<RangeTally>> {
    if of == 0 || shard >= of {
        return Err(SandError::InvalidArgument(format!(
            "shard {shard}/{of}: need 0 <= shard < count"
        )));
    }
    Ok(run_units(config, completed, |i| i % of == shard, on_unit)?.1)
}

fn run_units(
    config: &EnumerationConfig,
    completed: &[RangeTally],
    select: impl Fn(usize) -> bool + Sync,
    on_unit: impl Fn(&RangeTally) -> Result<()> + Sync,
) -> Result<(DeltaRule, Vec<RangeTally>)> {
    config.validate()?;
    let rule = admissible_delta_rule(&config.base, Kind::Primes);
    let x_max = *config.thresholds.last().unwrap();
    let units = plan_units(&config.thresholds, config.segment_size);

    let mut known: BTreeMap<(u64, u64), &RangeTally> = BTreeMap::new();
    for t in completed {
        if known.insert((t.lo, t.hi), t).is_some() {
            return Err(SandError::Checkpoint(format!(
                "range [{}, {}) recorded twice",
                t.lo, t.hi
            )));
        }
    }
    for &(lo, hi) in known.keys() {
        if units.binary_search(&(lo, hi)).is_err() {
            return Err(SandError::Checkpoint(format!(
                "recorded range [{lo}, {hi}) does not match the work plan; \
                 resume with the same thresholds and segment size"
            )));
        }
    }

    let base_primes = BasePrimes::for_limit(x_max + 1);
    let tallies: Vec<RangeTally> = units
        .par_iter()
        .enumerate()
        .filter(|(i, _)| select(*i))
        .map(|(_, &(lo, hi))| {
            if let Some(done) = known.get(&(lo, hi)) {
                return Ok((*done).clone());
            }
            let tally = tally_range(&rule, &base_primes, lo, hi)?;
            on_unit(&tally)?;
            Ok(tally)
        })
        .collect::<Result<_>>()?;
    Ok((rule, tallies))
}

/// Histogram of prime pairs with larger element `<= x`.
pub fn count_sand_primes(x: u64, base: &Base) -> Result<DeltaHistogram> {
    let config = EnumerationConfig::new(base.clone(), vec![x]);
    let mut rows = enumerate_table(&config, &[], |_| Ok(()))?;
    Ok(rows.pop().expect("one threshold").histogram)
}

/// Every prime pair with larger element `<= x`, ordered by `(large, small)`.
pub fn sand_prime_pairs(x: u64, base: &Base) -> Result<Vec<SandPair>> {
    check_cap(x)?;
    let rule = admissible_delta_rule(base, Kind::Primes);
    let base_primes = BasePrimes::for_limit(x + 1);
    let units = plan_units(&[x], DEFAULT_SEGMENT_SIZE);
    let mut chunks: Vec<Vec<SandPair>> = units
        .par_iter()
        .map(|&(lo, hi)| {
            let mut out = Vec::new();
            scan_range(&rule, &base_primes, lo, hi, |p, q, _| {
                out.push(SandPair::new(p, q, base))
            })?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut pairs: Vec<SandPair> = rule
        .sporadic
        .iter()
        .filter(|p| p.large <= x)
        .copied()
        .collect();
    for c in chunks.iter_mut() {
        pairs.append(c);
    }
    pairs.sort_by_key(|p| (p.large, p.small));
    Ok(pairs)
}

/// The first `k` prime pairs with difference `delta`, by smaller element.
pub fn list_sand_primes(delta: u64, k: usize, base: &Base) -> Result<Vec<SandPair>> {
    if k == 0 {
        return Err(SandError::InvalidArgument("k must be at least 1".into()));
    }
    let rule = admissible_delta_rule(base, Kind::Primes);
    if rule.sporadic_deltas().any(|d| d == delta) {
        return Ok(rule
            .sporadic
            .iter()
            .filter(|p| p.delta == delta)
            .take(k)
            .copied()
            .collect());
    }
    if !rule.admits(delta) {
        return Err(SandError::InadmissibleDelta {
            delta,
            base: base.radix(),
            allowed: rule.describe(),
        });
    }
    let mut found = Vec::with_capacity(k);
    let mut lo = 3u64;
    let mut width = 1u64 << 16;
    let m = base.modulus() as u64;
    while found.len() < k {
        if lo > X_CAP {
            return Err(SandError::CapExceeded { x: lo, cap: X_CAP });
        }
        let hi = lo + width;
        let base_primes = BasePrimes::for_limit(hi + delta);
        let seg = sieve_segment_with(&base_primes, lo, hi + delta)?;
        for p in seg.primes().take_while(|&p| p < hi) {
            let q = p + delta;
            if m > 1 && (p % m) * (q % m) % m != delta % m {
                continue;
            }
            let pair = SandPair::new(p, q, base);
            if pair.holds() && seg.is_prime(q) {
                found.push(pair);
                if found.len() == k {
                    break;
                }
            }
        }
        lo = hi;
        width = (width * 2).min(DEFAULT_SEGMENT_SIZE);
    }
    Ok(found)
}

/// Smallest difference seen in each residue class among prime pairs with
/// larger element `<= search_limit`; `None` when a class has no witness yet.
pub fn smallest_witnessed_deltas(
    rule: &DeltaRule,
    search_limit: u64,
) -> Result<Vec<(u32, Option<u64>)>> {
    let hist = count_sand_primes(search_limit, &rule.base)?;
    Ok(rule
        .residues
        .iter()
        .map(|&r| {
            let first = hist
                .counts
                .keys()
                .copied()
                .find(|&d| (d % rule.period as u64) as u32 == r);
            (r, first)
        })
        .collect())
}
