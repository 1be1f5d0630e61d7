use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "sand",
    version,
    about = "Enumerate pairs whose product's digit sum equals their difference"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Prime pair counts per difference at each threshold.
    #[command(
        after_help = "CSV columns: x, delta_<d> for each difference seen, total.\n\
        The total includes sporadic pairs outside the residue classes; a footer line names them.\n\
        With --shard K/N only that shard's work units are computed into --checkpoint, and\n\
        the columns are range_lo, range_hi, primes, pairs."
    )]
    Table1(TableArgs),

    /// Totals with the three density estimators.
    #[command(after_help = "CSV columns: x, total, pi_x, est_pi = x T / pi(x)^2,\n\
        est_log = T log^2 x / x, est_li2 = T / Li_2(x) with Li_2 integrated from 2.\n\
        Estimators are printed to 4 decimals and left empty where undefined.")]
    Estimators(TableArgs),

    /// Relative deviation of decimal totals from (3/4) x / log^2 x.
    #[command(after_help = "CSV columns: x, total, theta (6 decimals). Decimal only.")]
    Theta(TableArgs),

    /// Counts of integer pairs (not necessarily prime).
    #[command(after_help = "CSV columns: x, count, ratio = count / x (6 decimals).")]
    Numbers(NumbersArgs),

    /// Restricted pair counts d(n) at u = 10^(n/5) against the Gaussian model.
    #[command(
        after_help = "CSV columns: n, u, d_n, d_prime (discrete derivative of d),\n\
        d_fluc_scaled = 12 sqrt(u) d_prime - 1, p_fluc_scaled = W(u) - 1 from the truncated\n\
        dual sum, w_direct, w_poisson. Floats in scientific notation."
    )]
    Fluct(FluctArgs),

    /// The first prime pairs with a given difference.
    #[command(after_help = "CSV columns: index, p, q, product, digit_sum.")]
    List(ListArgs),

    /// Exact density constants per base.
    #[command(after_help = "CSV columns: base, constant (exact fraction), value (6 decimals).")]
    Constants(ConstantsArgs),

    /// Combine checkpoint files from separate runs or shards.
    #[command(
        after_help = "CSV columns: delta, count over the union of the inputs.\n\
        Footer lines give the covered intervals and the prime count.\n\
        With --checkpoint the combined records are written there for a later --resume."
    )]
    Merge(MergeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ThreadArgs {
    /// Worker threads. Defaults to the available parallelism.
    #[arg(long, env = "SAND_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Radix.
    #[arg(long, default_value_t = 10)]
    pub base: u32,

    /// Largest x; thresholds default to 10^k and 3*10^k up to it.
    #[arg(long, value_parser = parse_count, conflicts_with = "thresholds")]
    pub max: Option<u64>,

    /// Explicit ascending thresholds, e.g. 1e4,3e4,1e5.
    #[arg(long, value_parser = parse_count, value_delimiter = ',')]
    pub thresholds: Option<Vec<u64>>,
}

impl GridArgs {
    pub fn resolve(&self, default_max: u64) -> Vec<u64> {
        match &self.thresholds {
            Some(t) => t.clone(),
            None => default_grid(self.max.unwrap_or(default_max)),
        }
    }
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub grid: GridArgs,

    /// Integers per work unit.
    #[arg(long, value_parser = parse_count, default_value = "10000000")]
    pub segment_size: u64,

    /// Append one line per finished work unit to this file.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,

    /// Reuse the units already recorded in --checkpoint.
    #[arg(long, requires = "checkpoint")]
    pub resume: bool,

    /// Compute only shard K of N (0-based) into --checkpoint.
    #[arg(long, value_parser = parse_shard, requires = "checkpoint")]
    pub shard: Option<(usize, usize)>,

    #[command(flatten)]
    pub threads: ThreadArgs,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct NumbersArgs {
    #[command(flatten)]
    pub grid: GridArgs,

    #[command(flatten)]
    pub threads: ThreadArgs,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FluctArgs {
    /// First n.
    #[arg(long, default_value_t = 13)]
    pub n_min: u32,

    /// Last n.
    #[arg(long, default_value_t = 40)]
    pub n_max: u32,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ListArgs {
    /// Difference q - p.
    #[arg(long)]
    pub delta: u64,

    /// How many pairs.
    #[arg(long, default_value_t = 19)]
    pub count: usize,

    /// Radix.
    #[arg(long, default_value_t = 10)]
    pub base: u32,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    /// Radices; defaults to 2 through 16.
    #[arg(long, value_delimiter = ',')]
    pub base: Option<Vec<u32>>,

    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MergeArgs {
    /// Checkpoint files to combine.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    /// Write the combined records here.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,

    #[command(flatten)]
    pub out: OutputArgs,
}

/// Accepts `1000`, `1_000`, `1e8`, `3e7`, `10^8`, `3*10^7`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t: String = s.trim().chars().filter(|&c| c != '_').collect();
    let bad = || format!("not a non-negative integer: {s:?}");
    let (mantissa, exp) = if let Some((m, e)) = t.split_once(['e', 'E']) {
        (m, Some(e))
    } else if let Some((m, e)) = t.split_once("10^") {
        let m = m.strip_suffix('*').unwrap_or(m);
        (if m.is_empty() { "1" } else { m }, Some(e))
    } else {
        (t.as_str(), None)
    };
    let m: u64 = mantissa.parse().map_err(|_| bad())?;
    let e: u32 = match exp {
        Some(e) => e.parse().map_err(|_| bad())?,
        None => 0,
    };
    10u64
        .checked_pow(e)
        .and_then(|p| p.checked_mul(m))
        .ok_or_else(|| format!("{s:?} does not fit in 64 bits"))
}

fn parse_shard(s: &str) -> Result<(usize, usize), String> {
    let (k, n) = s.split_once('/').ok_or("expected K/N, e.g. 0/4")?;
    let k: usize = k.parse().map_err(|_| format!("bad shard index {k:?}"))?;
    let n: usize = n.parse().map_err(|_| format!("bad shard count {n:?}"))?;
    if n == 0 || k >= n {
        return Err(format!("need 0 <= K < N, got {k}/{n}"));
    }
    Ok((k, n))
}

/// `10^k` and `3*10^k` from 100 up to `max`, ending at `max`.
pub fn default_grid(max: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut p = 100u64;
    while p <= max {
        grid.push(p);
        if let Some(t) = p.checked_mul(3).filter(|&t| t <= max) {
            grid.push(t);
        }
        match p.checked_mul(10) {
            Some(next) => p = next,
            None => break,
        }
    }
    if grid.last() != Some(&max) {
        grid.push(max);
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1000"), Ok(1000));
        assert_eq!(parse_count("1_000_000"), Ok(1_000_000));
        assert_eq!(parse_count("1e8"), Ok(100_000_000));
        assert_eq!(parse_count("3e7"), Ok(30_000_000));
        assert_eq!(parse_count("10^8"), Ok(100_000_000));
        assert_eq!(parse_count("3*10^7"), Ok(30_000_000));
        assert!(parse_count("1.5e3").is_err());
        assert!(parse_count("-4").is_err());
        assert!(parse_count("1e30").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(default_grid(10_000), vec![100, 300, 1_000, 3_000, 10_000]);
        assert_eq!(default_grid(5_000), vec![100, 300, 1_000, 3_000, 5_000]);
        assert_eq!(default_grid(10), vec![10]);
        assert_eq!(default_grid(300), vec![100, 300]);
    }

    #[test]
    fn shards() {
        assert_eq!(parse_shard("1/4"), Ok((1, 4)));
        assert!(parse_shard("4/4").is_err());
        assert!(parse_shard("1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
