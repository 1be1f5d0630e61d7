use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use sand_core::asymptotics::{estimator_row, sand_prime_constant, theta as theta_of};
use sand_core::checkpoint::{
    merge_records, read_records, validate_disjoint, CheckpointWriter, RangeRecord,
};
use sand_core::enumerate::enumerate_shard;
use sand_core::fluct::{fluctuation_series, w_direct, w_direct_converged_j_max, w_poisson};
use sand_core::{
    admissible_delta_rule, count_sand_numbers, enumerate_table, list_sand_primes, with_threads,
    Base, EnumerationConfig, Kind, RangeTally, Result, SandError, TableRow,
};

use crate::args::{
    ConstantsArgs, FluctArgs, ListArgs, MergeArgs, NumbersArgs, OutputArgs, TableArgs, ThreadArgs,
};
use crate::output::{Cell, Table};

const DEFAULT_MAX: u64 = 100_000_000;
const DEFAULT_NUMBERS_MAX: u64 = 100_000;

fn emit(table: &Table, out: &OutputArgs) -> Result<()> {
    let mut sink: Box<dyn Write> = match &out.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| at(path)(e.into()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    table.write(out.format, &mut *sink)?;
    Ok(())
}

/// Prefix I/O errors with the path they concern.
fn at(path: &Path) -> impl Fn(SandError) -> SandError + '_ {
    move |e| match e {
        SandError::Io(io) => SandError::Io(io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        other => other,
    }
}

fn threads(t: &ThreadArgs) -> usize {
    t.threads
        .map(|n| n as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn base(radix: u32) -> Result<Base> {
    Base::new(radix)
}

/// Records already in the checkpoint, or an error if the file holds data
/// and `--resume` was not given.
fn prior_units(args: &TableArgs, radix: u32) -> Result<Vec<RangeTally>> {
    let Some(path) = &args.checkpoint else {
        return Ok(Vec::new());
    };
    if !path.exists() {
        return Ok(Vec::new());
    }
    let records = read_records(path).map_err(at(path))?;
    if !args.resume {
        if records.is_empty() {
            return Ok(Vec::new());
        }
        return Err(SandError::InvalidArgument(format!(
            "{} already holds {} records; pass --resume to continue it",
            path.display(),
            records.len()
        )));
    }
    validate_disjoint(&records, Some(radix))?;
    Ok(records.iter().map(RangeRecord::to_tally).collect())
}

fn run_table(args: &TableArgs) -> Result<Option<Vec<TableRow>>> {
    let b = base(args.grid.base)?;
    let config = EnumerationConfig {
        base: b.clone(),
        thresholds: args.grid.resolve(DEFAULT_MAX),
        segment_size: args.segment_size,
    };
    let prior = prior_units(args, b.radix())?;
    let writer = match &args.checkpoint {
        Some(path) => Some(CheckpointWriter::append(path, b.radix()).map_err(at(path))?),
        None => None,
    };
    let record = |t: &RangeTally| match &writer {
        Some(w) => w.record(t),
        None => Ok(()),
    };
    let n = threads(&args.threads);
    if let Some((k, of)) = args.shard {
        let tallies = with_threads(n, || enumerate_shard(&config, k, of, &prior, record))??;
        let mut table = Table::new(["range_lo", "range_hi", "primes", "pairs"]);
        for t in &tallies {
            table.push(vec![
                Cell::Int(t.lo),
                Cell::Int(t.hi),
                Cell::Int(t.primes),
                Cell::Int(t.counts.values().sum()),
            ]);
        }
        table
            .notes
            .push(format!("shard {k}/{of}: {} units", tallies.len()));
        emit(&table, &args.out)?;
        return Ok(None);
    }
    let rows = with_threads(n, || enumerate_table(&config, &prior, record))??;
    Ok(Some(rows))
}

pub fn table1(args: TableArgs) -> Result<()> {
    let Some(rows) = run_table(&args)? else {
        return Ok(());
    };
    let deltas: BTreeSet<u64> = rows
        .iter()
        .flat_map(|r| r.histogram.counts.keys().copied())
        .collect();
    let mut columns = vec!["x".to_string()];
    columns.extend(deltas.iter().map(|d| format!("delta_{d}")));
    columns.push("total".into());
    let mut table = Table::new(columns);
    for r in &rows {
        let mut row = vec![Cell::Int(r.x)];
        row.extend(deltas.iter().map(|&d| Cell::Int(r.histogram.count(d))));
        row.push(Cell::Int(r.histogram.total));
        table.push(row);
    }
    let rule = admissible_delta_rule(&rows[0].histogram.base, Kind::Primes);
    for p in &rule.sporadic {
        table.notes.push(format!(
            "total includes the pair ({}, {}) with difference {} wherever {} <= x",
            p.small, p.large, p.delta, p.large
        ));
    }
    emit(&table, &args.out)
}

pub fn estimators(args: TableArgs) -> Result<()> {
    let Some(rows) = run_table(&args)? else {
        return Ok(());
    };
    let mut table = Table::new(["x", "total", "pi_x", "est_pi", "est_log", "est_li2"]);
    for r in &rows {
        let t = r.histogram.total;
        let mut row = vec![Cell::Int(r.x), Cell::Int(t), Cell::Int(r.pi_x)];
        match estimator_row(r.x, t, r.pi_x) {
            Ok(e) => row.extend([e.est_pi, e.est_log, e.est_li2].map(|v| Cell::Fixed(v, 4))),
            Err(_) => row.extend([Cell::Missing, Cell::Missing, Cell::Missing]),
        }
        table.push(row);
    }
    emit(&table, &args.out)
}

pub fn theta(args: TableArgs) -> Result<()> {
    if args.grid.base != 10 {
        return Err(SandError::InvalidArgument(
            "theta compares against the decimal constant 3/4; use --base 10".into(),
        ));
    }
    let Some(rows) = run_table(&args)? else {
        return Ok(());
    };
    let mut table = Table::new(["x", "total", "theta"]);
    for r in &rows {
        let th = theta_of(r.x, r.histogram.total).map_or(Cell::Missing, |v| Cell::Fixed(v, 6));
        table.push(vec![Cell::Int(r.x), Cell::Int(r.histogram.total), th]);
    }
    emit(&table, &args.out)
}

pub fn numbers(args: NumbersArgs) -> Result<()> {
    let b = base(args.grid.base)?;
    let xs = args.grid.resolve(DEFAULT_NUMBERS_MAX);
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SandError::InvalidArgument(
            "thresholds must be strictly ascending".into(),
        ));
    }
    let counts = with_threads(threads(&args.threads), || {
        xs.iter()
            .map(|&x| count_sand_numbers(x, &b))
            .collect::<Result<Vec<_>>>()
    })??;
    let mut table = Table::new(["x", "count", "ratio"]);
    for (&x, &c) in xs.iter().zip(&counts) {
        let ratio = if x == 0 {
            Cell::Missing
        } else {
            Cell::Fixed(c as f64 / x as f64, 6)
        };
        table.push(vec![Cell::Int(x), Cell::Int(c), ratio]);
    }
    emit(&table, &args.out)
}

pub fn fluct(args: FluctArgs) -> Result<()> {
    let rows = fluctuation_series(args.n_min, args.n_max)?;
    let mut table = Table::new([
        "n",
        "u",
        "d_n",
        "d_prime",
        "d_fluc_scaled",
        "p_fluc_scaled",
        "w_direct",
        "w_poisson",
    ]);
    for r in rows {
        let direct = w_direct(r.u, w_direct_converged_j_max(r.u)?)?;
        let poisson = w_poisson(r.u, 50)?;
        table.push(vec![
            Cell::Int(r.n as u64),
            Cell::Sci(r.u, 6),
            Cell::Int(r.d_n),
            Cell::Sci(r.d_prime, 6),
            Cell::Sci(r.d_fluc_scaled, 6),
            Cell::Sci(r.p_fluc_scaled, 6),
            Cell::Sci(direct, 9),
            Cell::Sci(poisson, 9),
        ]);
    }
    emit(&table, &args.out)
}

pub fn list(args: ListArgs) -> Result<()> {
    let pairs = list_sand_primes(args.delta, args.count, &base(args.base)?)?;
    let mut table = Table::new(["index", "p", "q", "product", "digit_sum"]);
    for (i, p) in pairs.iter().enumerate() {
        table.push(vec![
            Cell::Int(i as u64 + 1),
            Cell::Int(p.small),
            Cell::Int(p.large),
            Cell::Text(p.product.to_string()),
            Cell::Int(p.dsum as u64),
        ]);
    }
    emit(&table, &args.out)
}

pub fn constants(args: ConstantsArgs) -> Result<()> {
    let radices = args.base.unwrap_or_else(|| (2..=16).collect());
    let mut table = Table::new(["base", "constant", "value"]);
    for r in radices {
        let c = sand_prime_constant(&base(r)?);
        let value = *c.numer() as f64 / *c.denom() as f64;
        table.push(vec![
            Cell::Int(r as u64),
            Cell::Text(c.to_string()),
            Cell::Fixed(value, 6),
        ]);
    }
    emit(&table, &args.out)
}

pub fn merge(args: MergeArgs) -> Result<()> {
    let mut records = Vec::new();
    for path in &args.inputs {
        records.extend(read_records(path).map_err(at(path))?);
    }
    let merged = merge_records(&records)?;
    if let Some(path) = &args.checkpoint {
        if path.exists() && std::fs::metadata(path)?.len() > 0 {
            return Err(SandError::InvalidArgument(format!(
                "refusing to overwrite non-empty {}",
                path.display()
            )));
        }
        records.sort_by_key(|r| r.range_lo);
        let writer = CheckpointWriter::append(path, merged.base).map_err(at(path))?;
        for r in &records {
            writer.record(&r.to_tally())?;
        }
    }
    let mut table = Table::new(["delta", "count"]);
    for (&d, &c) in &merged.counts {
        table.push(vec![Cell::Int(d), Cell::Int(c)]);
    }
    table.notes.push(format!(
        "base {}, {} records, {} primes",
        merged.base,
        records.len(),
        merged.primes
    ));
    for (lo, hi) in &merged.covered {
        table.notes.push(format!("covered [{lo}, {hi})"));
    }
    emit(&table, &args.out)
}
