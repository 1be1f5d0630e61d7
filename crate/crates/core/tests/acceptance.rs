//! Reference-value checks, one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every criterion is reported even when
//! an earlier one fails; the process exits non-zero if any failed.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::Ratio;
use sand_core::asymptotics::{estimator_row, sand_prime_constant};
use sand_core::digitsum::{digit_sum, digit_sum_legendre, max_digit_sum_below, ogf_digit_sums};
use sand_core::enumerate::{
    enumerate_table, list_sand_primes, sand_prime_pairs, smallest_witnessed_deltas,
};
use sand_core::fluct::{
    count_by_product, decay_exponent, w_direct, w_direct_converged_j_max, w_poisson, w_truncated,
};
use sand_core::{
    admissible_delta_rule, count_sand_numbers, count_sand_primes, with_threads, Base,
    EnumerationConfig, Kind, TableRow,
};

const DECIMAL_X: [u64; 13] = [
    100,
    300,
    1_000,
    3_000,
    10_000,
    30_000,
    100_000,
    300_000,
    1_000_000,
    3_000_000,
    10_000_000,
    30_000_000,
    100_000_000,
];

/// Counts for differences 14, 32, 50, ... at each decimal threshold.
const DECIMAL_COUNTS: [&[u64]; 13] = [
    &[7],
    &[9, 4],
    &[11, 10],
    &[14, 29, 1],
    &[15, 69, 21],
    &[16, 136, 109, 2],
    &[16, 218, 464, 14],
    &[18, 329, 1310, 134],
    &[18, 451, 3579, 954, 8],
    &[19, 582, 7740, 4099, 98],
    &[19, 722, 15662, 16417, 1170, 2],
    &[19, 826, 27871, 48714, 7831, 82],
    &[19, 944, 47206, 139196, 48831, 1985, 6],
];

/// Totals and the three estimator columns, decimal, at printed precision.
const DECIMAL_ESTIMATORS: [(u64, &str, &str, &str); 13] = [
    (8, "1.2800", "1.697", "0.7804"),
    (14, "1.0926", "1.518", "0.7965"),
    (22, "0.7795", "1.050", "0.6343"),
    (45, "0.7301", "0.9615", "0.6438"),
    (106, "0.7018", "0.8992", "0.6533"),
    (264, "0.7521", "0.9352", "0.7161"),
    (713, "0.7749", "0.9450", "0.7539"),
    (1792, "0.7954", "0.9501", "0.7789"),
    (5011, "0.8132", "0.9564", "0.8021"),
    (12539, "0.8002", "0.9297", "0.7926"),
    (33993, "0.7697", "0.8831", "0.7639"),
    (85344, "0.7418", "0.8432", "0.7375"),
    (238188, "0.7085", "0.8082", "0.7141"),
];

const BINARY_X: [u64; 7] = [
    100,
    1_000,
    10_000,
    100_000,
    1_000_000,
    10_000_000,
    100_000_000,
];

const BINARY_ESTIMATORS: [(u64, &str, &str, &str); 7] = [
    (6, "0.9600", "1.2724", "0.5853"),
    (32, "1.1338", "1.5269", "0.9226"),
    (172, "1.1387", "1.4591", "1.0601"),
    (922, "1.0021", "1.2221", "0.9749"),
    (5632, "0.9140", "1.0750", "0.9016"),
    (41421, "0.9378", "1.0761", "0.9308"),
    (335551, "1.0109", "1.1386", "1.0061"),
];

const FIRST_PAIRS: [(u64, [u64; 19]); 5] = [
    (
        14,
        [
            5, 17, 23, 29, 53, 59, 83, 113, 167, 383, 443, 1103, 1409, 2003, 3203, 11483, 100043,
            200003, 1001003,
        ],
    ),
    (
        32,
        [
            149, 179, 239, 281, 389, 431, 491, 509, 569, 659, 1019, 1031, 1061, 1259, 1289, 1427,
            1439, 1901, 2081,
        ],
    ),
    (
        50,
        [
            2543, 3137, 3407, 4973, 5147, 5693, 7193, 7523, 7649, 7673, 8243, 8513, 8573, 8627,
            9293, 9461, 9497, 9767, 9833,
        ],
    ),
    (
        68,
        [
            19961, 28211, 43541, 44111, 62861, 66821, 69941, 83621, 86561, 88721, 89261, 92111,
            94781, 99191, 120671, 125261, 129461, 129959, 130211,
        ],
    ),
    (
        86,
        [
            412253, 547661, 871163, 937661, 982703, 989381, 992363, 996551, 999917, 999953,
            1296101, 1297601, 1329863, 1336253, 1337813, 1378253, 1410203, 1608611, 1642211,
        ],
    ),
];

/// Restricted pair counts for n = 13..=40.
const D_LIST: [u64; 28] = [
    1, 3, 5, 7, 10, 12, 17, 23, 27, 35, 43, 52, 62, 73, 91, 114, 141, 165, 217, 267, 334, 430, 549,
    715, 902, 1143, 1442, 1782,
];

type Outcome = Result<String, String>;

fn check(failures: &mut Vec<String>, ok: bool, what: String) {
    if !ok {
        failures.push(what);
    }
}

fn verdict(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Ok(summary)
    } else {
        let shown: Vec<_> = failures.iter().take(8).cloned().collect();
        let more = failures.len().saturating_sub(shown.len());
        let tail = if more > 0 {
            format!(" (+{more} more)")
        } else {
            String::new()
        };
        Err(format!("{}{tail}", shown.join("; ")))
    }
}

fn table(base: u32, xs: &[u64]) -> Vec<TableRow> {
    let config = EnumerationConfig::new(Base::new(base).unwrap(), xs.to_vec());
    enumerate_table(&config, &[], |_| Ok(())).expect("enumeration")
}

fn estimator_failures(
    rows: &[TableRow],
    expected: &[(u64, &str, &str, &str)],
    fails: &mut Vec<String>,
) {
    for (row, &(t, pi, log, li2)) in rows.iter().zip(expected) {
        let x = row.x;
        check(
            fails,
            row.histogram.total == t,
            format!("x={x}: total {} != {t}", row.histogram.total),
        );
        let e = estimator_row(x, row.histogram.total, row.pi_x).unwrap();
        for (name, got, want) in [
            ("pi", e.est_pi, pi),
            ("log", e.est_log, log),
            ("li2", e.est_li2, li2),
        ] {
            let places = want.len() - want.find('.').unwrap() - 1;
            let got = format!("{got:.places$}");
            check(
                fails,
                got == want,
                format!("x={x}: est_{name} {got} != {want}"),
            );
        }
    }
}

fn criterion_1(rows: &[TableRow]) -> Outcome {
    let mut fails = Vec::new();
    for (row, expected) in rows.iter().zip(DECIMAL_COUNTS) {
        let h = &row.histogram;
        let got: Vec<u64> = h.counts.values().copied().collect();
        let keys: Vec<u64> = h.counts.keys().copied().collect();
        let want_keys: Vec<u64> = (0..expected.len() as u64).map(|k| 14 + 18 * k).collect();
        check(
            &mut fails,
            got == expected && keys == want_keys,
            format!("x={}: {:?}", row.x, h.counts),
        );
        let want_total = expected.iter().sum::<u64>() + 1;
        check(
            &mut fails,
            h.total == want_total && h.sporadic == 1,
            format!("x={}: total {}", row.x, h.total),
        );
    }
    verdict(
        fails,
        format!(
            "{} rows exact, x=1e8 total {}",
            rows.len(),
            rows.last().unwrap().histogram.total
        ),
    )
}

fn criterion_2(rows: &[TableRow]) -> Outcome {
    let mut fails = Vec::new();
    estimator_failures(rows, &DECIMAL_ESTIMATORS, &mut fails);
    verdict(
        fails,
        "13 rows, all three columns at printed precision".into(),
    )
}

fn criterion_3(rows: &[TableRow]) -> Outcome {
    let mut fails = Vec::new();
    estimator_failures(rows, &BINARY_ESTIMATORS, &mut fails);
    verdict(fails, "7 binary rows, totals and estimators exact".into())
}

fn criterion_4() -> Outcome {
    let mut fails = Vec::new();
    let base = Base::decimal();
    for (delta, want) in FIRST_PAIRS {
        let got: Vec<u64> = list_sand_primes(delta, 19, &base)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|p| p.small)
            .collect();
        check(&mut fails, got == want, format!("delta={delta}: {got:?}"));
    }
    verdict(fails, "first 19 for each of 14, 32, 50, 68, 86".into())
}

fn criterion_5() -> Outcome {
    let mut fails = Vec::new();
    for n in 1..13u32 {
        let u = 10f64.powf(n as f64 / 5.0);
        let d = count_by_product(u).map_err(|e| e.to_string())?;
        check(&mut fails, d == 0, format!("d({n})={d}, expected 0"));
    }
    for (i, &want) in D_LIST.iter().enumerate() {
        let n = 13 + i as u32;
        let u = 10f64.powf(n as f64 / 5.0);
        let d = count_by_product(u).map_err(|e| e.to_string())?;
        check(
            &mut fails,
            d == want,
            format!("d({n})={d}, expected {want}"),
        );
    }
    let total = fails.len();
    verdict(fails, "n=1..40 exact".into()).map_err(|e| format!("{total} mismatches: {e}"))
}

fn criterion_6() -> Outcome {
    let mut fails = Vec::new();
    let expected = [
        (2, Ratio::from_integer(1)),
        (4, Ratio::new(3, 4)),
        (6, Ratio::new(15, 16)),
        (8, Ratio::new(35, 36)),
        (10, Ratio::new(3, 4)),
    ];
    for (b, want) in expected {
        let got = sand_prime_constant(&Base::new(b).unwrap());
        check(&mut fails, got == want, format!("b={b}: {got}"));
    }
    for b in (3..=31).step_by(2) {
        let got = sand_prime_constant(&Base::new(b).unwrap());
        check(
            &mut fails,
            got == Ratio::from_integer(0),
            format!("b={b}: {got}"),
        );
    }
    verdict(fails, "even bases 2..10 and odd bases 3..31".into())
}

fn criterion_7() -> Outcome {
    let mut fails = Vec::new();
    let numbers = admissible_delta_rule(&Base::decimal(), Kind::Numbers);
    let mod9: std::collections::BTreeSet<u32> = numbers.residues.iter().map(|r| r % 9).collect();
    check(
        &mut fails,
        numbers.period.is_multiple_of(9) && mod9 == [0, 5].into(),
        format!("numbers: {}", numbers.describe()),
    );
    let primes = admissible_delta_rule(&Base::decimal(), Kind::Primes);
    check(
        &mut fails,
        primes.describe() == "14 mod 18; sporadic (2, 7)",
        format!("primes: {}", primes.describe()),
    );

    // Smallest member of each family, found by search.
    let families: [(u32, u32, &[u64]); 4] = [
        (2, 2, &[4]),
        (4, 6, &[8]),
        (6, 10, &[6, 8]),
        (8, 14, &[10, 18, 20]),
    ];
    for (b, period, minima) in families {
        let rule = admissible_delta_rule(&Base::new(b).unwrap(), Kind::Primes);
        let found = smallest_witnessed_deltas(&rule, 100_000).map_err(|e| e.to_string())?;
        let mut got: Vec<u64> = found.iter().filter_map(|&(_, d)| d).collect();
        got.sort_unstable();
        check(
            &mut fails,
            rule.period == period && got == minima && found.iter().all(|f| f.1.is_some()),
            format!("b={b}: {} / minima {got:?}", rule.describe()),
        );
    }
    verdict(
        fails,
        "decimal residue classes and families for bases 2, 4, 6, 8".into(),
    )
}

fn criterion_8() -> Outcome {
    let mut fails = Vec::new();
    let a = decay_exponent();
    for u in [1e3, 1e6, 1e10] {
        let direct = w_direct(u, w_direct_converged_j_max(u).unwrap()).unwrap();
        let poisson = w_poisson(u, 50).unwrap();
        let truncated = w_truncated(u).unwrap();
        check(
            &mut fails,
            (direct - poisson).abs() <= 1e-8,
            format!("u={u}: direct {direct} poisson {poisson}"),
        );
        let band = 3.0 * u.powf(-4.0 * a);
        check(
            &mut fails,
            (poisson - truncated).abs() <= band,
            format!("u={u}: truncation {} > {band}", (poisson - truncated).abs()),
        );
    }
    verdict(fails, "u = 1e3, 1e6, 1e10".into())
}

fn criterion_9() -> Outcome {
    let mut fails = Vec::new();
    for x in [10u64, 100, 1_000, 10_000, 100_000] {
        let brute = common::delta_counts(&common::brute_prime_pairs(x, 10));
        let h = count_sand_primes(x, &Base::decimal()).map_err(|e| e.to_string())?;
        let mut ours = h.counts.clone();
        if h.sporadic > 0 {
            ours.insert(5, h.sporadic);
        }
        check(
            &mut fails,
            ours == brute,
            format!("primes x={x}: {ours:?} vs {brute:?}"),
        );
    }
    for x in [2u64, 7, 50, 500, 3_000] {
        let brute = common::brute_number_pairs(x, 10).len() as u64;
        let ours = count_sand_numbers(x, &Base::decimal()).map_err(|e| e.to_string())?;
        check(
            &mut fails,
            ours == brute,
            format!("numbers x={x}: {ours} vs {brute}"),
        );
    }
    verdict(fails, "primes to 1e5, numbers to 3000".into())
}

fn criterion_10(tables: &[&[TableRow]]) -> Outcome {
    let mut fails = Vec::new();

    // Residue classes mod 3 and 9, checked on pairs found by direct search.
    for (p, q) in common::brute_prime_pairs(20_000, 10) {
        let ok = (q - p) % 9 == 5 && (p % 3, q % 3) == (2, 1);
        check(&mut fails, ok, format!("prime pair ({p}, {q})"));
    }
    for (a, b) in common::brute_number_pairs(2_000, 10) {
        let ok = match (b - a) % 9 {
            0 => (a % 3, b % 3) == (0, 0),
            5 => (a % 3, b % 3) == (2, 1),
            _ => false,
        };
        check(&mut fails, ok, format!("number pair ({a}, {b})"));
    }
    for &(p, q) in sand_prime_pairs(1_000_000, &Base::decimal())
        .map_err(|e| e.to_string())?
        .iter()
        .map(|s| (s.small, s.large))
        .collect::<Vec<_>>()
        .iter()
    {
        check(
            &mut fails,
            (q - p) % 9 == 5 && (p % 3, q % 3) == (2, 1),
            format!("enumerated ({p}, {q})"),
        );
    }

    // No count above the digit-sum ceiling of x^2.
    for rows in tables {
        for row in rows.iter() {
            let h = &row.histogram;
            let x = row.x as u128;
            let ceiling = max_digit_sum_below(x * x, &h.base) as u64;
            let top = h.counts.keys().next_back().copied().unwrap_or(0);
            check(
                &mut fails,
                top <= ceiling,
                format!(
                    "b={} x={}: delta {top} above ceiling {ceiling}",
                    h.base, row.x
                ),
            );
        }
    }

    // Three digit-sum routes agree.
    for b in [2u32, 3, 10] {
        let base = Base::new(b).unwrap();
        let ogf = ogf_digit_sums(&base, 100_000).unwrap();
        for n in 0..1_000_000u64 {
            let d = digit_sum(n as u128, &base);
            let ok = d == digit_sum_legendre(n as u128, &base)
                && d as u64 == common::dsum(n, b as u64)
                && (n as usize >= ogf.len() || ogf[n as usize] == d as u64);
            if !ok {
                check(&mut fails, false, format!("digit sum b={b} n={n}"));
                break;
            }
        }
    }

    // Thread-count invariance.
    let mut seen: BTreeMap<usize, (u64, Vec<TableRow>, u64)> = BTreeMap::new();
    for threads in [1usize, 2, 3, 8] {
        let run = with_threads(threads, || {
            let mut config =
                EnumerationConfig::new(Base::decimal(), vec![1_000, 77_777, 2_000_000]);
            config.segment_size = 50_000;
            let rows = enumerate_table(&config, &[], |_| Ok(())).unwrap();
            let numbers = count_sand_numbers(50_000, &Base::decimal()).unwrap();
            let binary = count_sand_primes(1_000_000, &Base::binary()).unwrap().total;
            (numbers, rows, binary)
        })
        .map_err(|e| e.to_string())?;
        seen.insert(threads, run);
    }
    let first = seen.values().next().unwrap().clone();
    for (threads, run) in &seen {
        check(
            &mut fails,
            *run == first,
            format!("{threads} threads differ"),
        );
    }

    verdict(
        fails,
        "residue classes, ceiling, digit sums, 1/2/3/8 threads".into(),
    )
}

fn main() {
    let start = Instant::now();
    let decimal = table(10, &DECIMAL_X);
    let binary = table(2, &BINARY_X);
    eprintln!(
        "enumeration to 1e8 (bases 10 and 2): {:.1?}",
        start.elapsed()
    );

    let results: Vec<(u32, &str, Outcome)> = vec![
        (
            1,
            "decimal pair counts by difference",
            criterion_1(&decimal),
        ),
        (2, "decimal estimators", criterion_2(&decimal)),
        (3, "binary totals and estimators", criterion_3(&binary)),
        (4, "first pairs per difference", criterion_4()),
        (5, "restricted pair counts by product", criterion_5()),
        (6, "density constants", criterion_6()),
        (7, "difference classes by residue search", criterion_7()),
        (8, "lattice sum, dual sum and truncation", criterion_8()),
        (9, "brute-force oracle agreement", criterion_9()),
        (10, "invariants", criterion_10(&[&decimal, &binary])),
    ];

    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{} passed, {failed} failed ({:.1?})",
        results.len() - failed,
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
