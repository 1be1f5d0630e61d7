//! Predicted density constants and the estimators that compare measured
//! pair counts against `x / log^2 x`, `pi(x)^2 / x` and `Li_2(x)`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::digitsum::Base;
use crate::error::{Result, SandError};
use crate::primes::sieve_segment;

/// `prod_{q | b-1, q prime} (1 - 1/(q-1)^2)`, exactly. Zero for odd bases
/// because `q = 2` contributes a vanishing factor.
pub fn sand_prime_constant(base: &Base) -> Ratio<u128> {
    base.prime_factors()
        .iter()
        .map(|&q| {
            let q = q as u128;
            Ratio::new(q * (q - 2), (q - 1) * (q - 1))
        })
        .fold(Ratio::from_integer(1), |acc, f| acc * f)
}

pub fn sand_prime_constant_f64(base: &Base) -> f64 {
    let c = sand_prime_constant(base);
    *c.numer() as f64 / *c.denom() as f64
}

/// Twin-prime constant `C_2 = prod_{3 <= p <= limit} (1 - 1/(p-1)^2)`.
pub fn twin_prime_constant(limit: u64) -> f64 {
    if limit < 3 {
        return 1.0;
    }
    let seg = sieve_segment(3, limit + 1).expect("non-empty range");
    seg.primes()
        .map(|p| {
            let d = (p - 1) as f64;
            1.0 - 1.0 / (d * d)
        })
        .product()
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss-Kronrod integration to relative tolerance `rel_tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn step(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gauss_kronrod(f, a, b);
        if err <= tol || depth >= 40 {
            return value;
        }
        let mid = 0.5 * (a + b);
        step(f, a, mid, 0.5 * tol, depth + 1) + step(f, mid, b, 0.5 * tol, depth + 1)
    }
    let (rough, _) = gauss_kronrod(&f, a, b);
    step(&f, a, b, rel_tol * rough.abs().max(f64::MIN_POSITIVE), 0)
}

/// `Li_2(x) = int_2^x dt / log^2 t`, by quadrature in `s = log t`.
pub fn li2(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 2.0 {
        return Err(SandError::InvalidArgument(format!(
            "Li_2 needs a finite x > 2, got {x}"
        )));
    }
    let integrand = |s: f64| s.exp() / (s * s);
    Ok(integrate(integrand, 2f64.ln(), x.ln(), 1e-13))
}

/// `x / log^2 x * (1 + 2/log x + 6/log^2 x)`. The neglected terms are
/// `O(1 / log^3 x)` relative to the leading one.
pub fn li2_asymptotic(x: f64) -> f64 {
    let l = x.ln();
    x / (l * l) * (1.0 + 2.0 / l + 6.0 / (l * l))
}

/// The three estimators of the constant in `T(x) ~ c x / log^2 x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorRow {
    pub x: u64,
    pub total: u64,
    pub pi_x: u64,
    /// `x T / pi(x)^2`
    pub est_pi: f64,
    /// `T log^2 x / x`
    pub est_log: f64,
    /// `T / Li_2(x)`
    pub est_li2: f64,
}

pub fn estimator_row(x: u64, total: u64, pi_x: u64) -> Result<EstimatorRow> {
    if x <= 2 || total == 0 || pi_x == 0 {
        return Err(SandError::InvalidArgument(format!(
            "estimators need x > 2 and positive counts (x={x}, T={total}, pi={pi_x})"
        )));
    }
    let xf = x as f64;
    let t = total as f64;
    let pi = pi_x as f64;
    let l = xf.ln();
    Ok(EstimatorRow {
        x,
        total,
        pi_x,
        est_pi: xf * t / (pi * pi),
        est_log: t * l * l / xf,
        est_li2: t / li2(xf)?,
    })
}

/// Relative deviation from the decimal prediction:
/// `T = (3/4) (x / log^2 x) (1 + theta)`.
pub fn theta(x: u64, total: u64) -> Result<f64> {
    if x < 10 {
        return Err(SandError::InvalidArgument(format!(
            "theta needs x >= 10, got {x}"
        )));
    }
    let xf = x as f64;
    let l = xf.ln();
    Ok(total as f64 * 4.0 * l * l / (3.0 * xf) - 1.0)
}
