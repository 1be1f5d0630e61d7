//! Python module `sand_primes`.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyOSError, PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sand_core::asymptotics as asy;
use sand_core::fluct;
use sand_core::SandError;

fn to_py(err: SandError) -> PyErr {
    match err {
        SandError::CapExceeded { .. } => PyOverflowError::new_err(err.to_string()),
        SandError::Io(_) | SandError::Checkpoint(_) | SandError::Json(_) => {
            PyOSError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn core_base(radix: u32) -> PyResult<sand_core::Base> {
    sand_core::Base::new(radix).map_err(to_py)
}

fn kind(name: &str) -> PyResult<sand_core::Kind> {
    match name {
        "primes" => Ok(sand_core::Kind::Primes),
        "numbers" => Ok(sand_core::Kind::Numbers),
        other => Err(PyValueError::new_err(format!(
            "kind must be 'primes' or 'numbers', got {other:?}"
        ))),
    }
}

/// A radix with the prime factors of radix - 1.
#[pyclass(frozen, skip_from_py_object, name = "Base", module = "sand_primes")]
#[derive(Clone)]
struct PyBase(sand_core::Base);

#[pymethods]
impl PyBase {
    #[new]
    fn new(radix: u32) -> PyResult<Self> {
        Ok(PyBase(core_base(radix)?))
    }

    #[getter]
    fn radix(&self) -> u32 {
        self.0.radix()
    }

    #[getter]
    fn prime_factors(&self) -> Vec<u32> {
        self.0.prime_factors().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Base({})", self.0.radix())
    }
}

#[pyclass(frozen, skip_from_py_object, name = "SandPair", module = "sand_primes")]
#[derive(Clone)]
struct PySandPair(sand_core::SandPair);

#[pymethods]
impl PySandPair {
    #[new]
    #[pyo3(signature = (small, large, base = 10))]
    fn new(small: u64, large: u64, base: u32) -> PyResult<Self> {
        if small >= large {
            return Err(to_py(SandError::UnorderedPair { a: small, b: large }));
        }
        Ok(PySandPair(sand_core::SandPair::new(
            small,
            large,
            &core_base(base)?,
        )))
    }

    #[getter]
    fn small(&self) -> u64 {
        self.0.small
    }

    #[getter]
    fn large(&self) -> u64 {
        self.0.large
    }

    #[getter]
    fn delta(&self) -> u64 {
        self.0.delta
    }

    #[getter]
    fn product(&self) -> u128 {
        self.0.product
    }

    #[getter]
    fn digit_sum(&self) -> u32 {
        self.0.dsum
    }

    fn holds(&self) -> bool {
        self.0.holds()
    }

    fn __repr__(&self) -> String {
        format!("SandPair({}, {})", self.0.small, self.0.large)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyclass(frozen, name = "DeltaRule", module = "sand_primes")]
struct PyDeltaRule(sand_core::DeltaRule);

#[pymethods]
impl PyDeltaRule {
    #[getter]
    fn period(&self) -> u32 {
        self.0.period
    }

    #[getter]
    fn residues(&self) -> Vec<u32> {
        self.0.residues.clone()
    }

    #[getter]
    fn sporadic(&self) -> Vec<PySandPair> {
        self.0.sporadic.iter().copied().map(PySandPair).collect()
    }

    fn admits(&self, delta: u64) -> bool {
        self.0.admits(delta)
    }

    fn deltas_up_to(&self, max: u64) -> Vec<u64> {
        self.0.deltas_up_to(max)
    }

    fn describe(&self) -> String {
        self.0.describe()
    }

    fn __repr__(&self) -> String {
        format!("DeltaRule({})", self.0.describe())
    }
}

#[pyclass(frozen, name = "DeltaHistogram", module = "sand_primes")]
struct PyDeltaHistogram(sand_core::DeltaHistogram);

#[pymethods]
impl PyDeltaHistogram {
    #[getter]
    fn x(&self) -> u64 {
        self.0.x
    }

    #[getter]
    fn counts(&self) -> BTreeMap<u64, u64> {
        self.0.counts.clone()
    }

    #[getter]
    fn sporadic(&self) -> u64 {
        self.0.sporadic
    }

    #[getter]
    fn total(&self) -> u64 {
        self.0.total
    }

    fn count(&self, delta: u64) -> u64 {
        self.0.count(delta)
    }

    fn __repr__(&self) -> String {
        format!(
            "DeltaHistogram(x={}, total={}, counts={:?})",
            self.0.x, self.0.total, self.0.counts
        )
    }
}

#[pyfunction]
#[pyo3(signature = (n, base = 10))]
fn digit_sum(n: u128, base: u32) -> PyResult<u32> {
    Ok(sand_core::digit_sum(n, &core_base(base)?))
}

#[pyfunction]
#[pyo3(signature = (n, base = 10))]
fn digit_sum_legendre(n: u128, base: u32) -> PyResult<u32> {
    Ok(sand_core::digit_sum_legendre(n, &core_base(base)?))
}

#[pyfunction]
fn is_prime(n: u64) -> bool {
    sand_core::is_prime(n)
}

/// Number of primes `<= x`.
#[pyfunction]
fn prime_count(py: Python<'_>, x: u64) -> PyResult<u64> {
    if x > sand_core::X_CAP {
        return Err(to_py(SandError::CapExceeded {
            x,
            cap: sand_core::X_CAP,
        }));
    }
    Ok(py.detach(|| sand_core::prime_count(x).pi_x))
}

#[pyfunction]
#[pyo3(signature = (base = 10, kind = "primes"))]
fn admissible_delta_rule(base: u32, kind: &str) -> PyResult<PyDeltaRule> {
    Ok(PyDeltaRule(sand_core::admissible_delta_rule(
        &core_base(base)?,
        self::kind(kind)?,
    )))
}

#[pyfunction]
#[pyo3(signature = (a, b, base = 10))]
fn is_sand_number_pair(a: u64, b: u64, base: u32) -> PyResult<bool> {
    sand_core::is_sand_number_pair(a, b, &core_base(base)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (x, base = 10))]
fn count_sand_numbers(py: Python<'_>, x: u64, base: u32) -> PyResult<u64> {
    let b = core_base(base)?;
    py.detach(|| sand_core::count_sand_numbers(x, &b))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (x, base = 10))]
fn count_sand_primes(py: Python<'_>, x: u64, base: u32) -> PyResult<PyDeltaHistogram> {
    let b = core_base(base)?;
    py.detach(|| sand_core::count_sand_primes(x, &b))
        .map(PyDeltaHistogram)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (x, base = 10))]
fn sand_prime_pairs(py: Python<'_>, x: u64, base: u32) -> PyResult<Vec<PySandPair>> {
    let b = core_base(base)?;
    let pairs = py
        .detach(|| sand_core::sand_prime_pairs(x, &b))
        .map_err(to_py)?;
    Ok(pairs.into_iter().map(PySandPair).collect())
}

#[pyfunction]
#[pyo3(signature = (delta, k, base = 10))]
fn list_sand_primes(py: Python<'_>, delta: u64, k: usize, base: u32) -> PyResult<Vec<PySandPair>> {
    let b = core_base(base)?;
    let pairs = py
        .detach(|| sand_core::list_sand_primes(delta, k, &b))
        .map_err(to_py)?;
    Ok(pairs.into_iter().map(PySandPair).collect())
}

/// Rows `(x, pi_x, histogram)` for ascending thresholds.
#[pyfunction]
#[pyo3(signature = (thresholds, base = 10, threads = None))]
fn enumerate_table(
    py: Python<'_>,
    thresholds: Vec<u64>,
    base: u32,
    threads: Option<usize>,
) -> PyResult<Vec<(u64, u64, PyDeltaHistogram)>> {
    let config = sand_core::EnumerationConfig::new(core_base(base)?, thresholds);
    let run = || sand_core::enumerate_table(&config, &[], |_| Ok(()));
    let rows = py
        .detach(|| match threads {
            Some(n) => sand_core::with_threads(n, run).and_then(|r| r),
            None => run(),
        })
        .map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.x, r.pi_x, PyDeltaHistogram(r.histogram)))
        .collect())
}

#[pyfunction]
fn witness(delta: u64, r: u32, s: u32) -> PyResult<PySandPair> {
    sand_core::witness(delta, r, s)
        .map(PySandPair)
        .map_err(to_py)
}

/// Exact constant as a `fractions.Fraction`.
#[pyfunction]
#[pyo3(signature = (base = 10))]
fn sand_prime_constant(py: Python<'_>, base: u32) -> PyResult<Py<PyAny>> {
    let c = asy::sand_prime_constant(&core_base(base)?);
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    Ok(fraction.call1((*c.numer(), *c.denom()))?.unbind())
}

#[pyfunction]
fn li2(x: f64) -> PyResult<f64> {
    asy::li2(x).map_err(to_py)
}

#[pyfunction]
fn estimator_row<'py>(
    py: Python<'py>,
    x: u64,
    total: u64,
    pi_x: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let e = asy::estimator_row(x, total, pi_x).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("x", e.x)?;
    d.set_item("total", e.total)?;
    d.set_item("pi_x", e.pi_x)?;
    d.set_item("est_pi", e.est_pi)?;
    d.set_item("est_log", e.est_log)?;
    d.set_item("est_li2", e.est_li2)?;
    Ok(d)
}

#[pyfunction]
fn theta(x: u64, total: u64) -> PyResult<f64> {
    asy::theta(x, total).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (u, j_max = None))]
fn w_direct(u: f64, j_max: Option<u32>) -> PyResult<f64> {
    let j = match j_max {
        Some(j) => j,
        None => fluct::w_direct_converged_j_max(u).map_err(to_py)?,
    };
    fluct::w_direct(u, j).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (u, j_max = 50))]
fn w_poisson(u: f64, j_max: u32) -> PyResult<f64> {
    fluct::w_poisson(u, j_max).map_err(to_py)
}

#[pyfunction]
fn w_truncated(u: f64) -> PyResult<f64> {
    fluct::w_truncated(u).map_err(to_py)
}

#[pyfunction]
fn count_by_product(u: f64) -> PyResult<u64> {
    fluct::count_by_product(u).map_err(to_py)
}

#[pyfunction]
fn d_count(n: u32) -> u64 {
    fluct::d_count(n)
}

#[pyfunction]
fn fluctuation_series<'py>(
    py: Python<'py>,
    n_min: u32,
    n_max: u32,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = fluct::fluctuation_series(n_min, n_max).map_err(to_py)?;
    rows.into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("n", r.n)?;
            d.set_item("u", r.u)?;
            d.set_item("d_n", r.d_n)?;
            d.set_item("d_prime", r.d_prime)?;
            d.set_item("d_fluc_scaled", r.d_fluc_scaled)?;
            d.set_item("p_fluc_scaled", r.p_fluc_scaled)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
pub fn sand_primes(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("X_CAP", sand_core::X_CAP)?;
    m.add_class::<PyBase>()?;
    m.add_class::<PySandPair>()?;
    m.add_class::<PyDeltaRule>()?;
    m.add_class::<PyDeltaHistogram>()?;
    m.add_function(wrap_pyfunction!(digit_sum, m)?)?;
    m.add_function(wrap_pyfunction!(digit_sum_legendre, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(prime_count, m)?)?;
    m.add_function(wrap_pyfunction!(admissible_delta_rule, m)?)?;
    m.add_function(wrap_pyfunction!(is_sand_number_pair, m)?)?;
    m.add_function(wrap_pyfunction!(count_sand_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(count_sand_primes, m)?)?;
    m.add_function(wrap_pyfunction!(sand_prime_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(list_sand_primes, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_table, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(sand_prime_constant, m)?)?;
    m.add_function(wrap_pyfunction!(li2, m)?)?;
    m.add_function(wrap_pyfunction!(estimator_row, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(w_direct, m)?)?;
    m.add_function(wrap_pyfunction!(w_poisson, m)?)?;
    m.add_function(wrap_pyfunction!(w_truncated, m)?)?;
    m.add_function(wrap_pyfunction!(count_by_product, m)?)?;
    m.add_function(wrap_pyfunction!(d_count, m)?)?;
    m.add_function(wrap_pyfunction!(fluctuation_series, m)?)?;
    Ok(())
}
