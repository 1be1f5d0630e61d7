use pyo3::ffi::c_str;
use pyo3::prelude::*;

use sand_primes::sand_primes;

fn run(code: &std::ffi::CStr) {
    Python::attach(|py| {
        if let Err(e) = py.run(code, None, None) {
            e.display(py);
            panic!("python assertion failed");
        }
    });
}

#[test]
fn module_from_python() {
    pyo3::append_to_inittab!(sand_primes);
    Python::initialize();
    run(c_str!(
        r#"
import sand_primes as sp
from fractions import Fraction

h = sp.count_sand_primes(1000)
assert h.counts == {14: 11, 32: 10} and h.total == 22, h
assert sp.list_sand_primes(86, 1)[0].small == 412253
assert sp.sand_prime_constant(6) == Fraction(15, 16)
assert sp.digit_sum(2**127 - 1, base=2) == 127
big = sp.SandPair(10**18, 10**18 + 14)
assert big.product == 10**36 + 14 * 10**18
try:
    sp.count_sand_primes(10, base=1)
    raise SystemExit("radix 1 accepted")
except ValueError:
    pass
"#
    ));
}
