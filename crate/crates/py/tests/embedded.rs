use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module<R>(f: impl FnOnce(Python<'_>, &Bound<'_, PyModule>) -> R) -> R {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "ghcalc").unwrap();
        ghcalc::register(&m).unwrap();
        f(py, &m)
    })
}

fn run(code: &str) {
    with_module(|py, m| {
        let globals = pyo3::types::PyDict::new(py);
        globals.set_item("ghcalc", m).unwrap();
        let code = CString::new(code).unwrap();
        py.run(&code, Some(&globals), None).unwrap_or_else(|e| panic!("{e}"));
    });
}

#[test]
fn interval_operations() {
    run(r#"
I = ghcalc.Interval
a, b = I(4, 10), I(-3, 2)
assert b.gh_diff(a) == I(-8, -7)
assert a + b.gh_diff(a) == I(-4, 3)
assert b.dominance(a + I(-7.5, -6)) == "incomparable"
assert I(1, 2).precedes(I(1, 3))
assert (I(1, 2) * -2) == I(-4, -2)
assert I(-1, 2).norm() == 2
assert repr(I(1, 2)) == "Interval(1.0, 2.0)"
"#);
}

#[test]
fn errors_become_value_errors() {
    run(r#"
try:
    ghcalc.Interval(3, 1)
    raise AssertionError("accepted")
except ValueError:
    pass
try:
    ghcalc.parse_ivf("ivf { dom: [0,1]; scale: x1 +; c: [1,2] }")
    raise AssertionError("accepted")
except ValueError as e:
    assert "1:" in str(e)
"#);
}

#[test]
fn derivatives_and_checks() {
    run(r#"
f = ghcalc.parse_ivf("ivf { dom: [-10,10]; scale: abs(x1); c: [2,5] }")
assert f.eval([-2]) == ghcalc.Interval(4, 10)
r = f.upper_clarke([0.0], [1.0])
assert r.exists and r.kind == "upper_clarke"
assert abs(r.value.lo - 2) <= 1e-3 and abs(r.value.hi - 5) <= 1e-3
r = f.lower_clarke([0.0], [1.0])
assert abs(r.value.lo + 5) <= 1e-3 and abs(r.value.hi + 2) <= 1e-3
g = ghcalc.parse_ivf("ivf { dom: [-10,10]; scale: abs(x1); c: [-3,2] }")
assert g.check_sublinear().holds
v = g.check_convex(trials=500, seed=3)
assert not v.holds and v.counterexample is not None
"#);
}
