//! The `.ivf` files under `fixtures/paper/`, compiled into the binary so
//! `ghc reproduce` runs from any directory.

use ghc_core::{parse_ivf, Ivf};

macro_rules! fixture {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../fixtures/paper/", $name, ".ivf")))
    };
}

pub const FIXTURES: [(&str, &str); 10] = [
    fixture!("abs_c"),
    fixture!("removable_jump"),
    fixture!("quadrant_blowup"),
    fixture!("sqrt"),
    fixture!("abs_sublinear"),
    fixture!("abs_mixed_sign"),
    fixture!("quadratic_norm"),
    fixture!("square"),
    fixture!("linear"),
    fixture!("constant"),
];

pub fn source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a bundled fixture; the fixtures are checked by the test suite, so
/// a parse failure here is a build defect.
pub fn load(name: &str) -> Ivf {
    let text = source(name).unwrap_or_else(|| panic!("no fixture named {name}"));
    parse_ivf(text).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}
