//! Small reference complexes used by the fixture catalog and by tests.

use std::collections::BTreeMap;

use crate::complex::{Degree, GradedComplex};
use crate::gf2::BitMatrix;

/// One generator `pt` in degree 0.
pub fn point() -> GradedComplex {
    GradedComplex::new(
        BTreeMap::from([(0, vec!["pt".to_string()])]),
        BTreeMap::new(),
    )
    .expect("point model is well formed")
}

/// One generator in degrees 0 and 1, zero boundary. Chain model of S¹.
pub fn circle() -> GradedComplex {
    GradedComplex::new(
        BTreeMap::from([(0, vec!["e".to_string()]), (1, vec!["f".to_string()])]),
        BTreeMap::new(),
    )
    .expect("circle model is well formed")
}

/// Endpoints `a`, `b` in degree 0, edge `e` in degree 1 with `∂e = a + b`.
pub fn interval() -> GradedComplex {
    GradedComplex::new(
        BTreeMap::from([
            (0, vec!["a".to_string(), "b".to_string()]),
            (1, vec!["e".to_string()]),
        ]),
        BTreeMap::from([(1, BitMatrix::from_entries(2, 1, [(0, 0), (1, 0)]))]),
    )
    .expect("interval model is well formed")
}

/// One generator per degree `0..=n`, zero boundary: the tensor algebra on a
/// single degree-1 generator, truncated above degree `n`.
///
/// This is the standard chain model of the homology of the based loop space
/// of S². Generator names are zero-padded so lexicographic order matches
/// degree order.
pub fn truncated_loop_fiber(n: Degree) -> GradedComplex {
    assert!(n >= 0, "truncation degree must be nonnegative");
    let width = n.to_string().len();
    let generators = (0..=n)
        .map(|d| (d, vec![format!("u{d:0width$}")]))
        .collect();
    GradedComplex::new(generators, BTreeMap::new()).expect("loop fiber model is well formed")
}
