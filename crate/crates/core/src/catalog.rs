//! Built-in fixtures: enriched Morse data of classical fibrations, each
//! carrying reference values for comparison runs.
//!
//! The catalog covers the circle bundle over the two-sphere with two and
//! with four critical points, the product torus, the lifted complexes of
//! the projective plane and three-space read in their double covers, the
//! based path fibration over the two-sphere with a truncated loop-space
//! fiber, and the two-sphere with point fibers.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::complex::{Degree, DegreeMap};
use crate::enriched::{datum_from_monodromy, CriticalPoint, EnrichedMorseDatum};
use crate::gf2::BitMatrix;
use crate::models::{circle, point, truncated_loop_fiber};
use crate::monodromy::{FiniteGroup, GroupAlgebraComplex, MonodromyLocalSystem};
use crate::specfile::{FibrationSpec, LiftedData, Reference, SystemKind};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown fixture `{0}`; run `catalog list` for the available names")]
    UnknownName(String),
    #[error("fixture `{0}` does not take a parameter")]
    UnexpectedParameter(String),
    #[error("truncation degree must be at least 1, got {0}")]
    BadParameter(Degree),
}

/// Names of the built-in fixtures, with default parameters filled in.
pub fn names() -> Vec<String> {
    vec![
        "hopf".to_string(),
        "hopf-4crit".to_string(),
        "point-fiber-s2".to_string(),
        "rp2-lifted".to_string(),
        "rp3-lifted".to_string(),
        "s2-pathloop-8".to_string(),
        "torus-product".to_string(),
    ]
}

/// Looks up a fixture by name; `s2-pathloop-<N>` accepts any truncation
/// degree `N ≥ 1`.
pub fn get(name: &str) -> Result<FibrationSpec, CatalogError> {
    match name {
        "hopf" => Ok(hopf()),
        "hopf-4crit" => Ok(hopf_4crit()),
        "point-fiber-s2" => Ok(point_fiber_s2()),
        "rp2-lifted" => Ok(rp2_lifted()),
        "rp3-lifted" => Ok(rp3_lifted()),
        "torus-product" => Ok(torus_product()),
        other => match other.strip_prefix("s2-pathloop-") {
            Some(suffix) => {
                let n: Degree = suffix
                    .parse()
                    .map_err(|_| CatalogError::UnknownName(other.to_string()))?;
                if n < 1 {
                    return Err(CatalogError::BadParameter(n));
                }
                Ok(s2_pathloop(n))
            }
            None => Err(CatalogError::UnknownName(other.to_string())),
        },
    }
}

/// Looks up a fixture family with an explicit parameter; only the
/// `s2-pathloop` family is parameterized.
pub fn get_with_param(name: &str, param: Option<Degree>) -> Result<FibrationSpec, CatalogError> {
    match param {
        None => get(name),
        Some(n) => {
            if name == "s2-pathloop" || name.starts_with("s2-pathloop-") {
                if n < 1 {
                    return Err(CatalogError::BadParameter(n));
                }
                Ok(s2_pathloop(n))
            } else {
                Err(CatalogError::UnexpectedParameter(name.to_string()))
            }
        }
    }
}

fn shift_one_generator_step() -> DegreeMap {
    DegreeMap::new(1, BTreeMap::from([(0, BitMatrix::identity(1))]))
}

fn dims(cells: &[((i64, i64), usize)]) -> BTreeMap<(i64, i64), usize> {
    cells.iter().copied().collect()
}

/// Circle bundle over the two-sphere with the perfect Morse function:
/// minimum and maximum carrying circle fibers, transport sweeping the fiber
/// point class to the fiber circle class.
fn hopf() -> FibrationSpec {
    let points = vec![CriticalPoint::new("m", 0), CriticalPoint::new("M", 2)];
    let fibers = BTreeMap::from([("m".to_string(), circle()), ("M".to_string(), circle())]);
    let transports = BTreeMap::from([(
        ("M".to_string(), "m".to_string()),
        shift_one_generator_step(),
    )]);
    let datum = EnrichedMorseDatum::new(points, fibers, transports).expect("hopf datum");
    FibrationSpec {
        name: "hopf".to_string(),
        datum,
        lifted: None,
        truncation_degree: None,
        reference: Some(Reference {
            homology: BTreeMap::from([(0, 1), (3, 1)]),
            pages: BTreeMap::from([
                (
                    2,
                    dims(&[((0, 0), 1), ((0, 1), 1), ((2, 0), 1), ((2, 1), 1)]),
                ),
                (3, dims(&[((0, 0), 1), ((2, 1), 1)])),
            ]),
            stabilization: Some(3),
            compare_up_to: None,
        }),
    }
}

/// The same bundle over a Morse function with two maxima, one saddle, one
/// minimum. All the twisting sits on the first maximum; the saddle cancels
/// the second one.
fn hopf_4crit() -> FibrationSpec {
    let points = vec![
        CriticalPoint::new("m", 0),
        CriticalPoint::new("s", 1),
        CriticalPoint::new("M1", 2),
        CriticalPoint::new("M2", 2),
    ];
    let fibers: BTreeMap<String, _> = points.iter().map(|p| (p.id.clone(), circle())).collect();
    let identity = DegreeMap::identity(&circle());
    let transports = BTreeMap::from([
        (("M1".to_string(), "s".to_string()), identity.clone()),
        (("M2".to_string(), "s".to_string()), identity),
        (
            ("M1".to_string(), "m".to_string()),
            shift_one_generator_step(),
        ),
    ]);
    let datum = EnrichedMorseDatum::new(points, fibers, transports).expect("hopf-4crit datum");
    FibrationSpec {
        name: "hopf-4crit".to_string(),
        datum,
        lifted: None,
        truncation_degree: None,
        reference: Some(Reference {
            homology: BTreeMap::from([(0, 1), (3, 1)]),
            pages: BTreeMap::from([
                (
                    2,
                    dims(&[((0, 0), 1), ((0, 1), 1), ((2, 0), 1), ((2, 1), 1)]),
                ),
                (3, dims(&[((0, 0), 1), ((2, 1), 1)])),
            ]),
            stabilization: Some(3),
            compare_up_to: None,
        }),
    }
}

/// Product of two circles: circle base, circle fibers, and the two gradient
/// lines cancel, so every transport vanishes.
fn torus_product() -> FibrationSpec {
    let points = vec![CriticalPoint::new("m", 0), CriticalPoint::new("M", 1)];
    let fibers = BTreeMap::from([("m".to_string(), circle()), ("M".to_string(), circle())]);
    let datum = EnrichedMorseDatum::new(points, fibers, BTreeMap::new()).expect("torus datum");
    FibrationSpec {
        name: "torus-product".to_string(),
        datum,
        lifted: None,
        truncation_degree: None,
        reference: Some(Reference {
            homology: BTreeMap::from([(0, 1), (1, 2), (2, 1)]),
            pages: BTreeMap::from([(
                2,
                dims(&[((0, 0), 1), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)]),
            )]),
            stabilization: Some(2),
            compare_up_to: None,
        }),
    }
}

fn one_plus_t() -> BTreeSet<String> {
    BTreeSet::from(["1".to_string(), "t".to_string()])
}

/// Lifted complex of a tower of cells over the two-element group, every
/// boundary multiplication by `1 + t`; `heights` cells in degrees `0..`.
fn lifted_tower(name: &str, heights: usize) -> FibrationSpec {
    let group = FiniteGroup::cyclic(2);
    let system = MonodromyLocalSystem::left_regular(group.clone());
    let points: Vec<CriticalPoint> = (0..heights)
        .map(|i| CriticalPoint::new(format!("x{i}"), u32::try_from(i).unwrap()))
        .collect();
    let transports: BTreeMap<(String, String), BTreeSet<String>> = (1..heights)
        .map(|i| ((format!("x{i}"), format!("x{}", i - 1)), one_plus_t()))
        .collect();
    let datum = datum_from_monodromy(points, transports, &system).expect("lifted tower datum");
    let ranks: BTreeMap<Degree, usize> = (0..heights).map(|i| (i as Degree, 1)).collect();
    let boundaries: BTreeMap<Degree, Vec<Vec<BTreeSet<String>>>> = (1..heights)
        .map(|i| (i as Degree, vec![vec![one_plus_t()]]))
        .collect();
    let algebra =
        GroupAlgebraComplex::new(group.clone(), ranks, boundaries).expect("lifted tower algebra");
    let top = heights as Degree - 1;
    FibrationSpec {
        name: name.to_string(),
        datum,
        lifted: Some(LiftedData {
            group,
            system: SystemKind::LeftRegular,
            algebra,
        }),
        truncation_degree: None,
        reference: Some(Reference {
            homology: BTreeMap::from([(0, 1), (top, 1)]),
            pages: BTreeMap::from([(2, dims(&[((0, 0), 1), ((top, 0), 1)]))]),
            stabilization: Some(u32::try_from(top).unwrap() + 1),
            compare_up_to: None,
        }),
    }
}

fn rp2_lifted() -> FibrationSpec {
    lifted_tower("rp2-lifted", 3)
}

fn rp3_lifted() -> FibrationSpec {
    lifted_tower("rp3-lifted", 4)
}

/// Based path fibration over the two-sphere. The fiber is the loop space
/// model with one generator per degree up to the truncation; transport is
/// right multiplication by the degree-1 generator. The total space is
/// contractible, so homology vanishes inside the validity window.
fn s2_pathloop(n: Degree) -> FibrationSpec {
    let fiber = truncated_loop_fiber(n);
    let points = vec![CriticalPoint::new("m", 0), CriticalPoint::new("M", 2)];
    let fibers = BTreeMap::from([("m".to_string(), fiber.clone()), ("M".to_string(), fiber)]);
    let components: BTreeMap<Degree, BitMatrix> =
        (0..n).map(|d| (d, BitMatrix::identity(1))).collect();
    let transports = BTreeMap::from([(
        ("M".to_string(), "m".to_string()),
        DegreeMap::new(1, components),
    )]);
    let datum = EnrichedMorseDatum::new(points, fibers, transports).expect("pathloop datum");
    let mut pages2 = BTreeMap::new();
    for q in 0..=n {
        pages2.insert((0, q), 1);
        pages2.insert((2, q), 1);
    }
    FibrationSpec {
        name: format!("s2-pathloop-{n}"),
        datum,
        lifted: None,
        truncation_degree: Some(n),
        reference: Some(Reference {
            homology: BTreeMap::from([(0, 1)]),
            pages: BTreeMap::from([(2, pages2)]),
            stabilization: Some(3),
            compare_up_to: Some(n),
        }),
    }
}

/// The two-sphere with point fibers: the classical Morse complex.
fn point_fiber_s2() -> FibrationSpec {
    let points = vec![CriticalPoint::new("m", 0), CriticalPoint::new("M", 2)];
    let fibers = BTreeMap::from([("m".to_string(), point()), ("M".to_string(), point())]);
    let datum = EnrichedMorseDatum::new(points, fibers, BTreeMap::new()).expect("point datum");
    FibrationSpec {
        name: "point-fiber-s2".to_string(),
        datum,
        lifted: None,
        truncation_degree: None,
        reference: Some(Reference {
            homology: BTreeMap::from([(0, 1), (2, 1)]),
            pages: BTreeMap::from([(2, dims(&[((0, 0), 1), ((2, 0), 1)]))]),
            stabilization: Some(3),
            compare_up_to: None,
        }),
    }
}
