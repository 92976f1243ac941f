//! Morse complexes with coefficients in chain complexes of fibers, and the
//! spectral sequences of the filtered complexes they produce.
//!
//! The library is organized bottom-up:
//!
//! - [`gf2`]: deterministic sparse linear algebra over the two-element field;
//! - [`complex`]: finite-rank graded chain complexes and degree-shifting
//!   chain maps;
//! - [`spectral`]: pages, differentials, and convergence data of a bounded
//!   filtered complex;
//! - [`enriched`]: critical points carrying fiber complexes connected by
//!   transport operators, the total complex they span, and its first pages;
//! - [`monodromy`]: finite groups, local systems, and group-algebra
//!   complexes for lifted Morse theory;
//! - [`specfile`], [`catalog`], [`report`]: the on-disk format, the built-in
//!   fixtures, and report generation behind the command-line interface.
//!
//! Everything is immutable after construction and every computation is a
//! pure function, so results are reproducible byte for byte.

pub mod catalog;
pub mod complex;
pub mod enriched;
pub mod gf2;
pub mod models;
pub mod monodromy;
pub mod report;
pub mod specfile;
pub mod spectral;

pub use complex::{Degree, DegreeMap, GradedComplex, Homology};
pub use enriched::{datum_from_monodromy, CriticalPoint, E1Page, EnrichedMorseDatum};
pub use gf2::{relative_rank, BitMatrix, BitVector};
pub use monodromy::{
    cellular_local_homology, systems_isomorphic, FiniteGroup, GroupAlgebraComplex,
    MonodromyLocalSystem,
};
pub use specfile::{emit_spec, parse_spec, FibrationSpec};
pub use spectral::{Bidegree, FilteredComplex, SpectralPage};
