//! Spectral sequences of bounded filtered complexes over GF(2).
//!
//! Pages are computed directly from their definition as subquotients of the
//! total complex: `E^r_{p,q}` is spanned by chains in filtration level `≤ p`
//! whose boundary drops to level `≤ p − r`, modulo chains from level
//! `≤ p − 1` and boundaries arriving from level `≤ p + r − 1`. Working with
//! explicit representatives lets the induced differential be read off by
//! lifting, and makes the comparison with the filtration on homology exact.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{Degree, GradedComplex, SquareWitness};
use crate::gf2::{BitMatrix, BitVector, Echelon};

pub type Level = i64;

/// Bidegree of a page cell: `(p, q)` = (filtration level, total degree − p).
pub type Bidegree = (Level, Degree);

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Complex(#[from] SquareWitness),
    #[error(transparent)]
    Filtration(#[from] FiltrationWitness),
    #[error("degree {degree}: {got} levels for {want} generators")]
    LevelShape {
        degree: Degree,
        got: usize,
        want: usize,
    },
}

/// Witness that some boundary raises the filtration level.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("boundary of `{generator}` (level {level}) hits `{target}` (level {target_level})")]
pub struct FiltrationWitness {
    pub generator: String,
    pub level: Level,
    pub target: String,
    pub target_level: Level,
}

/// A graded complex with a filtration level attached to every generator.
///
/// The boundary of a generator may only involve generators of the same or
/// lower level, and levels are bounded because the complex is finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    complex: GradedComplex,
    levels: BTreeMap<Degree, Vec<Level>>,
}

impl FilteredComplex {
    /// Attaches levels to a complex; `levels` must list one level per
    /// generator, in generator order, for every degree.
    pub fn new(
        complex: GradedComplex,
        levels: BTreeMap<Degree, Vec<Level>>,
    ) -> Result<Self, SpectralError> {
        for d in complex.degrees() {
            let got = levels.get(&d).map_or(0, Vec::len);
            let want = complex.rank(d);
            if got != want {
                return Err(SpectralError::LevelShape {
                    degree: d,
                    got,
                    want,
                });
            }
        }
        let levels = levels.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(Self { complex, levels })
    }

    /// Attaches levels computed from degree and generator name.
    pub fn from_level_fn(
        complex: GradedComplex,
        mut level: impl FnMut(Degree, &str) -> Level,
    ) -> Self {
        let levels = complex
            .degrees()
            .map(|d| {
                let ls = complex
                    .generator_names(d)
                    .iter()
                    .map(|g| level(d, g))
                    .collect();
                (d, ls)
            })
            .collect();
        Self { complex, levels }
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn level(&self, d: Degree, i: usize) -> Level {
        self.levels[&d][i]
    }

    pub fn levels(&self, d: Degree) -> &[Level] {
        self.levels.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn min_level(&self) -> Option<Level> {
        self.levels.values().flatten().min().copied()
    }

    pub fn max_level(&self) -> Option<Level> {
        self.levels.values().flatten().max().copied()
    }

    /// Max level minus min level; 0 for the empty complex.
    pub fn width(&self) -> Level {
        match (self.min_level(), self.max_level()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// Checks that no boundary raises the filtration level.
    pub fn validate(&self) -> Result<(), FiltrationWitness> {
        for d in self.complex.degrees() {
            let boundary = self.complex.differential(d);
            for (j, g) in self.complex.generator_names(d).iter().enumerate() {
                let level = self.level(d, j);
                for &i in boundary.column(j).support() {
                    let target_level = self.level(d - 1, i);
                    if target_level > level {
                        return Err(FiltrationWitness {
                            generator: g.clone(),
                            level,
                            target: self.complex.generator_names(d - 1)[i].clone(),
                            target_level,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check(&self) -> Result<(), SpectralError> {
        self.complex.validate()?;
        self.validate()?;
        Ok(())
    }

    /// Basis of the chains of total degree `n` supported on levels `≤ p`
    /// whose boundary is supported on levels `≤ bound`, as vectors in the
    /// full degree-`n` coordinate space.
    fn constrained_cycles(&self, n: Degree, p: Level, bound: Level) -> Vec<BitVector> {
        let rank = self.complex.rank(n);
        if rank == 0 {
            return Vec::new();
        }
        let cols: Vec<usize> = (0..rank).filter(|&j| self.level(n, j) <= p).collect();
        if cols.is_empty() {
            return Vec::new();
        }
        let lower_rank = self.complex.rank(n - 1);
        let rows: Vec<usize> = (0..lower_rank)
            .filter(|&i| self.level(n - 1, i) > bound)
            .collect();
        let boundary = self.complex.differential(n);
        let restricted = BitMatrix::from_entries(
            rows.len(),
            cols.len(),
            cols.iter().enumerate().flat_map(|(cj, &j)| {
                boundary
                    .column(j)
                    .support()
                    .iter()
                    .filter_map(|&i| rows.binary_search(&i).ok().map(|ri| (ri, cj)))
                    .collect::<Vec<_>>()
            }),
        );
        restricted
            .kernel_basis()
            .into_iter()
            .map(|k| BitVector::from_positions(rank, k.support().iter().map(|&cj| cols[cj])))
            .collect()
    }

    /// The page at index `r`, with deterministic representatives and the
    /// induced differential toward `(p − r, q + r − 1)`.
    pub fn page(&self, r: u32) -> Result<SpectralPage, SpectralError> {
        self.check()?;
        let (Some(lo), Some(hi)) = (self.min_level(), self.max_level()) else {
            return Ok(SpectralPage {
                r,
                dims: BTreeMap::new(),
                representatives: BTreeMap::new(),
                differentials: BTreeMap::new(),
            });
        };
        let r_i = i64::from(r);
        struct Cell {
            reps: Vec<BitVector>,
            denominator: Vec<BitVector>,
        }
        let mut cells: BTreeMap<(Degree, Level), Cell> = BTreeMap::new();
        let degrees: Vec<Degree> = self.complex.degrees().collect();
        for &n in &degrees {
            for p in lo..=hi {
                let numerator = self.constrained_cycles(n, p, p - r_i);
                // chains one level down with the same boundary constraint
                let mut denominator = self.constrained_cycles(n, p - 1, p - r_i);
                // boundaries of chains reaching down from level p + r - 1
                let boundary = self.complex.differential(n + 1);
                for w in self.constrained_cycles(n + 1, p + r_i - 1, p) {
                    denominator.push(boundary.mul_vector(&w));
                }
                let mut ech = Echelon::new(self.complex.rank(n));
                for v in &denominator {
                    ech.insert(v);
                }
                let reps: Vec<BitVector> = numerator.iter().filter_map(|v| ech.insert(v)).collect();
                if !reps.is_empty() {
                    cells.insert((n, p), Cell { reps, denominator });
                }
            }
        }
        let mut dims = BTreeMap::new();
        let mut representatives = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for ((n, p), cell) in &cells {
            dims.insert((*p, n - p), cell.reps.len());
            representatives.insert((*p, n - p), cell.reps.clone());
        }
        for ((n, p), cell) in &cells {
            let target_key = (n - 1, p - r_i);
            let Some(target) = cells.get(&target_key) else {
                continue;
            };
            let target_rank = self.complex.rank(n - 1);
            let solver = BitMatrix::from_columns(
                target_rank,
                target
                    .reps
                    .iter()
                    .chain(target.denominator.iter())
                    .cloned()
                    .collect(),
            );
            let boundary = self.complex.differential(*n);
            let mut columns = Vec::with_capacity(cell.reps.len());
            for v in &cell.reps {
                let image = boundary.mul_vector(v);
                let coeffs = solver
                    .solve(&image)
                    .expect("boundary of a page class lands in the target page");
                columns.push(BitVector::from_positions(
                    target.reps.len(),
                    coeffs
                        .support()
                        .iter()
                        .copied()
                        .filter(|&i| i < target.reps.len()),
                ));
            }
            differentials.insert(
                (*p, n - p),
                BitMatrix::from_columns(target.reps.len(), columns),
            );
        }
        Ok(SpectralPage {
            r,
            dims,
            representatives,
            differentials,
        })
    }

    /// The stable page together with its index.
    ///
    /// The index is `width + 1`, the bound forced by the finite filtration:
    /// beyond it every numerator and denominator is literally the same
    /// subspace, so no further page can move. No earlier exit is attempted,
    /// since equal dimensions on consecutive pages prove nothing.
    pub fn infinity_page(&self) -> Result<(SpectralPage, u32), SpectralError> {
        let r = u32::try_from(self.width() + 1).expect("filtration width fits in u32");
        Ok((self.page(r)?, r))
    }

    /// Dimensions of the graded pieces of the filtration induced on
    /// homology: `F_p H / F_{p-1} H` placed at `(p, n − p)`.
    pub fn associated_graded(&self) -> Result<BTreeMap<Bidegree, usize>, SpectralError> {
        self.check()?;
        let (Some(lo), Some(hi)) = (self.min_level(), self.max_level()) else {
            return Ok(BTreeMap::new());
        };
        let mut out = BTreeMap::new();
        let degrees: Vec<Degree> = self.complex.degrees().collect();
        for &n in &degrees {
            let incoming = self.complex.differential(n + 1);
            let boundaries: Vec<BitVector> = (0..incoming.cols())
                .map(|j| incoming.column(j).clone())
                .collect();
            let mut previous = 0usize;
            for p in lo..=hi {
                // cycles supported on levels ≤ p: boundary below every level
                let cycles = self.constrained_cycles(n, p, lo - 1);
                let dim = crate::gf2::relative_rank(&cycles, &boundaries);
                if dim > previous {
                    out.insert((p, n - p), dim - previous);
                }
                previous = dim;
            }
        }
        Ok(out)
    }
}

/// One page of the spectral sequence of a filtered complex.
///
/// Representatives live in the total complex: each lies in filtration level
/// `≤ p` with boundary in level `≤ p − r`. The differential at `(p, q)` is
/// the matrix of the induced map toward `(p − r, q + r − 1)`, expressed in
/// the representative bases; it is stored when both cells are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    pub r: u32,
    pub dims: BTreeMap<Bidegree, usize>,
    pub representatives: BTreeMap<Bidegree, Vec<BitVector>>,
    pub differentials: BTreeMap<Bidegree, BitMatrix>,
}

impl SpectralPage {
    pub fn dim(&self, p: Level, q: Degree) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn differential_rank(&self, p: Level, q: Degree) -> usize {
        self.differentials.get(&(p, q)).map_or(0, BitMatrix::rank)
    }

    /// Total dimension per total degree `n = p + q`.
    pub fn totals(&self) -> BTreeMap<Degree, usize> {
        let mut out = BTreeMap::new();
        for (&(p, q), &dim) in &self.dims {
            *out.entry(p + q).or_insert(0) += dim;
        }
        out
    }
}
