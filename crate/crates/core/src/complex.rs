//! Finite-rank graded chain complexes over GF(2) and chain maps of
//! arbitrary degree shift.
//!
//! A complex stores an ordered list of named generators per degree and one
//! boundary matrix per degree, mapping degree `d` to degree `d - 1`.
//! Degrees range over all integers with finite support. Complexes built by
//! the constructors in this module order generators lexicographically, so
//! every derived object is deterministic.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector, Echelon};

pub type Degree = i64;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("degree {degree}: differential has shape {got_rows}x{got_cols}, expected {want_rows}x{want_cols}")]
    DifferentialShape {
        degree: Degree,
        got_rows: usize,
        got_cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("degree {degree}: duplicate generator name `{name}`")]
    DuplicateGenerator { degree: Degree, name: String },
    #[error("duplicate direct-sum tag `{tag}`")]
    DuplicateTag { tag: String },
    #[error("degree {degree}: generator name `{name}` produced by combination is not unique")]
    NameCollision { degree: Degree, name: String },
}

/// Witness that a composite of consecutive boundary maps is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("d∘d ≠ 0 at degree {degree} on generator `{generator}`")]
pub struct SquareWitness {
    pub degree: Degree,
    pub generator: String,
}

/// Witness that a degree map fails the chain-map condition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("chain-map condition fails at degree {degree} on generator `{generator}`")]
pub struct ChainMapWitness {
    pub degree: Degree,
    pub generator: String,
}

/// A finite-rank chain complex over GF(2) with named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    generators: BTreeMap<Degree, Vec<String>>,
    differentials: BTreeMap<Degree, BitMatrix>,
}

impl GradedComplex {
    /// Builds a complex after checking matrix shapes and name uniqueness.
    ///
    /// Absent differentials are zero; zero matrices are normalized away so
    /// that equality of complexes is equality of the stored data.
    pub fn new(
        generators: BTreeMap<Degree, Vec<String>>,
        differentials: BTreeMap<Degree, BitMatrix>,
    ) -> Result<Self, ComplexError> {
        let generators: BTreeMap<Degree, Vec<String>> = generators
            .into_iter()
            .filter(|(_, names)| !names.is_empty())
            .collect();
        for (&d, names) in &generators {
            let mut seen = names.clone();
            seen.sort();
            for w in seen.windows(2) {
                if w[0] == w[1] {
                    return Err(ComplexError::DuplicateGenerator {
                        degree: d,
                        name: w[0].clone(),
                    });
                }
            }
        }
        let rank_of = |d: Degree| generators.get(&d).map_or(0, Vec::len);
        let mut kept = BTreeMap::new();
        for (d, m) in differentials {
            let want_rows = rank_of(d - 1);
            let want_cols = rank_of(d);
            if m.rows() != want_rows || m.cols() != want_cols {
                return Err(ComplexError::DifferentialShape {
                    degree: d,
                    got_rows: m.rows(),
                    got_cols: m.cols(),
                    want_rows,
                    want_cols,
                });
            }
            if !m.is_zero() {
                kept.insert(d, m);
            }
        }
        Ok(Self {
            generators,
            differentials: kept,
        })
    }

    /// The complex with no generators at all.
    pub fn empty() -> Self {
        Self {
            generators: BTreeMap::new(),
            differentials: BTreeMap::new(),
        }
    }

    /// Degrees carrying at least one generator, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        self.generators.keys().copied()
    }

    pub fn min_degree(&self) -> Option<Degree> {
        self.generators.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<Degree> {
        self.generators.keys().next_back().copied()
    }

    pub fn rank(&self, d: Degree) -> usize {
        self.generators.get(&d).map_or(0, Vec::len)
    }

    pub fn total_rank(&self) -> usize {
        self.generators.values().map(Vec::len).sum()
    }

    /// Generator names of degree `d`, in stored order.
    pub fn generator_names(&self, d: Degree) -> &[String] {
        self.generators.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn generator_index(&self, d: Degree, name: &str) -> Option<usize> {
        self.generator_names(d).iter().position(|n| n == name)
    }

    /// The boundary matrix from degree `d` to degree `d - 1`, materializing
    /// zeros for absent entries.
    pub fn differential(&self, d: Degree) -> BitMatrix {
        match self.differentials.get(&d) {
            Some(m) => m.clone(),
            None => BitMatrix::zeros(self.rank(d - 1), self.rank(d)),
        }
    }

    /// Checks that consecutive boundary maps compose to zero.
    ///
    /// The witness names the upper degree and the first generator whose
    /// double boundary is nonzero.
    pub fn validate(&self) -> Result<(), SquareWitness> {
        for &d in self.generators.keys() {
            let square = self.differential(d - 1).mul(&self.differential(d));
            for (j, name) in self.generator_names(d).iter().enumerate() {
                if !square.column(j).is_zero() {
                    return Err(SquareWitness {
                        degree: d,
                        generator: name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Homology dimensions with cycle representatives per degree.
    ///
    /// `dim H_d = dim ker ∂_d − rank ∂_{d+1}`; each representative is a
    /// kernel vector reduced modulo the image, chosen deterministically.
    pub fn homology(&self) -> Result<Homology, SquareWitness> {
        self.validate()?;
        let mut dims = BTreeMap::new();
        let mut representatives = BTreeMap::new();
        for &d in self.generators.keys() {
            let kernel = self.differential(d).kernel_basis();
            let incoming = self.differential(d + 1);
            let mut ech = Echelon::new(self.rank(d));
            for j in 0..incoming.cols() {
                ech.insert(incoming.column(j));
            }
            let mut reps = Vec::new();
            for k in &kernel {
                if let Some(residue) = ech.insert(k) {
                    reps.push(residue);
                }
            }
            if !reps.is_empty() {
                dims.insert(d, reps.len());
                representatives.insert(d, reps);
            }
        }
        Ok(Homology {
            dims,
            representatives,
        })
    }
}

/// Homology of a complex: dimensions and chosen cycle representatives.
///
/// Degrees with zero homology are omitted from both maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub dims: BTreeMap<Degree, usize>,
    pub representatives: BTreeMap<Degree, Vec<BitVector>>,
}

impl Homology {
    pub fn dim(&self, d: Degree) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }
}

/// A linear map between graded complexes shifting degrees by a fixed amount.
///
/// The component at degree `d` maps `C_d(source)` to `C_{d+shift}(target)`.
/// Source and target are not stored; operations that need shapes take the
/// complexes explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMap {
    shift: Degree,
    components: BTreeMap<Degree, BitMatrix>,
}

impl DegreeMap {
    /// Builds a degree map, dropping zero components.
    pub fn new(shift: Degree, components: BTreeMap<Degree, BitMatrix>) -> Self {
        let components = components
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .collect();
        Self { shift, components }
    }

    pub fn zero(shift: Degree) -> Self {
        Self {
            shift,
            components: BTreeMap::new(),
        }
    }

    /// The identity map of a complex (shift 0).
    pub fn identity(c: &GradedComplex) -> Self {
        let components = c
            .degrees()
            .map(|d| (d, BitMatrix::identity(c.rank(d))))
            .collect();
        Self::new(0, components)
    }

    pub fn shift(&self) -> Degree {
        self.shift
    }

    pub fn components(&self) -> &BTreeMap<Degree, BitMatrix> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// The component at degree `d`, materialized with the given shape.
    pub fn component_or_zero(
        &self,
        d: Degree,
        src: &GradedComplex,
        tgt: &GradedComplex,
    ) -> BitMatrix {
        match self.components.get(&d) {
            Some(m) => m.clone(),
            None => BitMatrix::zeros(tgt.rank(d + self.shift), src.rank(d)),
        }
    }

    /// Checks component shapes against the given source and target.
    pub fn validate_shapes(
        &self,
        src: &GradedComplex,
        tgt: &GradedComplex,
    ) -> Result<(), ComplexError> {
        for (&d, m) in &self.components {
            let want_rows = tgt.rank(d + self.shift);
            let want_cols = src.rank(d);
            if m.rows() != want_rows || m.cols() != want_cols {
                return Err(ComplexError::DifferentialShape {
                    degree: d,
                    got_rows: m.rows(),
                    got_cols: m.cols(),
                    want_rows,
                    want_cols,
                });
            }
        }
        Ok(())
    }

    /// Checks `∂∘f + f∘∂ = 0` in every degree, the GF(2) chain-map
    /// condition for all shifts.
    pub fn validate_chain_map(
        &self,
        src: &GradedComplex,
        tgt: &GradedComplex,
    ) -> Result<(), ChainMapWitness> {
        for d in src.degrees() {
            let after = tgt
                .differential(d + self.shift)
                .mul(&self.component_or_zero(d, src, tgt));
            let before = self
                .component_or_zero(d - 1, src, tgt)
                .mul(&src.differential(d));
            let sum = after.add(&before);
            for (j, name) in src.generator_names(d).iter().enumerate() {
                if !sum.column(j).is_zero() {
                    return Err(ChainMapWitness {
                        degree: d,
                        generator: name.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// One summand of a direct sum: a complex, a degree shift, and a tag
/// appended to its generator names to keep the union disjoint.
#[derive(Clone, Debug)]
pub struct Summand {
    pub complex: GradedComplex,
    pub shift: Degree,
    pub tag: String,
}

/// Tensor product of two complexes.
///
/// Generators in degree `n` are the pairs `x⊗y` with `deg x + deg y = n`;
/// the boundary is `∂(x⊗y) = ∂x⊗y + x⊗∂y`.
pub fn tensor_product(a: &GradedComplex, b: &GradedComplex) -> Result<GradedComplex, ComplexError> {
    // generator of the product = a generator of each factor, by coordinates
    type FactorKey = (Degree, usize, Degree, usize);
    // (degree, sorted names) plus a lookup from the factor coordinates
    let mut per_degree: BTreeMap<Degree, Vec<(String, FactorKey)>> = BTreeMap::new();
    for i in a.degrees() {
        for j in b.degrees() {
            for (xi, x) in a.generator_names(i).iter().enumerate() {
                for (yj, y) in b.generator_names(j).iter().enumerate() {
                    per_degree
                        .entry(i + j)
                        .or_default()
                        .push((format!("{x}⊗{y}"), (i, xi, j, yj)));
                }
            }
        }
    }
    let mut generators = BTreeMap::new();
    let mut index: BTreeMap<FactorKey, (Degree, usize)> = BTreeMap::new();
    for (&n, items) in per_degree.iter_mut() {
        items.sort();
        for w in items.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ComplexError::NameCollision {
                    degree: n,
                    name: w[0].0.clone(),
                });
            }
        }
        let names: Vec<String> = items.iter().map(|(name, _)| name.clone()).collect();
        for (pos, (_, key)) in items.iter().enumerate() {
            index.insert(*key, (n, pos));
        }
        generators.insert(n, names);
    }
    let mut differentials = BTreeMap::new();
    for (&n, items) in &per_degree {
        let rows = per_degree.get(&(n - 1)).map_or(0, Vec::len);
        let mut entries = Vec::new();
        for (col, (_, (i, xi, j, yj))) in items.iter().enumerate() {
            let da = a.differential(*i);
            for &r in da.column(*xi).support() {
                let (_, row) = index[&(i - 1, r, *j, *yj)];
                entries.push((row, col));
            }
            let db = b.differential(*j);
            for &r in db.column(*yj).support() {
                let (_, row) = index[&(*i, *xi, j - 1, r)];
                entries.push((row, col));
            }
        }
        differentials.insert(n, BitMatrix::from_entries(rows, items.len(), entries));
    }
    GradedComplex::new(generators, differentials)
}

/// Direct sum of shifted complexes with tagged generator names.
///
/// Generator `g` of summand `tag` becomes `g⊗tag`; degrees are shifted and
/// the boundary acts blockwise. Cross terms between summands, when wanted,
/// are the caller's business.
pub fn direct_sum_with_shifts(parts: &[Summand]) -> Result<GradedComplex, ComplexError> {
    {
        let mut tags: Vec<&str> = parts.iter().map(|p| p.tag.as_str()).collect();
        tags.sort_unstable();
        for w in tags.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateTag {
                    tag: w[0].to_string(),
                });
            }
        }
    }
    // generator of the sum = (part, degree, position) in its summand
    type PartKey = (usize, Degree, usize);
    let mut per_degree: BTreeMap<Degree, Vec<(String, PartKey)>> = BTreeMap::new();
    for (pi, part) in parts.iter().enumerate() {
        for d in part.complex.degrees() {
            for (gi, g) in part.complex.generator_names(d).iter().enumerate() {
                per_degree
                    .entry(d + part.shift)
                    .or_default()
                    .push((format!("{g}⊗{}", part.tag), (pi, d, gi)));
            }
        }
    }
    let mut generators = BTreeMap::new();
    let mut index: BTreeMap<PartKey, (Degree, usize)> = BTreeMap::new();
    for (&n, items) in per_degree.iter_mut() {
        items.sort();
        for w in items.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ComplexError::NameCollision {
                    degree: n,
                    name: w[0].0.clone(),
                });
            }
        }
        let names: Vec<String> = items.iter().map(|(name, _)| name.clone()).collect();
        for (pos, (_, key)) in items.iter().enumerate() {
            index.insert(*key, (n, pos));
        }
        generators.insert(n, names);
    }
    let mut differentials = BTreeMap::new();
    for (&n, items) in &per_degree {
        let rows = per_degree.get(&(n - 1)).map_or(0, Vec::len);
        let mut entries = Vec::new();
        for (col, (_, (pi, d, gi))) in items.iter().enumerate() {
            let dm = parts[*pi].complex.differential(*d);
            for &r in dm.column(*gi).support() {
                let (_, row) = index[&(*pi, d - 1, r)];
                entries.push((row, col));
            }
        }
        differentials.insert(n, BitMatrix::from_entries(rows, items.len(), entries));
    }
    GradedComplex::new(generators, differentials)
}
