//! Morse complexes with coefficients in chain complexes of fibers,
//! connected by parallel-transport operators.
//!
//! The input datum assigns to every critical point a fiber complex and to
//! every ordered pair of points, descending in Morse index, a transport
//! operator shifting degrees by `index gap − 1`. The operators must satisfy
//! the structure equation
//!
//! ```text
//! ∂∘T[x→y] + T[x→y]∘∂ = Σ_z T[z→y] ∘ T[x→z]      (over GF(2))
//! ```
//!
//! summed over points `z` of intermediate index. Under that equation the
//! total complex (fibers placed at their point's index, boundary the fiber
//! boundary plus all transports) squares to zero and is filtered by the
//! Morse index, and its spectral sequence starts from the fiber homology.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::complex::{
    direct_sum_with_shifts, ComplexError, Degree, DegreeMap, GradedComplex, SquareWitness, Summand,
};
use crate::gf2::{BitMatrix, BitVector};
use crate::monodromy::{MonodromyLocalSystem, SystemError};
use crate::spectral::{Bidegree, FilteredComplex, SpectralError};

/// A critical point of the base Morse function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPoint {
    pub id: String,
    pub index: u32,
}

impl CriticalPoint {
    pub fn new(id: impl Into<String>, index: u32) -> Self {
        Self {
            id: id.into(),
            index,
        }
    }
}

/// Witness that the structure equation fails on one basis generator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("structure equation fails for pair ({from} → {to}) at degree {degree} on `{generator}`")]
pub struct StructureWitness {
    pub from: String,
    pub to: String,
    pub degree: Degree,
    pub generator: String,
}

#[derive(Debug, Error)]
pub enum EnrichedError {
    #[error("duplicate critical point id `{0}`")]
    DuplicatePoint(String),
    #[error("no fiber complex given for critical point `{0}`")]
    MissingFiber(String),
    #[error("unknown critical point `{0}`")]
    UnknownPoint(String),
    #[error("fiber of `{point}` is not a chain complex: {source}")]
    InvalidFiber {
        point: String,
        source: SquareWitness,
    },
    #[error("transport ({from} → {to}) must descend in Morse index")]
    TransportDirection { from: String, to: String },
    #[error("transport ({from} → {to}) has shift {got}, expected {want}")]
    TransportShift {
        from: String,
        to: String,
        got: Degree,
        want: Degree,
    },
    #[error("transport ({from} → {to}) has inconsistent shapes: {source}")]
    TransportShape {
        from: String,
        to: String,
        source: ComplexError,
    },
    #[error("transport ({from} → {to}) must connect points one index apart")]
    NotConsecutive { from: String, to: String },
    #[error("structure equation fails; first witness: {0}")]
    StructureEquation(StructureWitness),
    #[error("degree-0 structure equation fails for pair ({from} → {to})")]
    DegreeZeroStructure { from: String, to: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Critical points with fiber complexes and transport operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichedMorseDatum {
    points: Vec<CriticalPoint>,
    fibers: BTreeMap<String, GradedComplex>,
    transports: BTreeMap<(String, String), DegreeMap>,
}

impl EnrichedMorseDatum {
    /// Builds a datum, checking ids, fiber validity, transport direction,
    /// shift, and shapes. The structure equation is a separate check.
    pub fn new(
        points: Vec<CriticalPoint>,
        fibers: BTreeMap<String, GradedComplex>,
        transports: BTreeMap<(String, String), DegreeMap>,
    ) -> Result<Self, EnrichedError> {
        let mut indices: BTreeMap<&str, u32> = BTreeMap::new();
        for p in &points {
            if indices.insert(&p.id, p.index).is_some() {
                return Err(EnrichedError::DuplicatePoint(p.id.clone()));
            }
        }
        for p in &points {
            let fiber = fibers
                .get(&p.id)
                .ok_or_else(|| EnrichedError::MissingFiber(p.id.clone()))?;
            fiber
                .validate()
                .map_err(|source| EnrichedError::InvalidFiber {
                    point: p.id.clone(),
                    source,
                })?;
        }
        for id in fibers.keys() {
            if !indices.contains_key(id.as_str()) {
                return Err(EnrichedError::UnknownPoint(id.clone()));
            }
        }
        for ((from, to), map) in &transports {
            let fi = *indices
                .get(from.as_str())
                .ok_or_else(|| EnrichedError::UnknownPoint(from.clone()))?;
            let ti = *indices
                .get(to.as_str())
                .ok_or_else(|| EnrichedError::UnknownPoint(to.clone()))?;
            if fi <= ti {
                return Err(EnrichedError::TransportDirection {
                    from: from.clone(),
                    to: to.clone(),
                });
            }
            let want = i64::from(fi) - i64::from(ti) - 1;
            if map.shift() != want {
                return Err(EnrichedError::TransportShift {
                    from: from.clone(),
                    to: to.clone(),
                    got: map.shift(),
                    want,
                });
            }
            map.validate_shapes(&fibers[from], &fibers[to])
                .map_err(|source| EnrichedError::TransportShape {
                    from: from.clone(),
                    to: to.clone(),
                    source,
                })?;
        }
        Ok(Self {
            points,
            fibers,
            transports,
        })
    }

    pub fn points(&self) -> &[CriticalPoint] {
        &self.points
    }

    pub fn fiber(&self, id: &str) -> Option<&GradedComplex> {
        self.fibers.get(id)
    }

    pub fn fibers(&self) -> &BTreeMap<String, GradedComplex> {
        &self.fibers
    }

    pub fn transports(&self) -> &BTreeMap<(String, String), DegreeMap> {
        &self.transports
    }

    pub fn index_of(&self, id: &str) -> Option<u32> {
        self.points.iter().find(|p| p.id == id).map(|p| p.index)
    }

    pub fn max_index(&self) -> u32 {
        self.points.iter().map(|p| p.index).max().unwrap_or(0)
    }

    fn transport_shift(&self, from: &str, to: &str) -> Degree {
        i64::from(self.index_of(from).unwrap()) - i64::from(self.index_of(to).unwrap()) - 1
    }

    fn transport_or_zero(&self, from: &str, to: &str) -> DegreeMap {
        self.transports
            .get(&(from.to_string(), to.to_string()))
            .cloned()
            .unwrap_or_else(|| DegreeMap::zero(self.transport_shift(from, to)))
    }

    /// Checks the structure equation on every descending pair and degree.
    ///
    /// Each witness names the pair, the fiber degree, and the first basis
    /// generator where the two sides differ.
    pub fn check_structure_equation(&self) -> Result<(), Vec<StructureWitness>> {
        let mut witnesses = Vec::new();
        for x in &self.points {
            for y in &self.points {
                if x.index <= y.index {
                    continue;
                }
                let fx = &self.fibers[&x.id];
                let fy = &self.fibers[&y.id];
                let t = self.transport_or_zero(&x.id, &y.id);
                let s = t.shift();
                for d in fx.degrees() {
                    let after = fy.differential(d + s).mul(&t.component_or_zero(d, fx, fy));
                    let before = t.component_or_zero(d - 1, fx, fy).mul(&fx.differential(d));
                    let mut lhs = after.add(&before);
                    for z in &self.points {
                        if z.index >= x.index || z.index <= y.index {
                            continue;
                        }
                        let fz = &self.fibers[&z.id];
                        let first = self.transport_or_zero(&x.id, &z.id);
                        let then = self.transport_or_zero(&z.id, &y.id);
                        let term = then
                            .component_or_zero(d + first.shift(), fz, fy)
                            .mul(&first.component_or_zero(d, fx, fz));
                        lhs = lhs.add(&term);
                    }
                    for (j, g) in fx.generator_names(d).iter().enumerate() {
                        if !lhs.column(j).is_zero() {
                            witnesses.push(StructureWitness {
                                from: x.id.clone(),
                                to: y.id.clone(),
                                degree: d,
                                generator: g.clone(),
                            });
                            break;
                        }
                    }
                }
            }
        }
        if witnesses.is_empty() {
            Ok(())
        } else {
            Err(witnesses)
        }
    }

    /// Positions of every `generator⊗point` in the total complex.
    fn total_positions(
        &self,
        total: &GradedComplex,
    ) -> BTreeMap<(String, Degree, usize), (Degree, usize)> {
        let mut out = BTreeMap::new();
        for p in &self.points {
            let fiber = &self.fibers[&p.id];
            for d in fiber.degrees() {
                let n = d + i64::from(p.index);
                for (gi, g) in fiber.generator_names(d).iter().enumerate() {
                    let name = format!("{g}⊗{}", p.id);
                    let pos = total
                        .generator_index(n, &name)
                        .expect("direct sum contains every tagged generator");
                    out.insert((p.id.clone(), d, gi), (n, pos));
                }
            }
        }
        out
    }

    /// The total complex: every fiber placed at its point's Morse index,
    /// with boundary `d(α⊗x) = (∂α)⊗x + Σ_y T[x→y](α)⊗y` and filtration
    /// level the Morse index.
    pub fn total_complex(&self) -> Result<FilteredComplex, EnrichedError> {
        self.check_structure_equation()
            .map_err(|mut ws| EnrichedError::StructureEquation(ws.remove(0)))?;
        let summands: Vec<Summand> = self
            .points
            .iter()
            .map(|p| Summand {
                complex: self.fibers[&p.id].clone(),
                shift: i64::from(p.index),
                tag: p.id.clone(),
            })
            .collect();
        let sum = direct_sum_with_shifts(&summands)?;
        let positions = self.total_positions(&sum);
        let mut cross: BTreeMap<Degree, Vec<(usize, usize)>> = BTreeMap::new();
        for ((from, to), map) in &self.transports {
            let fx = &self.fibers[from];
            let fy = &self.fibers[to];
            for &d in map.components().keys() {
                let m = map.component_or_zero(d, fx, fy);
                for (r, c) in m.entries() {
                    let (n, col) = positions[&(from.clone(), d, c)];
                    let (n_target, row) = positions[&(to.clone(), d + map.shift(), r)];
                    debug_assert_eq!(n_target, n - 1);
                    cross.entry(n).or_default().push((row, col));
                }
            }
        }
        let generators: BTreeMap<Degree, Vec<String>> = sum
            .degrees()
            .map(|d| (d, sum.generator_names(d).to_vec()))
            .collect();
        let mut differentials = BTreeMap::new();
        for d in sum.degrees() {
            let mut m = sum.differential(d);
            if let Some(entries) = cross.remove(&d) {
                m = m.add(&BitMatrix::from_entries(m.rows(), m.cols(), entries));
            }
            differentials.insert(d, m);
        }
        let total = GradedComplex::new(generators, differentials)?;
        let mut levels: BTreeMap<Degree, Vec<i64>> = total
            .degrees()
            .map(|d| (d, vec![0; total.rank(d)]))
            .collect();
        for p in &self.points {
            let fiber = &self.fibers[&p.id];
            for d in fiber.degrees() {
                for gi in 0..fiber.rank(d) {
                    let (n, pos) = positions[&(p.id.clone(), d, gi)];
                    levels.get_mut(&n).unwrap()[pos] = i64::from(p.index);
                }
            }
        }
        Ok(FilteredComplex::new(total, levels)?)
    }

    /// The first page of the index filtration, assembled from fiber
    /// homology: the cell at `(p, q)` is `⊕ H_q(F_x)` over points of index
    /// `p`, and the differential is induced on homology by the shift-0
    /// transports between consecutive indices.
    pub fn e1(&self) -> Result<E1Page, EnrichedError> {
        self.check_structure_equation()
            .map_err(|mut ws| EnrichedError::StructureEquation(ws.remove(0)))?;
        struct PointHomology {
            reps: BTreeMap<Degree, Vec<BitVector>>,
        }
        let mut homologies: BTreeMap<String, PointHomology> = BTreeMap::new();
        for p in &self.points {
            let h = self.fibers[&p.id]
                .homology()
                .expect("fibers were validated at construction");
            homologies.insert(
                p.id.clone(),
                PointHomology {
                    reps: h.representatives,
                },
            );
        }
        // generator names per cell, sorted; positions global per total degree
        let mut cell_names: BTreeMap<Bidegree, Vec<String>> = BTreeMap::new();
        let mut labels: BTreeMap<String, Bidegree> = BTreeMap::new();
        let mut name_of: BTreeMap<(String, Degree, usize), String> = BTreeMap::new();
        for p in &self.points {
            for (&q, reps) in &homologies[&p.id].reps {
                for i in 0..reps.len() {
                    let name = format!("h{q}[{i}]⊗{}", p.id);
                    labels.insert(name.clone(), (i64::from(p.index), q));
                    name_of.insert((p.id.clone(), q, i), name.clone());
                    cell_names
                        .entry((i64::from(p.index), q))
                        .or_default()
                        .push(name);
                }
            }
        }
        for names in cell_names.values_mut() {
            names.sort();
        }
        let mut per_degree: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
        for (&(p, q), names) in &cell_names {
            per_degree.entry(p + q).or_default().extend(names.clone());
        }
        for names in per_degree.values_mut() {
            names.sort();
        }
        let position = |name: &str| -> (Degree, usize) {
            let (p, q) = labels[name];
            let n = p + q;
            (n, per_degree[&n].iter().position(|g| g == name).unwrap())
        };
        let cell_position = |name: &str| -> usize {
            let key = labels[name];
            cell_names[&key].iter().position(|g| g == name).unwrap()
        };
        // induced maps on homology for consecutive-index transports
        let mut total_entries: BTreeMap<Degree, Vec<(usize, usize)>> = BTreeMap::new();
        let mut cell_entries: BTreeMap<Bidegree, Vec<(usize, usize)>> = BTreeMap::new();
        for x in &self.points {
            for y in &self.points {
                if x.index != y.index + 1 {
                    continue;
                }
                let fx = &self.fibers[&x.id];
                let fy = &self.fibers[&y.id];
                let t = self.transport_or_zero(&x.id, &y.id);
                for (&q, reps_x) in &homologies[&x.id].reps {
                    let Some(reps_y) = homologies[&y.id].reps.get(&q) else {
                        continue;
                    };
                    let tq = t.component_or_zero(q, fx, fy);
                    let incoming = fy.differential(q + 1);
                    let solver = BitMatrix::from_columns(
                        fy.rank(q),
                        reps_y
                            .iter()
                            .cloned()
                            .chain((0..incoming.cols()).map(|j| incoming.column(j).clone()))
                            .collect(),
                    );
                    for (i, rep) in reps_x.iter().enumerate() {
                        let image = tq.mul_vector(rep);
                        let coeffs = solver
                            .solve(&image)
                            .expect("transport of a cycle is a cycle");
                        let src_name = &name_of[&(x.id.clone(), q, i)];
                        let (n, col) = position(src_name);
                        let src_cell_col = cell_position(src_name);
                        for &k in coeffs.support() {
                            if k < reps_y.len() {
                                let tgt_name = &name_of[&(y.id.clone(), q, k)];
                                let (_, row) = position(tgt_name);
                                total_entries.entry(n).or_default().push((row, col));
                                cell_entries
                                    .entry((i64::from(x.index), q))
                                    .or_default()
                                    .push((cell_position(tgt_name), src_cell_col));
                            }
                        }
                    }
                }
            }
        }
        let mut differentials_by_degree = BTreeMap::new();
        let degrees: Vec<Degree> = per_degree.keys().copied().collect();
        for &n in &degrees {
            let rows = per_degree.get(&(n - 1)).map_or(0, Vec::len);
            let cols = per_degree[&n].len();
            let entries = total_entries.remove(&n).unwrap_or_default();
            differentials_by_degree.insert(n, BitMatrix::from_entries(rows, cols, entries));
        }
        let complex = GradedComplex::new(per_degree.clone(), differentials_by_degree)?;
        let mut dims = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for (&(p, q), names) in &cell_names {
            dims.insert((p, q), names.len());
        }
        for (&(p, q), names) in &cell_names {
            let rows = cell_names.get(&(p - 1, q)).map_or(0, Vec::len);
            let entries = cell_entries.remove(&(p, q)).unwrap_or_default();
            differentials.insert((p, q), BitMatrix::from_entries(rows, names.len(), entries));
        }
        Ok(E1Page {
            complex,
            labels,
            dims,
            differentials,
        })
    }

    /// Homology of the first page with respect to its differential; the
    /// Morse homology of the base with local coefficients in the fiber
    /// homology.
    pub fn e2_dims(&self) -> Result<BTreeMap<Bidegree, usize>, EnrichedError> {
        let e1 = self.e1()?;
        let mut out = BTreeMap::new();
        for (&(p, q), &dim) in &e1.dims {
            let out_rank = e1.differentials.get(&(p, q)).map_or(0, BitMatrix::rank);
            let in_rank = e1.differentials.get(&(p + 1, q)).map_or(0, BitMatrix::rank);
            let e2 = dim - out_rank - in_rank;
            if e2 > 0 {
                out.insert((p, q), e2);
            }
        }
        Ok(out)
    }
}

/// The first page assembled from fiber homology, with its bigraded labels
/// and per-cell differential blocks toward `(p − 1, q)`.
#[derive(Clone, Debug)]
pub struct E1Page {
    pub complex: GradedComplex,
    pub labels: BTreeMap<String, Bidegree>,
    pub dims: BTreeMap<Bidegree, usize>,
    pub differentials: BTreeMap<Bidegree, BitMatrix>,
}

impl E1Page {
    pub fn differential_rank(&self, p: i64, q: Degree) -> usize {
        self.differentials.get(&(p, q)).map_or(0, BitMatrix::rank)
    }
}

/// Builds a datum whose fibers all carry one local system concentrated in
/// degree 0, with transports between consecutive indices given by
/// group-algebra elements expanded through the action, and all higher
/// transports zero.
///
/// Rejects inputs whose expanded transports violate the degree-0 structure
/// equation: for every pair two indices apart the composites around
/// intermediate points must cancel.
pub fn datum_from_monodromy(
    points: Vec<CriticalPoint>,
    transports: BTreeMap<(String, String), BTreeSet<String>>,
    system: &MonodromyLocalSystem,
) -> Result<EnrichedMorseDatum, EnrichedError> {
    if system.fiber().degrees().any(|d| d != 0) {
        return Err(EnrichedError::System(SystemError::FiberNotDegreeZero));
    }
    let index_of = |id: &str| -> Result<u32, EnrichedError> {
        points
            .iter()
            .find(|p| p.id == id)
            .map(|p| p.index)
            .ok_or_else(|| EnrichedError::UnknownPoint(id.to_string()))
    };
    let mut matrices: BTreeMap<(String, String), BitMatrix> = BTreeMap::new();
    let mut maps: BTreeMap<(String, String), DegreeMap> = BTreeMap::new();
    for ((from, to), element) in &transports {
        let fi = index_of(from)?;
        let ti = index_of(to)?;
        if fi != ti + 1 {
            return Err(EnrichedError::NotConsecutive {
                from: from.clone(),
                to: to.clone(),
            });
        }
        let m = system.algebra_matrix(element)?;
        maps.insert(
            (from.clone(), to.clone()),
            DegreeMap::new(0, BTreeMap::from([(0, m.clone())])),
        );
        matrices.insert((from.clone(), to.clone()), m);
    }
    let rank = system.fiber().rank(0);
    for x in &points {
        for y in &points {
            if x.index != y.index + 2 {
                continue;
            }
            let mut sum = BitMatrix::zeros(rank, rank);
            for z in &points {
                if z.index != y.index + 1 {
                    continue;
                }
                let first = matrices.get(&(x.id.clone(), z.id.clone()));
                let then = matrices.get(&(z.id.clone(), y.id.clone()));
                if let (Some(first), Some(then)) = (first, then) {
                    sum = sum.add(&then.mul(first));
                }
            }
            if !sum.is_zero() {
                return Err(EnrichedError::DegreeZeroStructure {
                    from: x.id.clone(),
                    to: y.id.clone(),
                });
            }
        }
    }
    let fibers = points
        .iter()
        .map(|p| (p.id.clone(), system.fiber().clone()))
        .collect();
    let datum = EnrichedMorseDatum::new(points, fibers, maps)?;
    datum
        .check_structure_equation()
        .map_err(|mut ws| EnrichedError::StructureEquation(ws.remove(0)))?;
    Ok(datum)
}
