//! Finite groups, monodromy local systems, and chain complexes of modules
//! over a group algebra.
//!
//! A local system here is a finite group acting by invertible degree-0 maps
//! on a graded GF(2) vector space. Actions compose in path order:
//! `action(gh) = action(h) ∘ action(g)`, matching the composition law of
//! parallel transport, where the path traversed first acts first.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::complex::{ComplexError, Degree, DegreeMap, GradedComplex, SquareWitness};
use crate::gf2::{BitMatrix, BitVector, Echelon};

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("a group needs at least one element")]
    Empty,
    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),
    #[error("multiplication table must be square of the element count")]
    TableShape,
    #[error("unknown element `{0}` in multiplication table")]
    UnknownElement(String),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element `{0}` has no inverse")]
    NoInverse(String),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
}

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("systems are defined over different groups")]
    GroupMismatch,
    #[error("fiber space must carry a zero boundary")]
    FiberNotVectorSpace,
    #[error("operation requires the fiber concentrated in degree 0")]
    FiberNotDegreeZero,
    #[error("no action given for element `{0}`")]
    MissingAction(String),
    #[error("action of `{0}` must have shift 0")]
    ActionShift(String),
    #[error("action of `{0}` is not invertible in degree {1}")]
    ActionNotInvertible(String, Degree),
    #[error("action of the identity is not the identity map")]
    IdentityAction,
    #[error("action is not a homomorphism in path order at ({0}, {1})")]
    NotHomomorphism(String, String),
    #[error("unknown group element `{0}` in a group-algebra entry")]
    UnknownElement(String),
    #[error("intertwiner space has dimension {0}, beyond the exhaustive-search bound")]
    SearchSpaceTooLarge(usize),
    #[error(transparent)]
    Shape(#[from] ComplexError),
    #[error("expanded boundary does not square to zero: {0}")]
    ExpandedComplex(SquareWitness),
}

/// A finite group with explicitly listed elements and multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from element names and the table `g·h`, checking the
    /// group axioms in full.
    pub fn new(elements: Vec<String>, table: Vec<Vec<String>>) -> Result<Self, GroupError> {
        if elements.is_empty() {
            return Err(GroupError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(GroupError::DuplicateElement(e.clone()));
            }
        }
        let n = elements.len();
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(GroupError::TableShape);
        }
        let mut idx_table = vec![vec![0usize; n]; n];
        for (i, row) in table.iter().enumerate() {
            for (j, name) in row.iter().enumerate() {
                idx_table[i][j] = *index
                    .get(name)
                    .ok_or_else(|| GroupError::UnknownElement(name.clone()))?;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| idx_table[e][g] == g && idx_table[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverses = vec![usize::MAX; n];
        for g in 0..n {
            inverses[g] = (0..n)
                .find(|&h| idx_table[g][h] == identity && idx_table[h][g] == identity)
                .ok_or_else(|| GroupError::NoInverse(elements[g].clone()))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if idx_table[idx_table[a][b]][c] != idx_table[a][idx_table[b][c]] {
                        return Err(GroupError::NotAssociative(
                            elements[a].clone(),
                            elements[b].clone(),
                            elements[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(Self {
            elements,
            table: idx_table,
            identity,
            inverses,
        })
    }

    /// The one-element group.
    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The cyclic group of order `n`, elements `1, t, t2, …`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let name = |k: usize| match k {
            0 => "1".to_string(),
            1 => "t".to_string(),
            k => format!("t{k}"),
        };
        let elements: Vec<String> = (0..n).map(name).collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| name((i + j) % n)).collect())
            .collect();
        Self::new(elements, table).expect("cyclic group is well formed")
    }

    /// The symmetric group on three letters, elements named in cycle
    /// notation. Products compose in path order: `(g·h)` applies `g` first.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        fn name(p: &[usize; 3]) -> String {
            match p {
                [0, 1, 2] => "e".to_string(),
                [1, 0, 2] => "(12)".to_string(),
                [2, 1, 0] => "(13)".to_string(),
                [0, 2, 1] => "(23)".to_string(),
                [1, 2, 0] => "(123)".to_string(),
                [2, 0, 1] => "(132)".to_string(),
                _ => unreachable!(),
            }
        }
        let elements: Vec<String> = perms.iter().map(name).collect();
        let compose = |g: &[usize; 3], h: &[usize; 3]| [h[g[0]], h[g[1]], h[g[2]]];
        let table = perms
            .iter()
            .map(|g| perms.iter().map(|h| name(&compose(g, h))).collect())
            .collect();
        Self::new(elements, table).expect("symmetric group is well formed")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    /// The table with element names, row `g`, column `h` holding `g·h`.
    pub fn named_table(&self) -> Vec<Vec<String>> {
        self.table
            .iter()
            .map(|row| row.iter().map(|&k| self.elements[k].clone()).collect())
            .collect()
    }
}

/// A finite group acting on a graded GF(2) vector space by invertible
/// degree-0 maps, composing in path order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyLocalSystem {
    group: FiniteGroup,
    fiber: GradedComplex,
    action: BTreeMap<String, DegreeMap>,
}

impl MonodromyLocalSystem {
    /// Builds a system, checking shapes, invertibility, the identity, and
    /// the path-order homomorphism law on all pairs.
    pub fn new(
        group: FiniteGroup,
        fiber: GradedComplex,
        action: BTreeMap<String, DegreeMap>,
    ) -> Result<Self, SystemError> {
        if fiber.degrees().any(|d| !fiber.differential(d).is_zero()) {
            return Err(SystemError::FiberNotVectorSpace);
        }
        let matrices = |name: &str| -> Result<BTreeMap<Degree, BitMatrix>, SystemError> {
            let map = action
                .get(name)
                .ok_or_else(|| SystemError::MissingAction(name.to_string()))?;
            if map.shift() != 0 {
                return Err(SystemError::ActionShift(name.to_string()));
            }
            map.validate_shapes(&fiber, &fiber)?;
            Ok(fiber
                .degrees()
                .map(|d| (d, map.component_or_zero(d, &fiber, &fiber)))
                .collect())
        };
        let all: BTreeMap<&str, BTreeMap<Degree, BitMatrix>> = group
            .elements()
            .iter()
            .map(|e| Ok((e.as_str(), matrices(e)?)))
            .collect::<Result<_, SystemError>>()?;
        for (name, ms) in &all {
            for (&d, m) in ms {
                if m.rank() != fiber.rank(d) {
                    return Err(SystemError::ActionNotInvertible((*name).to_string(), d));
                }
            }
        }
        let id_name = &group.elements()[group.identity()];
        for (&d, m) in &all[id_name.as_str()] {
            if *m != BitMatrix::identity(fiber.rank(d)) {
                return Err(SystemError::IdentityAction);
            }
        }
        for (gi, g) in group.elements().iter().enumerate() {
            for (hi, h) in group.elements().iter().enumerate() {
                let gh = &group.elements()[group.mul(gi, hi)];
                for d in fiber.degrees() {
                    let composite = all[h.as_str()][&d].mul(&all[g.as_str()][&d]);
                    if composite != all[gh.as_str()][&d] {
                        return Err(SystemError::NotHomomorphism(g.clone(), h.clone()));
                    }
                }
            }
        }
        Ok(Self {
            group,
            fiber,
            action,
        })
    }

    /// The rank-1 system with every element acting as the identity.
    pub fn trivial(group: FiniteGroup) -> Self {
        let fiber = GradedComplex::new(
            BTreeMap::from([(0, vec!["1".to_string()])]),
            BTreeMap::new(),
        )
        .expect("rank-1 fiber is well formed");
        let action = group
            .elements()
            .iter()
            .map(|e| {
                (
                    e.clone(),
                    DegreeMap::new(0, BTreeMap::from([(0, BitMatrix::identity(1))])),
                )
            })
            .collect();
        Self::new(group, fiber, action).expect("trivial system is well formed")
    }

    /// The regular system: the group algebra in degree 0, with a loop `h`
    /// carrying a basis element `k` to `k·h`.
    ///
    /// This is the monodromy of the based Moore path fibration, where
    /// transport concatenates the traversed loop onto the path; the left
    /// multiplication of the group on itself survives as the module
    /// structure commuting with it.
    pub fn left_regular(group: FiniteGroup) -> Self {
        let n = group.order();
        let fiber = GradedComplex::new(
            BTreeMap::from([(0, group.elements().to_vec())]),
            BTreeMap::new(),
        )
        .expect("group-algebra fiber is well formed");
        let action = group
            .elements()
            .iter()
            .enumerate()
            .map(|(hi, h)| {
                let m = BitMatrix::from_entries(n, n, (0..n).map(|k| (group.mul(k, hi), k)));
                (h.clone(), DegreeMap::new(0, BTreeMap::from([(0, m)])))
            })
            .collect();
        Self::new(group, fiber, action).expect("regular system is well formed")
    }

    /// The conjugation system: the group algebra in degree 0, with a loop
    /// `h` carrying a basis element `k` to `h⁻¹·k·h`.
    ///
    /// This is the monodromy of the free loop fibration, whose transport
    /// conjugates a loop by the traversed path.
    pub fn conjugation(group: FiniteGroup) -> Self {
        let n = group.order();
        let fiber = GradedComplex::new(
            BTreeMap::from([(0, group.elements().to_vec())]),
            BTreeMap::new(),
        )
        .expect("group-algebra fiber is well formed");
        let action = group
            .elements()
            .iter()
            .enumerate()
            .map(|(hi, h)| {
                let inv = group.inverse(hi);
                let m = BitMatrix::from_entries(
                    n,
                    n,
                    (0..n).map(|k| (group.mul(group.mul(inv, k), hi), k)),
                );
                (h.clone(), DegreeMap::new(0, BTreeMap::from([(0, m)])))
            })
            .collect();
        Self::new(group, fiber, action).expect("conjugation system is well formed")
    }

    /// The span of the left-multiplication operators inside the
    /// endomorphism algebra of the group algebra, with the conjugation
    /// action of the monodromy restricted to it.
    ///
    /// The fiber basis is `L[k]`, left multiplication by `k`; the action of
    /// `h` conjugates an operator matrix and re-expresses it in that basis,
    /// so closure of the span is verified by actual matrix arithmetic.
    pub fn end_mon(group: FiniteGroup) -> Self {
        let n = group.order();
        let left = |k: usize| BitMatrix::from_entries(n, n, (0..n).map(|j| (group.mul(k, j), j)));
        let vectorize = |m: &BitMatrix| {
            BitVector::from_positions(n * n, m.entries().iter().map(|&(r, c)| r * n + c))
        };
        let span = BitMatrix::from_columns(n * n, (0..n).map(|k| vectorize(&left(k))).collect());
        assert_eq!(span.rank(), n, "left multiplications are independent");
        let fiber = GradedComplex::new(
            BTreeMap::from([(
                0,
                group.elements().iter().map(|e| format!("L[{e}]")).collect(),
            )]),
            BTreeMap::new(),
        )
        .expect("operator-span fiber is well formed");
        let action = group
            .elements()
            .iter()
            .enumerate()
            .map(|(hi, h)| {
                let rho = left(hi);
                let rho_inv = left(group.inverse(hi));
                let columns: Vec<BitVector> = (0..n)
                    .map(|k| {
                        let conjugated = rho_inv.mul(&left(k)).mul(&rho);
                        span.solve(&vectorize(&conjugated))
                            .expect("span is closed under conjugation")
                    })
                    .collect();
                let m = BitMatrix::from_columns(n, columns);
                (h.clone(), DegreeMap::new(0, BTreeMap::from([(0, m)])))
            })
            .collect();
        Self::new(group, fiber, action).expect("operator-span system is well formed")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn fiber(&self) -> &GradedComplex {
        &self.fiber
    }

    pub fn action(&self, element: &str) -> Option<&DegreeMap> {
        self.action.get(element)
    }

    /// The degree-0 action matrix of one element.
    pub fn action_matrix(&self, element: &str) -> Result<BitMatrix, SystemError> {
        let map = self
            .action
            .get(element)
            .ok_or_else(|| SystemError::UnknownElement(element.to_string()))?;
        Ok(map.component_or_zero(0, &self.fiber, &self.fiber))
    }

    /// Expands a group-algebra element (a GF(2) sum of group elements) to a
    /// degree-0 matrix through the action.
    pub fn algebra_matrix(&self, element: &BTreeSet<String>) -> Result<BitMatrix, SystemError> {
        let rank = self.fiber.rank(0);
        let mut out = BitMatrix::zeros(rank, rank);
        for g in element {
            if self.group.element_index(g).is_none() {
                return Err(SystemError::UnknownElement(g.clone()));
            }
            out = out.add(&self.action_matrix(g)?);
        }
        Ok(out)
    }

    fn is_degree_zero(&self) -> bool {
        self.fiber.degrees().all(|d| d == 0)
    }
}

/// An invertible degree-0 map `U` with `U∘a(h) = b(h)∘U` for every `h`, or
/// `None` when the intertwiner space contains no invertible element.
///
/// The space of intertwiners is solved as a linear system; an invertible
/// element is then found by exhaustive search over the space, so `None` is
/// a certificate, not a timeout.
pub fn systems_isomorphic(
    a: &MonodromyLocalSystem,
    b: &MonodromyLocalSystem,
) -> Result<Option<DegreeMap>, SystemError> {
    const SEARCH_BOUND: usize = 20;
    if a.group != b.group {
        return Err(SystemError::GroupMismatch);
    }
    let degrees: Vec<Degree> = a.fiber.degrees().collect();
    if degrees != b.fiber.degrees().collect::<Vec<_>>() {
        return Ok(None);
    }
    let mut components = BTreeMap::new();
    for &d in &degrees {
        let n = a.fiber.rank(d);
        if b.fiber.rank(d) != n {
            return Ok(None);
        }
        // unknowns: U_{ij} at position i*n + j
        let mut entries = Vec::new();
        let mut row = 0usize;
        for g in a.group.elements() {
            let ag = a
                .action(g)
                .unwrap()
                .component_or_zero(d, &a.fiber, &a.fiber);
            let bg = b
                .action(g)
                .unwrap()
                .component_or_zero(d, &b.fiber, &b.fiber);
            for r in 0..n {
                for c in 0..n {
                    // (U·A_g + B_g·U)_{rc} = Σ_j U_{rj}(A_g)_{jc} + Σ_i (B_g)_{ri} U_{ic}
                    for j in 0..n {
                        if ag.get(j, c) {
                            entries.push((row, r * n + j));
                        }
                    }
                    for i in 0..n {
                        if bg.get(r, i) {
                            entries.push((row, i * n + c));
                        }
                    }
                    row += 1;
                }
            }
        }
        let constraints = BitMatrix::from_entries(row, n * n, entries);
        let basis = constraints.kernel_basis();
        let unvectorize = |v: &BitVector| {
            BitMatrix::from_entries(n, n, v.support().iter().map(|&p| (p / n, p % n)))
        };
        let identity_vec = BitVector::from_positions(n * n, (0..n).map(|i| i * n + i));
        let mut ech = Echelon::new(n * n);
        for v in &basis {
            ech.insert(v);
        }
        let found = if n > 0 && ech.contains(&identity_vec) {
            Some(BitMatrix::identity(n))
        } else {
            if basis.len() > SEARCH_BOUND {
                return Err(SystemError::SearchSpaceTooLarge(basis.len()));
            }
            let mut hit = None;
            for mask in 1u64..(1u64 << basis.len()) {
                let mut v = BitVector::zeros(n * n);
                for (i, bv) in basis.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v.xor_assign(bv);
                    }
                }
                let m = unvectorize(&v);
                if m.rank() == n {
                    hit = Some(m);
                    break;
                }
            }
            hit
        };
        match found {
            Some(m) => {
                components.insert(d, m);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(DegreeMap::new(0, components)))
}

/// A chain complex of free modules over a group algebra: ranks per degree
/// and boundary matrices whose entries are GF(2) sums of group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraComplex {
    group: FiniteGroup,
    ranks: BTreeMap<Degree, usize>,
    boundaries: BTreeMap<Degree, Vec<Vec<BTreeSet<String>>>>,
}

impl GroupAlgebraComplex {
    /// Builds the complex, checking shapes, entry names, and that the
    /// composite boundaries vanish after expansion through the regular
    /// representation.
    pub fn new(
        group: FiniteGroup,
        ranks: BTreeMap<Degree, usize>,
        boundaries: BTreeMap<Degree, Vec<Vec<BTreeSet<String>>>>,
    ) -> Result<Self, SystemError> {
        let ranks: BTreeMap<Degree, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        let rank_of = |d: Degree| ranks.get(&d).copied().unwrap_or(0);
        for (&d, rows) in &boundaries {
            let want_rows = rank_of(d - 1);
            let want_cols = rank_of(d);
            if rows.len() != want_rows || rows.iter().any(|r| r.len() != want_cols) {
                return Err(SystemError::Shape(ComplexError::DifferentialShape {
                    degree: d,
                    got_rows: rows.len(),
                    got_cols: rows.first().map_or(0, Vec::len),
                    want_rows,
                    want_cols,
                }));
            }
            for row in rows {
                for entry in row {
                    for g in entry {
                        if group.element_index(g).is_none() {
                            return Err(SystemError::UnknownElement(g.clone()));
                        }
                    }
                }
            }
        }
        let out = Self {
            group,
            ranks,
            boundaries,
        };
        let regular = MonodromyLocalSystem::left_regular(out.group.clone());
        out.expand(&regular)?
            .validate()
            .map_err(SystemError::ExpandedComplex)?;
        Ok(out)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn ranks(&self) -> &BTreeMap<Degree, usize> {
        &self.ranks
    }

    pub fn boundaries(&self) -> &BTreeMap<Degree, Vec<Vec<BTreeSet<String>>>> {
        &self.boundaries
    }

    /// Expands every boundary entry through the action of `system` into
    /// GF(2) blocks, giving an honest chain complex.
    pub fn expand(&self, system: &MonodromyLocalSystem) -> Result<GradedComplex, SystemError> {
        if self.group != system.group {
            return Err(SystemError::GroupMismatch);
        }
        if !system.is_degree_zero() {
            return Err(SystemError::FiberNotDegreeZero);
        }
        let block = system.fiber.rank(0);
        let basis = system.fiber.generator_names(0);
        let generators: BTreeMap<Degree, Vec<String>> = self
            .ranks
            .iter()
            .map(|(&d, &r)| {
                let names = (0..r)
                    .flat_map(|i| basis.iter().map(move |b| format!("{i}:{b}")))
                    .collect();
                (d, names)
            })
            .collect();
        let rank_of = |d: Degree| self.ranks.get(&d).copied().unwrap_or(0);
        let mut differentials = BTreeMap::new();
        for (&d, rows) in &self.boundaries {
            let mut entries = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                for (j, entry) in row.iter().enumerate() {
                    let expanded = system.algebra_matrix(entry)?;
                    for (r, c) in expanded.entries() {
                        entries.push((i * block + r, j * block + c));
                    }
                }
            }
            differentials.insert(
                d,
                BitMatrix::from_entries(rank_of(d - 1) * block, rank_of(d) * block, entries),
            );
        }
        GradedComplex::new(generators, differentials).map_err(SystemError::Shape)
    }
}

/// Homology of a group-algebra complex with coefficients twisted by a local
/// system: expand every boundary through the action and take homology of
/// the result.
pub fn cellular_local_homology(
    complex: &GroupAlgebraComplex,
    system: &MonodromyLocalSystem,
) -> Result<BTreeMap<Degree, usize>, SystemError> {
    let expanded = complex.expand(system)?;
    let homology = expanded.homology().map_err(SystemError::ExpandedComplex)?;
    Ok(homology.dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> BitMatrix {
        BitMatrix::from_entries(2, 2, [(0, 1), (1, 0)])
    }

    /// ∂₂ = ∂₁ = 1 + t over the two-element group: the cell structure of
    /// the projective plane read in its double cover.
    fn projective_plane_data() -> GroupAlgebraComplex {
        let one_plus_t = BTreeSet::from(["1".to_string(), "t".to_string()]);
        GroupAlgebraComplex::new(
            FiniteGroup::cyclic(2),
            BTreeMap::from([(0, 1), (1, 1), (2, 1)]),
            BTreeMap::from([
                (1, vec![vec![one_plus_t.clone()]]),
                (2, vec![vec![one_plus_t]]),
            ]),
        )
        .unwrap()
    }

    fn projective_three_space_data() -> GroupAlgebraComplex {
        let one_plus_t = BTreeSet::from(["1".to_string(), "t".to_string()]);
        GroupAlgebraComplex::new(
            FiniteGroup::cyclic(2),
            BTreeMap::from([(0, 1), (1, 1), (2, 1), (3, 1)]),
            BTreeMap::from([
                (1, vec![vec![one_plus_t.clone()]]),
                (2, vec![vec![one_plus_t.clone()]]),
                (3, vec![vec![one_plus_t]]),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn cyclic_groups_are_well_formed() {
        for n in 1..=6 {
            let g = FiniteGroup::cyclic(n);
            assert_eq!(g.order(), n);
        }
        assert_eq!(FiniteGroup::cyclic(2).elements(), ["1", "t"]);
    }

    #[test]
    fn symmetric3_is_well_formed() {
        let g = FiniteGroup::symmetric3();
        assert_eq!(g.order(), 6);
        let e = g.element_index("e").unwrap();
        assert_eq!(g.identity(), e);
        // (12)·(13) applies (12) first: 1→2→2, 2→1→3, 3→3→1, giving (123)
        let a = g.element_index("(12)").unwrap();
        let b = g.element_index("(13)").unwrap();
        assert_eq!(g.elements()[g.mul(a, b)], "(123)");
    }

    #[test]
    fn broken_table_is_rejected() {
        let err = FiniteGroup::new(
            vec!["1".to_string(), "t".to_string()],
            vec![
                vec!["1".to_string(), "t".to_string()],
                vec!["t".to_string(), "t".to_string()],
            ],
        );
        assert!(err.is_err());
    }

    #[test]
    fn trivial_system_has_rank_one() {
        let s = MonodromyLocalSystem::trivial(FiniteGroup::trivial());
        assert_eq!(s.fiber().rank(0), 1);
    }

    #[test]
    fn regular_action_of_order_two_is_the_swap() {
        let s = MonodromyLocalSystem::left_regular(FiniteGroup::cyclic(2));
        assert_eq!(s.action_matrix("t").unwrap(), swap());
        assert_eq!(s.action_matrix("1").unwrap(), BitMatrix::identity(2));
    }

    #[test]
    fn regular_action_of_order_three_is_a_three_cycle() {
        let s = MonodromyLocalSystem::left_regular(FiniteGroup::cyclic(3));
        let m = s.action_matrix("t").unwrap();
        // permutation matrix with no fixed basis vector
        assert_eq!(m.entries().len(), 3);
        assert_eq!(m.rank(), 3);
        for j in 0..3 {
            assert!(!m.get(j, j));
        }
        // order three
        assert_eq!(m.mul(&m).mul(&m), BitMatrix::identity(3));
    }

    #[test]
    fn conjugation_is_trivial_for_abelian_groups() {
        for group in [
            FiniteGroup::trivial(),
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(4),
        ] {
            let n = group.order();
            let s = MonodromyLocalSystem::conjugation(group);
            for e in s.group().elements().to_vec() {
                assert_eq!(s.action_matrix(&e).unwrap(), BitMatrix::identity(n));
            }
        }
    }

    #[test]
    fn conjugation_by_a_transposition_fixes_two_elements() {
        let g = FiniteGroup::symmetric3();
        // oracle: count fixed points straight from the multiplication table
        let h = g.element_index("(12)").unwrap();
        let fixed_by_table = (0..6)
            .filter(|&k| g.mul(g.mul(g.inverse(h), k), h) == k)
            .count();
        assert_eq!(fixed_by_table, 2);
        let s = MonodromyLocalSystem::conjugation(g);
        let m = s.action_matrix("(12)").unwrap();
        let fixed = (0..6).filter(|&j| m.get(j, j)).count();
        assert_eq!(fixed, 2);
    }

    #[test]
    fn end_mon_of_trivial_and_order_two_groups() {
        let s = MonodromyLocalSystem::end_mon(FiniteGroup::trivial());
        assert_eq!(s.fiber().rank(0), 1);
        let s = MonodromyLocalSystem::end_mon(FiniteGroup::cyclic(2));
        assert_eq!(s.fiber().rank(0), 2);
        for e in ["1", "t"] {
            assert_eq!(s.action_matrix(e).unwrap(), BitMatrix::identity(2));
        }
    }

    #[test]
    fn end_mon_of_symmetric3_acts_by_conjugation_permutations() {
        let g = FiniteGroup::symmetric3();
        let conj = MonodromyLocalSystem::conjugation(g.clone());
        let s = MonodromyLocalSystem::end_mon(g.clone());
        assert_eq!(s.fiber().rank(0), 6);
        // under L[k] ↔ k the two actions are the same matrices
        for e in g.elements() {
            assert_eq!(s.action_matrix(e).unwrap(), conj.action_matrix(e).unwrap());
        }
    }

    #[test]
    fn a_system_is_isomorphic_to_itself() {
        let s = MonodromyLocalSystem::conjugation(FiniteGroup::symmetric3());
        let u = systems_isomorphic(&s, &s).unwrap().unwrap();
        assert_eq!(
            u.component_or_zero(0, s.fiber(), s.fiber()),
            BitMatrix::identity(6)
        );
    }

    #[test]
    fn end_mon_matches_conjugation_for_order_two() {
        let g = FiniteGroup::cyclic(2);
        let a = MonodromyLocalSystem::end_mon(g.clone());
        let b = MonodromyLocalSystem::conjugation(g);
        assert!(systems_isomorphic(&a, &b).unwrap().is_some());
    }

    #[test]
    fn regular_and_conjugation_differ_for_order_two() {
        let g = FiniteGroup::cyclic(2);
        let a = MonodromyLocalSystem::left_regular(g.clone());
        let b = MonodromyLocalSystem::conjugation(g);
        assert_eq!(systems_isomorphic(&a, &b).unwrap(), None);
        // oracle: every invertible 2×2 matrix fails to intertwine swap with identity
        let swap = swap();
        let id = BitMatrix::identity(2);
        let mut invertible_count = 0;
        for mask in 0..16u32 {
            let m = BitMatrix::from_entries(
                2,
                2,
                (0..4)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| (i / 2, i % 2)),
            );
            if m.rank() == 2 {
                invertible_count += 1;
                assert_ne!(m.mul(&swap), id.mul(&m));
            }
        }
        assert_eq!(invertible_count, 6);
    }

    #[test]
    fn lifted_plane_homology_is_the_sphere() {
        let data = projective_plane_data();
        let regular = MonodromyLocalSystem::left_regular(FiniteGroup::cyclic(2));
        let dims = cellular_local_homology(&data, &regular).unwrap();
        assert_eq!(dims, BTreeMap::from([(0, 1), (2, 1)]));
    }

    #[test]
    fn plane_with_trivial_coefficients() {
        let data = projective_plane_data();
        let trivial = MonodromyLocalSystem::trivial(FiniteGroup::cyclic(2));
        let dims = cellular_local_homology(&data, &trivial).unwrap();
        assert_eq!(dims, BTreeMap::from([(0, 1), (1, 1), (2, 1)]));
    }

    #[test]
    fn lifted_three_space_homology_is_the_three_sphere() {
        let data = projective_three_space_data();
        let regular = MonodromyLocalSystem::left_regular(FiniteGroup::cyclic(2));
        let dims = cellular_local_homology(&data, &regular).unwrap();
        assert_eq!(dims, BTreeMap::from([(0, 1), (3, 1)]));
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let data = projective_plane_data();
        let regular = MonodromyLocalSystem::left_regular(FiniteGroup::cyclic(3));
        assert!(matches!(
            cellular_local_homology(&data, &regular),
            Err(SystemError::GroupMismatch)
        ));
    }
}
