//! Shared test machinery: brute-force oracles independent of the library's
//! elimination code, and seeded random generators for complexes, filtered
//! complexes, and enriched data.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use morsefib::complex::{Degree, DegreeMap, GradedComplex};
use morsefib::enriched::{CriticalPoint, EnrichedMorseDatum};
use morsefib::gf2::{BitMatrix, BitVector};
use morsefib::spectral::FilteredComplex;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// brute-force oracles (mask enumeration, no shared elimination code)
// ---------------------------------------------------------------------------

fn mask_image(m: &BitMatrix, mask: u64) -> u64 {
    let mut out = 0u64;
    for c in 0..m.cols() {
        if mask >> c & 1 == 1 {
            for &r in m.column(c).support() {
                out ^= 1u64 << r;
            }
        }
    }
    out
}

fn log2_exact(n: usize) -> usize {
    assert!(n.is_power_of_two(), "subspace sizes are powers of two");
    n.trailing_zeros() as usize
}

/// Homology dimensions by enumerating every chain. Usable only on small
/// complexes (rank per degree ≤ 20 or so).
pub fn brute_homology_dims(c: &GradedComplex) -> BTreeMap<Degree, usize> {
    let mut out = BTreeMap::new();
    for d in c.degrees() {
        let rank = c.rank(d);
        assert!(rank < 20, "complex too large for brute force");
        let boundary = c.differential(d);
        let kernel_size = (0u64..1 << rank)
            .filter(|&mask| mask_image(&boundary, mask) == 0)
            .count();
        let incoming = c.differential(d + 1);
        let image: HashSet<u64> = (0u64..1 << c.rank(d + 1))
            .map(|mask| mask_image(&incoming, mask))
            .collect();
        let dim = log2_exact(kernel_size) - log2_exact(image.len());
        if dim > 0 {
            out.insert(d, dim);
        }
    }
    out
}

/// Page dimensions straight from the definition, by enumerating every
/// chain of each total degree and counting the two nested subspaces.
pub fn brute_page_dims(fc: &FilteredComplex, r: u32) -> BTreeMap<(i64, i64), usize> {
    let c = fc.complex();
    let (Some(lo), Some(hi)) = (fc.min_level(), fc.max_level()) else {
        return BTreeMap::new();
    };
    let r = i64::from(r);
    // all x of degree n with support in levels ≤ p and boundary support in
    // levels ≤ bound
    let constrained = |n: Degree, p: i64, bound: i64| -> Vec<u64> {
        let rank = c.rank(n);
        assert!(rank < 20, "complex too large for brute force");
        let boundary = c.differential(n);
        (0u64..1 << rank)
            .filter(|&mask| {
                (0..rank).all(|i| mask >> i & 1 == 0 || fc.level(n, i) <= p)
                    && (0..c.rank(n - 1)).all(|i| {
                        mask_image(&boundary, mask) >> i & 1 == 0 || fc.level(n - 1, i) <= bound
                    })
            })
            .collect()
    };
    let span = |vs: &[u64]| -> HashSet<u64> {
        let mut out = HashSet::new();
        out.insert(0);
        for &v in vs {
            let existing: Vec<u64> = out.iter().copied().collect();
            for e in existing {
                out.insert(e ^ v);
            }
        }
        out
    };
    let mut dims = BTreeMap::new();
    let degrees: Vec<Degree> = c.degrees().collect();
    for &n in &degrees {
        for p in lo..=hi {
            let numerator = constrained(n, p, p - r);
            let mut denominator = constrained(n, p - 1, p - r);
            let boundary = c.differential(n + 1);
            for w in constrained(n + 1, p + r - 1, p) {
                denominator.push(mask_image(&boundary, w));
            }
            let dim = log2_exact(numerator.len()) - log2_exact(span(&denominator).len());
            if dim > 0 {
                dims.insert((p, n - p), dim);
            }
        }
    }
    dims
}

/// Künneth convolution of two dimension tables.
pub fn kunneth(
    a: &BTreeMap<Degree, usize>,
    b: &BTreeMap<Degree, usize>,
) -> BTreeMap<Degree, usize> {
    let mut out = BTreeMap::new();
    for (&i, &da) in a {
        for (&j, &db) in b {
            *out.entry(i + j).or_insert(0) += da * db;
        }
    }
    out.retain(|_, &mut v| v > 0);
    out
}

// ---------------------------------------------------------------------------
// random generators
// ---------------------------------------------------------------------------

/// A random finite complex with ∂² = 0 enforced by sampling each boundary
/// column inside the kernel of the previous boundary.
pub fn random_valid_complex(
    rng: &mut ChaCha8Rng,
    max_degree: Degree,
    max_rank: usize,
    label: &str,
) -> GradedComplex {
    let ranks: Vec<usize> = (0..=max_degree)
        .map(|_| rng.gen_range(0..=max_rank))
        .collect();
    let mut generators = BTreeMap::new();
    for (d, &rank) in ranks.iter().enumerate() {
        if rank > 0 {
            generators.insert(
                d as Degree,
                (0..rank).map(|i| format!("{label}{d}g{i}")).collect(),
            );
        }
    }
    let rank_of = |d: Degree| -> usize {
        if d < 0 || d > max_degree {
            0
        } else {
            ranks[d as usize]
        }
    };
    let mut differentials: BTreeMap<Degree, BitMatrix> = BTreeMap::new();
    for d in 0..=max_degree {
        let rows = rank_of(d - 1);
        let cols = rank_of(d);
        if rows == 0 || cols == 0 {
            continue;
        }
        // kernel of the boundary below; everything, at the bottom
        let kernel = match differentials.get(&(d - 1)) {
            Some(below) => below.kernel_basis(),
            None => (0..rows).map(|i| BitVector::standard(rows, i)).collect(),
        };
        let columns = (0..cols)
            .map(|_| {
                let mut v = BitVector::zeros(rows);
                for k in &kernel {
                    if rng.gen_bool(0.5) {
                        v = v.xor(k);
                    }
                }
                v
            })
            .collect();
        differentials.insert(d, BitMatrix::from_columns(rows, columns));
    }
    GradedComplex::new(generators, differentials).expect("random complex is well formed")
}

/// A random bounded filtered complex: cancelling pairs and free generators
/// with compatible levels, conjugated by a random level-decreasing
/// unitriangular change of basis.
pub fn random_filtered_complex(rng: &mut ChaCha8Rng) -> FilteredComplex {
    let max_degree: Degree = rng.gen_range(2..=3);
    let max_level: i64 = rng.gen_range(1..=3);
    let mut generators: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
    let mut levels: BTreeMap<Degree, Vec<i64>> = BTreeMap::new();
    let add = |d: Degree,
               level: i64,
               generators: &mut BTreeMap<Degree, Vec<String>>,
               levels: &mut BTreeMap<Degree, Vec<i64>>|
     -> usize {
        let names = generators.entry(d).or_default();
        let ls = levels.entry(d).or_default();
        names.push(format!("r{d}n{}", names.len()));
        ls.push(level);
        names.len() - 1
    };
    let mut arrows: Vec<(Degree, usize, usize)> = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let d = rng.gen_range(0..max_degree);
        let level = rng.gen_range(0..=max_level);
        add(d, level, &mut generators, &mut levels);
    }
    for _ in 0..rng.gen_range(1..=4) {
        let d = rng.gen_range(1..=max_degree);
        let hi = rng.gen_range(0..=max_level);
        let lo = rng.gen_range(0..=hi);
        let src = add(d, hi, &mut generators, &mut levels);
        let tgt = add(d - 1, lo, &mut generators, &mut levels);
        arrows.push((d, src, tgt));
    }
    let rank_of = |d: Degree, generators: &BTreeMap<Degree, Vec<String>>| {
        generators.get(&d).map_or(0, Vec::len)
    };
    let mut differentials = BTreeMap::new();
    for (&d, names) in &generators {
        let rows = rank_of(d - 1, &generators);
        let entries: Vec<(usize, usize)> = arrows
            .iter()
            .filter(|&&(ad, _, _)| ad == d)
            .map(|&(_, src, tgt)| (tgt, src))
            .collect();
        if rows > 0 && !entries.is_empty() {
            differentials.insert(d, BitMatrix::from_entries(rows, names.len(), entries));
        }
    }
    let complex =
        GradedComplex::new(generators.clone(), differentials).expect("pair complex is well formed");
    // change of basis: identity plus strictly level-decreasing noise
    let mut change: BTreeMap<Degree, (BitMatrix, BitMatrix)> = BTreeMap::new();
    for (&d, names) in &generators {
        let n = names.len();
        let ls = &levels[&d];
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if ls[i] < ls[j] && rng.gen_bool(0.4) {
                    entries.push((i, j));
                }
            }
        }
        let noise = BitMatrix::from_entries(n, n, entries);
        let u = BitMatrix::identity(n).add(&noise);
        let mut inverse = BitMatrix::identity(n);
        let mut term = noise.clone();
        while !term.is_zero() {
            inverse = inverse.add(&term);
            term = term.mul(&noise);
        }
        change.insert(d, (u, inverse));
    }
    let identity_pair = |n: usize| (BitMatrix::identity(n), BitMatrix::identity(n));
    let mut conjugated = BTreeMap::new();
    for &d in generators.keys() {
        let rows = rank_of(d - 1, &generators);
        if rows == 0 {
            continue;
        }
        let (u_below, _) = change
            .get(&(d - 1))
            .cloned()
            .unwrap_or_else(|| identity_pair(rows));
        let (_, inv_here) = change
            .get(&d)
            .cloned()
            .unwrap_or_else(|| identity_pair(rank_of(d, &generators)));
        conjugated.insert(d, u_below.mul(&complex.differential(d)).mul(&inv_here));
    }
    let complex = GradedComplex::new(generators, conjugated).expect("conjugated complex");
    FilteredComplex::new(complex, levels).expect("levels are aligned")
}

/// A random product datum: a random classical base complex, one random
/// fiber for every point, and transports that are the identity scaled by
/// the classical incidence bits.
pub fn random_product_datum(
    rng: &mut ChaCha8Rng,
) -> (EnrichedMorseDatum, GradedComplex, GradedComplex) {
    let base = loop {
        let candidate = random_valid_complex(rng, 3, 2, "b");
        if candidate.total_rank() > 0 {
            break candidate;
        }
    };
    let fiber = loop {
        let candidate = random_valid_complex(rng, 2, 2, "f");
        if candidate.total_rank() > 0 {
            break candidate;
        }
    };
    let mut points = Vec::new();
    let mut fibers = BTreeMap::new();
    // one critical point per base generator, index = its degree
    let mut id_of: BTreeMap<(Degree, usize), String> = BTreeMap::new();
    for d in base.degrees() {
        for i in 0..base.rank(d) {
            let id = format!("p{d}x{i}");
            points.push(CriticalPoint::new(id.clone(), u32::try_from(d).unwrap()));
            fibers.insert(id.clone(), fiber.clone());
            id_of.insert((d, i), id);
        }
    }
    let identity = DegreeMap::identity(&fiber);
    let mut transports = BTreeMap::new();
    for d in base.degrees() {
        let boundary = base.differential(d);
        for col in 0..base.rank(d) {
            for &row in boundary.column(col).support() {
                let from = id_of[&(d, col)].clone();
                let to = id_of[&(d - 1, row)].clone();
                transports.insert((from, to), identity.clone());
            }
        }
    }
    let datum =
        EnrichedMorseDatum::new(points, fibers, transports).expect("product datum is well formed");
    (datum, base, fiber)
}

/// Perturbs a datum by a random chain homotopy: conjugates the total
/// differential by `I + L` with `L` a random strictly filtration-lowering
/// degree-0 operator, then reads the new transports back off the blocks.
/// The result satisfies the structure equation by construction and has the
/// same fibers and isomorphic total homology.
pub fn perturb_datum(rng: &mut ChaCha8Rng, datum: &EnrichedMorseDatum) -> EnrichedMorseDatum {
    let total = datum
        .total_complex()
        .expect("input datum satisfies the structure equation");
    let c = total.complex();
    // positions of fiber generators inside the total complex
    let mut position: BTreeMap<(String, Degree, usize), (Degree, usize)> = BTreeMap::new();
    for p in datum.points() {
        let fiber = &datum.fibers()[&p.id];
        for d in fiber.degrees() {
            let n = d + i64::from(p.index);
            for (gi, g) in fiber.generator_names(d).iter().enumerate() {
                let pos = c
                    .generator_index(n, &format!("{g}⊗{}", p.id))
                    .expect("total complex names are generator⊗point");
                position.insert((p.id.clone(), d, gi), (n, pos));
            }
        }
    }
    // random strictly level-lowering noise, per total degree
    let mut noise_entries: BTreeMap<Degree, Vec<(usize, usize)>> = BTreeMap::new();
    for x in datum.points() {
        for y in datum.points() {
            if y.index >= x.index {
                continue;
            }
            let fx = &datum.fibers()[&x.id];
            let fy = &datum.fibers()[&y.id];
            let gap = i64::from(x.index) - i64::from(y.index);
            for d in fx.degrees() {
                let target_degree = d + gap;
                if fy.rank(target_degree) == 0 {
                    continue;
                }
                let n = d + i64::from(x.index);
                for gi in 0..fx.rank(d) {
                    for hj in 0..fy.rank(target_degree) {
                        if rng.gen_bool(0.3) {
                            let (_, col) = position[&(x.id.clone(), d, gi)];
                            let (n2, row) = position[&(y.id.clone(), target_degree, hj)];
                            assert_eq!(n2, n);
                            noise_entries.entry(n).or_default().push((row, col));
                        }
                    }
                }
            }
        }
    }
    let mut change: BTreeMap<Degree, (BitMatrix, BitMatrix)> = BTreeMap::new();
    for d in c.degrees() {
        let n = c.rank(d);
        let noise = BitMatrix::from_entries(n, n, noise_entries.remove(&d).unwrap_or_default());
        let u = BitMatrix::identity(n).add(&noise);
        let mut inverse = BitMatrix::identity(n);
        let mut term = noise.clone();
        while !term.is_zero() {
            inverse = inverse.add(&term);
            term = term.mul(&noise);
        }
        change.insert(d, (u, inverse));
    }
    let conjugated: BTreeMap<Degree, BitMatrix> = c
        .degrees()
        .map(|d| {
            let below = c.rank(d - 1);
            let (u_below, _) = change
                .get(&(d - 1))
                .cloned()
                .unwrap_or((BitMatrix::identity(below), BitMatrix::identity(below)));
            let (_, inv_here) = change[&d].clone();
            (d, u_below.mul(&c.differential(d)).mul(&inv_here))
        })
        .collect();
    // read the new transports off the conjugated blocks
    let mut transports: BTreeMap<(String, String), DegreeMap> = BTreeMap::new();
    for x in datum.points() {
        for y in datum.points() {
            if y.index >= x.index {
                continue;
            }
            let fx = &datum.fibers()[&x.id];
            let fy = &datum.fibers()[&y.id];
            let shift = i64::from(x.index) - i64::from(y.index) - 1;
            let mut components = BTreeMap::new();
            for d in fx.degrees() {
                let target_degree = d + shift;
                if fy.rank(target_degree) == 0 {
                    continue;
                }
                let n = d + i64::from(x.index);
                let block = &conjugated[&n];
                let entries: Vec<(usize, usize)> = (0..fx.rank(d))
                    .flat_map(|gi| {
                        let (_, col) = position[&(x.id.clone(), d, gi)];
                        (0..fy.rank(target_degree))
                            .filter_map(|hj| {
                                let (_, row) = position[&(y.id.clone(), target_degree, hj)];
                                block.get(row, col).then_some((hj, gi))
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect();
                if !entries.is_empty() {
                    components.insert(
                        d,
                        BitMatrix::from_entries(fy.rank(target_degree), fx.rank(d), entries),
                    );
                }
            }
            let map = DegreeMap::new(shift, components);
            if !map.is_zero() {
                transports.insert((x.id.clone(), y.id.clone()), map);
            }
        }
    }
    // diagonal blocks are untouched by a unitriangular conjugation
    for p in datum.points() {
        let fiber = &datum.fibers()[&p.id];
        for d in fiber.degrees() {
            let n = d + i64::from(p.index);
            let block = &conjugated[&n];
            let fiber_boundary = fiber.differential(d);
            for gi in 0..fiber.rank(d) {
                let (_, col) = position[&(p.id.clone(), d, gi)];
                for hj in 0..fiber.rank(d - 1) {
                    let (_, row) = position[&(p.id.clone(), d - 1, hj)];
                    assert_eq!(block.get(row, col), fiber_boundary.get(hj, gi));
                }
            }
        }
    }
    EnrichedMorseDatum::new(datum.points().to_vec(), datum.fibers().clone(), transports)
        .expect("perturbed datum is well formed")
}

/// A fresh randomized structure-equation-satisfying datum: a product datum
/// perturbed by a random chain homotopy, plus its Künneth reference.
pub fn random_perturbed_datum(
    rng: &mut ChaCha8Rng,
) -> (EnrichedMorseDatum, BTreeMap<Degree, usize>) {
    let (product, base, fiber) = random_product_datum(rng);
    let expected = kunneth(
        &base.homology().expect("base is valid").dims,
        &fiber.homology().expect("fiber is valid").dims,
    );
    (perturb_datum(rng, &product), expected)
}
