//! Sparse linear algebra over GF(2).
//!
//! Vectors and matrices are stored as sorted sets of positions carrying a 1.
//! Every operation is deterministic: elimination always pivots on the
//! smallest available index, so ranks, kernel bases, and solutions are
//! byte-for-byte reproducible across runs.

use std::fmt;

/// A vector over GF(2), stored as the sorted list of positions with a 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitVector {
    len: usize,
    support: Vec<usize>,
}

impl BitVector {
    /// The zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            support: Vec::new(),
        }
    }

    /// The standard basis vector with a single 1 at `pos`.
    pub fn standard(len: usize, pos: usize) -> Self {
        assert!(pos < len, "position {pos} out of range (len={len})");
        Self {
            len,
            support: vec![pos],
        }
    }

    /// Builds a vector from a list of positions.
    ///
    /// Positions are sorted; repeated positions cancel in pairs (GF(2) sum).
    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut support: Vec<usize> = positions.into_iter().collect();
        for &p in &support {
            assert!(p < len, "position {p} out of range (len={len})");
        }
        support.sort_unstable();
        // cancel duplicate pairs
        let mut out = Vec::with_capacity(support.len());
        let mut it = support.into_iter().peekable();
        while let Some(p) = it.next() {
            if it.peek() == Some(&p) {
                it.next();
            } else {
                out.push(p);
            }
        }
        Self { len, support: out }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Positions carrying a 1, strictly increasing.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.len, "position {pos} out of range");
        self.support.binary_search(&pos).is_ok()
    }

    /// Smallest position with a 1, the pivot for elimination.
    pub fn first_one(&self) -> Option<usize> {
        self.support.first().copied()
    }

    /// GF(2) sum (symmetric difference of supports).
    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        let mut out = Vec::with_capacity(self.support.len() + other.support.len());
        let mut a = self.support.iter().peekable();
        let mut b = other.support.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) if x == y => {
                    a.next();
                    b.next();
                }
                (Some(&&x), Some(&&y)) => {
                    if x < y {
                        out.push(x);
                        a.next();
                    } else {
                        out.push(y);
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self {
            len: self.len,
            support: out,
        }
    }

    pub fn xor_assign(&mut self, other: &Self) {
        *self = self.xor(other);
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({}; {:?})", self.len, self.support)
    }
}

/// A matrix over GF(2), stored column-major as sparse columns.
///
/// Addition of equal-shape matrices is the symmetric difference of their
/// entry sets.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![BitVector::zeros(rows); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| BitVector::standard(n, i)).collect();
        Self {
            rows: n,
            cols: n,
            columns,
        }
    }

    /// Builds a matrix from (row, col) positions; repeated positions cancel.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut per_col: Vec<Vec<usize>> = vec![Vec::new(); cols];
        for (r, c) in entries {
            assert!(
                r < rows && c < cols,
                "entry ({r},{c}) out of range ({rows}x{cols})"
            );
            per_col[c].push(r);
        }
        let columns = per_col
            .into_iter()
            .map(|ps| BitVector::from_positions(rows, ps))
            .collect();
        Self {
            rows,
            cols,
            columns,
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<BitVector>) -> Self {
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(
                c.len(),
                rows,
                "column {j} has length {}, expected {rows}",
                c.len()
            );
        }
        Self {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &BitVector {
        &self.columns[j]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.columns[c].get(r)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BitVector::is_zero)
    }

    /// Entries carrying a 1, sorted by (row, col).
    pub fn entries(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.support().iter().map(move |&r| (r, j)))
            .collect();
        out.sort_unstable();
        out
    }

    /// GF(2) sum of two matrices of equal shape.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in add"
        );
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.xor(b))
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let columns = other.columns.iter().map(|c| self.mul_vector(c)).collect();
        Self {
            rows: self.rows,
            cols: other.cols,
            columns,
        }
    }

    /// Matrix-vector product.
    pub fn mul_vector(&self, v: &BitVector) -> BitVector {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vector");
        let mut out = BitVector::zeros(self.rows);
        for &j in v.support() {
            out.xor_assign(&self.columns[j]);
        }
        out
    }

    /// GF(2) rank, computed with the smallest-index pivot rule.
    pub fn rank(&self) -> usize {
        self.reduce().pivots.len()
    }

    /// A basis of the null space, ordered by free-column index.
    ///
    /// The basis has `cols - rank` vectors; each solves `m * x = 0`.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        self.reduce().kernel
    }

    /// Solves `self * x = b`, choosing 0 for every free variable.
    ///
    /// Returns `None` when `b` is not in the column space.
    pub fn solve(&self, b: &BitVector) -> Option<BitVector> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let red = self.reduce();
        let mut residue = b.clone();
        let mut combo = BitVector::zeros(self.cols);
        while let Some(p) = residue.first_one() {
            let idx = red.pivots.iter().position(|&(pivot, _)| pivot == p)?;
            let (_, col) = red.pivots[idx];
            residue.xor_assign(&red.reduced[col]);
            combo.xor_assign(&red.combos[col]);
        }
        Some(combo)
    }

    /// Left-to-right column reduction, tracking the combination of original
    /// columns that produced every reduced column.
    fn reduce(&self) -> Reduction {
        let mut reduced: Vec<BitVector> = Vec::with_capacity(self.cols);
        let mut combos: Vec<BitVector> = Vec::with_capacity(self.cols);
        // (pivot row, column index), kept sorted by pivot row
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut kernel: Vec<BitVector> = Vec::new();
        for j in 0..self.cols {
            let mut col = self.columns[j].clone();
            let mut combo = BitVector::standard(self.cols, j);
            while let Some(p) = col.first_one() {
                match pivots.binary_search_by_key(&p, |&(pivot, _)| pivot) {
                    Ok(idx) => {
                        let (_, other) = pivots[idx];
                        col.xor_assign(&reduced[other]);
                        combo.xor_assign(&combos[other]);
                    }
                    Err(idx) => {
                        pivots.insert(idx, (p, j));
                        break;
                    }
                }
            }
            if col.is_zero() {
                kernel.push(combo.clone());
            }
            reduced.push(col);
            combos.push(combo);
        }
        Reduction {
            reduced,
            combos,
            pivots,
            kernel,
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct Reduction {
    reduced: Vec<BitVector>,
    combos: Vec<BitVector>,
    pivots: Vec<(usize, usize)>,
    kernel: Vec<BitVector>,
}

/// An echelon basis of a subspace, supporting reduction of new vectors.
///
/// Rows keep distinct leading indices; insertion order decides which vector
/// owns a pivot, so the result is deterministic.
pub struct Echelon {
    len: usize,
    // sorted by leading index
    rows: Vec<BitVector>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len, "length mismatch in reduce");
        let mut out = v.clone();
        while let Some(p) = out.first_one() {
            match self
                .rows
                .binary_search_by_key(&p, |row| row.first_one().unwrap())
            {
                Ok(idx) => out.xor_assign(&self.rows[idx]),
                Err(_) => break,
            }
        }
        out
    }

    /// Reduces `v` and stores the residue if nonzero.
    ///
    /// Returns the residue when it enlarged the span.
    pub fn insert(&mut self, v: &BitVector) -> Option<BitVector> {
        let red = self.reduce(v);
        match red.first_one() {
            None => None,
            Some(p) => {
                let idx = self
                    .rows
                    .binary_search_by_key(&p, |row| row.first_one().unwrap())
                    .unwrap_err();
                self.rows.insert(idx, red.clone());
                Some(red)
            }
        }
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Dimension of span(generators ∪ subspace) / span(subspace).
///
/// All vectors must have the same length.
pub fn relative_rank(generators: &[BitVector], subspace: &[BitVector]) -> usize {
    let len = generators
        .first()
        .or_else(|| subspace.first())
        .map_or(0, BitVector::len);
    let mut ech = Echelon::new(len);
    for v in subspace {
        ech.insert(v);
    }
    let mut count = 0;
    for v in generators {
        if ech.insert(v).is_some() {
            count += 1;
        }
    }
    count
}
