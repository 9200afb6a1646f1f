//! Linear algebra over the two-element field.
//!
//! Matrices are stored sparsely by column (sorted row indices). Rank,
//! kernel and solve operations densify columns into bit vectors and reduce
//! them with word-wise XOR.

use bitvec::prelude::*;
use std::fmt;

/// Dense vector over F2.
pub type BitVector = BitVec<u64, Lsb0>;

/// A zero vector of length `len`.
pub fn zero_vector(len: usize) -> BitVector {
    bitvec![u64, Lsb0; 0; len]
}

/// A unit vector of length `len` with a single one at `index`.
pub fn unit_vector(len: usize, index: usize) -> BitVector {
    let mut v = zero_vector(len);
    v.set(index, true);
    v
}

/// `dst += src` over F2. Both vectors must have the same length.
pub fn xor_into(dst: &mut BitVector, src: &BitVector) {
    debug_assert_eq!(dst.len(), src.len());
    for (d, s) in dst
        .as_raw_mut_slice()
        .iter_mut()
        .zip(src.as_raw_slice().iter())
    {
        *d ^= *s;
    }
}

fn grow(v: &mut BitVector, len: usize) {
    if v.len() < len {
        v.resize(len, false);
    }
}

/// XOR of two vectors that may differ in length; the result has the larger length.
fn xor_grow(dst: &mut BitVector, src: &BitVector) {
    grow(dst, src.len());
    if src.len() == dst.len() {
        xor_into(dst, src);
    } else {
        for i in src.iter_ones() {
            let cur = dst[i];
            dst.set(i, !cur);
        }
    }
}

/// Sparse binary matrix stored column by column.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<usize>>,
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Builds a matrix from per-column row indices. Repeated indices in a
    /// column cancel in pairs.
    ///
    /// # Panics
    /// If a row index is out of bounds.
    pub fn from_columns(rows: usize, columns: Vec<Vec<usize>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|mut col| {
                assert!(
                    col.iter().all(|&r| r < rows),
                    "row index out of bounds for {rows} rows"
                );
                col.sort_unstable();
                let mut out: Vec<usize> = Vec::with_capacity(col.len());
                for r in col {
                    if out.last() == Some(&r) {
                        out.pop();
                    } else {
                        out.push(r);
                    }
                }
                out
            })
            .collect();
        Self {
            rows,
            cols,
            columns,
        }
    }

    pub fn from_bit_columns(rows: usize, columns: &[BitVector]) -> Self {
        Self {
            rows,
            cols: columns.len(),
            columns: columns
                .iter()
                .map(|c| {
                    debug_assert_eq!(c.len(), rows);
                    c.iter_ones().collect()
                })
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[usize] {
        &self.columns[c]
    }

    pub fn column_bits(&self, c: usize) -> BitVector {
        let mut v = zero_vector(self.rows);
        for &r in &self.columns[c] {
            v.set(r, true);
        }
        v
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.columns[c].binary_search(&r).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &r in col {
                cols[r].push(c);
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            columns: cols,
        }
    }

    /// Matrix product `self * rhs`.
    ///
    /// # Panics
    /// On a shape mismatch.
    pub fn mul(&self, rhs: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                let mut acc = zero_vector(self.rows);
                for &k in col {
                    for &r in &self.columns[k] {
                        let cur = acc[r];
                        acc.set(r, !cur);
                    }
                }
                acc.iter_ones().collect()
            })
            .collect();
        BinaryMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        }
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.cols, below.cols, "column count mismatch in vstack");
        let columns = self
            .columns
            .iter()
            .zip(&below.columns)
            .map(|(a, b)| {
                a.iter()
                    .copied()
                    .chain(b.iter().map(|r| r + self.rows))
                    .collect()
            })
            .collect();
        BinaryMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            columns,
        }
    }

    /// Places `right` next to `self`.
    pub fn hstack(&self, right: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.rows, right.rows, "row count mismatch in hstack");
        let mut columns = self.columns.clone();
        columns.extend(right.columns.iter().cloned());
        BinaryMatrix {
            rows: self.rows,
            cols: self.cols + right.cols,
            columns,
        }
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.rows);
        for c in 0..self.cols {
            basis.insert(self.column_bits(c), None);
        }
        basis.rank()
    }

    /// A basis of the null space `{x : self * x = 0}`; vectors have length `cols`.
    pub fn kernel(&self) -> Vec<BitVector> {
        let mut basis = EchelonBasis::new(self.rows);
        let mut out = Vec::new();
        for c in 0..self.cols {
            if let Insertion::Dependent(mut relation) = basis.insert(self.column_bits(c), Some(c)) {
                relation.resize(self.cols, false);
                out.push(relation);
            }
        }
        out
    }

    /// Applies the matrix to a vector of length `cols`.
    pub fn apply(&self, x: &BitVector) -> BitVector {
        let mut out = zero_vector(self.rows);
        for c in x.iter_ones() {
            for &r in &self.columns[c] {
                let cur = out[r];
                out.set(r, !cur);
            }
        }
        out
    }
}

/// Outcome of inserting a vector into an [`EchelonBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    /// The vector was independent and extended the basis.
    Independent,
    /// The vector lay in the span. Carries the tag combination that
    /// sums to zero together with the inserted tag.
    Dependent(BitVector),
}

#[derive(Clone, Debug)]
struct Row {
    vector: BitVector,
    combo: BitVector,
}

/// Incrementally built row-echelon basis of a subspace of F2^len.
///
/// Every stored row remembers, as a set of tags, which inserted generators
/// it is a combination of. Inserting with `None` contributes no tag, so a
/// row built from untagged generators reads as "zero" in tag coordinates;
/// this is how boundaries are quotiented out when expressing cycles in a
/// homology basis.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    rows: Vec<Row>,
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
            pivot_row: vec![None; len],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis. Returns the residual (zero iff `v` is
    /// in the span) and the tag combination of the rows that were used.
    pub fn reduce(&self, mut v: BitVector) -> (BitVector, BitVector) {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let mut combo = BitVector::new();
        let mut from = 0;
        while from < self.len {
            let Some(off) = v[from..].first_one() else {
                break;
            };
            let p = from + off;
            if let Some(r) = self.pivot_row[p] {
                let row = &self.rows[r];
                xor_into(&mut v, &row.vector);
                xor_grow(&mut combo, &row.combo);
            }
            from = p + 1;
        }
        (v, combo)
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v.clone()).0.not_any()
    }

    pub fn insert(&mut self, v: BitVector, tag: Option<usize>) -> Insertion {
        let (residual, mut combo) = self.reduce(v);
        if let Some(t) = tag {
            grow(&mut combo, t + 1);
            let cur = combo[t];
            combo.set(t, !cur);
        }
        match residual.first_one() {
            Some(p) => {
                self.pivot_row[p] = Some(self.rows.len());
                self.rows.push(Row {
                    vector: residual,
                    combo,
                });
                Insertion::Independent
            }
            None => Insertion::Dependent(combo),
        }
    }
}

/// Dimension of the intersection of two subspaces given by spanning sets.
pub fn intersection_dim(len: usize, a: &[BitVector], b: &[BitVector]) -> usize {
    let rank_of = |vs: &mut dyn Iterator<Item = &BitVector>| {
        let mut e = EchelonBasis::new(len);
        for v in vs {
            e.insert(v.clone(), None);
        }
        e.rank()
    };
    let ra = rank_of(&mut a.iter());
    let rb = rank_of(&mut b.iter());
    let rab = rank_of(&mut a.iter().chain(b.iter()));
    ra + rb - rab
}
