//! Simplicial and abstract (Lefschetz) cell complexes over F2, boundary
//! matrices, and absolute/relative homology by mod-2 reduction.

use crate::f2::{zero_vector, BinaryMatrix, BitVector, EchelonBasis};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

pub type VertexId = u32;

/// Membership mask over the cells of a complex.
pub type CellSet = BitVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("a simplex needs at least one vertex")]
    EmptySimplex,
    #[error("repeated vertex {0} in simplex")]
    RepeatedVertex(VertexId),
    #[error("simplex {simplex} is missing its facet {missing}")]
    NotFaceClosed { simplex: Simplex, missing: Simplex },
    #[error("duplicate simplex {0}")]
    DuplicateSimplex(Simplex),
    #[error("cell set is not a subcomplex: cell {cell} has facet {facet} outside the set")]
    NotSubcomplex { cell: usize, facet: usize },
    #[error("relative part is not contained in the complex (cell {0})")]
    NotContained(usize),
    #[error("incidence between cell {cell} (dim {cell_dim}) and cell {face} (dim {face_dim}) skips a dimension")]
    IncidenceDimension {
        cell: usize,
        cell_dim: usize,
        face: usize,
        face_dim: usize,
    },
    #[error("incidence squares to a nonzero value between cells {cell} and {face}")]
    IncidenceNotSquareZero { cell: usize, face: usize },
    #[error("cell {0} referenced but not present")]
    UnknownCell(usize),
    #[error("simplex {0} is not in the complex")]
    UnknownSimplex(Simplex),
}

/// A simplex, stored as its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Builds a simplex from vertices in any order.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self, ComplexError> {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::RepeatedVertex(w[0]));
        }
        Ok(Self(v))
    }

    pub fn vertex(v: VertexId) -> Self {
        Self(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces; the `i`-th entry omits the `i`-th vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|skip| {
                Simplex(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect(),
                )
            })
            .collect()
    }

    /// All non-empty faces including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Builds a simplex from a literal vertex list; panics on invalid input.
#[macro_export]
macro_rules! simplex {
    ($($v:expr),+ $(,)?) => {
        $crate::complex::Simplex::new([$($v as $crate::complex::VertexId),+]).expect("valid simplex literal")
    };
}

/// A finite face-closed set of simplices.
///
/// Cells are stored sorted by (dimension, vertex tuple); a cell's position in
/// that order is its index everywhere else in the crate.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    facets: Vec<Vec<usize>>,
    cofacets: Vec<Vec<usize>>,
    dim_start: Vec<usize>,
}

impl SimplicialComplex {
    /// Builds a complex from a face-closed collection of simplices.
    pub fn from_simplices(
        simplices: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self, ComplexError> {
        let mut all: Vec<Simplex> = simplices.into_iter().collect();
        all.sort();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateSimplex(w[0].clone()));
        }
        Self::build(all)
    }

    /// Builds the smallest complex containing the given simplices.
    pub fn closure(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut all: Vec<Simplex> = simplices.into_iter().flat_map(|s| s.faces()).collect();
        all.sort();
        all.dedup();
        Self::build(all).expect("closure is face-closed")
    }

    pub fn empty() -> Self {
        Self::build(Vec::new()).expect("empty complex")
    }

    fn build(simplices: Vec<Simplex>) -> Result<Self, ComplexError> {
        let index: HashMap<Simplex, usize> = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut facets = Vec::with_capacity(simplices.len());
        let mut cofacets = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            let mut fs = Vec::new();
            for f in s.facets() {
                match index.get(&f) {
                    Some(&j) => {
                        fs.push(j);
                        cofacets[j].push(i);
                    }
                    None => {
                        return Err(ComplexError::NotFaceClosed {
                            simplex: s.clone(),
                            missing: f,
                        })
                    }
                }
            }
            facets.push(fs);
        }
        let top = simplices.last().map_or(0, |s| s.dim() + 1);
        let mut dim_start = vec![0; top + 1];
        for q in 0..=top {
            dim_start[q] = simplices.partition_point(|s| s.dim() < q);
        }
        Ok(Self {
            simplices,
            index,
            facets,
            cofacets,
            dim_start,
        })
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Largest cell dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub fn facets_of(&self, i: usize) -> &[usize] {
        &self.facets[i]
    }

    pub fn cofacets_of(&self, i: usize) -> &[usize] {
        &self.cofacets[i]
    }

    /// Index range of the cells of dimension `q`.
    pub fn cells_of_dim(&self, q: usize) -> std::ops::Range<usize> {
        if q + 1 >= self.dim_start.len() {
            return self.len()..self.len();
        }
        self.dim_start[q]..self.dim_start[q + 1]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.simplices[self.cells_of_dim(0)].iter().map(|s| s.0[0])
    }

    /// Counts of cells per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim().map_or(0, |d| d + 1))
            .map(|q| self.cells_of_dim(q).len())
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(q, &c)| if q % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// The boundary operator as an abstract cell complex on the same indices.
    pub fn to_lefschetz(&self) -> LefschetzComplex {
        let dims = self.simplices.iter().map(Simplex::dim).collect();
        let boundary = self
            .facets
            .iter()
            .map(|f| {
                let mut f = f.clone();
                f.sort_unstable();
                f
            })
            .collect();
        LefschetzComplex::new_unchecked(dims, boundary)
    }

    /// Mask of the cells listed in `subset`.
    pub fn mask_of<'a>(
        &self,
        subset: impl IntoIterator<Item = &'a Simplex>,
    ) -> Result<CellSet, ComplexError> {
        let mut mask = zero_vector(self.len());
        for s in subset {
            let i = self
                .index_of(s)
                .ok_or_else(|| ComplexError::UnknownSimplex(s.clone()))?;
            mask.set(i, true);
        }
        Ok(mask)
    }

    pub fn boundary_matrix(&self, q: usize) -> BinaryMatrix {
        self.to_lefschetz().boundary_matrix(q)
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        self.to_lefschetz().homology_dims()
    }

    /// `dim H_q(self, sub)` for a subcomplex given by its simplices.
    pub fn relative_homology_dims(&self, sub: &[Simplex]) -> Result<Vec<usize>, ComplexError> {
        let mask = self.mask_of(sub)?;
        let all = crate::f2::BitVector::repeat(true, self.len());
        self.to_lefschetz().relative_homology_dims(&all, &mask)
    }
}

/// A finite graded set of cells with an F2-valued incidence function,
/// stored as the list of faces with nonzero incidence for every cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzComplex {
    dims: Vec<usize>,
    boundary: Vec<Vec<usize>>,
    by_dim: Vec<Vec<usize>>,
    local: Vec<usize>,
}

impl LefschetzComplex {
    /// Builds and validates a complex: incidences must drop dimension by
    /// exactly one and the incidence must square to zero.
    pub fn new(dims: Vec<usize>, boundary: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        assert_eq!(dims.len(), boundary.len(), "one boundary list per cell");
        for (c, faces) in boundary.iter().enumerate() {
            for &f in faces {
                if f >= dims.len() {
                    return Err(ComplexError::UnknownCell(f));
                }
                if dims[f] + 1 != dims[c] {
                    return Err(ComplexError::IncidenceDimension {
                        cell: c,
                        cell_dim: dims[c],
                        face: f,
                        face_dim: dims[f],
                    });
                }
            }
        }
        let boundary = boundary
            .into_iter()
            .map(|b| {
                BinaryMatrix::from_columns(dims.len(), vec![b])
                    .column(0)
                    .to_vec()
            })
            .collect();
        let complex = Self::new_unchecked(dims, boundary);
        complex.check_square_zero()?;
        Ok(complex)
    }

    pub(crate) fn new_unchecked(dims: Vec<usize>, boundary: Vec<Vec<usize>>) -> Self {
        let top = dims.iter().copied().max().map_or(0, |d| d + 1);
        let mut by_dim = vec![Vec::new(); top];
        let mut local = vec![0; dims.len()];
        for (c, &d) in dims.iter().enumerate() {
            local[c] = by_dim[d].len();
            by_dim[d].push(c);
        }
        Self {
            dims,
            boundary,
            by_dim,
            local,
        }
    }

    /// Verifies that the sum over middle cells of incidence products vanishes.
    pub fn check_square_zero(&self) -> Result<(), ComplexError> {
        for (c, faces) in self.boundary.iter().enumerate() {
            let mut count: HashMap<usize, u8> = HashMap::new();
            for &f in faces {
                for &g in &self.boundary[f] {
                    *count.entry(g).or_default() ^= 1;
                }
            }
            let mut bad: Vec<usize> = count
                .into_iter()
                .filter(|&(_, v)| v == 1)
                .map(|(g, _)| g)
                .collect();
            bad.sort_unstable();
            if let Some(&g) = bad.first() {
                return Err(ComplexError::IncidenceNotSquareZero { cell: c, face: g });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim_of(&self, cell: usize) -> usize {
        self.dims[cell]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// One plus the top dimension; zero for the empty complex.
    pub fn degree_count(&self) -> usize {
        self.by_dim.len()
    }

    pub fn boundary_of(&self, cell: usize) -> &[usize] {
        &self.boundary[cell]
    }

    pub fn cells_of_dim(&self, q: usize) -> &[usize] {
        self.by_dim.get(q).map_or(&[], Vec::as_slice)
    }

    /// Position of a cell among the cells of its dimension.
    pub fn local_index(&self, cell: usize) -> usize {
        self.local[cell]
    }

    pub fn incidence(&self, cell: usize, face: usize) -> bool {
        self.boundary[cell].binary_search(&face).is_ok()
    }

    /// Matrix of the degree-`q` boundary, columns indexed by `q`-cells and
    /// rows by `(q-1)`-cells in local order. Empty for `q = 0` or out of range.
    pub fn boundary_matrix(&self, q: usize) -> BinaryMatrix {
        let cols = self.cells_of_dim(q);
        if q == 0 {
            return BinaryMatrix::zeros(0, cols.len());
        }
        let rows = self.cells_of_dim(q - 1).len();
        BinaryMatrix::from_columns(
            rows,
            cols.iter()
                .map(|&c| self.boundary[c].iter().map(|&f| self.local[f]).collect())
                .collect(),
        )
    }

    /// Checks that `set` is closed under taking faces.
    pub fn check_subcomplex(&self, set: &CellSet) -> Result<(), ComplexError> {
        for c in set.iter_ones() {
            if let Some(&f) = self.boundary[c].iter().find(|&&f| !set[f]) {
                return Err(ComplexError::NotSubcomplex { cell: c, facet: f });
            }
        }
        Ok(())
    }

    /// Rank of the degree-`q` boundary restricted to columns in `cols` and
    /// rows in `rows`.
    pub fn restricted_boundary_rank(&self, q: usize, cols: &CellSet, rows: &CellSet) -> usize {
        if q == 0 {
            return 0;
        }
        let nrows = self.cells_of_dim(q - 1).len();
        let mut basis = EchelonBasis::new(nrows);
        for &c in self.cells_of_dim(q) {
            if !cols[c] {
                continue;
            }
            let mut v = zero_vector(nrows);
            for &f in &self.boundary[c] {
                if rows[f] {
                    v.set(self.local[f], true);
                }
            }
            basis.insert(v, None);
        }
        basis.rank()
    }

    /// Betti numbers of the whole complex, one entry per degree up to the top dimension.
    pub fn homology_dims(&self) -> Vec<usize> {
        let all = BitVector::repeat(true, self.len());
        self.subcomplex_homology_dims(&all)
    }

    /// Betti numbers of the subcomplex given by `set` (assumed face-closed),
    /// reported up to the top dimension of the ambient complex.
    pub fn subcomplex_homology_dims(&self, set: &CellSet) -> Vec<usize> {
        self.chain_homology(set, set)
    }

    /// `dim H_q(sub, rel)` for subcomplexes `rel ⊆ sub`.
    pub fn relative_homology_dims(
        &self,
        sub: &CellSet,
        rel: &CellSet,
    ) -> Result<Vec<usize>, ComplexError> {
        self.check_subcomplex(sub)?;
        self.check_subcomplex(rel)?;
        if let Some(c) = rel.iter_ones().find(|&c| !sub[c]) {
            return Err(ComplexError::NotContained(c));
        }
        let mut quotient = sub.clone();
        for c in rel.iter_ones() {
            quotient.set(c, false);
        }
        Ok(self.chain_homology(&quotient, &quotient))
    }

    fn chain_homology(&self, cols: &CellSet, rows: &CellSet) -> Vec<usize> {
        let top = self.degree_count();
        let ranks: Vec<usize> = (0..=top)
            .map(|q| self.restricted_boundary_rank(q, cols, rows))
            .collect();
        (0..top)
            .map(|q| {
                let chains = self.cells_of_dim(q).iter().filter(|&&c| cols[c]).count();
                chains - ranks[q] - ranks[q + 1]
            })
            .collect()
    }
}

/// A basis of `H_q` of a subcomplex, given by representative cycles, with
/// the data needed to express any cycle of that subcomplex in the basis.
///
/// Chains are vectors over all `q`-cells of the ambient complex, so the
/// same cycle can be read in any subcomplex containing it.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    degree: usize,
    representatives: Vec<BitVector>,
    reducer: EchelonBasis,
}

impl HomologyBasis {
    pub fn compute(complex: &LefschetzComplex, set: &CellSet, q: usize) -> Self {
        let chain_len = complex.cells_of_dim(q).len();
        let mut reducer = EchelonBasis::new(chain_len);
        for &c in complex.cells_of_dim(q + 1) {
            if !set[c] {
                continue;
            }
            let mut v = zero_vector(chain_len);
            for &f in complex.boundary_of(c) {
                v.set(complex.local_index(f), true);
            }
            reducer.insert(v, None);
        }
        let mut representatives = Vec::new();
        for z in cycle_basis(complex, set, q) {
            if reducer.insert(z.clone(), Some(representatives.len()))
                == crate::f2::Insertion::Independent
            {
                representatives.push(z);
            }
        }
        Self {
            degree: q,
            representatives,
            reducer,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[BitVector] {
        &self.representatives
    }

    /// Coordinates of the class of `cycle`.
    ///
    /// # Panics
    /// If `cycle` is not a cycle of the underlying subcomplex.
    pub fn coordinates(&self, cycle: &BitVector) -> BitVector {
        let (residual, mut combo) = self.reducer.reduce(cycle.clone());
        assert!(
            residual.not_any(),
            "chain is not a cycle of the target subcomplex"
        );
        combo.resize(self.dim(), false);
        combo
    }

    /// Matrix of the map induced by inclusion into the subcomplex of `target`.
    pub fn induced_map(&self, target: &HomologyBasis) -> BinaryMatrix {
        let cols: Vec<BitVector> = self
            .representatives
            .iter()
            .map(|z| target.coordinates(z))
            .collect();
        BinaryMatrix::from_bit_columns(target.dim(), &cols)
    }
}

/// Basis of the `q`-cycles supported on `set`, as vectors over all `q`-cells.
pub fn cycle_basis(complex: &LefschetzComplex, set: &CellSet, q: usize) -> Vec<BitVector> {
    let cells: Vec<usize> = complex
        .cells_of_dim(q)
        .iter()
        .copied()
        .filter(|&c| set[c])
        .collect();
    let chain_len = complex.cells_of_dim(q).len();
    let rows = if q == 0 {
        0
    } else {
        complex.cells_of_dim(q - 1).len()
    };
    let m = BinaryMatrix::from_columns(
        rows,
        cells
            .iter()
            .map(|&c| {
                complex
                    .boundary_of(c)
                    .iter()
                    .map(|&f| complex.local_index(f))
                    .collect()
            })
            .collect(),
    );
    m.kernel()
        .into_iter()
        .map(|k| {
            let mut z = zero_vector(chain_len);
            for i in k.iter_ones() {
                z.set(complex.local_index(cells[i]), true);
            }
            z
        })
        .collect()
}

/// Boundary span of `set` in degree `q`, as vectors over all `q`-cells.
pub fn boundary_span(complex: &LefschetzComplex, set: &CellSet, q: usize) -> Vec<BitVector> {
    let chain_len = complex.cells_of_dim(q).len();
    complex
        .cells_of_dim(q + 1)
        .iter()
        .filter(|&&c| set[c])
        .map(|&c| {
            let mut v = zero_vector(chain_len);
            for &f in complex.boundary_of(c) {
                v.set(complex.local_index(f), true);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> SimplicialComplex {
        // a=0, b=1, c=2, d=3
        SimplicialComplex::closure([
            simplex![0, 1],
            simplex![1, 2],
            simplex![2, 3],
            simplex![0, 3],
        ])
    }

    #[test]
    fn facets_follow_deleted_vertex_order() {
        assert_eq!(
            simplex![1, 2, 5].facets(),
            vec![simplex![2, 5], simplex![1, 5], simplex![1, 2]]
        );
        assert!(simplex![7].facets().is_empty());
        assert_eq!(
            simplex![2, 3, 5].facets(),
            vec![simplex![3, 5], simplex![2, 5], simplex![2, 3]]
        );
    }

    #[test]
    fn simplex_rejects_repeats_and_empties() {
        assert_eq!(
            Simplex::new([3, 1, 3]),
            Err(ComplexError::RepeatedVertex(3))
        );
        assert_eq!(Simplex::new([]), Err(ComplexError::EmptySimplex));
        assert_eq!(Simplex::new([5, 1]).unwrap().vertices(), &[1, 5]);
    }

    #[test]
    fn cells_are_ordered_by_dimension_then_vertices() {
        let k = cycle4();
        let listed: Vec<String> = k.simplices().iter().map(|s| s.to_string()).collect();
        assert_eq!(
            listed,
            ["[0]", "[1]", "[2]", "[3]", "[0,1]", "[0,3]", "[1,2]", "[2,3]"]
        );
    }

    #[test]
    fn missing_faces_are_rejected() {
        let err = SimplicialComplex::from_simplices([simplex![0], simplex![0, 1]]).unwrap_err();
        assert_eq!(
            err,
            ComplexError::NotFaceClosed {
                simplex: simplex![0, 1],
                missing: simplex![1]
            }
        );
    }

    #[test]
    fn cycle_boundary_columns_have_two_entries() {
        let m = cycle4().boundary_matrix(1);
        assert_eq!((m.rows(), m.cols()), (4, 4));
        for c in 0..4 {
            assert_eq!(m.column(c).len(), 2);
        }
        assert_eq!(cycle4().boundary_matrix(0).rows(), 0);
        assert_eq!(cycle4().boundary_matrix(5).cols(), 0);
    }

    #[test]
    fn triangle_boundary_hits_its_three_edges() {
        // a=0, b=1, d=3
        let k = SimplicialComplex::closure([simplex![0, 1, 3]]);
        let m = k.boundary_matrix(2);
        assert_eq!(m.cols(), 1);
        let edges: Vec<Simplex> = m
            .column(0)
            .iter()
            .map(|&r| k.simplex(k.cells_of_dim(1).start + r).clone())
            .collect();
        assert_eq!(edges, vec![simplex![0, 1], simplex![0, 3], simplex![1, 3]]);
    }

    #[test]
    fn betti_numbers_of_small_complexes() {
        assert_eq!(cycle4().homology_dims(), vec![1, 1]);
        let two_points = SimplicialComplex::closure([simplex![0], simplex![1]]);
        assert_eq!(two_points.homology_dims(), vec![2]);
        assert!(SimplicialComplex::empty().homology_dims().is_empty());
    }

    #[test]
    fn relative_homology_edge_cases() {
        let k = cycle4();
        assert_eq!(k.relative_homology_dims(&[]).unwrap(), k.homology_dims());
        let all: Vec<Simplex> = k.simplices().to_vec();
        assert_eq!(k.relative_homology_dims(&all).unwrap(), vec![0, 0]);
        let err = k.relative_homology_dims(&[simplex![0, 1]]).unwrap_err();
        assert!(matches!(err, ComplexError::NotSubcomplex { .. }));
        assert!(k.relative_homology_dims(&[simplex![9]]).is_err());
    }

    #[test]
    fn relative_homology_of_arc_over_endpoints() {
        // K^u = {a, b, c, ab, bc} relative to {a, c}
        let k = SimplicialComplex::closure([simplex![0, 1], simplex![1, 2]]);
        let dims = k
            .relative_homology_dims(&[simplex![0], simplex![2]])
            .unwrap();
        assert_eq!(dims, vec![0, 1]);
    }

    #[test]
    fn lefschetz_validation() {
        // two vertices joined by two edges: a valid circle
        let ok = LefschetzComplex::new(
            vec![0, 0, 1, 1],
            vec![vec![], vec![], vec![0, 1], vec![0, 1]],
        );
        assert_eq!(ok.unwrap().homology_dims(), vec![1, 1]);
        let skip = LefschetzComplex::new(vec![0, 2], vec![vec![], vec![0]]);
        assert!(matches!(skip, Err(ComplexError::IncidenceDimension { .. })));
        // a disk whose boundary edge has only one endpoint: ∂∂ ≠ 0
        let bad = LefschetzComplex::new(vec![0, 0, 1, 2], vec![vec![], vec![], vec![0], vec![2]]);
        assert!(matches!(
            bad,
            Err(ComplexError::IncidenceNotSquareZero { .. })
        ));
    }

    #[test]
    fn homology_basis_expresses_cycles() {
        let k = cycle4().to_lefschetz();
        let all = BitVector::repeat(true, k.len());
        let h1 = HomologyBasis::compute(&k, &all, 1);
        assert_eq!(h1.dim(), 1);
        let rep = h1.representatives()[0].clone();
        assert!(h1.coordinates(&rep)[0]);
        let h0 = HomologyBasis::compute(&k, &all, 0);
        assert_eq!(h0.dim(), 1);
        // each vertex is homologous to the generator
        for v in 0..4 {
            let mut chain = zero_vector(4);
            chain.set(v, true);
            assert!(h0.coordinates(&chain)[0]);
        }
    }
}
