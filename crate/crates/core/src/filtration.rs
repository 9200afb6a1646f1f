//! Multi-grades, vertex functions and their max-extension, sublevel and
//! level sets, lower stars, primary simplices, and the compressed grade grid.

use crate::complex::{
    CellSet, ComplexError, LefschetzComplex, Simplex, SimplicialComplex, VertexId,
};
use crate::f2::zero_vector;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("expected {expected} grade coordinates, found {found}")]
    ParamMismatch { expected: usize, found: usize },
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("no value given for vertex {0}")]
    MissingVertexValue(VertexId),
    #[error(
        "component {axis} is not injective: vertices {first} and {second} both take value {value}"
    )]
    NonInjective {
        axis: usize,
        value: u64,
        first: VertexId,
        second: VertexId,
    },
    #[error("grade of {face} is not below the grade of its coface {coface}")]
    NotMonotone { face: Simplex, coface: Simplex },
    #[error("no grade given for simplex {0}")]
    MissingGrade(Simplex),
    #[error("simplex {0} is not in the complex")]
    UnknownSimplex(Simplex),
    #[error("operation requires a filtration built by max-extension of a vertex function")]
    NotMaxExtension,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// An n-tuple of non-negative integer coordinates, partially ordered
/// component-wise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiGrade(Vec<u64>);

impl MultiGrade {
    pub fn new(coords: impl Into<Vec<u64>>) -> Self {
        Self(coords.into())
    }

    pub fn zeros(params: usize) -> Self {
        Self(vec![0; params])
    }

    pub fn params(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> u64 {
        self.0[axis]
    }

    /// `self ⪯ other`.
    pub fn leq(&self, other: &MultiGrade) -> bool {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Component-wise maximum.
    pub fn join(&self, other: &MultiGrade) -> MultiGrade {
        MultiGrade(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// `self - e_axis`, or `None` when that coordinate is already zero.
    pub fn predecessor(&self, axis: usize) -> Option<MultiGrade> {
        let mut c = self.0.clone();
        c[axis] = c[axis].checked_sub(1)?;
        Some(MultiGrade(c))
    }

    pub fn successor(&self, axis: usize) -> MultiGrade {
        let mut c = self.0.clone();
        c[axis] += 1;
        MultiGrade(c)
    }
}

impl fmt::Display for MultiGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Builds a [`MultiGrade`] from literal coordinates.
#[macro_export]
macro_rules! grade {
    ($($c:expr),+ $(,)?) => {
        $crate::filtration::MultiGrade::new(vec![$($c as u64),+])
    };
}

/// A record of one coordinate changed by tie-breaking.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    pub vertex: VertexId,
    pub axis: usize,
    pub original: u64,
    pub perturbed: u64,
}

/// Grades assigned to the vertices of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFunction {
    params: usize,
    values: BTreeMap<VertexId, MultiGrade>,
}

impl VertexFunction {
    pub fn new(
        params: usize,
        values: impl IntoIterator<Item = (VertexId, MultiGrade)>,
    ) -> Result<Self, FiltrationError> {
        let mut map = BTreeMap::new();
        for (v, g) in values {
            if g.params() != params {
                return Err(FiltrationError::ParamMismatch {
                    expected: params,
                    found: g.params(),
                });
            }
            if map.insert(v, g).is_some() {
                return Err(FiltrationError::DuplicateVertex(v));
            }
        }
        Ok(Self {
            params,
            values: map,
        })
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn get(&self, v: VertexId) -> Option<&MultiGrade> {
        self.values.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &MultiGrade)> {
        self.values.iter().map(|(&v, g)| (v, g))
    }

    /// Reports the first collision, scanning axes in order and vertices by id.
    pub fn check_injective(&self) -> Result<(), FiltrationError> {
        for axis in 0..self.params {
            let mut seen: HashMap<u64, VertexId> = HashMap::new();
            for (&v, g) in &self.values {
                if let Some(&first) = seen.get(&g.get(axis)) {
                    return Err(FiltrationError::NonInjective {
                        axis,
                        value: g.get(axis),
                        first,
                        second: v,
                    });
                }
                seen.insert(g.get(axis), v);
            }
        }
        Ok(())
    }

    /// Makes every component injective by replacing the values of each
    /// colliding axis with their rank in (value, vertex id) order.
    /// Axes without collisions are left untouched.
    pub fn tiebreak(&self) -> (VertexFunction, Vec<Perturbation>) {
        let mut out = self.values.clone();
        let mut log = Vec::new();
        for axis in 0..self.params {
            let mut order: Vec<(u64, VertexId)> =
                self.values.iter().map(|(&v, g)| (g.get(axis), v)).collect();
            order.sort_unstable();
            if order.windows(2).all(|w| w[0].0 != w[1].0) {
                continue;
            }
            for (rank, &(value, v)) in order.iter().enumerate() {
                out.get_mut(&v).expect("vertex present").0[axis] = rank as u64;
                if rank as u64 != value {
                    log.push(Perturbation {
                        vertex: v,
                        axis,
                        original: value,
                        perturbed: rank as u64,
                    });
                }
            }
        }
        log.sort_by_key(|p| (p.vertex, p.axis));
        (
            VertexFunction {
                params: self.params,
                values: out,
            },
            log,
        )
    }
}

/// Cells with an incidence and one entrance grade each, monotone along
/// the incidence. Implemented by filtrations and by Morse complexes.
pub trait Graded {
    fn cells(&self) -> &LefschetzComplex;
    fn grades(&self) -> &[MultiGrade];
    fn params(&self) -> usize;

    fn sublevel_mask(&self, u: &MultiGrade) -> CellSet {
        sublevel_mask(self.grades(), u)
    }

    fn union_of_predecessors_mask(&self, u: &MultiGrade) -> CellSet {
        union_of_predecessors_mask(self.grades(), self.params(), u)
    }
}

fn sublevel_mask(grades: &[MultiGrade], u: &MultiGrade) -> CellSet {
    let mut m = zero_vector(grades.len());
    for (i, g) in grades.iter().enumerate() {
        if g.leq(u) {
            m.set(i, true);
        }
    }
    m
}

fn union_of_predecessors_mask(grades: &[MultiGrade], params: usize, u: &MultiGrade) -> CellSet {
    let mut m = zero_vector(grades.len());
    for (i, g) in grades.iter().enumerate() {
        let below = (0..params).any(|axis| {
            g.get(axis) < u.get(axis) && (0..params).all(|j| j == axis || g.get(j) <= u.get(j))
        });
        if below {
            m.set(i, true);
        }
    }
    m
}

impl Graded for Filtration {
    fn cells(&self) -> &LefschetzComplex {
        &self.cells
    }

    fn grades(&self) -> &[MultiGrade] {
        &self.grades
    }

    fn params(&self) -> usize {
        self.params
    }
}

/// A one-critical multi-filtration: one entrance grade per simplex,
/// monotone along the face relation.
#[derive(Clone, Debug)]
pub struct Filtration {
    complex: SimplicialComplex,
    cells: LefschetzComplex,
    grades: Vec<MultiGrade>,
    params: usize,
    vertex_function: Option<VertexFunction>,
    /// Per axis, the vertex realizing each value (max-extension only).
    axis_vertex: Vec<HashMap<u64, VertexId>>,
}

impl Filtration {
    /// Extends a component-wise injective vertex function to every simplex
    /// by taking the component-wise maximum over its vertices.
    pub fn extend_max(
        complex: SimplicialComplex,
        f0: VertexFunction,
    ) -> Result<Self, FiltrationError> {
        f0.check_injective()?;
        let params = f0.params();
        let mut grades = Vec::with_capacity(complex.len());
        for s in complex.simplices() {
            let mut g: Option<MultiGrade> = None;
            for &v in s.vertices() {
                let fv = f0.get(v).ok_or(FiltrationError::MissingVertexValue(v))?;
                g = Some(match g {
                    None => fv.clone(),
                    Some(acc) => acc.join(fv),
                });
            }
            grades.push(g.expect("simplex has a vertex"));
        }
        let axis_vertex = (0..params)
            .map(|axis| f0.iter().map(|(v, g)| (g.get(axis), v)).collect())
            .collect();
        let cells = complex.to_lefschetz();
        Ok(Self {
            complex,
            cells,
            grades,
            params,
            vertex_function: Some(f0),
            axis_vertex,
        })
    }

    /// Wraps explicitly given per-simplex grades after checking monotonicity.
    pub fn from_explicit(
        complex: SimplicialComplex,
        params: usize,
        grades: &HashMap<Simplex, MultiGrade>,
    ) -> Result<Self, FiltrationError> {
        let mut out = Vec::with_capacity(complex.len());
        for s in complex.simplices() {
            let g = grades
                .get(s)
                .ok_or_else(|| FiltrationError::MissingGrade(s.clone()))?;
            if g.params() != params {
                return Err(FiltrationError::ParamMismatch {
                    expected: params,
                    found: g.params(),
                });
            }
            out.push(g.clone());
        }
        if let Some(extra) = grades.keys().filter(|s| !complex.contains(s)).min() {
            return Err(FiltrationError::UnknownSimplex(extra.clone()));
        }
        for (i, g) in out.iter().enumerate() {
            for &f in complex.facets_of(i) {
                if !out[f].leq(g) {
                    return Err(FiltrationError::NotMonotone {
                        face: complex.simplex(f).clone(),
                        coface: complex.simplex(i).clone(),
                    });
                }
            }
        }
        let cells = complex.to_lefschetz();
        Ok(Self {
            complex,
            cells,
            grades: out,
            params,
            vertex_function: None,
            axis_vertex: Vec::new(),
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn cells(&self) -> &LefschetzComplex {
        &self.cells
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn grades(&self) -> &[MultiGrade] {
        &self.grades
    }

    pub fn grade(&self, cell: usize) -> &MultiGrade {
        &self.grades[cell]
    }

    pub fn grade_of(&self, s: &Simplex) -> Option<&MultiGrade> {
        self.complex.index_of(s).map(|i| &self.grades[i])
    }

    pub fn vertex_function(&self) -> Option<&VertexFunction> {
        self.vertex_function.as_ref()
    }

    pub fn is_max_extension(&self) -> bool {
        self.vertex_function.is_some()
    }

    /// Distinct grades taken by the simplices.
    pub fn image(&self) -> BTreeSet<MultiGrade> {
        self.grades.iter().cloned().collect()
    }

    fn index(&self, s: &Simplex) -> Result<usize, FiltrationError> {
        self.complex
            .index_of(s)
            .ok_or_else(|| FiltrationError::UnknownSimplex(s.clone()))
    }

    pub fn sublevel_mask(&self, u: &MultiGrade) -> CellSet {
        sublevel_mask(&self.grades, u)
    }

    /// `K^u`, the simplices with grade ⪯ `u`.
    pub fn sublevel(&self, u: &MultiGrade) -> SimplicialComplex {
        self.complex_of(&self.sublevel_mask(u))
    }

    /// Mask of `⋃_i K^{u - e_i}`; a zero coordinate contributes nothing.
    pub fn union_of_predecessors_mask(&self, u: &MultiGrade) -> CellSet {
        union_of_predecessors_mask(&self.grades, self.params, u)
    }

    pub fn union_of_predecessors(&self, u: &MultiGrade) -> SimplicialComplex {
        self.complex_of(&self.union_of_predecessors_mask(u))
    }

    pub fn level_set_indices(&self, u: &MultiGrade) -> Vec<usize> {
        (0..self.grades.len())
            .filter(|&i| &self.grades[i] == u)
            .collect()
    }

    /// Simplices whose grade is exactly `u`.
    pub fn level_set(&self, u: &MultiGrade) -> Vec<Simplex> {
        self.level_set_indices(u)
            .into_iter()
            .map(|i| self.complex.simplex(i).clone())
            .collect()
    }

    /// Cofaces of the cell (itself included) whose grade is ⪯ its grade,
    /// as sorted cell indices.
    pub fn lower_star_indices(&self, cell: usize) -> Vec<usize> {
        let top = &self.grades[cell];
        let mut seen = vec![cell];
        let mut stack = vec![cell];
        while let Some(c) = stack.pop() {
            for &t in self.complex.cofacets_of(c) {
                if self.grades[t].leq(top) && !seen.contains(&t) {
                    seen.push(t);
                    stack.push(t);
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    pub fn lower_star(&self, s: &Simplex) -> Result<Vec<Simplex>, FiltrationError> {
        let i = self.index(s)?;
        Ok(self
            .lower_star_indices(i)
            .into_iter()
            .map(|c| self.complex.simplex(c).clone())
            .collect())
    }

    /// The simplex spanned by the vertices realizing each coordinate of `u`,
    /// if it exists with grade exactly `u`. For a max-extension this is the
    /// unique simplex whose lower star is the level set of `u`.
    pub fn primary_simplex_index(&self, u: &MultiGrade) -> Result<Option<usize>, FiltrationError> {
        if !self.is_max_extension() {
            return Err(FiltrationError::NotMaxExtension);
        }
        if u.params() != self.params {
            return Err(FiltrationError::ParamMismatch {
                expected: self.params,
                found: u.params(),
            });
        }
        let mut vertices = Vec::with_capacity(self.params);
        for axis in 0..self.params {
            match self.axis_vertex[axis].get(&u.get(axis)) {
                Some(&v) => vertices.push(v),
                None => return Ok(None),
            }
        }
        vertices.sort_unstable();
        vertices.dedup();
        let s = Simplex::new(vertices)?;
        Ok(self.complex.index_of(&s).filter(|&i| &self.grades[i] == u))
    }

    pub fn primary_simplex(&self, u: &MultiGrade) -> Result<Option<Simplex>, FiltrationError> {
        Ok(self
            .primary_simplex_index(u)?
            .map(|i| self.complex.simplex(i).clone()))
    }

    fn complex_of(&self, mask: &CellSet) -> SimplicialComplex {
        SimplicialComplex::from_simplices(mask.iter_ones().map(|i| self.complex.simplex(i).clone()))
            .expect("sublevel sets of a monotone filtration are subcomplexes")
    }

    /// Same complex with every grade rewritten by `map`, which must be
    /// monotone and injective per axis.
    fn remap(&self, map: impl Fn(&MultiGrade) -> MultiGrade) -> Filtration {
        let grades: Vec<MultiGrade> = self.grades.iter().map(&map).collect();
        let vertex_function = self.vertex_function.as_ref().map(|f| VertexFunction {
            params: f.params,
            values: f.values.iter().map(|(&v, g)| (v, map(g))).collect(),
        });
        let axis_vertex = match &vertex_function {
            Some(f) => (0..self.params)
                .map(|axis| f.iter().map(|(v, g)| (g.get(axis), v)).collect())
                .collect(),
            None => Vec::new(),
        };
        Filtration {
            complex: self.complex.clone(),
            cells: self.cells.clone(),
            grades,
            params: self.params,
            vertex_function,
            axis_vertex,
        }
    }
}

/// The finite product grid on which all per-grade invariants are evaluated.
///
/// Each axis keeps the sorted distinct coordinate values taken by the
/// filtration; compressed coordinate `k` on axis `i` stands for `axes[i][k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeGrid {
    axes: Vec<Vec<u64>>,
}

impl GradeGrid {
    pub fn of(filtration: &Filtration) -> Self {
        Self::from_grades(filtration.params(), filtration.grades())
    }

    pub fn from_grades<'a>(
        params: usize,
        grades: impl IntoIterator<Item = &'a MultiGrade>,
    ) -> Self {
        let mut sets = vec![BTreeSet::new(); params];
        for g in grades {
            for (axis, set) in sets.iter_mut().enumerate() {
                set.insert(g.get(axis));
            }
        }
        Self {
            axes: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// The grid grade just below `u` along `axis`, in the coordinates of the
    /// grid's own values; `None` at the lower edge.
    pub fn predecessor(&self, u: &MultiGrade, axis: usize) -> Option<MultiGrade> {
        let values = &self.axes[axis];
        let k = values.binary_search(&u.get(axis)).ok()?;
        if k == 0 {
            return None;
        }
        let mut c = u.0.clone();
        c[axis] = values[k - 1];
        Some(MultiGrade(c))
    }

    /// Every grid grade in the grid's own coordinates, lexicographically sorted.
    pub fn values(&self) -> Vec<MultiGrade> {
        self.grades().iter().map(|u| self.decompress(u)).collect()
    }

    pub fn params(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<u64>] {
        &self.axes
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        if self.axes.is_empty() {
            return 0;
        }
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every grid grade in compressed coordinates, lexicographically sorted.
    pub fn grades(&self) -> Vec<MultiGrade> {
        let shape = self.shape();
        let mut out = Vec::with_capacity(self.len());
        if self.is_empty() {
            return out;
        }
        let mut cur = vec![0u64; shape.len()];
        loop {
            out.push(MultiGrade(cur.clone()));
            let mut axis = shape.len();
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                cur[axis] += 1;
                if (cur[axis] as usize) < shape[axis] {
                    break;
                }
                cur[axis] = 0;
            }
        }
    }

    /// Compressed coordinates of a grade whose coordinates all lie on the axes.
    pub fn compress(&self, u: &MultiGrade) -> Option<MultiGrade> {
        u.0.iter()
            .zip(&self.axes)
            .map(|(v, axis)| axis.binary_search(v).ok().map(|k| k as u64))
            .collect::<Option<Vec<_>>>()
            .map(MultiGrade)
    }

    /// Original coordinates of a compressed grade.
    pub fn decompress(&self, u: &MultiGrade) -> MultiGrade {
        MultiGrade(
            u.0.iter()
                .zip(&self.axes)
                .map(|(&k, axis)| axis[k as usize])
                .collect(),
        )
    }

    pub fn contains(&self, u: &MultiGrade) -> bool {
        u.params() == self.params()
            && u.0
                .iter()
                .zip(&self.axes)
                .all(|(&k, a)| (k as usize) < a.len())
    }

    /// The filtration rewritten in compressed coordinates.
    pub fn compress_filtration(&self, filtration: &Filtration) -> Filtration {
        filtration.remap(|g| {
            MultiGrade(
                g.0.iter()
                    .zip(&self.axes)
                    .map(|(v, axis)| match axis.binary_search(v) {
                        Ok(k) => k as u64,
                        // vertex values never taken by a simplex grade
                        Err(k) => k as u64,
                    })
                    .collect(),
            )
        })
    }
}
