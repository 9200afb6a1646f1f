//! Persistence modules over the grade grid and the invariants read off them:
//! rank invariant, Betti tables (one and two parameters) and, for one
//! parameter, persistence pairs.
//!
//! Everything here works on any [`Graded`] cell complex, so the same code
//! runs on a filtration and on its Morse complex. Grid predecessors are taken
//! along the grid axes; below the grid the space is zero.

use crate::complex::{CellSet, HomologyBasis};
use crate::f2::BinaryMatrix;
use crate::filtration::{GradeGrid, Graded, MultiGrade};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("grade {0} is not on the grid")]
    OffGrid(MultiGrade),
    #[error("{0} is not below {1}")]
    NotComparable(MultiGrade, MultiGrade),
    #[error("operation needs {expected} parameters, got {found}")]
    WrongParams { expected: usize, found: usize },
    #[error("Koszul composite is not zero at {grade}, degree {degree}")]
    NotAComplex { grade: MultiGrade, degree: usize },
    #[error("modules must be given for degrees 0, 1, 2, ... in order")]
    DegreeOrder,
}

/// `H_q` of every sublevel complex on the grid, with inclusion-induced maps
/// along the grid edges.
#[derive(Clone, Debug)]
pub struct PersistenceModule {
    degree: usize,
    grid: GradeGrid,
    values: Vec<MultiGrade>,
    position: HashMap<MultiGrade, usize>,
    bases: Vec<HomologyBasis>,
    /// Per grid point and axis, the map to the next grid point along that axis.
    edges: Vec<Vec<Option<BinaryMatrix>>>,
}

pub fn build_module<G: Graded + Sync>(g: &G, grid: &GradeGrid, q: usize) -> PersistenceModule {
    let values = grid.values();
    let position: HashMap<MultiGrade, usize> = values
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, u)| (u, i))
        .collect();
    let bases: Vec<HomologyBasis> = values
        .par_iter()
        .map(|u| HomologyBasis::compute(g.cells(), &g.sublevel_mask(u), q))
        .collect();
    let successors: Vec<Vec<Option<usize>>> = values
        .iter()
        .map(|u| {
            (0..grid.params())
                .map(|axis| successor(grid, u, axis).map(|s| position[&s]))
                .collect()
        })
        .collect();
    let edges = successors
        .par_iter()
        .enumerate()
        .map(|(i, succ)| {
            succ.iter()
                .map(|s| s.map(|j| bases[i].induced_map(&bases[j])))
                .collect()
        })
        .collect();
    PersistenceModule {
        degree: q,
        grid: grid.clone(),
        values,
        position,
        bases,
        edges,
    }
}

fn successor(grid: &GradeGrid, u: &MultiGrade, axis: usize) -> Option<MultiGrade> {
    let values = &grid.axes()[axis];
    let k = values.binary_search(&u.get(axis)).ok()?;
    let next = *values.get(k + 1)?;
    let mut c = u.coords().to_vec();
    c[axis] = next;
    Some(MultiGrade::new(c))
}

impl PersistenceModule {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn grid(&self) -> &GradeGrid {
        &self.grid
    }

    /// Grid grades in lexicographic order.
    pub fn grades(&self) -> &[MultiGrade] {
        &self.values
    }

    fn index(&self, u: &MultiGrade) -> Result<usize, InvariantsError> {
        self.position
            .get(u)
            .copied()
            .ok_or_else(|| InvariantsError::OffGrid(u.clone()))
    }

    pub fn dim(&self, u: &MultiGrade) -> Result<usize, InvariantsError> {
        Ok(self.bases[self.index(u)?].dim())
    }

    /// Dimension at `u`, zero off the grid.
    fn dim_or_zero(&self, u: Option<&MultiGrade>) -> usize {
        u.and_then(|u| self.position.get(u))
            .map_or(0, |&i| self.bases[i].dim())
    }

    pub fn basis(&self, u: &MultiGrade) -> Result<&HomologyBasis, InvariantsError> {
        Ok(&self.bases[self.index(u)?])
    }

    /// The map from `u` to its successor along `axis`, if that is on the grid.
    pub fn edge_map(
        &self,
        u: &MultiGrade,
        axis: usize,
    ) -> Result<Option<&BinaryMatrix>, InvariantsError> {
        Ok(self.edges[self.index(u)?][axis].as_ref())
    }

    /// The map `V_u -> V_v` for `u ⪯ v`, composed along the grid edges,
    /// first along axis 0, then axis 1, and so on.
    pub fn map(&self, u: &MultiGrade, v: &MultiGrade) -> Result<BinaryMatrix, InvariantsError> {
        let mut i = self.index(u)?;
        self.index(v)?;
        if !u.leq(v) {
            return Err(InvariantsError::NotComparable(u.clone(), v.clone()));
        }
        let mut acc = BinaryMatrix::identity(self.bases[i].dim());
        let mut cur = u.clone();
        for axis in 0..self.grid.params() {
            while cur.get(axis) < v.get(axis) {
                let step = self.edges[i][axis].as_ref().expect("successor on grid");
                acc = step.mul(&acc);
                cur = successor(&self.grid, &cur, axis).expect("successor on grid");
                i = self.position[&cur];
            }
        }
        Ok(acc)
    }

    /// The map `V_u -> V_v` read directly from the representatives at `u`.
    pub fn direct_map(
        &self,
        u: &MultiGrade,
        v: &MultiGrade,
    ) -> Result<BinaryMatrix, InvariantsError> {
        if !u.leq(v) {
            return Err(InvariantsError::NotComparable(u.clone(), v.clone()));
        }
        Ok(self.bases[self.index(u)?].induced_map(&self.bases[self.index(v)?]))
    }

    /// Checks that both paths around every unit grid square agree.
    pub fn check_commutativity(&self) -> Result<(), (MultiGrade, usize, usize)> {
        let n = self.grid.params();
        for (i, u) in self.values.iter().enumerate() {
            for a in 0..n {
                for b in a + 1..n {
                    let (Some(ea), Some(eb)) = (&self.edges[i][a], &self.edges[i][b]) else {
                        continue;
                    };
                    let ua = successor(&self.grid, u, a).expect("edge");
                    let ub = successor(&self.grid, u, b).expect("edge");
                    let then_b = self.edges[self.position[&ua]][b].as_ref().expect("square");
                    let then_a = self.edges[self.position[&ub]][a].as_ref().expect("square");
                    if then_b.mul(ea) != then_a.mul(eb) {
                        return Err((u.clone(), a, b));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Rank of `H_q(K^u) -> H_q(K^v)`.
pub fn rank_invariant(
    p: &PersistenceModule,
    u: &MultiGrade,
    v: &MultiGrade,
) -> Result<usize, InvariantsError> {
    Ok(p.map(u, v)?.rank())
}

/// Ranks of `H_q(K^u) -> H_q(K^v)` for every grid grade `v ⪰ u`, each map
/// composed from the one at a grid predecessor of `v`.
pub fn rank_invariant_from(
    p: &PersistenceModule,
    u: &MultiGrade,
) -> Result<Vec<(MultiGrade, usize)>, InvariantsError> {
    let start = p.index(u)?;
    let mut maps: HashMap<usize, BinaryMatrix> = HashMap::new();
    let mut out = Vec::new();
    for (i, v) in p.values.iter().enumerate().skip(start) {
        if !u.leq(v) {
            continue;
        }
        let m = if i == start {
            BinaryMatrix::identity(p.bases[i].dim())
        } else {
            let axis = (0..p.grid.params())
                .find(|&a| v.get(a) > u.get(a))
                .expect("v differs from u");
            let w = p.grid.predecessor(v, axis).expect("on grid");
            let j = p.position[&w];
            let step = p.edges[j][axis].as_ref().expect("edge on grid");
            step.mul(&maps[&j])
        };
        out.push((v.clone(), m.rank()));
        maps.insert(i, m);
    }
    Ok(out)
}

/// Betti tables by grade and degree; only non-zero rows are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTables {
    params: usize,
    entries: BTreeMap<(MultiGrade, usize), [usize; 3]>,
}

impl BettiTables {
    pub fn params(&self) -> usize {
        self.params
    }

    /// `(ξ0, ξ1, ξ2)` at `u` in degree `q`; `ξ2` is zero for one parameter.
    pub fn get(&self, u: &MultiGrade, q: usize) -> [usize; 3] {
        self.entries.get(&(u.clone(), q)).copied().unwrap_or([0; 3])
    }

    /// `ξ_i^q(u)`, zero for negative degrees.
    pub fn xi(&self, i: usize, u: &MultiGrade, q: isize) -> usize {
        if q < 0 {
            return 0;
        }
        self.get(u, q as usize)[i]
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiGrade, usize, [usize; 3])> {
        self.entries.iter().map(|((u, q), &x)| (u, *q, x))
    }

    fn insert(&mut self, u: &MultiGrade, q: usize, xi: [usize; 3]) {
        if xi != [0; 3] {
            self.entries.insert((u.clone(), q), xi);
        }
    }
}

fn check_degrees(modules: &[PersistenceModule], params: usize) -> Result<(), InvariantsError> {
    for (q, p) in modules.iter().enumerate() {
        if p.degree != q {
            return Err(InvariantsError::DegreeOrder);
        }
        if p.grid.params() != params {
            return Err(InvariantsError::WrongParams {
                expected: params,
                found: p.grid.params(),
            });
        }
    }
    Ok(())
}

/// `ξ0(u) = dim cok i^{u-1,u}` and `ξ1(u) = dim ker i^{u-1,u}`.
pub fn betti_tables_n1(modules: &[PersistenceModule]) -> Result<BettiTables, InvariantsError> {
    check_degrees(modules, 1)?;
    let mut t = BettiTables {
        params: 1,
        entries: BTreeMap::new(),
    };
    for p in modules {
        for u in &p.values {
            let du = p.dim(u)?;
            let xi = match p.grid.predecessor(u, 0) {
                None => [du, 0, 0],
                Some(x) => {
                    let r = p.map(&x, u)?.rank();
                    [du - r, p.dim(&x)? - r, 0]
                }
            };
            t.insert(u, p.degree, xi);
        }
    }
    Ok(t)
}

/// Two-parameter Betti tables from the Koszul complex at every grid grade:
/// `V_z -> V_x ⊕ V_y -> V_u` with `x = u-e1`, `y = u-e2`, `z = u-e1-e2`.
pub fn betti_tables_n2(modules: &[PersistenceModule]) -> Result<BettiTables, InvariantsError> {
    check_degrees(modules, 2)?;
    let mut t = BettiTables {
        params: 2,
        entries: BTreeMap::new(),
    };
    for p in modules {
        for u in &p.values {
            let (spl, mer) = koszul_maps(p, u)?;
            if !mer.mul(&spl).is_zero() {
                return Err(InvariantsError::NotAComplex {
                    grade: u.clone(),
                    degree: p.degree,
                });
            }
            let rank_mer = mer.rank();
            let rank_spl = spl.rank();
            let xi0 = mer.rows() - rank_mer;
            let xi1 = (mer.cols() - rank_mer) - rank_spl;
            let xi2 = spl.cols() - rank_spl;
            t.insert(u, p.degree, [xi0, xi1, xi2]);
        }
    }
    Ok(t)
}

/// `spl = [i^{z,x}; i^{z,y}]` and `mer = [i^{x,u} | i^{y,u}]`, with zero
/// blocks for off-grid grades.
pub fn koszul_maps(
    p: &PersistenceModule,
    u: &MultiGrade,
) -> Result<(BinaryMatrix, BinaryMatrix), InvariantsError> {
    let du = p.dim(u)?;
    let x = p.grid.predecessor(u, 0);
    let y = p.grid.predecessor(u, 1);
    let z = x.as_ref().and_then(|x| p.grid.predecessor(x, 1));
    let (dx, dy, dz) = (
        p.dim_or_zero(x.as_ref()),
        p.dim_or_zero(y.as_ref()),
        p.dim_or_zero(z.as_ref()),
    );
    let block =
        |from: &Option<MultiGrade>, to: &Option<MultiGrade>, rows: usize, cols: usize| match (
            from, to,
        ) {
            (Some(a), Some(b)) => p.map(a, b),
            _ => Ok(BinaryMatrix::zeros(rows, cols)),
        };
    let spl = block(&z, &x, dx, dz)?.vstack(&block(&z, &y, dy, dz)?);
    let top = Some(u.clone());
    let mer = block(&x, &top, du, dx)?.hstack(&block(&y, &top, du, dy)?);
    Ok((spl, mer))
}

/// `(dim ker j, dim cok j)` for `j: H_q(⋃ K^{u-e_i}) -> H_q(K^u)`.
pub fn inclusion_ranks<G: Graded>(g: &G, u: &MultiGrade, q: usize) -> (usize, usize) {
    let below = HomologyBasis::compute(g.cells(), &g.union_of_predecessors_mask(u), q);
    let at = HomologyBasis::compute(g.cells(), &g.sublevel_mask(u), q);
    let r = below.induced_map(&at).rank();
    (below.dim() - r, at.dim() - r)
}

/// `dim H_q(K^u, ⋃ K^{u-e_i})` for every degree up to the top dimension.
pub fn relative_dims<G: Graded>(g: &G, u: &MultiGrade) -> Vec<usize> {
    g.cells()
        .relative_homology_dims(&g.sublevel_mask(u), &g.union_of_predecessors_mask(u))
        .expect("sublevel sets are subcomplexes")
}

/// One pair of the one-parameter persistence diagram; `death` is `None`
/// for essential classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PersistencePair {
    pub degree: usize,
    pub birth: MultiGrade,
    pub death: Option<MultiGrade>,
    pub positive: usize,
    pub negative: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PersistencePairs {
    /// Pairs with birth strictly before death, and essential classes.
    pub pairs: Vec<PersistencePair>,
    /// Pairs of cells entering at the same grade.
    pub ephemeral: Vec<PersistencePair>,
}

impl PersistencePairs {
    /// Cells that are positive or negative in some pair, ephemeral ones included.
    pub fn paired_cells(&self) -> CellSet {
        let top = self
            .pairs
            .iter()
            .chain(&self.ephemeral)
            .flat_map(|p| std::iter::once(p.positive).chain(p.negative))
            .max()
            .map_or(0, |m| m + 1);
        let mut s = crate::f2::zero_vector(top);
        for p in self.pairs.iter().chain(&self.ephemeral) {
            s.set(p.positive, true);
            if let Some(n) = p.negative {
                s.set(n, true);
            }
        }
        s
    }

    /// `(degree, birth, death)` of the non-ephemeral pairs, sorted.
    pub fn diagram(&self) -> Vec<(usize, MultiGrade, Option<MultiGrade>)> {
        let mut d: Vec<_> = self
            .pairs
            .iter()
            .map(|p| (p.degree, p.birth.clone(), p.death.clone()))
            .collect();
        d.sort();
        d
    }
}

/// Standard column reduction of the boundary matrix with cells ordered by
/// grade, then dimension, then their order in the complex.
pub fn persistence_pairs_n1<G: Graded>(g: &G) -> Result<PersistencePairs, InvariantsError> {
    if g.params() != 1 {
        return Err(InvariantsError::WrongParams {
            expected: 1,
            found: g.params(),
        });
    }
    let cells = g.cells();
    let grades = g.grades();
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&a, &b| (&grades[a], cells.dim_of(a), a).cmp(&(&grades[b], cells.dim_of(b), b)));
    let mut pos = vec![0; cells.len()];
    for (i, &c) in order.iter().enumerate() {
        pos[c] = i;
    }

    // columns as sorted lists of row positions
    let mut columns: Vec<Vec<usize>> = order
        .iter()
        .map(|&c| {
            let mut col: Vec<usize> = cells.boundary_of(c).iter().map(|&f| pos[f]).collect();
            col.sort_unstable();
            col
        })
        .collect();
    let mut low_owner: HashMap<usize, usize> = HashMap::new();
    let mut killed = vec![false; order.len()];
    let mut out = PersistencePairs::default();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match low_owner.get(&low) {
                Some(&k) => {
                    let other = columns[k].clone();
                    columns[j] = symmetric_difference(&columns[j], &other);
                }
                None => break,
            }
        }
        if let Some(&low) = columns[j].last() {
            low_owner.insert(low, j);
            killed[low] = true;
            let (pc, nc) = (order[low], order[j]);
            let pair = PersistencePair {
                degree: cells.dim_of(pc),
                birth: grades[pc].clone(),
                death: Some(grades[nc].clone()),
                positive: pc,
                negative: Some(nc),
            };
            if grades[pc] == grades[nc] {
                out.ephemeral.push(pair);
            } else {
                out.pairs.push(pair);
            }
        }
    }
    for j in 0..columns.len() {
        if columns[j].is_empty() && !killed[j] {
            let c = order[j];
            out.pairs.push(PersistencePair {
                degree: cells.dim_of(c),
                birth: grades[c].clone(),
                death: None,
                positive: c,
                negative: None,
            });
        }
    }
    let key = |p: &PersistencePair| (p.degree, p.birth.clone(), p.death.clone(), p.positive);
    out.pairs.sort_by_key(key);
    out.ephemeral.sort_by_key(key);
    Ok(out)
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Modules for degrees `0..=top`, where `top` is the top cell dimension.
pub fn build_modules<G: Graded + Sync>(g: &G, grid: &GradeGrid) -> Vec<PersistenceModule> {
    (0..g.cells().degree_count())
        .map(|q| build_module(g, grid, q))
        .collect()
}
