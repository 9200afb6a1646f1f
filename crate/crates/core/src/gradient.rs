//! Discrete gradient vector fields built lower star by lower star.
//!
//! [`homotopy_expansion`] classifies the cells of one lower star into
//! discrete vectors and critical cells. [`compute_gradient`] runs it over
//! the lower stars of all primary simplices of a max-extension filtration,
//! which partition the complex.

use crate::complex::{CellSet, Simplex, SimplicialComplex};
use crate::filtration::{Filtration, FiltrationError, MultiGrade};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradientError {
    #[error("gradient construction requires a max-extension filtration")]
    NotMaxExtension,
    #[error("cell set is not the lower star of {0}: {1} does not contain it")]
    NotLowerStar(Simplex, Simplex),
    #[error("empty lower star")]
    EmptyLowerStar,
    #[error("index is not compatible with the facet relation: {facet} is not before {cell}")]
    IndexNotCompatible { cell: Simplex, facet: Simplex },
    #[error("index does not enumerate exactly the lower star")]
    IndexMismatch,
    #[error("no primary simplex for grade {0}")]
    MissingPrimary(MultiGrade),
    #[error("lower star of {0} differs from its level set")]
    LowerStarNotLevelSet(Simplex),
    #[error("homotopy expansion left {0} unclassified")]
    Unclassified(Simplex),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}

/// A discrete vector field on a simplicial complex, by cell index: discrete
/// vectors `(facet, cofacet)` and unpaired (critical) cells.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiscreteGradient {
    pairs: Vec<(usize, usize)>,
    critical: Vec<usize>,
}

impl DiscreteGradient {
    /// Wraps raw pairs and critical cells; no checks are made here,
    /// see [`validate_gradient`].
    pub fn new(mut pairs: Vec<(usize, usize)>, mut critical: Vec<usize>) -> Self {
        pairs.sort_unstable();
        critical.sort_unstable();
        Self { pairs, critical }
    }

    /// Builds a field from simplices of `complex`.
    pub fn from_simplices(
        complex: &SimplicialComplex,
        pairs: &[(Simplex, Simplex)],
        critical: &[Simplex],
    ) -> Result<Self, GradientError> {
        let idx =
            |s: &Simplex| {
                complex.index_of(s).ok_or(GradientError::Filtration(
                    FiltrationError::UnknownSimplex(s.clone()),
                ))
            };
        let pairs = pairs
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>, GradientError>>()?;
        let critical = critical.iter().map(idx).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(pairs, critical))
    }

    /// Every cell critical.
    pub fn trivial(complex: &SimplicialComplex) -> Self {
        Self::new(Vec::new(), (0..complex.len()).collect())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn critical(&self) -> &[usize] {
        &self.critical
    }

    pub fn is_critical(&self, cell: usize) -> bool {
        self.critical.binary_search(&cell).is_ok()
    }

    /// For every cell, the cofacet it is paired with, if any.
    pub fn up_partner(&self, cells: usize) -> Vec<Option<usize>> {
        let mut up = vec![None; cells];
        for &(s, t) in &self.pairs {
            up[s] = Some(t);
        }
        up
    }

    /// For every cell, the facet it is paired with, if any.
    pub fn down_partner(&self, cells: usize) -> Vec<Option<usize>> {
        let mut down = vec![None; cells];
        for &(s, t) in &self.pairs {
            down[t] = Some(s);
        }
        down
    }

    /// Critical cells counted by dimension.
    pub fn morse_counts(&self, complex: &SimplicialComplex) -> Vec<usize> {
        let mut counts = vec![0; complex.dim().map_or(0, |d| d + 1)];
        for &c in &self.critical {
            counts[complex.simplex(c).dim()] += 1;
        }
        counts
    }

    pub fn pair_simplices<'a>(
        &'a self,
        complex: &'a SimplicialComplex,
    ) -> impl Iterator<Item = (&'a Simplex, &'a Simplex)> + 'a {
        self.pairs
            .iter()
            .map(|&(s, t)| (complex.simplex(s), complex.simplex(t)))
    }

    pub fn critical_simplices<'a>(
        &'a self,
        complex: &'a SimplicialComplex,
    ) -> impl Iterator<Item = &'a Simplex> + 'a {
        self.critical.iter().map(|&c| complex.simplex(c))
    }
}

/// A total order on the cells of one lower star, compatible with the facet
/// relation. Position 0 holds the simplex whose lower star it is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionIndex {
    order: Vec<usize>,
    position: HashMap<usize, usize>,
}

impl ExpansionIndex {
    /// Uses the given order as is; compatibility is checked by
    /// [`homotopy_expansion`].
    pub fn from_order(order: Vec<usize>) -> Self {
        let position = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Self { order, position }
    }

    /// Orders cells by dimension, then by the tuple of their vertex grades
    /// sorted from largest to smallest (grades compared lexicographically),
    /// then by vertex ids.
    pub fn for_cells(filtration: &Filtration, cells: &[usize]) -> Result<Self, GradientError> {
        let f0 = filtration
            .vertex_function()
            .ok_or(GradientError::NotMaxExtension)?;
        let complex = filtration.complex();
        let mut keyed: Vec<(usize, Vec<MultiGrade>, &[u32], usize)> = cells
            .iter()
            .map(|&c| {
                let s = complex.simplex(c);
                let mut gs: Vec<MultiGrade> = s
                    .vertices()
                    .iter()
                    .map(|&v| f0.get(v).expect("vertex graded").clone())
                    .collect();
                gs.sort_unstable_by(|a, b| b.cmp(a));
                (s.dim(), gs, s.vertices(), c)
            })
            .collect();
        keyed.sort_unstable();
        Ok(Self::from_order(keyed.into_iter().map(|k| k.3).collect()))
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, cell: usize) -> Option<usize> {
        self.position.get(&cell).copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Output of one homotopy expansion: discrete vectors and critical cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalGradient {
    pub pairs: Vec<(usize, usize)>,
    pub critical: Vec<usize>,
}

/// Classifies the cells of the lower star of `index.order()[0]` into
/// discrete vectors and critical cells.
///
/// Cells are handled by their position in `index`. Two work lists hold
/// cells with zero and with exactly one unclassified facet (facets outside
/// the lower star do not count); both are popped smallest position first,
/// and entries that were classified after being queued are skipped.
pub fn homotopy_expansion(
    complex: &SimplicialComplex,
    index: &ExpansionIndex,
) -> Result<LocalGradient, GradientError> {
    let n = index.len();
    if n == 0 {
        return Err(GradientError::EmptyLowerStar);
    }
    let cells = index.order();
    let sigma = complex.simplex(cells[0]);
    if index.position.len() != n {
        return Err(GradientError::IndexMismatch);
    }
    if let Some(&c) = cells
        .iter()
        .find(|&&c| !sigma.is_face_of(complex.simplex(c)))
    {
        return Err(GradientError::NotLowerStar(
            sigma.clone(),
            complex.simplex(c).clone(),
        ));
    }
    // facets inside the lower star, by position
    let mut facets: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (p, &c) in cells.iter().enumerate() {
        let s = complex.simplex(c);
        let mut fs = Vec::new();
        for &f in complex.facets_of(c) {
            if let Some(q) = index.position(f) {
                if q >= p {
                    return Err(GradientError::IndexNotCompatible {
                        cell: s.clone(),
                        facet: complex.simplex(f).clone(),
                    });
                }
                fs.push(q);
            }
        }
        facets.push(fs);
    }

    let mut out = LocalGradient::default();
    if n == 1 {
        out.critical.push(cells[0]);
        return Ok(out);
    }

    let mut classified = vec![false; n];
    let unclassified_facets =
        |a: usize, classified: &[bool]| facets[a].iter().filter(|&&f| !classified[f]).count();

    let delta = (1..n)
        .find(|&p| facets[p].contains(&0))
        .ok_or_else(|| GradientError::NotLowerStar(sigma.clone(), sigma.clone()))?;
    out.pairs.push((cells[0], cells[delta]));
    classified[0] = true;
    classified[delta] = true;

    let mut ord0: BTreeSet<usize> = BTreeSet::new();
    let mut ord1: BTreeSet<usize> = BTreeSet::new();
    for a in 1..n {
        if a == delta {
            continue;
        }
        match unclassified_facets(a, &classified) {
            0 => {
                ord0.insert(a);
            }
            1 if a > delta => {
                ord1.insert(a);
            }
            _ => {}
        }
    }

    let enqueue_above = |threshold: usize, classified: &[bool], ord1: &mut BTreeSet<usize>| {
        for b in (threshold + 1)..n {
            if !classified[b] && unclassified_facets(b, classified) == 1 {
                ord1.insert(b);
            }
        }
    };

    while !ord0.is_empty() || !ord1.is_empty() {
        while let Some(alpha) = ord1.pop_first() {
            if classified[alpha] {
                continue;
            }
            if unclassified_facets(alpha, &classified) == 0 {
                ord0.insert(alpha);
                continue;
            }
            let lambda = *facets[alpha]
                .iter()
                .find(|&&f| !classified[f])
                .expect("one unclassified facet");
            out.pairs.push((cells[lambda], cells[alpha]));
            ord0.remove(&lambda);
            classified[alpha] = true;
            classified[lambda] = true;
            // β > α or β > λ, with λ before α
            enqueue_above(lambda, &classified, &mut ord1);
        }
        if let Some(gamma) = ord0.pop_first() {
            if classified[gamma] {
                continue;
            }
            out.critical.push(cells[gamma]);
            classified[gamma] = true;
            enqueue_above(gamma, &classified, &mut ord1);
        }
    }

    if let Some(p) = classified.iter().position(|c| !c) {
        return Err(GradientError::Unclassified(
            complex.simplex(cells[p]).clone(),
        ));
    }
    Ok(out)
}

/// Runs [`homotopy_expansion`] on the lower star of the primary simplex of
/// every grade taken by the filtration and merges the results.
pub fn compute_gradient(filtration: &Filtration) -> Result<DiscreteGradient, GradientError> {
    if !filtration.is_max_extension() {
        return Err(GradientError::NotMaxExtension);
    }
    let complex = filtration.complex();
    let mut level: HashMap<&MultiGrade, Vec<usize>> = HashMap::new();
    for (i, g) in filtration.grades().iter().enumerate() {
        level.entry(g).or_default().push(i);
    }
    let mut grades: Vec<&MultiGrade> = level.keys().copied().collect();
    grades.sort_unstable();

    let locals: Vec<LocalGradient> = grades
        .par_iter()
        .map(|&u| {
            let sigma = filtration
                .primary_simplex_index(u)?
                .ok_or_else(|| GradientError::MissingPrimary(u.clone()))?;
            let star = filtration.lower_star_indices(sigma);
            if star != level[u] {
                return Err(GradientError::LowerStarNotLevelSet(
                    complex.simplex(sigma).clone(),
                ));
            }
            let index = ExpansionIndex::for_cells(filtration, &star)?;
            homotopy_expansion(complex, &index)
        })
        .collect::<Result<_, _>>()?;

    let mut pairs = Vec::new();
    let mut critical = Vec::new();
    for l in locals {
        pairs.extend(l.pairs);
        critical.extend(l.critical);
    }
    Ok(DiscreteGradient::new(pairs, critical))
}

/// A problem found by [`validate_gradient`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GradientIssue {
    NotFacet {
        facet: Simplex,
        cofacet: Simplex,
    },
    Repeated {
        cell: Simplex,
    },
    Uncovered {
        cell: Simplex,
    },
    UnknownCell {
        index: usize,
    },
    /// A closed V-path, listed as alternating facets and cofacets.
    Cycle {
        path: Vec<Simplex>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradientVerdict {
    pub valid: bool,
    pub issues: Vec<GradientIssue>,
}

/// Checks that pairs and critical cells partition the complex, that every
/// pair is a facet relation, and that no closed V-path exists.
pub fn validate_gradient(complex: &SimplicialComplex, v: &DiscreteGradient) -> GradientVerdict {
    let n = complex.len();
    let mut issues = Vec::new();
    let mut uses = vec![0usize; n];
    let mut in_range = |c: usize, issues: &mut Vec<GradientIssue>| {
        if c < n {
            uses[c] += 1;
            true
        } else {
            issues.push(GradientIssue::UnknownCell { index: c });
            false
        }
    };
    let mut matched_up: Vec<Option<usize>> = vec![None; n];
    for &(s, t) in v.pairs() {
        let ok_s = in_range(s, &mut issues);
        let ok_t = in_range(t, &mut issues);
        if !(ok_s && ok_t) {
            continue;
        }
        if !complex.facets_of(t).contains(&s) {
            issues.push(GradientIssue::NotFacet {
                facet: complex.simplex(s).clone(),
                cofacet: complex.simplex(t).clone(),
            });
            continue;
        }
        matched_up[s] = Some(t);
    }
    for &c in v.critical() {
        in_range(c, &mut issues);
    }
    for (c, &k) in uses.iter().enumerate() {
        match k {
            0 => issues.push(GradientIssue::Uncovered {
                cell: complex.simplex(c).clone(),
            }),
            1 => {}
            _ => issues.push(GradientIssue::Repeated {
                cell: complex.simplex(c).clone(),
            }),
        }
    }
    if let Some(path) = find_closed_vpath(complex, &matched_up) {
        issues.push(GradientIssue::Cycle {
            path: path
                .into_iter()
                .map(|c| complex.simplex(c).clone())
                .collect(),
        });
    }
    GradientVerdict {
        valid: issues.is_empty(),
        issues,
    }
}

/// Searches the V-path digraph (σ → τ for a pair, τ → σ' for the other
/// facets σ' of a paired τ) for a cycle and returns it as σ0, τ0, σ1, ...
fn find_closed_vpath(
    complex: &SimplicialComplex,
    matched_up: &[Option<usize>],
) -> Option<Vec<usize>> {
    let n = complex.len();
    // successors among facets: σ ↦ the other facets of its partner
    let next = |s: usize| -> Vec<usize> {
        match matched_up[s] {
            Some(t) => complex
                .facets_of(t)
                .iter()
                .copied()
                .filter(|&f| f != s)
                .collect(),
            None => Vec::new(),
        }
    };
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; n];
    for start in 0..n {
        if mark[start] != Mark::New || matched_up[start].is_none() {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(start, next(start), 0)];
        mark[start] = Mark::Active;
        while let Some(top) = stack.last_mut() {
            let (node, succ, i) = (top.0, &top.1, top.2);
            if i < succ.len() {
                let s = succ[i];
                top.2 += 1;
                match mark[s] {
                    Mark::New => {
                        mark[s] = Mark::Active;
                        let ns = next(s);
                        stack.push((s, ns, 0));
                    }
                    Mark::Active => {
                        let from = stack.iter().position(|e| e.0 == s).expect("on stack");
                        let mut path = Vec::new();
                        for e in &stack[from..] {
                            path.push(e.0);
                            path.push(matched_up[e.0].expect("matched"));
                        }
                        path.push(s);
                        return Some(path);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

/// Result of [`check_consistency`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyVerdict {
    pub consistent: bool,
    /// First pair whose cells enter at different grades.
    pub witness: Option<ConsistencyWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyWitness {
    pub facet: Simplex,
    pub cofacet: Simplex,
    pub facet_grade: MultiGrade,
    pub cofacet_grade: MultiGrade,
}

/// A field is consistent with a one-critical filtration iff the two cells
/// of every pair have the same grade.
pub fn check_consistency(filtration: &Filtration, v: &DiscreteGradient) -> ConsistencyVerdict {
    let complex = filtration.complex();
    let witness = v
        .pairs()
        .iter()
        .find(|&&(s, t)| filtration.grade(s) != filtration.grade(t))
        .map(|&(s, t)| ConsistencyWitness {
            facet: complex.simplex(s).clone(),
            cofacet: complex.simplex(t).clone(),
            facet_grade: filtration.grade(s).clone(),
            cofacet_grade: filtration.grade(t).clone(),
        });
    ConsistencyVerdict {
        consistent: witness.is_none(),
        witness,
    }
}

/// Every maximal V-path starting at `start`, as alternating cell indices
/// σ0, τ0, σ1, ..., σr. With `restrict`, only cells in the set are used.
/// A start cell that is not paired with a cofacet gives the trivial path.
pub fn trace_vpaths(
    complex: &SimplicialComplex,
    v: &DiscreteGradient,
    start: usize,
    restrict: Option<&CellSet>,
) -> Vec<Vec<usize>> {
    let up = v.up_partner(complex.len());
    let allowed = |c: usize| restrict.is_none_or(|r| r[c]);
    let mut out = Vec::new();
    let mut stack = vec![vec![start]];
    while let Some(path) = stack.pop() {
        let last = *path.last().expect("non-empty");
        let continuations: Vec<usize> = match up[last] {
            Some(t) if allowed(t) => complex
                .facets_of(t)
                .iter()
                .copied()
                .filter(|&f| f != last && allowed(f))
                .collect(),
            _ => Vec::new(),
        };
        if continuations.is_empty() {
            out.push(path);
            continue;
        }
        let t = up[last].expect("matched");
        for &f in continuations.iter().rev() {
            let mut p = path.clone();
            p.push(t);
            p.push(f);
            stack.push(p);
        }
    }
    out
}
