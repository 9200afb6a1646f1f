//! The filtered discrete Morse complex of a gradient and its Morse numbers.
//!
//! The incidence between critical cells `t` and `s` is the parity of the
//! separatrices from `t` to `s`. Path counts can grow exponentially, so the
//! parity is propagated instead: the flow of a `q`-cell is the set of
//! critical `q`-cells it reaches, mod 2, and the incidence of `t` is the
//! sum of the flows of its facets.

use crate::complex::{ComplexError, LefschetzComplex, SimplicialComplex};
use crate::f2::{xor_into, zero_vector, BitVector};
use crate::filtration::{Filtration, Graded, MultiGrade};
use crate::gradient::{
    check_consistency, validate_gradient, ConsistencyWitness, DiscreteGradient, GradientIssue,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("gradient is not valid: {0:?}")]
    InvalidGradient(Vec<GradientIssue>),
    #[error("gradient is not consistent with the filtration: {0:?}")]
    Inconsistent(Box<ConsistencyWitness>),
    #[error("separatrices need dim t = dim s + 1, got {t_dim} and {s_dim}")]
    DimensionMismatch { t_dim: usize, s_dim: usize },
    #[error("cell {0} is not critical")]
    NotCritical(usize),
    #[error("closed V-path through cell {0}")]
    Cyclic(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Mod-2 flows of all `q`-cells onto the critical `q`-cells.
struct FlowTable {
    q: usize,
    first: usize,
    /// Position of each critical `q`-cell among the critical `q`-cells.
    critical_rank: Vec<Option<usize>>,
    flows: Vec<BitVector>,
}

impl FlowTable {
    fn build(
        complex: &SimplicialComplex,
        v: &DiscreteGradient,
        up: &[Option<usize>],
        down: &[Option<usize>],
        q: usize,
    ) -> Result<Self, MorseError> {
        let range = complex.cells_of_dim(q);
        let first = range.start;
        let n = range.len();
        let mut critical_rank = vec![None; n];
        let mut k = 0;
        for c in range.clone() {
            if v.is_critical(c) {
                critical_rank[c - first] = Some(k);
                k += 1;
            }
        }

        // 0 = unvisited, 1 = in progress, 2 = done
        let mut state = vec![0u8; n];
        let mut flows = vec![zero_vector(k); n];
        for root in range.clone() {
            if state[root - first] == 2 {
                continue;
            }
            let mut stack = vec![root];
            while let Some(&c) = stack.last() {
                let i = c - first;
                if state[i] == 2 {
                    stack.pop();
                    continue;
                }
                let deps: Vec<usize> = match up[c] {
                    Some(t) => complex
                        .facets_of(t)
                        .iter()
                        .copied()
                        .filter(|&f| f != c)
                        .collect(),
                    None => Vec::new(),
                };
                if state[i] == 0 {
                    state[i] = 1;
                    let mut pending = false;
                    for &d in &deps {
                        match state[d - first] {
                            0 => {
                                stack.push(d);
                                pending = true;
                            }
                            1 => return Err(MorseError::Cyclic(d)),
                            _ => {}
                        }
                    }
                    if pending {
                        continue;
                    }
                }
                stack.pop();
                let mut flow = zero_vector(k);
                if let Some(r) = critical_rank[i] {
                    flow.set(r, true);
                } else if down[c].is_none() {
                    for &d in &deps {
                        xor_into(&mut flow, &flows[d - first]);
                    }
                }
                flows[i] = flow;
                state[i] = 2;
            }
        }
        Ok(Self {
            q,
            first,
            critical_rank,
            flows,
        })
    }

    fn flow(&self, cell: usize) -> &BitVector {
        &self.flows[cell - self.first]
    }

    /// Critical `q`-cells reached from the `(q+1)`-cell `t`, mod 2.
    fn boundary(&self, complex: &SimplicialComplex, t: usize) -> BitVector {
        let k = self.critical_rank.iter().flatten().count();
        let mut b = zero_vector(k);
        debug_assert_eq!(complex.simplex(t).dim(), self.q + 1);
        for &f in complex.facets_of(t) {
            xor_into(&mut b, self.flow(f));
        }
        b
    }
}

/// Parity of the separatrices from the critical cell `t` to the critical
/// cell `s`: one if `s` is a facet of `t`, plus one per V-path from another
/// facet of `t` to `s`.
pub fn separatrix_parity(
    complex: &SimplicialComplex,
    v: &DiscreteGradient,
    t: usize,
    s: usize,
) -> Result<bool, MorseError> {
    let (t_dim, s_dim) = (complex.simplex(t).dim(), complex.simplex(s).dim());
    if t_dim != s_dim + 1 {
        return Err(MorseError::DimensionMismatch { t_dim, s_dim });
    }
    for c in [t, s] {
        if !v.is_critical(c) {
            return Err(MorseError::NotCritical(c));
        }
    }
    let up = v.up_partner(complex.len());
    let down = v.down_partner(complex.len());
    let table = FlowTable::build(complex, v, &up, &down, s_dim)?;
    let r = table.critical_rank[s - table.first].expect("critical");
    Ok(table.boundary(complex, t)[r])
}

/// A Lefschetz complex on the critical cells of a gradient, each cell
/// keeping the grade it had in the filtration.
#[derive(Clone, Debug)]
pub struct MorseComplex {
    cells: LefschetzComplex,
    grades: Vec<MultiGrade>,
    params: usize,
    source: Vec<usize>,
}

impl MorseComplex {
    /// Index in the original complex of every Morse cell.
    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        self.cells.homology_dims()
    }
}

impl Graded for MorseComplex {
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

/// Builds the Morse complex of a valid gradient consistent with `filtration`.
/// Critical cells keep the order they have in the original complex.
pub fn build_morse_complex(
    filtration: &Filtration,
    v: &DiscreteGradient,
) -> Result<MorseComplex, MorseError> {
    let complex = filtration.complex();
    let verdict = validate_gradient(complex, v);
    if !verdict.valid {
        return Err(MorseError::InvalidGradient(verdict.issues));
    }
    let consistency = check_consistency(filtration, v);
    if let Some(w) = consistency.witness {
        return Err(MorseError::Inconsistent(Box::new(w)));
    }

    let up = v.up_partner(complex.len());
    let down = v.down_partner(complex.len());
    let top = complex.dim().map_or(0, |d| d + 1);
    let source: Vec<usize> = v.critical().to_vec();
    // Morse index of the k-th critical q-cell, per q
    let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); top];
    for (m, &c) in source.iter().enumerate() {
        by_rank[complex.simplex(c).dim()].push(m);
    }

    let mut boundary = vec![Vec::new(); source.len()];
    for q in 0..top.saturating_sub(1) {
        if by_rank[q + 1].is_empty() {
            continue;
        }
        let table = FlowTable::build(complex, v, &up, &down, q)?;
        for &m in &by_rank[q + 1] {
            let b = table.boundary(complex, source[m]);
            boundary[m] = b.iter_ones().map(|r| by_rank[q][r]).collect();
        }
    }
    let dims = source.iter().map(|&c| complex.simplex(c).dim()).collect();
    let cells = LefschetzComplex::new(dims, boundary)?;
    Ok(MorseComplex {
        cells,
        grades: source
            .iter()
            .map(|&c| filtration.grade(c).clone())
            .collect(),
        params: filtration.params(),
        source,
    })
}

/// Counts of critical cells by entrance grade and degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MorseNumbersTable {
    counts: BTreeMap<(MultiGrade, usize), usize>,
    totals: Vec<usize>,
}

impl MorseNumbersTable {
    /// `m_q(u)`; zero for grades without critical cells.
    pub fn get(&self, u: &MultiGrade, q: usize) -> usize {
        self.counts.get(&(u.clone(), q)).copied().unwrap_or(0)
    }

    /// `m_q(V)`.
    pub fn total(&self, q: usize) -> usize {
        self.totals.get(q).copied().unwrap_or(0)
    }

    pub fn totals(&self) -> &[usize] {
        &self.totals
    }

    /// Non-zero entries in (grade, degree) order.
    pub fn entries(&self) -> impl Iterator<Item = (&MultiGrade, usize, usize)> {
        self.counts.iter().map(|((u, q), &m)| (u, *q, m))
    }
}

/// By one-criticality the cells of `M^u` outside every `M^{u-e_i}` are
/// exactly those of grade `u`, so the Morse numbers are plain counts.
pub fn morse_numbers(m: &MorseComplex) -> MorseNumbersTable {
    let mut table = MorseNumbersTable {
        counts: BTreeMap::new(),
        totals: vec![0; m.cells.degree_count()],
    };
    for (i, g) in m.grades.iter().enumerate() {
        let q = m.cells.dim_of(i);
        *table.counts.entry((g.clone(), q)).or_default() += 1;
        table.totals[q] += 1;
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Simplex;
    use crate::f2::unit_vector as unit;
    use crate::filtration::VertexFunction;
    use crate::gradient::{compute_gradient, trace_vpaths};
    use crate::{grade, simplex};

    fn four_cycle_function() -> VertexFunction {
        // a=0, b=1, c=2, d=3
        VertexFunction::new(
            2,
            [
                (0, grade![0, 0]),
                (1, grade![3, 2]),
                (2, grade![1, 1]),
                (3, grade![2, 3]),
            ],
        )
        .unwrap()
    }

    fn four_cycle() -> Filtration {
        let k = SimplicialComplex::closure([
            simplex![0, 1],
            simplex![1, 2],
            simplex![2, 3],
            simplex![0, 3],
        ]);
        Filtration::extend_max(k, four_cycle_function()).unwrap()
    }

    fn two_triangles() -> Filtration {
        let k = SimplicialComplex::closure([simplex![0, 1, 3], simplex![1, 2, 3]]);
        Filtration::extend_max(k, four_cycle_function()).unwrap()
    }

    /// Separatrix parity by listing every V-path.
    fn parity_by_paths(k: &SimplicialComplex, v: &DiscreteGradient, t: usize, s: usize) -> bool {
        let mut count = 0usize;
        for &f in k.facets_of(t) {
            if f == s {
                count += 1;
                continue;
            }
            for path in trace_vpaths(k, v, f, None) {
                if *path.last().unwrap() == s {
                    count += 1;
                }
            }
        }
        count % 2 == 1
    }

    fn check_parities_against_paths(f: &Filtration, v: &DiscreteGradient) {
        let k = f.complex();
        for &t in v.critical() {
            for &s in v.critical() {
                if k.simplex(t).dim() == k.simplex(s).dim() + 1 {
                    assert_eq!(
                        separatrix_parity(k, v, t, s).unwrap(),
                        parity_by_paths(k, v, t, s),
                        "{} -> {}",
                        k.simplex(t),
                        k.simplex(s)
                    );
                }
            }
        }
    }

    #[test]
    fn direct_facet_has_parity_one() {
        let k = SimplicialComplex::closure([simplex![0, 1]]);
        let v = DiscreteGradient::trivial(&k);
        let e = k.index_of(&simplex![0, 1]).unwrap();
        assert!(separatrix_parity(&k, &v, e, 0).unwrap());
    }

    #[test]
    fn unrelated_cells_have_parity_zero() {
        let k = SimplicialComplex::closure([simplex![0, 1], simplex![2]]);
        let v = DiscreteGradient::trivial(&k);
        let e = k.index_of(&simplex![0, 1]).unwrap();
        let c = k.index_of(&simplex![2]).unwrap();
        assert!(!separatrix_parity(&k, &v, e, c).unwrap());
        assert_eq!(
            separatrix_parity(&k, &v, c, 0),
            Err(MorseError::DimensionMismatch { t_dim: 0, s_dim: 0 })
        );
    }

    #[test]
    fn two_paths_cancel() {
        // boundary of a triangle, b and c collapse onto a along ab and ac
        let k = SimplicialComplex::closure([simplex![0, 1], simplex![0, 2], simplex![1, 2]]);
        let v = DiscreteGradient::from_simplices(
            &k,
            &[(simplex![1], simplex![0, 1]), (simplex![2], simplex![0, 2])],
            &[simplex![0], simplex![1, 2]],
        )
        .unwrap();
        let bc = k.index_of(&simplex![1, 2]).unwrap();
        assert_eq!(trace_vpaths(&k, &v, 1, None), vec![vec![1, 3, 0]]);
        assert!(!separatrix_parity(&k, &v, bc, 0).unwrap());
        assert!(!parity_by_paths(&k, &v, bc, 0));
    }

    #[test]
    fn four_cycle_morse_complex() {
        let f = four_cycle();
        let v = compute_gradient(&f).unwrap();
        check_parities_against_paths(&f, &v);
        let m = build_morse_complex(&f, &v).unwrap();
        assert_eq!(m.cells().dims(), &[0, 0, 1, 1]);
        assert_eq!(m.homology_dims(), vec![1, 1]);
        // each edge reaches a and c once
        assert_eq!(m.cells().boundary_of(2), &[0, 1]);
        assert_eq!(m.cells().boundary_of(3), &[0, 1]);

        let t = morse_numbers(&m);
        assert_eq!(t.get(&grade![0, 0], 0), 1);
        assert_eq!(t.get(&grade![1, 1], 0), 1);
        assert_eq!(t.get(&grade![3, 2], 1), 1);
        assert_eq!(t.get(&grade![2, 3], 1), 1);
        assert_eq!(t.get(&grade![3, 3], 1), 0);
        assert_eq!(t.get(&grade![3, 3], 2), 0);
        assert_eq!(t.entries().count(), 4);
        assert_eq!(t.totals(), &[2, 2]);
    }

    #[test]
    fn two_triangle_morse_numbers() {
        let f = two_triangles();
        let v = compute_gradient(&f).unwrap();
        check_parities_against_paths(&f, &v);
        let m = build_morse_complex(&f, &v).unwrap();
        assert_eq!(m.homology_dims(), vec![1, 0, 0]);
        let t = morse_numbers(&m);
        assert_eq!(t.get(&grade![3, 3], 2), 1);
        assert_eq!(t.get(&grade![0, 0], 0), 1);
        assert_eq!(t.get(&grade![3, 2], 1), 1);
        assert_eq!(t.totals(), &[2, 2, 1]);
        // the critical triangle bounds both critical edges
        let k = f.complex();
        let bcd = k.index_of(&simplex![1, 2, 3]).unwrap();
        let mi = m.source().iter().position(|&c| c == bcd).unwrap();
        let faces: Vec<&Simplex> = m
            .cells()
            .boundary_of(mi)
            .iter()
            .map(|&e| k.simplex(m.source()[e]))
            .collect();
        assert_eq!(faces, vec![&simplex![1, 2], &simplex![2, 3]]);
    }

    #[test]
    fn trivial_gradient_gives_the_complex_back() {
        let f = two_triangles();
        let v = DiscreteGradient::trivial(f.complex());
        let m = build_morse_complex(&f, &v).unwrap();
        assert_eq!(m.cells(), f.cells());
        assert_eq!(m.grades(), f.grades());
    }

    #[test]
    fn invalid_or_inconsistent_fields_are_rejected() {
        let f = four_cycle();
        let k = f.complex();
        let cyclic = DiscreteGradient::from_simplices(
            k,
            &[
                (simplex![0], simplex![0, 1]),
                (simplex![1], simplex![1, 2]),
                (simplex![2], simplex![2, 3]),
                (simplex![3], simplex![0, 3]),
            ],
            &[],
        )
        .unwrap();
        assert!(matches!(
            build_morse_complex(&f, &cyclic),
            Err(MorseError::InvalidGradient(_))
        ));
        // a at (0,0) paired with ab at (3,2)
        let mut crit: Vec<Simplex> = k.simplices().to_vec();
        crit.retain(|s| s != &simplex![0] && s != &simplex![0, 1]);
        let inconsistent =
            DiscreteGradient::from_simplices(k, &[(simplex![0], simplex![0, 1])], &crit).unwrap();
        assert!(matches!(
            build_morse_complex(&f, &inconsistent),
            Err(MorseError::Inconsistent(_))
        ));
    }

    #[test]
    fn flow_of_critical_cell_is_its_unit_vector() {
        let f = four_cycle();
        let v = compute_gradient(&f).unwrap();
        let k = f.complex();
        let up = v.up_partner(k.len());
        let down = v.down_partner(k.len());
        let table = FlowTable::build(k, &v, &up, &down, 0).unwrap();
        assert_eq!(table.flow(0), &unit(2, 0));
        assert_eq!(table.flow(2), &unit(2, 1));
        // b flows along ab to a
        assert_eq!(table.flow(1), &unit(2, 0));
    }
}
