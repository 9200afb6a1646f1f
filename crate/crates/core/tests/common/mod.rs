//! Fixtures and independent oracles for the integration tests.
//!
//! The oracles work on dense 0/1 matrices built straight from the vertex
//! lists of the simplices and share no code with the library's linear
//! algebra or homology.

#![allow(dead_code)]

use morsegrad::{Filtration, MultiGrade, Simplex};
use std::collections::HashMap;

pub fn data(name: &str) -> String {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn load(name: &str) -> Filtration {
    morsegrad::parse_input(&data(name))
        .unwrap()
        .filtration(false)
        .unwrap()
        .0
}

/// Dense vectors over F2.
pub type Dense = Vec<u8>;

/// Rank of a set of vectors by Gaussian elimination.
pub fn rank(vectors: &[Dense]) -> usize {
    let mut rows: Vec<Dense> = vectors.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] == 1 {
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Null space of the matrix whose columns are `columns` (each of length `height`).
pub fn null_space(columns: &[Dense], height: usize) -> Vec<Dense> {
    let n = columns.len();
    // reduce the rows of the matrix
    let mut m: Vec<Dense> = (0..height)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i][col] == 1) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][col] == 1 {
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u8; n];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = m[row][f];
            }
            v
        })
        .collect()
}

/// Basis of the intersection of two subspaces of the same ambient space.
pub fn intersect(a: &[Dense], b: &[Dense], len: usize) -> Vec<Dense> {
    let cols: Vec<Dense> = a.iter().chain(b).cloned().collect();
    let mut out: Vec<Dense> = null_space(&cols, len)
        .into_iter()
        .map(|k| {
            let mut v = vec![0u8; len];
            for (i, vec) in a.iter().enumerate() {
                if k[i] == 1 {
                    for (x, y) in v.iter_mut().zip(vec) {
                        *x ^= y;
                    }
                }
            }
            v
        })
        .collect();
    out.retain(|v| v.iter().any(|&x| x == 1));
    out
}

/// A simplicial complex given by its simplices and grades, with the chains
/// of each degree indexed by position in a per-degree list.
pub struct DenseComplex {
    pub by_dim: Vec<Vec<Simplex>>,
    pub grades: Vec<HashMap<Simplex, MultiGrade>>,
    pub params: usize,
}

impl DenseComplex {
    pub fn of(f: &Filtration) -> Self {
        let top = f.complex().dim().map_or(0, |d| d + 1);
        let mut by_dim = vec![Vec::new(); top];
        let mut grades = vec![HashMap::new(); top];
        for (i, s) in f.complex().simplices().iter().enumerate() {
            by_dim[s.dim()].push(s.clone());
            grades[s.dim()].insert(s.clone(), f.grade(i).clone());
        }
        Self {
            by_dim,
            grades,
            params: f.params(),
        }
    }

    pub fn degrees(&self) -> usize {
        self.by_dim.len()
    }

    fn len(&self, q: usize) -> usize {
        self.by_dim.get(q).map_or(0, Vec::len)
    }

    /// Boundary of a `q`-simplex as a dense `(q-1)`-chain.
    fn boundary(&self, s: &Simplex) -> Dense {
        let q = s.dim();
        let mut v = vec![0u8; self.len(q - 1)];
        for i in 0..=q {
            let face: Vec<u32> = s
                .vertices()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &x)| x)
                .collect();
            let pos = self.by_dim[q - 1]
                .iter()
                .position(|t| t.vertices() == face.as_slice())
                .expect("face present");
            v[pos] ^= 1;
        }
        v
    }

    pub fn in_sublevel(&self, s: &Simplex, u: &MultiGrade) -> bool {
        self.grades[s.dim()][s].leq(u)
    }

    /// In the union of the sublevel sets at `u - e_i`.
    pub fn in_union_below(&self, s: &Simplex, u: &MultiGrade) -> bool {
        let g = &self.grades[s.dim()][s];
        (0..self.params).any(|i| {
            g.get(i) < u.get(i) && (0..self.params).all(|j| j == i || g.get(j) <= u.get(j))
        })
    }

    /// `dim H_q(A, B)` for the subcomplexes given by the two predicates.
    pub fn relative_dim(
        &self,
        q: usize,
        in_a: &dyn Fn(&Simplex) -> bool,
        in_b: &dyn Fn(&Simplex) -> bool,
    ) -> usize {
        let keep = |s: &Simplex| in_a(s) && !in_b(s);
        let chains = self
            .by_dim
            .get(q)
            .map_or(0, |c| c.iter().filter(|s| keep(s)).count());
        // quotient boundary: drop rows of cells in B
        let rank_of = |d: usize| -> usize {
            if d == 0 || d >= self.degrees() {
                return 0;
            }
            let cols: Vec<Dense> = self.by_dim[d]
                .iter()
                .filter(|s| keep(s))
                .map(|s| {
                    let mut b = self.boundary(s);
                    for (k, t) in self.by_dim[d - 1].iter().enumerate() {
                        if !keep(t) {
                            b[k] = 0;
                        }
                    }
                    b
                })
                .collect();
            rank(&cols)
        };
        chains - rank_of(q) - rank_of(q + 1)
    }

    /// Cycles of degree `q` in the sublevel set at `u`, as chains over all `q`-simplices.
    fn cycles(&self, q: usize, u: Option<&MultiGrade>) -> Vec<Dense> {
        let Some(u) = u else { return Vec::new() };
        if q >= self.degrees() {
            return Vec::new();
        }
        let idx: Vec<usize> = (0..self.len(q))
            .filter(|&i| self.in_sublevel(&self.by_dim[q][i], u))
            .collect();
        let height = if q == 0 { 0 } else { self.len(q - 1) };
        let cols: Vec<Dense> = idx
            .iter()
            .map(|&i| {
                if q == 0 {
                    Vec::new()
                } else {
                    self.boundary(&self.by_dim[q][i])
                }
            })
            .collect();
        null_space(&cols, height)
            .into_iter()
            .map(|k| {
                let mut z = vec![0u8; self.len(q)];
                for (j, &i) in idx.iter().enumerate() {
                    z[i] = k[j];
                }
                z
            })
            .collect()
    }

    /// Boundaries of degree `q` in the sublevel set at `u`.
    fn boundaries(&self, q: usize, u: Option<&MultiGrade>) -> Vec<Dense> {
        let Some(u) = u else { return Vec::new() };
        if q + 1 >= self.degrees() {
            return Vec::new();
        }
        self.by_dim[q + 1]
            .iter()
            .filter(|s| self.in_sublevel(s, u))
            .map(|s| self.boundary(s))
            .collect()
    }

    fn homology_dim(&self, q: usize, u: Option<&MultiGrade>) -> usize {
        rank(&self.cycles(q, u)) - rank(&self.boundaries(q, u))
    }
}

fn span_dim(parts: &[&[Dense]]) -> usize {
    let all: Vec<Dense> = parts.iter().flat_map(|p| p.iter().cloned()).collect();
    rank(&all)
}

fn grid_pred(axes: &[Vec<u64>], u: &MultiGrade, axis: usize) -> Option<MultiGrade> {
    let k = axes[axis].binary_search(&u.get(axis)).ok()?;
    if k == 0 {
        return None;
    }
    let mut c = u.coords().to_vec();
    c[axis] = axes[axis][k - 1];
    Some(MultiGrade::new(c))
}

/// `(ξ0, ξ1, ξ2)` at `u` in degree `q` from subspaces of chains:
/// births are cycles at `u` outside the cycles from below plus boundaries,
/// `ξ2` counts classes at `z` that are boundaries both at `x` and at `y`,
/// and `ξ1` follows from the Euler characteristic of the Koszul complex.
pub fn xi_oracle(c: &DenseComplex, axes: &[Vec<u64>], u: &MultiGrade, q: usize) -> [usize; 3] {
    if c.len(q) == 0 {
        return [0; 3];
    }
    let len = c.len(q);
    match c.params {
        1 => {
            let p = grid_pred(axes, u, 0);
            let zu = c.cycles(q, Some(u));
            let bu = c.boundaries(q, Some(u));
            let zp = c.cycles(q, p.as_ref());
            let bp = c.boundaries(q, p.as_ref());
            let xi0 = rank(&zu) - span_dim(&[&zp, &bu]);
            let dead = intersect(&zp, &bu, len);
            let xi1 = span_dim(&[&dead, &bp]) - rank(&bp);
            [xi0, xi1, 0]
        }
        2 => {
            let x = grid_pred(axes, u, 0);
            let y = grid_pred(axes, u, 1);
            let z = x.as_ref().and_then(|x| grid_pred(axes, x, 1));
            let zu = c.cycles(q, Some(u));
            let bu = c.boundaries(q, Some(u));
            let zx = c.cycles(q, x.as_ref());
            let zy = c.cycles(q, y.as_ref());
            let xi0 = rank(&zu) - span_dim(&[&zx, &zy, &bu]);

            let zz = c.cycles(q, z.as_ref());
            let bz = c.boundaries(q, z.as_ref());
            let bx = c.boundaries(q, x.as_ref());
            let by = c.boundaries(q, y.as_ref());
            let both = intersect(&intersect(&zz, &bx, len), &by, len);
            let xi2 = span_dim(&[&both, &bz]) - rank(&bz);

            let euler = c.homology_dim(q, Some(u)) as i64
                - c.homology_dim(q, x.as_ref()) as i64
                - c.homology_dim(q, y.as_ref()) as i64
                + c.homology_dim(q, z.as_ref()) as i64;
            let xi1 = xi0 as i64 + xi2 as i64 - euler;
            assert!(xi1 >= 0, "negative ξ1 at {u}");
            [xi0, xi1 as usize, xi2]
        }
        n => panic!("no oracle for {n} parameters"),
    }
}
