//! Seeded random simplicial complexes with component-wise injective grades.

use crate::complex::{Simplex, SimplicialComplex};
use crate::filtration::{Filtration, MultiGrade, VertexFunction};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Shape of the random instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomShape {
    pub max_vertices: usize,
    /// Dimension of the complex; at least one simplex reaches it.
    pub dim: usize,
    pub params: usize,
    /// Number of maximal simplices drawn, at most.
    pub max_tops: usize,
}

impl RandomShape {
    pub fn surface_like(params: usize) -> Self {
        Self {
            max_vertices: 12,
            dim: 2,
            params,
            max_tops: 10,
        }
    }

    pub fn solid(params: usize) -> Self {
        Self {
            max_vertices: 10,
            dim: 3,
            params,
            max_tops: 6,
        }
    }
}

/// The same seed and shape always give the same filtration.
pub fn random_filtration(seed: u64, shape: RandomShape) -> Filtration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(shape.dim + 1..=shape.max_vertices.max(shape.dim + 1));
    let tops = rng.random_range(1..=shape.max_tops.max(1));
    let mut simplices = Vec::with_capacity(tops + n);
    for t in 0..tops {
        let d = if t == 0 {
            shape.dim
        } else {
            rng.random_range(1..=shape.dim)
        };
        let vs = sample(&mut rng, n, d + 1).into_iter().map(|v| v as u32);
        simplices.push(Simplex::new(vs).expect("distinct vertices"));
    }
    simplices.extend((0..n as u32).map(Simplex::vertex));
    let complex = SimplicialComplex::closure(simplices);

    // per axis, distinct values spread over a range larger than n
    let axes: Vec<Vec<u64>> = (0..shape.params)
        .map(|_| {
            sample(&mut rng, 4 * n, n)
                .into_iter()
                .map(|x| x as u64)
                .collect()
        })
        .collect();
    let f0 = VertexFunction::new(
        shape.params,
        (0..n).map(|v| {
            (
                v as u32,
                MultiGrade::new(axes.iter().map(|a| a[v]).collect::<Vec<_>>()),
            )
        }),
    )
    .expect("one value per vertex");
    Filtration::extend_max(complex, f0).expect("injective by construction")
}
