mod common;

use common::{xi_oracle, DenseComplex};
use morsegrad::invariants::relative_dims;
use morsegrad::random::{random_filtration, RandomShape};
use morsegrad::{
    build_modules, check_consistency, compute_gradient, validate_gradient, Graded, Prepared,
};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = RandomShape> {
    (4usize..9, 1usize..4, 1usize..3, 1usize..7).prop_map(
        |(max_vertices, dim, params, max_tops)| RandomShape {
            max_vertices,
            dim,
            params,
            max_tops,
        },
    )
}

/// Homology dimensions up to trailing zeros; M may lack the top degrees of K.
fn trim(mut dims: Vec<usize>) -> Vec<usize> {
    while dims.last() == Some(&0) {
        dims.pop();
    }
    dims
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn computed_field_is_an_acyclic_consistent_gradient(seed in any::<u64>(), s in shape()) {
        let f = random_filtration(seed, s);
        let v = compute_gradient(&f).unwrap();
        let verdict = validate_gradient(f.complex(), &v);
        prop_assert!(verdict.valid, "{:?}", verdict.issues);
        prop_assert!(check_consistency(&f, &v).consistent);
    }

    #[test]
    fn morse_complex_keeps_homology_at_every_grade(seed in any::<u64>(), s in shape()) {
        let f = random_filtration(seed, s);
        let p = Prepared::new(&f, None).unwrap();
        let k = p.filtration();
        let m = p.morse();
        prop_assert_eq!(trim(m.homology_dims()), trim(k.cells().homology_dims()));
        for u in p.compressed_grid().grades() {
            prop_assert_eq!(
                trim(k.cells().subcomplex_homology_dims(&k.sublevel_mask(&u))),
                trim(m.cells().subcomplex_homology_dims(&m.sublevel_mask(&u))),
                "sublevel at {}", u
            );
            prop_assert_eq!(trim(relative_dims(k, &u)), trim(relative_dims(m, &u)), "relative at {}", u);
        }
    }

    #[test]
    fn morse_numbers_bound_relative_homology(seed in any::<u64>(), s in shape()) {
        let f = random_filtration(seed, s);
        let p = Prepared::new(&f, None).unwrap();
        let k = p.filtration();
        for u in p.compressed_grid().grades() {
            for (q, r) in relative_dims(k, &u).into_iter().enumerate() {
                prop_assert!(p.morse_numbers().get(&u, q) >= r);
            }
        }
    }

    #[test]
    fn modules_commute_and_share_rank_invariants(seed in any::<u64>(), s in shape()) {
        let f = random_filtration(seed, s);
        let p = Prepared::new(&f, None).unwrap();
        let grid = p.compressed_grid();
        let mk = build_modules(p.filtration(), &grid);
        let mm = build_modules(p.morse(), &grid);
        for (a, b) in mk.iter().zip(&mm) {
            prop_assert!(a.check_commutativity().is_ok());
            prop_assert!(b.check_commutativity().is_ok());
            for u in a.grades() {
                for w in a.grades().iter().filter(|w| u.leq(w)) {
                    prop_assert_eq!(a.map(u, w).unwrap().rank(), b.map(u, w).unwrap().rank());
                    prop_assert_eq!(a.map(u, w).unwrap(), a.direct_map(u, w).unwrap());
                }
            }
        }
    }

    #[test]
    fn betti_tables_match_the_chain_oracle(seed in any::<u64>(), s in shape()) {
        let f = random_filtration(seed, RandomShape { params: s.params.min(2), ..s });
        let p = Prepared::new(&f, None).unwrap();
        let t = p.betti_tables().unwrap();
        let dense = DenseComplex::of(p.filtration());
        let grid = p.compressed_grid();
        for u in grid.grades() {
            for q in 0..dense.degrees() {
                prop_assert_eq!(t.get(&u, q), xi_oracle(&dense, grid.axes(), &u, q), "{} q={}", u, q);
            }
        }
    }

    #[test]
    fn lower_bound_always_holds_and_upper_when_perfect(seed in any::<u64>(), s in shape()) {
        let f = random_filtration(seed, RandomShape { params: 2, ..s });
        let p = Prepared::new(&f, None).unwrap();
        let r = morsegrad::analysis::inequalities(&p, true).unwrap();
        prop_assert!(r.all_hold);
        for row in r.bounds.unwrap() {
            prop_assert!(row.morse as i64 >= row.lower);
            prop_assert_eq!(row.upper_holds.is_some(), r.relative_perfect);
            if r.relative_perfect {
                prop_assert!(row.morse <= row.upper);
            }
        }
    }
}
