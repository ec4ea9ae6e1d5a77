use gclh_core::derived::{ext_graded, matlis_dual, tor};
use gclh_core::ideal::MonomialIdeal;
use gclh_core::linalg::{induced_map, kernel_basis, rank, solve, DenseMatrix, Subquotient};
use gclh_core::module::ModulePresentation;
use gclh_core::ring::{Monomial, Multidegree};
use gclh_core::window::Window;
use gclh_core::{oracle, Field, Scalar};
use proptest::prelude::*;

type F = Scalar;

/// Small entries make rank deficiency common.
fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix<F>> {
    prop::collection::vec(-2i64..=2, rows * cols)
        .prop_map(move |v| DenseMatrix::from_vec(rows, cols, v.into_iter().map(F::from_i64).collect()))
}

fn sized_matrix() -> impl Strategy<Value = DenseMatrix<F>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| matrix(r, c))
}

fn monomial_ideal(nvars: usize) -> impl Strategy<Value = MonomialIdeal> {
    prop::collection::vec(prop::collection::vec(0u32..3, nvars), 1..4).prop_map(move |gens| {
        let gens: Vec<Monomial> = gens.into_iter().filter(|g| g.iter().any(|e| *e > 0)).map(Monomial).collect();
        if gens.is_empty() {
            MonomialIdeal::variables(nvars, &[0])
        } else {
            MonomialIdeal::new(nvars, gens).unwrap()
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in sized_matrix()) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.cols(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(rank(&k), k.cols());
        prop_assert_eq!(rank(&m.transpose()), rank(&m));
    }

    #[test]
    fn solve_recovers_consistent_systems(m in sized_matrix(), seed in prop::collection::vec(-3i64..=3, 7)) {
        let x: Vec<F> = seed[..m.cols()].iter().map(|v| F::from_i64(*v)).collect();
        let b = m.mul_vec(&x);
        let y = solve(&m, &b).expect("consistent system");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn induced_maps_compose(
        n in 1usize..5,
        seed in prop::collection::vec(-2i64..=2, 80),
        nb in 0usize..3,
    ) {
        let take = |off: usize, r: usize, c: usize| {
            DenseMatrix::from_vec(r, c, seed[off..off + r * c].iter().map(|v| F::from_i64(*v)).collect())
        };
        let f = take(0, n, n);
        let g = take(16, n, n);
        let b = take(32, n, nb);
        let extra = take(48, n, 1);
        let id = DenseMatrix::identity(n);
        let v = Subquotient::new(n, &id, &b).unwrap();
        let fb = f.mul(&b).hstack(&extra);
        let w = Subquotient::new(n, &id, &fb).unwrap();
        let u = Subquotient::new(n, &id, &g.mul(&fb)).unwrap();
        let direct = induced_map(&g.mul(&f), &v, &u).unwrap();
        let composed = induced_map(&g, &w, &u).unwrap().mul(&induced_map(&f, &v, &w).unwrap());
        prop_assert_eq!(direct, composed);
    }

    #[test]
    fn ideal_powers_multiply(i in monomial_ideal(2), a in 1u32..3, b in 1u32..3) {
        let lhs = i.power(a).product(&i.power(b));
        let rhs = i.power(a + b);
        for g in lhs.gens() {
            prop_assert!(rhs.contains(g));
        }
        for g in rhs.gens() {
            prop_assert!(lhs.contains(g));
        }
    }

    #[test]
    fn quotient_towers_grow(i in monomial_ideal(2), s in 1u32..4) {
        // R/I^{s+1} -> R/I^s is onto, so strand dimensions can only grow with s
        let r = ModulePresentation::<F>::ring(2);
        let w = Window::cube(2, 0, 4);
        let small = r.quotient_by_ideal(&i, s).hilbert_table(&w);
        let big = r.quotient_by_ideal(&i, s + 1).hilbert_table(&w);
        for a in w.points() {
            prop_assert!(small.get(&a) <= big.get(&a));
        }
    }

    #[test]
    fn shifting_translates_tables(i in monomial_ideal(2), dx in -2i64..=2, dy in -2i64..=2) {
        let m = ModulePresentation::<F>::cyclic(&i);
        let d = Multidegree(vec![dx, dy]);
        let shifted = m.shifted(&d);
        for a in Window::cube(2, -1, 3).points() {
            let back = Multidegree(vec![a.0[0] - dx, a.0[1] - dy]);
            prop_assert_eq!(shifted.strand_dim(&a), m.strand_dim(&back));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn duality_matches_dimensions(j1 in monomial_ideal(2), j2 in monomial_ideal(2), i in 0i32..=2) {
        let n = ModulePresentation::<F>::cyclic(&j1);
        let m = ModulePresentation::<F>::cyclic(&j2);
        let w = Window::cube(2, -3, 3);
        let e = ext_graded(&n, matlis_dual(&m), i, &w).unwrap();
        let t = tor(&n, &m, i, &w.mirror()).unwrap();
        prop_assert_eq!(e, t.mirror());
    }

    #[test]
    fn engine_agrees_with_oracle(j1 in monomial_ideal(2), j2 in monomial_ideal(2), i in 0usize..=2) {
        let n = ModulePresentation::<F>::cyclic(&j1);
        let m = ModulePresentation::<F>::cyclic(&j2);
        let (rn, rm) = (oracle::RawModule::from_presentation(&n), oracle::RawModule::from_presentation(&m));
        let w = Window::cube(2, -2, 2);
        prop_assert_eq!(gclh_core::derived::ext(&n, &m, i as i32, &w).unwrap(), oracle::ext(&rn, &rm, i, &w));
        prop_assert_eq!(tor(&n, &m, i as i32, &w).unwrap(), oracle::tor(&rn, &rm, i, &w));
        let xs: Vec<Vec<u32>> = j1.gens().iter().map(|g| g.0.clone()).collect();
        prop_assert_eq!(
            gclh_core::cech::local_cohomology(&j1, &m, i as i32, &w).unwrap(),
            oracle::local_cohomology(&xs, &rm, i, &w)
        );
    }
}
