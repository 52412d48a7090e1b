use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qd_core::algebra::{h_transform, is_quasi_palindromial, r1_preimage, r_transform, reciprocal};
use qd_core::blocks::{annihilated_by, block_l, factor_diag_inverse, factor_l, FactorMode};
use qd_core::decompose::{construct, decide, DecompKind};
use qd_core::gen;
use qd_core::infinite::{appendix_operator, jordan_graph_unipotent_pair, Cell, JordanGraph};
use qd_core::kaplansky::kaplansky_invariants;
use qd_core::linalg::invariant_factors;
use qd_core::oracle::oracle_set;
use qd_core::{Field, Mat, Poly};

fn prime_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![Field::Prime(2), Field::Prime(3), Field::Prime(5), Field::Prime(7)])
}

fn any_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![Field::Prime(2), Field::Prime(3), Field::Prime(5), Field::Q])
}

fn monic(f: Field, max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-6i64..=6, 0..=max_deg).prop_map(move |mut cs| {
        cs.push(1);
        Poly::from_ints(f, &cs)
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn r_transform_round_trip((f, p) in prime_field().prop_flat_map(|f| (Just(f), monic(f, 5)))) {
        let r = r_transform(&p, &f.one()).unwrap();
        prop_assert_eq!(r.deg(), 2 * p.deg());
        prop_assert!(is_quasi_palindromial(&r).unwrap());
        prop_assert_eq!(r1_preimage(&r).unwrap(), p);
    }

    #[test]
    fn r_transform_multiplicative(
        (f, p, q) in any_field().prop_flat_map(|f| (Just(f), monic(f, 3), monic(f, 3))),
        d in 1i64..5,
    ) {
        let delta = f.int(d);
        prop_assume!(!delta.is_zero());
        let lhs = r_transform(&(&p * &q), &delta).unwrap();
        let rhs = &r_transform(&p, &delta).unwrap() * &r_transform(&q, &delta).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sharp_and_h_are_invertible(
        (f, p) in any_field().prop_flat_map(|f| (Just(f), monic(f, 4))),
        l in 1i64..7,
    ) {
        let lam = f.int(l);
        prop_assume!(!lam.is_zero());
        let back = h_transform(&h_transform(&p, &lam).unwrap(), &lam.inv().unwrap()).unwrap();
        prop_assert_eq!(back, p.clone());
        if !p.coeff(0).is_zero() {
            prop_assert_eq!(reciprocal(&reciprocal(&p).unwrap()).unwrap(), p);
        }
    }

    #[test]
    fn invariants_are_similarity_invariant(f in any_field(), seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let a = if f == Field::Q { gen::yes_instance(&mut r, f, DecompKind::SquareZeroSum, n) } else { gen::matrix(&mut r, f, n, n) };
        let b = gen::conjugate(&mut r, &a);
        prop_assert_eq!(invariant_factors(&a).unwrap(), invariant_factors(&b).unwrap());
        for kind in [DecompKind::SquareZeroSum, DecompKind::InvolutionProduct, DecompKind::Unipotent2Product] {
            if kind != DecompKind::SquareZeroSum && !a.is_invertible() {
                continue;
            }
            prop_assert_eq!(decide(kind, &a).unwrap().holds, decide(kind, &b).unwrap().holds);
        }
        let t = Poly::t(f);
        prop_assert_eq!(kaplansky_invariants(&a, &t).unwrap(), kaplansky_invariants(&b, &t).unwrap());
    }

    #[test]
    fn constructed_witnesses_check(f in any_field(), seed in any::<u64>(), k in 0usize..3) {
        let kind = [DecompKind::SquareZeroSum, DecompKind::InvolutionProduct, DecompKind::Unipotent2Product][k];
        let a = gen::yes_instance(&mut rng(seed), f, kind, 6);
        let w = construct(kind, &a).unwrap();
        prop_assert!(w.verified);
        prop_assert!(kind.is_factor(&w.first) && kind.is_factor(&w.second));
        prop_assert_eq!(kind.combine(&w.first, &w.second), a);
    }

    #[test]
    fn block_factorizations(f in any_field(), seed in any::<u64>(), n in 1usize..4, eps in prop::sample::select(vec![1i64, -1])) {
        let mut r = rng(seed);
        let a = gen::invertible(&mut r, f, n);
        let (x, y) = factor_l(&a, eps).unwrap();
        prop_assert_eq!(&x * &y, block_l(&a));
        prop_assert!(annihilated_by(&x, eps) && annihilated_by(&y, eps));
        let (p, q) = factor_diag_inverse(&a, FactorMode::Involutions).unwrap();
        prop_assert_eq!(&p * &q, Mat::block_diag(f, &[a.clone(), a.inverse().unwrap()]));
        prop_assert!(annihilated_by(&p, -1) && annihilated_by(&q, -1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn windows_are_coherent(small in 1usize..20, extra in 0usize..30) {
        let op = appendix_operator(Field::Q);
        let big = op.window(small + extra);
        prop_assert_eq!(big.submatrix(0, 0, small, small), op.window(small));
    }

    #[test]
    fn memo_is_invisible(order in prop::collection::vec(0usize..60, 1..40)) {
        let g = JordanGraph::from_cells(Field::Prime(3), &[Cell::Finite(2), Cell::Infinite, Cell::Finite(4)]).unwrap();
        let pair = jordan_graph_unipotent_pair(&g);
        let warm = pair.product.clone().unwrap();
        for &j in &order {
            warm.column(j);
        }
        let cold = jordan_graph_unipotent_pair(&g).product.unwrap();
        for j in 0..60 {
            prop_assert_eq!(warm.column(j), cold.column(j));
        }
        prop_assert_eq!(warm.window(60), cold.window(60));
    }

    #[test]
    fn oracle_classes_are_conjugation_closed(seed in any::<u64>(), k in 0usize..3) {
        let kind = [DecompKind::SquareZeroSum, DecompKind::InvolutionProduct, DecompKind::Unipotent2Product][k];
        let f = Field::Prime(3);
        let set = oracle_set(f, 2, kind).unwrap();
        let mut r = rng(seed);
        let s = gen::invertible(&mut r, f, 2);
        let si = s.inverse().unwrap();
        for m in &set {
            prop_assert!(set.contains(&(&(&s * m) * &si)));
        }
    }
}
