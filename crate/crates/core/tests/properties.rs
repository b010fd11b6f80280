use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thh_core::exact::{cokernel, smith_normal_form, CoefficientRing, IntegerMatrix};
use thh_core::graded::{poly, realize, FreeRealization, GradedRingPresentation};
use thh_core::homological::{
    bockstein_tower, exponents_from_differentials, iterated_tor, random_small_complex, tor, AugModule, AugmentedAlgebra,
    Ground, PeriodicTag, TorMethod,
};
use thh_core::repro::{tor_factors, Factor, TensorPattern};

fn matrix() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-12i64..12, r * c)
            .prop_map(move |v| IntegerMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j])))
    })
}

fn truncated_presentation(p: u64, gens: &[(&str, i64, u32)]) -> GradedRingPresentation {
    let g: Vec<(&str, i64)> = gens.iter().map(|&(n, d, _)| (n, d)).collect();
    let rels = gens.iter().map(|&(n, _, h)| poly(&[(1, &[(n, h)])])).collect();
    GradedRingPresentation::new(CoefficientRing::PrimeField(p), &g, rels)
}

fn tor_dims(p: u64, gens: &[(&str, i64, u32)], max: i64) -> (Vec<usize>, bool) {
    let r = realize(&truncated_presentation(p, gens), max).unwrap();
    let a = Arc::new(FreeRealization::new(r).unwrap());
    let stage = iterated_tor(a, 1, max as usize, max).unwrap().remove(0);
    let laws = stage.is_graded_commutative() && stage.is_unital() && stage.is_associative();
    (stage.total_dimensions(), laws)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn smith_form_is_a_factorization(m in matrix()) {
        let f = smith_normal_form(&m);
        prop_assert_eq!(f.u.mul(&m).unwrap().mul(&f.v).unwrap(), f.d.clone());
        prop_assert_eq!(f.u.mul(&f.u_inv).unwrap(), IntegerMatrix::identity(m.rows()));
        prop_assert_eq!(f.v.mul(&f.v_inv).unwrap(), IntegerMatrix::identity(m.cols()));
        let inv = f.invariant_factors();
        for w in inv.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                prop_assert!(i == j || f.d[(i, j)] == BigInt::from(0));
            }
        }
    }

    #[test]
    fn cokernel_order_is_the_determinant(m in matrix()) {
        if m.rows() == m.cols() {
            let det = m.determinant().unwrap();
            let order = cokernel(&m).order();
            if det == BigInt::from(0) {
                prop_assert_eq!(order, None);
            } else {
                prop_assert_eq!(order, Some(if det < BigInt::from(0) { -det } else { det }));
            }
        }
    }

    #[test]
    fn bockstein_accounting(seed in any::<u64>(), pi in 0usize..3) {
        let p = [2u64, 3, 5][pi];
        let c = random_small_complex(&mut ChaCha8Rng::seed_from_u64(seed), p);
        let tower = bockstein_tower(&c, p).unwrap();
        prop_assert!(tower.accounting_holds());
        for s in 0..c.max_s() {
            let direct = tower.cells.get(&(s, 0)).map(|c| c.exponents.clone()).unwrap_or_default();
            prop_assert_eq!(direct, exponents_from_differentials(&c, p, s, 0));
        }
    }

    #[test]
    fn bar_agrees_with_periodic_resolution(pi in 0usize..3, half in 1i64..3, height in 2u32..5, local in any::<bool>()) {
        let p = [2u64, 3, 5][pi];
        let ring = if local { CoefficientRing::IntegersLocalizedAt(p) } else { CoefficientRing::PrimeField(p) };
        let (s, t) = (5, 14);
        let a = Arc::new(AugmentedAlgebra::truncated(Ground::point(ring), 2 * half, height, t).unwrap());
        let k = AugModule::ground();
        let bar = tor(a.clone(), &k, &k, s, t, TorMethod::Bar).unwrap();
        let res = tor(a, &k, &k, s, t, TorMethod::Resolution(PeriodicTag::PeriodicTruncated)).unwrap();
        for i in 0..=s {
            for j in 0..=t {
                prop_assert_eq!(bar.get(i, j), res.get(i, j), "cell ({}, {})", i, j);
            }
        }
    }

    #[test]
    fn exterior_bar_agrees_with_resolution(pi in 0usize..3, degree in prop_oneof![Just(1i64), Just(3), Just(5)]) {
        let p = [2u64, 3, 5][pi];
        let (s, t) = (5, 16);
        let a = Arc::new(AugmentedAlgebra::exterior(Ground::point(CoefficientRing::IntegersLocalizedAt(p)), degree, "e", t).unwrap());
        let k = AugModule::ground();
        let bar = tor(a.clone(), &k, &k, s, t, TorMethod::Bar).unwrap();
        let res = tor(a, &k, &k, s, t, TorMethod::Resolution(PeriodicTag::PeriodicExterior)).unwrap();
        for i in 0..=s {
            for j in 0..=t {
                prop_assert_eq!(bar.get(i, j), res.get(i, j), "cell ({}, {})", i, j);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn tor_of_truncated_algebras(pi in 0usize..2, half in 1i64..3, height in 2u32..4) {
        let p = [2u64, 3][pi];
        let max = 14;
        let (dims, laws) = tor_dims(p, &[("x", 2 * half, height)], max);
        prop_assert!(laws);
        let f = CoefficientRing::PrimeField(p);
        let expected = TensorPattern::new(f, tor_factors(&[Factor::truncated("x", 2 * half, height)], p, max)).factor_ranks(max);
        prop_assert_eq!(&dims[..=max as usize], &expected[..]);
    }

    #[test]
    fn kunneth(pi in 0usize..2, h1 in 2u32..4, h2 in 2u32..4) {
        let p = [2u64, 3][pi];
        let max = 12;
        let (a, _) = tor_dims(p, &[("x", 2, h1)], max);
        let (b, _) = tor_dims(p, &[("y", 4, h2)], max);
        let (ab, laws) = tor_dims(p, &[("x", 2, h1), ("y", 4, h2)], max);
        prop_assert!(laws);
        for n in 0..=max as usize {
            let conv: usize = (0..=n).map(|i| a[i] * b[n - i]).sum();
            prop_assert_eq!(ab[n], conv, "degree {}", n);
        }
    }
}
