//! Property tests for the structural invariants of every layer.

use lr_core::adjoints::{lie_adjoint, Variant};
use lr_core::algebras::{ARing, AlgebraPresentation};
use lr_core::exactla::{preimage_pullback, Matrix, Scalar, Subspace};
use lr_core::fixtures;
use lr_core::liecore::{AnchoredLieAlgebra, LieAlgebra};
use lr_core::pbw::{
    enveloping_suite, ring_suite, verify_cm_iso, RewriteStrategy, SmashAlgebra, SuiteOptions, UniversalEnveloping,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::new(n, d))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(scalar(), n)
}

fn matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(scalar(), r * c).prop_map(move |e| Matrix::from_vec(r, c, e).unwrap())
    })
}

fn spanning(ambient: usize, max: usize) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    prop::collection::vec(vector(ambient), 0..=max)
}

/// Small commutative and non-commutative algebras, by index.
fn algebra(i: usize) -> AlgebraPresentation {
    match i {
        0 => AlgebraPresentation::ground_field(),
        1..=4 => AlgebraPresentation::truncated_polynomial(i + 1),
        5 => AlgebraPresentation::split(2),
        6 => AlgebraPresentation::split(3),
        _ => AlgebraPresentation::matrix_algebra(2),
    }
}

fn der_a3() -> AnchoredLieAlgebra {
    AnchoredLieAlgebra::derivations(&fixtures::truncated(3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalars_are_reduced_and_form_a_field(a in scalar(), b in scalar(), c in scalar(), k in 1i64..9) {
        prop_assert!(a.denom() > &0.into());
        let scaled = Scalar::from_bigints(a.numer() * k, a.denom() * k).unwrap();
        prop_assert_eq!(scaled.numer(), a.numer());
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.recip().unwrap()).is_one());
        }
    }

    #[test]
    fn nullspace_vectors_are_killed(m in matrix(6)) {
        let ns = m.nullspace();
        prop_assert_eq!(ns.dim(), m.cols() - m.rank());
        for v in ns.basis() {
            prop_assert!(m.apply(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn grassmann_dimension_formula(n in 1usize..=8, s1 in spanning(8, 6), s2 in spanning(8, 6)) {
        let cut = |s: Vec<Vec<Scalar>>| s.into_iter().map(|v| v[..n].to_vec()).collect::<Vec<_>>();
        let u = Subspace::from_spanning(n, cut(s1)).unwrap();
        let w = Subspace::from_spanning(n, cut(s2)).unwrap();
        let meet = u.intersect(&w).unwrap();
        let join = u.sum(&w).unwrap();
        prop_assert_eq!(u.dim() + w.dim(), meet.dim() + join.dim());
        prop_assert!(meet.is_subspace_of(&u).unwrap() && meet.is_subspace_of(&w).unwrap());
    }

    #[test]
    fn canonical_form_is_independent_of_spanning_set(
        s in spanning(5, 4),
        mix in prop::collection::vec(scalar(), 16),
    ) {
        let u = Subspace::from_spanning(5, s.clone()).unwrap();
        // each new vector is v_i plus a combination of the others: same span
        let mut t: Vec<Vec<Scalar>> = Vec::new();
        for (i, v) in s.iter().enumerate() {
            let mut w = v.clone();
            for (j, other) in s.iter().enumerate().filter(|&(j, _)| j < i) {
                let c = &mix[(i * 4 + j) % mix.len()];
                for k in 0..5 {
                    w[k] += &(c * &other[k]);
                }
            }
            t.push(w);
        }
        t.reverse();
        t.extend(s.iter().take(1).cloned());
        let w = Subspace::from_spanning(5, t).unwrap();
        prop_assert_eq!(u, w);
    }

    #[test]
    fn pullback_projections_commute(f in matrix(4), cols in 1usize..=4, entries in prop::collection::vec(scalar(), 16)) {
        let g = Matrix::from_fn(f.rows(), cols, |i, j| entries[(i * 4 + j) % 16].clone());
        let p = preimage_pullback(&f, &g).unwrap();
        for v in p.basis() {
            let (x, y) = v.split_at(f.cols());
            prop_assert_eq!(f.apply(x), g.apply(y));
        }
        let joint = Matrix::hstack(&[&f, &g.neg()]).unwrap();
        prop_assert_eq!(p.dim(), joint.cols() - joint.rank());
    }

    #[test]
    fn derivations_close_and_kill_the_unit(i in 0usize..8, j in 0usize..4) {
        let a = if j == 0 { algebra(i) } else { algebra(i).tensor(&algebra(j)).unwrap() };
        let ders = a.derivation_space();
        for x in 0..ders.dim() {
            let dx = ders.basis_derivation(x);
            prop_assert!(dx.apply(a.unit()).iter().all(Scalar::is_zero));
            prop_assert!(a.leibniz_violations(&dx).is_empty());
            for y in 0..ders.dim() {
                let c = dx.commutator(&ders.basis_derivation(y));
                prop_assert!(ders.coordinates(&c).is_some());
            }
        }
    }

    #[test]
    fn opposite_tensor_and_enveloping(i in 0usize..8, j in 0usize..8) {
        let (a, b) = (algebra(i), algebra(j));
        let back = a.opposite().unwrap().opposite().unwrap();
        prop_assert_eq!(back.structure_constants(), a.structure_constants());
        prop_assert_eq!(a.tensor(&b).unwrap().dim(), a.dim() * b.dim());
        prop_assert!(a.enveloping().unwrap().is_valid());
    }

    #[test]
    fn commutator_anchor_vanishes_iff_commutative(i in 0usize..8) {
        let a = algebra(i);
        prop_assert_eq!(AnchoredLieAlgebra::commutator_anchor(&a).is_zero_anchor(), a.is_commutative());
    }

    #[test]
    fn straightening_is_strategy_independent(word in prop::collection::vec(0usize..3, 0..=6), heis in any::<bool>()) {
        let lie = if heis { LieAlgebra::heisenberg() } else { LieAlgebra::of_derivations(&fixtures::truncated(4).derivation_space()) };
        let env = UniversalEnveloping::new(lie);
        let direct = env.normalize(&word).unwrap();
        prop_assert_eq!(&direct, &env.normalize_with(&word, RewriteStrategy::LeftmostInnermost).unwrap());
        prop_assert_eq!(&direct, &env.normalize_with(&word, RewriteStrategy::RightmostOutermost).unwrap());
    }

    #[test]
    fn enveloping_laws(seed in any::<u64>(), heis in any::<bool>()) {
        let lie = if heis { LieAlgebra::heisenberg() } else { der_a3().lie().clone() };
        let env = UniversalEnveloping::new(lie);
        let opts = SuiteOptions { trials: 3, pairs: 3, degree: 3, word_length: 6 };
        let r = enveloping_suite(&env, &opts, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(r.all_passed(), "{}", r);
    }

    #[test]
    fn ring_laws(seed in any::<u64>()) {
        let opts = SuiteOptions { trials: 2, pairs: 3, degree: 2, word_length: 4 };
        let r = ring_suite(&der_a3(), &opts, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(r.all_passed(), "{}", r);
    }

    #[test]
    fn comparison_map_is_multiplicative(seed in any::<u64>()) {
        let r = verify_cm_iso(&der_a3(), 1, 2, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(r.all_passed(), "{}", r);
    }

    #[test]
    fn unit_of_base_acts_trivially(seed in any::<u64>()) {
        let smash = SmashAlgebra::new(der_a3());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = smash.enveloping().random_element(&mut rng, 3, 2);
        let action = smash.module_action(&u, smash.base().unit()).unwrap();
        let eps = smash.enveloping().counit(&u);
        let expected: Vec<Scalar> = smash.base().unit().iter().map(|c| c * &eps).collect();
        prop_assert_eq!(action, expected);
    }
}

#[test]
fn adjoint_carriers_are_closed_and_leibniz() {
    for n in 1..=4 {
        let r = ARing::left_regular(&fixtures::truncated(n));
        let carrier = lie_adjoint(&r, Variant::LieRinehart).unwrap();
        let report = carrier.validate();
        assert!(report.all_passed(), "n = {n}: {report}");
    }
    let m2 = AlgebraPresentation::matrix_algebra(2);
    let carrier = lie_adjoint(&ARing::identity(&m2), Variant::Anchored).unwrap();
    assert!(carrier.validate().all_passed());
}
