//! Randomised invariants. Inputs are drawn from proptest seeds; the
//! checkers live in `common` so the acceptance run uses the same code.

mod common;

use proptest::prelude::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn jacobi_identity(seed in any::<u64>()) {
        prop_assert_eq!(common::jacobi(seed), Ok(()));
    }

    #[test]
    fn h_tilde_is_closed(seed in any::<u64>()) {
        prop_assert_eq!(common::h_tilde_closure(seed), Ok(()));
    }

    #[test]
    fn bch_is_associative(seed in any::<u64>()) {
        prop_assert_eq!(common::bch_associative(seed), Ok(()));
    }

    #[test]
    fn upsilon_is_a_homomorphism(seed in any::<u64>()) {
        prop_assert_eq!(common::upsilon_homomorphism(seed), Ok(()));
    }
}

proptest! {
    #![proptest_config(cases(12))]

    #[test]
    fn completed_diagrams_are_consistent(seed in any::<u64>()) {
        prop_assert_eq!(common::completed_consistent(seed), Ok(()));
    }

    #[test]
    fn ks_agrees_with_perturbation(seed in any::<u64>(), lines in 1usize..=2, cap in 1u32..=3) {
        prop_assert_eq!(common::ks_vs_perturbation(seed, lines, cap), Ok(()));
    }

    #[test]
    fn tropical_ray_functions(seed in any::<u64>()) {
        prop_assert_eq!(common::f_trop_matches(seed), Ok(()));
    }

    #[test]
    fn oracle_matches_scattering_count(seed in any::<u64>(), which in 0usize..3, pick in any::<prop::sample::Index>()) {
        let p = [[2, 1], [2, 2], [2, 4]][which];
        let tuples = common::weight_tuples(&p, 4);
        let w = &tuples[pick.index(tuples.len())];
        prop_assert_eq!(common::oracle_agrees(w, seed), Ok(()));
    }
}
