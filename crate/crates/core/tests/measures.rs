mod common;

use common::*;
use monogamy_core::linalg::CMatrix;
use monogamy_core::measures::{
    concurrence_monotones, det_superadditivity_check, g_concurrence_marginal, g_concurrence_pure,
    monotones_from_coefficients,
};
use monogamy_core::sampling::{haar_random_bipartite, haar_unitary, random_density_matrix, rng_from_seed};
use monogamy_core::state::{psd_determinant, schmidt_decompose, BipartitePureState, Party};
use monogamy_core::zoo::antisymmetric_chi;
use proptest::prelude::*;

#[test]
fn chi_marginal_has_unit_g() {
    let rho = antisymmetric_chi::<f64>().partial_trace(&[Party::One]).unwrap();
    let g = g_concurrence_marginal(&rho, 3).unwrap();
    assert!((g.g_pow_d - 1.0).abs() < 1e-12);
    assert!((g.g - 1.0).abs() < 1e-12);
}

#[test]
fn two_qubit_g_equals_analytic_concurrence() {
    let mut rng = rng_from_seed(8);
    for _ in 0..200 {
        let psi = haar_random_bipartite::<f64, _>(2, 2, &mut rng);
        let m = psi.amplitudes();
        let analytic = 2.0 * (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).norm();
        assert!((g_concurrence_pure(&psi).unwrap().g - analytic).abs() < 1e-10);
    }
}

#[test]
fn superadditivity_on_random_pairs() {
    let mut rng = rng_from_seed(41);
    for n in 2..=4 {
        for _ in 0..50 {
            let x = random_density_matrix::<f64, _>(n, n, &mut rng).entries() * C::new(2.0, 0.0);
            let y = random_density_matrix::<f64, _>(n, n, &mut rng).entries().clone();
            let r = det_superadditivity_check(&x, &y).unwrap();
            let oracle = laplace_det(&(&x + &y)).re - laplace_det(&x).re - laplace_det(&y).re;
            assert!((r.slack - oracle).abs() < 1e-12);
            assert!(r.holds && oracle >= -1e-10);
        }
    }
}

fn bipartite(d: usize) -> impl Strategy<Value = BipartitePureState<f64>> {
    any::<u64>().prop_map(move |seed| haar_random_bipartite(d, d, &mut rng_from_seed(seed)))
}

fn any_square() -> impl Strategy<Value = BipartitePureState<f64>> {
    prop_oneof![bipartite(2), bipartite(3), bipartite(4), bipartite(5)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn local_unitary_invariance(psi in any_square(), seed in any::<u64>()) {
        let d = psi.dims().0;
        let mut rng = rng_from_seed(seed);
        let u: CMatrix<f64> = haar_unitary(d, &mut rng);
        let v: CMatrix<f64> = haar_unitary(d, &mut rng);
        let before = g_concurrence_pure(&psi).unwrap().g;
        let after = g_concurrence_pure(&psi.apply_local(&u, &v)).unwrap().g;
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn pure_g_matches_marginal_determinant(psi in any_square()) {
        let d = psi.dims().0;
        let g = g_concurrence_pure(&psi).unwrap();
        let det = psd_determinant(&psi.marginal_a()).unwrap();
        prop_assert!((g.g_pow_d - (d as f64).powi(d as i32) * det).abs() < 1e-10);
        let via_marginal = g_concurrence_marginal(&psi.marginal_a(), d).unwrap();
        prop_assert!((via_marginal.g_pow_d - g.g_pow_d).abs() < 1e-10);
        prop_assert!((g.g.powi(d as i32) - g.g_pow_d).abs() < 1e-12);
    }

    #[test]
    fn g_is_last_normalized_monotone(psi in any_square()) {
        let m = concurrence_monotones(&psi).unwrap();
        let g = g_concurrence_pure(&psi).unwrap();
        prop_assert!((m.g() - g.g).abs() < 1e-12);
        prop_assert!((m.raw[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn g_is_at_most_one(psi in any_square()) {
        let g = g_concurrence_pure(&psi).unwrap().g;
        prop_assert!(g <= 1.0 + 1e-10);
        let lambda = schmidt_decompose(&psi).coefficients;
        let d = lambda.len() as f64;
        if g > 1.0 - 1e-10 {
            prop_assert!(lambda.iter().all(|l| (l - 1.0 / d).abs() < 1e-4));
        }
    }

    #[test]
    fn maclaurin_chain(weights in prop::collection::vec(0.0f64..1.0, 2..8)) {
        let total: f64 = weights.iter().sum();
        prop_assume!(total > 1e-9);
        let lambda: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let m = monotones_from_coefficients(&lambda);
        prop_assert!(m.satisfies_maclaurin(1e-10));
        prop_assert!((m.normalized[0] - 1.0).abs() < 1e-10);
        prop_assert!(m.normalized.iter().all(|&c| (-1e-12..=1.0 + 1e-10).contains(&c)));
    }
}
