mod common;

use common::*;
use monogamy_core::linalg::CMatrix;
use monogamy_core::measures::g_concurrence_marginal;
use monogamy_core::monogamy::monogamy_residual;
use monogamy_core::roof::{decomposition_profile, roof_upper_bound, RoofConfig};
use monogamy_core::sampling::rng_from_seed;
use monogamy_core::state::Party;
use monogamy_core::zoo::{antisymmetric_chi, ghz, w_class, WClassCoefficients, ZooState};
use nalgebra::Complex;

#[test]
fn ghz_has_unit_g_across_every_cut() {
    for d in 2..=6 {
        let s = ghz::<f64>(d).unwrap();
        for p in Party::ALL {
            let g = g_concurrence_marginal(&s.partial_trace(&[p]).unwrap(), d).unwrap();
            assert!((g.g - 1.0).abs() < 1e-10, "d={d} pivot={p}: {}", g.g);
        }
    }
}

#[test]
fn chi_marginals() {
    let chi = antisymmetric_chi::<f64>();
    let third = 1.0 / 3.0;
    for p in Party::ALL {
        let rho = chi.partial_trace(&[p]).unwrap();
        let expected = CMatrix::<f64>::identity(3, 3).map(|x| x * third);
        assert!(op_norm_diff(rho.entries(), &expected) < 1e-12);
    }
    // Two-party marginals are the normalized antisymmetric projector (I - SWAP)/6.
    let swap = CMatrix::<f64>::from_fn(9, 9, |r, c| {
        if c == (r % 3) * 3 + r / 3 {
            Complex::new(1.0, 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let expected = (CMatrix::<f64>::identity(9, 9) - swap).map(|x| x / 6.0);
    for (a, b) in [(Party::One, Party::Two), (Party::One, Party::Three), (Party::Two, Party::Three)] {
        let rho = chi.partial_trace(&[a, b]).unwrap();
        assert!(op_norm_diff(rho.entries(), &expected) < 1e-12, "{a}{b}");
        assert!(op_norm_diff(rho.entries(), &naive_partial_trace(&chi, &[a.axis(), b.axis()])) < 1e-12);
    }
}

#[test]
fn chi_is_antisymmetric_under_swaps() {
    let chi = antisymmetric_chi::<f64>();
    for order in [
        [Party::Two, Party::One, Party::Three],
        [Party::One, Party::Three, Party::Two],
        [Party::Three, Party::Two, Party::One],
    ] {
        let swapped = chi.permute_parties(order);
        for (x, y) in swapped.amplitudes().iter().zip(chi.amplitudes()) {
            assert!((x + y).norm() < 1e-15);
        }
    }
    let cyclic = chi.permute_parties([Party::Two, Party::Three, Party::One]);
    for (x, y) in cyclic.amplitudes().iter().zip(chi.amplitudes()) {
        assert!((x - y).norm() < 1e-15);
    }
}

#[test]
fn chi_pair_marginals_have_zero_roof() {
    let chi = antisymmetric_chi::<f64>();
    let rho = chi.partial_trace(&[Party::One, Party::Two]).unwrap();
    let res = roof_upper_bound(&rho, 3, &RoofConfig::default()).unwrap();
    assert!(res.upper_bound.g <= 1e-6, "{}", res.upper_bound.g);
    assert_eq!(decomposition_profile(&res, 1e-6), 0);
}

#[test]
fn random_w_class_single_marginals_are_rank_deficient() {
    let mut rng = rng_from_seed(21);
    for _ in 0..50 {
        let s = w_class(&WClassCoefficients::<f64>::random(&mut rng)).unwrap();
        for p in Party::ALL {
            let rho = s.partial_trace(&[p]).unwrap();
            assert!(rho.rank(1e-12) <= 2);
            assert!(g_concurrence_marginal(&rho, 3).unwrap().g_pow_d.abs() < 1e-12);
        }
    }
}

#[test]
fn w_class_terms_vanish() {
    let mut rng = rng_from_seed(22);
    let cfg = RoofConfig::default();
    for _ in 0..5 {
        let s = w_class(&WClassCoefficients::<f64>::random(&mut rng)).unwrap();
        let r = monogamy_residual(&s, Party::One, &cfg).unwrap();
        assert!(r.lhs_pow_d.abs() <= 1e-6);
        assert!(r.rhs12_pow_d <= 1e-6 && r.rhs13_pow_d <= 1e-6);
        assert!(r.residual.abs() <= 1e-6);
    }
}

#[test]
fn w_class_rejects_unnormalized_coefficients() {
    let mut c = WClassCoefficients::<f64>::uniform();
    c.a[0][0] *= 2.0;
    assert!(w_class(&c).is_err());
}

#[test]
fn zoo_names_round_trip() {
    for (name, state) in [("ghz", ZooState::Ghz), ("chi", ZooState::Chi), ("w", ZooState::W)] {
        assert_eq!(name.parse::<ZooState>().unwrap(), state);
    }
    assert!("bell".parse::<ZooState>().is_err());
    assert_eq!(ZooState::Ghz.build::<f64>(Some(4)).unwrap().dim(), 4);
    assert!(ZooState::Chi.build::<f64>(Some(4)).is_err());
    assert!(ZooState::W.build::<f64>(None).is_ok());
}
