use std::f64::consts::PI;

use kpo4_core::spinmodel::{
    boltzmann_probabilities, calibrate_beta, estimate_h4, fit_energy_model, parity_curve,
    parity_totals, state_energy, EffectiveEnergyModel, InteractionSet, OscillationConfig,
    ProbabilityTable, SpinState,
};
use kpo4_core::units::mhz;
use proptest::prelude::*;

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| PI / 2.0 + PI * i as f64 / (n - 1) as f64).collect()
}

fn model() -> impl Strategy<Value = EffectiveEnergyModel> {
    prop::array::uniform15(-1.5f64..1.5).prop_map(|v| EffectiveEnergyModel::from_vector(&v, true))
}

fn config(theta_p: [f64; 4]) -> OscillationConfig {
    OscillationConfig {
        alpha: [5.9, 4.5, 1.3, 5.3],
        epsilon: [0.0, 0.0, 0.0, mhz(4.5)],
        theta_d: [0.0, 0.0, 0.0, PI / 2.0],
        theta_p,
    }
}

#[test]
fn state_labels_round_trip() {
    for (i, s) in SpinState::all().iter().enumerate() {
        assert_eq!(s.index(), i);
        assert_eq!(SpinState::parse(&s.label()), Some(*s));
    }
    assert_eq!(SpinState::all()[0].label(), "++++");
    assert_eq!(SpinState::parse("+−+-"), Some(SpinState([1, -1, 1, -1])));
    assert_eq!(SpinState::parse("++0+"), None);
    assert_eq!(SpinState::parse("+++"), None);
}

#[test]
fn parity_oscillates_with_plaquette_phase() {
    let ints = InteractionSet { h4: mhz(0.1), ..Default::default() };
    let cfg = OscillationConfig { epsilon: [0.0; 4], ..config([0.0; 4]) };
    let beta = calibrate_beta(&cfg, &ints, 0.641).unwrap();
    let curve = parity_curve(beta, &[0.0, PI, 2.0 * PI], &cfg, &ints);
    assert!((curve[0].even - 0.641).abs() < 1e-9);
    // cos(θ_p/2) vanishes at π and flips sign at 2π.
    assert!((curve[1].even - 0.5).abs() < 1e-12);
    assert!((curve[2].odd - 0.641).abs() < 1e-9);
    for p in &curve {
        assert!((p.even + p.odd - 1.0).abs() < 1e-14);
    }
}

#[test]
fn unreachable_parity_rejected() {
    let cfg = OscillationConfig { epsilon: [0.0; 4], ..config([0.0; 4]) };
    let err = calibrate_beta(&cfg, &InteractionSet::default(), 0.7).unwrap_err();
    assert_eq!(err.code(), "E_PARAM");
}

#[test]
fn fit_rejects_bad_tables() {
    let m = EffectiveEnergyModel::default();
    let short = ProbabilityTable::from_model(&m, &grid(8));
    assert_eq!(fit_energy_model(&short).unwrap_err().code(), "E_DATA");
    let mut bad = ProbabilityTable::from_model(&m, &grid(32));
    bad.probs[3][5] = -0.1;
    assert_eq!(fit_energy_model(&bad).unwrap_err().code(), "E_DATA");
    // A single θ value cannot separate ν₄ from the reference state.
    let flat = ProbabilityTable { theta: vec![1.0; 32], probs: bad.probs.clone() };
    assert!(fit_energy_model(&flat).is_err());
}

#[test]
fn h4_estimate_inverts_the_model() {
    let h4 = mhz(0.17);
    let cfg = config([0.4, 0.0, 0.0, 0.0]);
    let ints = InteractionSet { h4, ..Default::default() };
    let m = EffectiveEnergyModel::from_config(1e-9, &cfg, &ints);
    let est = estimate_h4(m.eta, m.nu[3], cfg.epsilon[3], &cfg.alpha, cfg.plaquette_phase()).unwrap();
    assert!((est / h4 - 1.0).abs() < 1e-12);
    assert!(estimate_h4(m.eta, 0.0, cfg.epsilon[3], &cfg.alpha, 0.0).is_err());
    assert!(estimate_h4(m.eta, m.nu[3], cfg.epsilon[3], &[0.0, 4.5, 1.3, 5.3], 0.0).is_err());
}

proptest! {
    #[test]
    fn probabilities_are_normalized(m in model(), theta in 0.0f64..6.3) {
        let p = boltzmann_probabilities(&m, theta);
        prop_assert!(p.iter().all(|&x| x > 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let (even, odd) = parity_totals(&p);
        prop_assert!((even + odd - 1.0).abs() < 1e-14);
        // Lower energy means higher probability.
        let s = SpinState::all();
        for i in 0..16 {
            for j in 0..16 {
                if state_energy(&m, &s[i], theta) < state_energy(&m, &s[j], theta) - 1e-12 {
                    prop_assert!(p[i] > p[j]);
                }
            }
        }
    }

    #[test]
    fn even_terms_are_flip_symmetric(eta in -2.0f64..2.0, mu in prop::array::uniform6(-2.0f64..2.0)) {
        let m = EffectiveEnergyModel { eta, mu, ..Default::default() };
        let p = boltzmann_probabilities(&m, 0.3);
        for s in SpinState::all() {
            let flipped = SpinState(s.0.map(|x| -x));
            prop_assert!((p[s.index()] - p[flipped.index()]).abs() < 1e-15);
        }
    }

    #[test]
    fn fit_recovers_coefficients(m in model()) {
        let fit = fit_energy_model(&ProbabilityTable::from_model(&m, &grid(32))).unwrap();
        for (a, b) in fit.model.to_vector().iter().zip(m.to_vector()) {
            prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        prop_assert!(fit.residual < 1e-10);
        prop_assert_eq!(fit.floored, 0);
    }

    #[test]
    fn plaquette_phase_is_applied_through_first_pump(tp in -6.0f64..6.0, t in prop::array::uniform4(-3.0f64..3.0)) {
        let cfg = config(t).with_plaquette_phase(tp);
        prop_assert!((cfg.plaquette_phase() - tp).abs() < 1e-12);
        prop_assert_eq!(&cfg.theta_p[1..], &t[1..]);
    }
}
