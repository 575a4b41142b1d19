mod common;

use approx::assert_relative_eq;
use kpo4_core::perturbation::{
    dressed_spectrum, h4_general, invert_dressed, rwa_filter, sw_mixing, transform_kerr,
    BosonicPolynomial, CouplingGraph, ModeSpectrum, Monomial, TermClass,
};
use kpo4_core::presets::{self, coupling_sweep, device, pumps};
use kpo4_core::pumpplan::{default_tolerance, PumpAssignment};
use kpo4_core::units::{ghz, mhz, to_mhz};
use kpo4_core::{Error, ModeParams};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_forms_agree_with_engine_across_seeds() {
    for seed in [11, 12, 13, 14] {
        let worst = common::triangulate(&mut ChaCha8Rng::seed_from_u64(seed), 25);
        for (case, e) in worst.iter().enumerate() {
            assert!(*e < 1e-12, "seed {seed}, case {case}: {e:e}");
        }
    }
}

#[test]
fn engine_output_is_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let (spec, c) = common::random_system(&mut rng);
        let poly = transform_kerr(&spec, &sw_mixing(&spec, &c).unwrap());
        let scale = poly.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
        assert!(poly.hermiticity_defect() <= 1e-14 * scale);
        assert!(poly.terms().all(|(m, _)| m.degree() == 4));
    }
}

fn device_polynomial() -> (BosonicPolynomial, f64) {
    let w: Vec<f64> = device::OMEGA_GHZ.iter().map(|&f| ghz(f)).collect();
    let k: Vec<f64> = device::KERR_MHZ.iter().map(|&f| mhz(f)).collect();
    let bare = invert_dressed(&w, &k);
    let spec = ModeSpectrum::new(
        bare.omega.iter().zip(&bare.kerr).map(|(&omega, &kerr)| ModeParams { omega, kerr }).collect(),
    );
    let mix = sw_mixing(&spec, &presets::device_couplings()).unwrap();
    let kerr: [f64; 4] = std::array::from_fn(|j| bare.kerr[j]);
    (transform_kerr(&spec, &mix), h4_general(&kerr, &mix.h_tilde))
}

#[test]
fn device_four_body_estimate() {
    let (_, h4) = device_polynomial();
    assert_eq!(format!("{:.4}", to_mhz(h4)), "-0.1739");
}

#[test]
fn rwa_filter_follows_pump_relations() {
    let (poly, h4) = device_polynomial();
    let four = Monomial::from_indices(4, &[0, 1], &[2, 3]);
    let filter = |half: &[f64; 4]| {
        let pump = PumpAssignment::new(presets::pump_frequencies(half)).unwrap();
        rwa_filter(&poly, &pump, default_tolerance())
    };

    let matched = filter(&pumps::MATCHED);
    assert_relative_eq!(matched.coefficient(&four).re, -h4, max_relative = 1e-12);
    assert!(matched.contains(&four.dagger()));
    assert_eq!(matched.of_class(TermClass::ResidualOne).count(), 0);
    assert!(matched.of_class(TermClass::CrossKerr).count() == 6);
    assert!(matched.entries.iter().all(|e| e.rotation_residual.abs() < default_tolerance()));

    assert!(!filter(&pumps::DETUNED).contains(&four));

    let residual = filter(&pumps::RESIDUAL);
    assert!(residual.contains(&four));
    assert!(residual.of_class(TermClass::ResidualOne).count() > 0);
}

#[test]
fn sweep_values_at_fifty_megahertz() {
    let row = coupling_sweep(&[mhz(50.0)]).unwrap()[0];
    assert_eq!(format!("{:.1e}", to_mhz(row.g4_kpo_like)), "1.0e-3");
    assert_eq!(format!("{:.1e}", to_mhz(row.h4_tilde).abs()), "2.0e-2");
}

#[test]
fn guard_rejects_strong_mixing() {
    let spec = ModeSpectrum::new(vec![
        ModeParams { omega: ghz(10.0), kerr: mhz(20.0) },
        ModeParams { omega: ghz(10.01), kerr: mhz(20.0) },
    ]);
    let mut c = CouplingGraph::uncoupled(2);
    c.set_h(0, 1, mhz(6.0));
    assert!(matches!(sw_mixing(&spec, &c), Err(Error::Nonperturbative(..))));
    c.set_h(0, 1, mhz(1.0));
    let degenerate = ModeSpectrum::new(vec![spec.kpo[0], spec.kpo[0]]);
    assert!(matches!(sw_mixing(&degenerate, &c), Err(Error::Degenerate(0, 1))));
}

#[test]
fn uncoupled_dressed_spectrum_is_lamb_shift_only() {
    let (spec, _) = common::random_system(&mut ChaCha8Rng::seed_from_u64(9));
    let d = dressed_spectrum(&spec, &CouplingGraph::uncoupled(4)).unwrap();
    for (j, m) in spec.kpo.iter().enumerate() {
        assert_eq!(d.omega[j], m.omega - m.kerr);
        assert_eq!(d.kerr[j], m.kerr);
    }
}

// Truncated Fock-space representation used to check normal ordering independently.
const CUTOFF: usize = 6;

fn single_mode(cre: u8, ann: u8) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(CUTOFF, CUTOFF);
    for n in 1..CUTOFF {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    let id = DMatrix::identity(CUTOFF, CUTOFF);
    let pow = |m: &DMatrix<Complex64>, k: u8| (0..k).fold(id.clone(), |acc, _| acc * m);
    pow(&ad, cre) * pow(&a, ann)
}

fn matrix(p: &BosonicPolynomial) -> DMatrix<Complex64> {
    let dim = CUTOFF * CUTOFF;
    let mut out = DMatrix::zeros(dim, dim);
    for (m, &c) in p.terms() {
        out += single_mode(m.cre[0], m.ann[0]).kronecker(&single_mode(m.cre[1], m.ann[1])) * c;
    }
    out
}

fn polynomial() -> impl Strategy<Value = BosonicPolynomial> {
    prop::collection::vec(([0u8..2, 0u8..2, 0u8..2, 0u8..2], -1.0f64..1.0, -1.0f64..1.0), 1..5)
        .prop_map(|terms| {
            let mut p = BosonicPolynomial::zero(2);
            for ([c0, c1, a0, a1], re, im) in terms {
                let m = Monomial { cre: vec![c0, c1], ann: vec![a0, a1] };
                p.add_term(m, Complex64::new(re, im));
            }
            p
        })
}

proptest! {
    #[test]
    fn product_matches_fock_matrices(p in polynomial(), q in polynomial()) {
        let lhs = matrix(&p.mul(&q));
        let rhs = matrix(&p) * matrix(&q);
        // States with at most one quantum per mode never reach the cutoff.
        let low = [0, 1, CUTOFF, CUTOFF + 1];
        for &i in &low {
            for &j in &low {
                prop_assert!((lhs[(i, j)] - rhs[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dagger_is_an_antihomomorphic_involution(p in polynomial(), q in polynomial()) {
        prop_assert_eq!(p.dagger().dagger(), p.clone());
        let lhs = p.mul(&q).dagger();
        let rhs = q.dagger().mul(&p.dagger());
        for (m, c) in lhs.terms() {
            prop_assert!((rhs.coefficient(m) - c).norm() < 1e-12);
        }
        prop_assert_eq!(lhs.len(), rhs.len());
    }

    #[test]
    fn p_plus_dagger_is_hermitian(p in polynomial()) {
        prop_assert!(p.add(&p.dagger()).is_hermitian(1e-15));
    }

    #[test]
    fn canonical_commutator(j in 0usize..3, k in 0usize..3) {
        let a = BosonicPolynomial::annihilation(3, j);
        let ad = BosonicPolynomial::creation(3, k);
        let comm = a.mul(&ad).add(&ad.mul(&a).scale(Complex64::new(-1.0, 0.0)));
        let expected = if j == k {
            BosonicPolynomial::constant(3, Complex64::new(1.0, 0.0))
        } else {
            BosonicPolynomial::zero(3)
        };
        prop_assert_eq!(comm, expected);
    }
}
