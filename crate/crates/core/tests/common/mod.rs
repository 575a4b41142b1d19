//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use kpo4_core::elements::ModeParams;
use kpo4_core::perturbation::{
    cross_kerr, g4_closed_form, h4_double_tilde, h4_general, h4_symmetric, h4_tilde, sw_mixing,
    transform_kerr, BosonicPolynomial, CouplingGraph, ModeSpectrum, Monomial,
};
use kpo4_core::units::{ghz, mhz};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Smallest pairwise detuning of the random systems, rad/s.
const MIN_SPACING_MHZ: f64 = 20.0;
/// Largest |h̃| in the random systems.
const MAX_MIXING: f64 = 0.1;

pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn nondegenerate(w: &[f64]) -> bool {
    w.iter().enumerate().all(|(j, a)| {
        w.iter()
            .skip(j + 1)
            .all(|b| (a - b).abs() > mhz(MIN_SPACING_MHZ))
    })
}

fn random_kerr(rng: &mut ChaCha8Rng) -> f64 {
    let k = mhz(rng.gen_range(1.0..30.0));
    if rng.gen_bool(0.2) {
        -k
    } else {
        k
    }
}

pub fn random_frequencies(rng: &mut ChaCha8Rng) -> [f64; 4] {
    loop {
        let w: [f64; 4] = std::array::from_fn(|_| ghz(10.0) + mhz(rng.gen_range(-400.0..400.0)));
        if nondegenerate(&w) {
            return w;
        }
    }
}

/// Nondegenerate frequencies with ω₁ + ω₂ = ω₃ + ω₄ holding exactly.
pub fn resonant_frequencies(rng: &mut ChaCha8Rng) -> [f64; 4] {
    loop {
        // Whole rad/s values keep the condition exact in floating point.
        let mut draw = || (ghz(10.0) + mhz(rng.gen_range(-300.0..300.0))).round();
        let (w1, w2, w3) = (draw(), draw(), draw());
        let w = [w1, w2, w3, w1 + w2 - w3];
        if nondegenerate(&w) {
            return w;
        }
    }
}

/// Four nondegenerate modes with random Kerr and every pair coupled with |h̃| < 0.1.
pub fn random_system(rng: &mut ChaCha8Rng) -> (ModeSpectrum, CouplingGraph) {
    let w = random_frequencies(rng);
    let spec = ModeSpectrum::new(
        w.iter()
            .map(|&omega| ModeParams { omega, kerr: random_kerr(rng) })
            .collect(),
    );
    let mut c = CouplingGraph::uncoupled(4);
    for j in 0..4 {
        for k in (j + 1)..4 {
            let x = rng.gen_range(-MAX_MIXING..MAX_MIXING);
            c.set_h(j, k, x * (w[j] - w[k]).abs());
        }
    }
    (spec, c)
}

fn four_body(poly: &BosonicPolynomial) -> f64 {
    poly.coefficient(&Monomial::from_indices(poly.modes(), &[0, 1], &[2, 3])).re
}

/// Worst relative disagreement per closed form over `n` random systems, in the order
/// g⁽⁴⁾, h⁽⁴⁾ general, symmetric, h̃⁽⁴⁾, h̃̃⁽⁴⁾, χ.
pub fn triangulate(rng: &mut ChaCha8Rng, n: usize) -> [f64; 6] {
    let mut worst = [0.0_f64; 6];
    for _ in 0..n {
        let errs = triangulate_one(rng);
        for (w, e) in worst.iter_mut().zip(errs) {
            *w = w.max(e);
        }
    }
    worst
}

pub fn triangulate_one(rng: &mut ChaCha8Rng) -> [f64; 6] {
    [
        coupler_case(rng),
        general_case(rng),
        symmetric_case(rng),
        tilde_case(rng),
        double_tilde_case(rng),
        cross_kerr_case(rng),
    ]
}

fn coupler_case(rng: &mut ChaCha8Rng) -> f64 {
    let w = random_frequencies(rng);
    let w_g = loop {
        let x = ghz(10.0) + mhz(rng.gen_range(-400.0..400.0));
        if w.iter().all(|a| (a - x).abs() > mhz(MIN_SPACING_MHZ)) {
            break x;
        }
    };
    let kpo = w.iter().map(|&omega| ModeParams { omega, kerr: random_kerr(rng) }).collect();
    let k_g = random_kerr(rng);
    let spec = ModeSpectrum::with_coupler(kpo, ModeParams { omega: w_g, kerr: k_g });
    let g: Vec<f64> = w
        .iter()
        .map(|a| rng.gen_range(0.0..MAX_MIXING) * (a - w_g).abs())
        .collect();
    let s: Vec<i8> = (0..4).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let mut c = CouplingGraph::uncoupled(4).with_coupler(g);
    c.s = s;
    let mix = sw_mixing(&spec, &c).unwrap();
    let engine = four_body(&transform_kerr(&spec, &mix));
    let signed: [f64; 4] = std::array::from_fn(|j| mix.sign(j) * mix.g_tilde[j]);
    rel_err(engine, -g4_closed_form(k_g, &signed))
}

fn general_case(rng: &mut ChaCha8Rng) -> f64 {
    let (spec, c) = random_system(rng);
    let mix = sw_mixing(&spec, &c).unwrap();
    let engine = four_body(&transform_kerr(&spec, &mix));
    let kerr: [f64; 4] = std::array::from_fn(|j| spec.kpo[j].kerr);
    rel_err(engine, -h4_general(&kerr, &mix.h_tilde))
}

fn symmetric_case(rng: &mut ChaCha8Rng) -> f64 {
    let w = resonant_frequencies(rng);
    let kerr: [f64; 4] = std::array::from_fn(|_| random_kerr(rng));
    let spec = ModeSpectrum::new(
        w.iter().zip(kerr).map(|(&omega, kerr)| ModeParams { omega, kerr }).collect(),
    );
    let min_d = |pairs: &[(usize, usize)]| {
        pairs
            .iter()
            .map(|&(j, k)| (w[j] - w[k]).abs())
            .fold(f64::INFINITY, f64::min)
    };
    let h12 = rng.gen_range(-MAX_MIXING..MAX_MIXING) * min_d(&[(0, 1), (2, 3)]);
    let h13 = rng.gen_range(-MAX_MIXING..MAX_MIXING) * min_d(&[(0, 2), (0, 3), (1, 2), (1, 3)]);
    let mut c = CouplingGraph::uncoupled(4);
    c.set_h(0, 1, h12);
    c.set_h(2, 3, h12);
    for (j, k) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
        c.set_h(j, k, h13);
    }
    let mix = sw_mixing(&spec, &c).unwrap();
    let engine = four_body(&transform_kerr(&spec, &mix));
    rel_err(engine, -h4_symmetric(h12, h13, &kerr, &w).unwrap())
}

fn tilde_case(rng: &mut ChaCha8Rng) -> f64 {
    let w = resonant_frequencies(rng);
    let kerr: [f64; 4] = std::array::from_fn(|_| random_kerr(rng));
    let spec = ModeSpectrum::new(
        w.iter().zip(kerr).map(|(&omega, kerr)| ModeParams { omega, kerr }).collect(),
    );
    let d = (0..3).map(|j| (w[j] - w[3]).abs()).fold(f64::INFINITY, f64::min);
    let h = rng.gen_range(-MAX_MIXING..MAX_MIXING) * d;
    let mut c = CouplingGraph::uncoupled(4);
    for j in 0..3 {
        c.set_h(j, 3, h);
    }
    let mix = sw_mixing(&spec, &c).unwrap();
    let engine = four_body(&transform_kerr(&spec, &mix));
    rel_err(engine, -h4_tilde(h, &w, kerr[3]).unwrap())
}

fn double_tilde_case(rng: &mut ChaCha8Rng) -> f64 {
    let w = resonant_frequencies(rng);
    let kerr: [f64; 4] = std::array::from_fn(|_| random_kerr(rng));
    let spec = ModeSpectrum::new(
        w.iter().zip(kerr).map(|(&omega, kerr)| ModeParams { omega, kerr }).collect(),
    );
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)];
    let d = pairs
        .iter()
        .map(|&(j, k)| (w[j] - w[k]).abs())
        .fold(f64::INFINITY, f64::min);
    let h = rng.gen_range(-MAX_MIXING..MAX_MIXING) * d;
    let mut c = CouplingGraph::uncoupled(4);
    for (j, k) in pairs {
        c.set_h(j, k, h);
    }
    let mix = sw_mixing(&spec, &c).unwrap();
    let engine = four_body(&transform_kerr(&spec, &mix));
    rel_err(engine, -h4_double_tilde(h, &w, kerr[0], kerr[3]).unwrap())
}

/// χ_jk for one coupled pair inside an otherwise uncoupled four-mode system.
fn cross_kerr_case(rng: &mut ChaCha8Rng) -> f64 {
    let w = random_frequencies(rng);
    let spec = ModeSpectrum::new(
        w.iter()
            .map(|&omega| ModeParams { omega, kerr: random_kerr(rng) })
            .collect(),
    );
    let j = rng.gen_range(0..4);
    let k = (j + rng.gen_range(1..4)) % 4;
    let mut c = CouplingGraph::uncoupled(4);
    c.set_h(j, k, rng.gen_range(-MAX_MIXING..MAX_MIXING) * (w[j] - w[k]).abs());
    let mix = sw_mixing(&spec, &c).unwrap();
    let poly = transform_kerr(&spec, &mix);
    let chi = cross_kerr(&spec, &mix);
    assert_eq!(chi.len(), 1);
    let engine = poly
        .coefficient(&Monomial::from_indices(4, &[j, k], &[j, k]))
        .re;
    rel_err(engine, chi[0].chi)
}
