//! Coherent-state Ising model of one four-KPO plaquette.
//!
//! Each KPO settles in |s_j α_j⟩ with s_j = ±1. The four-body, residual and coherent-drive
//! terms become classical spin energies, and state probabilities follow a Boltzmann law in
//! βE. β is never separated from the coefficients.

mod fit;

pub use fit::{estimate_h4, fit_energy_model, EnergyFit, ProbabilityTable, PROBABILITY_FLOOR};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Amplitudes and phases of the four oscillating KPOs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationConfig {
    pub alpha: [f64; 4],
    /// Coherent drive amplitudes ε_j, rad/s.
    pub epsilon: [f64; 4],
    /// Drive phases θ_dj, rad.
    pub theta_d: [f64; 4],
    /// Pump phases θ_pj, rad.
    pub theta_p: [f64; 4],
}

impl OscillationConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(a) = self.alpha.iter().find(|a| !(**a >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "oscillation amplitudes must be non-negative, got {a}"
            )));
        }
        Ok(())
    }

    /// θ_p = θ_p1 + θ_p2 − θ_p3 − θ_p4.
    pub fn plaquette_phase(&self) -> f64 {
        let t = &self.theta_p;
        t[0] + t[1] - t[2] - t[3]
    }

    /// Copy with θ_p1 chosen so that the plaquette phase equals `theta_p`.
    pub fn with_plaquette_phase(&self, theta_p: f64) -> Self {
        let t = &self.theta_p;
        let mut out = self.clone();
        out.theta_p[0] = theta_p + t[2] + t[3] - t[1];
        out
    }
}

/// Four-body and residual coupling constants, rad/s.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InteractionSet {
    pub h4: f64,
    /// g′ (a₁†a₄†a₂² type).
    pub g1: f64,
    /// g″ (a₁²a₂†a₃† type).
    pub g2: f64,
    /// g‴ (a₁†³a₃²a₄ type).
    pub g3: f64,
    /// g⁗ (a₂†³a₃a₄² type).
    pub g4: f64,
}

/// Spin-energy coefficients in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCoefficients {
    /// Multiplies s₁s₂s₃s₄.
    pub h4: f64,
    /// ǧ′ and ǧ‴ multiply s₁s₄; ǧ″ and ǧ⁗ multiply s₂s₃.
    pub g: [f64; 4],
    /// ε̌_j, multiplying s_j.
    pub eps: [f64; 4],
}

pub fn effective_coefficients(config: &OscillationConfig, ints: &InteractionSet) -> EffectiveCoefficients {
    let a = &config.alpha;
    let t = &config.theta_p;
    let h4 = -2.0 * ints.h4 * a[0] * a[1] * a[2] * a[3] * (config.plaquette_phase() / 2.0).cos();
    let g = [
        2.0 * ints.g1 * a[0] * a[3] * a[1] * a[1] * (t[0] / 2.0 + t[3] / 2.0 - t[1]).cos(),
        2.0 * ints.g2 * a[0] * a[0] * a[1] * a[2] * (t[0] - t[1] / 2.0 - t[2] / 2.0).cos(),
        2.0 * ints.g3 * a[0].powi(3) * a[2] * a[2] * a[3] * (1.5 * t[0] - t[2] - t[3] / 2.0).cos(),
        2.0 * ints.g4 * a[1].powi(3) * a[2] * a[3] * a[3] * (1.5 * t[1] - t[2] / 2.0 - t[3]).cos(),
    ];
    let eps = std::array::from_fn(|j| 2.0 * config.epsilon[j] * a[j] * config.theta_d[j].sin());
    EffectiveCoefficients { h4, g, eps }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinState(pub [i8; 4]);

impl SpinState {
    /// All sixteen states; index bit j set means s_{j+1} = −1, so index 0 is (+,+,+,+).
    pub fn all() -> [SpinState; 16] {
        std::array::from_fn(SpinState::from_index)
    }

    pub fn from_index(i: usize) -> SpinState {
        SpinState(std::array::from_fn(|j| if i >> j & 1 == 1 { -1 } else { 1 }))
    }

    pub fn index(&self) -> usize {
        (0..4).map(|j| usize::from(self.0[j] < 0) << j).sum()
    }

    pub fn parity(&self) -> i8 {
        self.0.iter().product()
    }

    pub fn spin(&self, j: usize) -> f64 {
        self.0[j] as f64
    }

    /// Sign string such as `+-++`.
    pub fn label(&self) -> String {
        self.0.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
    }

    pub fn parse(label: &str) -> Option<SpinState> {
        let chars: Vec<char> = label.chars().collect();
        if chars.len() != 4 {
            return None;
        }
        let mut s = [0i8; 4];
        for (j, c) in chars.iter().enumerate() {
            s[j] = match c {
                '+' => 1,
                '-' | '−' => -1,
                _ => return None,
            };
        }
        Some(SpinState(s))
    }
}

/// Index triples of the three-body terms, in the order λ₂₃₄, λ₁₃₄, λ₁₂₄, λ₁₂₃.
pub const TRIPLES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
/// Index pairs of the two-body terms, in the order μ₁₂, μ₁₃, μ₁₄, μ₂₃, μ₂₄, μ₃₄.
pub const PAIRS: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// βE_s = η Πs + Σλ s s s + Σμ s s + ν₁s₁ + ν₂s₂ + ν₃s₃ + ν₄s₄·(sin θ_d4 if flagged).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EffectiveEnergyModel {
    pub eta: f64,
    pub lambda: [f64; 4],
    pub mu: [f64; 6],
    pub nu: [f64; 4],
    /// Multiply ν₄ by sin θ_d4.
    pub nu4_drive_phase: bool,
}

impl EffectiveEnergyModel {
    /// η = βȟ⁽⁴⁾, μ₁₄ = β(ǧ′ + ǧ‴), μ₂₃ = β(ǧ″ + ǧ⁗), ν_j = βε̌_j (j ≤ 3) and
    /// ν₄ = 2βε₄α₄ with the sin θ_d4 factor applied at evaluation time.
    pub fn from_config(beta: f64, config: &OscillationConfig, ints: &InteractionSet) -> Self {
        let c = effective_coefficients(config, ints);
        let mut mu = [0.0; 6];
        mu[2] = beta * (c.g[0] + c.g[2]);
        mu[3] = beta * (c.g[1] + c.g[3]);
        EffectiveEnergyModel {
            eta: beta * c.h4,
            lambda: [0.0; 4],
            mu,
            nu: [
                beta * c.eps[0],
                beta * c.eps[1],
                beta * c.eps[2],
                2.0 * beta * config.epsilon[3] * config.alpha[3],
            ],
            nu4_drive_phase: true,
        }
    }

    /// The fifteen coefficients in the order η, λ (4), μ (6), ν (4).
    pub fn to_vector(&self) -> [f64; 15] {
        let mut v = [0.0; 15];
        v[0] = self.eta;
        v[1..5].copy_from_slice(&self.lambda);
        v[5..11].copy_from_slice(&self.mu);
        v[11..15].copy_from_slice(&self.nu);
        v
    }

    pub fn from_vector(v: &[f64; 15], nu4_drive_phase: bool) -> Self {
        EffectiveEnergyModel {
            eta: v[0],
            lambda: v[1..5].try_into().unwrap(),
            mu: v[5..11].try_into().unwrap(),
            nu: v[11..15].try_into().unwrap(),
            nu4_drive_phase,
        }
    }

    /// Names matching [`Self::to_vector`].
    pub fn labels() -> [&'static str; 15] {
        [
            "eta", "lambda234", "lambda134", "lambda124", "lambda123", "mu12", "mu13", "mu14",
            "mu23", "mu24", "mu34", "nu1", "nu2", "nu3", "nu4",
        ]
    }
}

/// Basis functions multiplying each coefficient for state `s`.
pub(crate) fn features(s: &SpinState, theta_d4: f64, nu4_drive_phase: bool) -> [f64; 15] {
    let mut f = [0.0; 15];
    f[0] = s.parity() as f64;
    for (i, t) in TRIPLES.iter().enumerate() {
        f[1 + i] = t.iter().map(|&j| s.spin(j)).product();
    }
    for (i, p) in PAIRS.iter().enumerate() {
        f[5 + i] = s.spin(p[0]) * s.spin(p[1]);
    }
    for j in 0..4 {
        f[11 + j] = s.spin(j);
    }
    if nu4_drive_phase {
        f[14] *= theta_d4.sin();
    }
    f
}

/// Dimensionless βE of state `s`.
pub fn state_energy(model: &EffectiveEnergyModel, s: &SpinState, theta_d4: f64) -> f64 {
    let f = features(s, theta_d4, model.nu4_drive_phase);
    model.to_vector().iter().zip(f).map(|(c, x)| c * x).sum()
}

/// p_s = e^{−βE_s}/Z over [`SpinState::all`] order.
pub fn boltzmann_probabilities(model: &EffectiveEnergyModel, theta_d4: f64) -> [f64; 16] {
    let states = SpinState::all();
    let energies: [f64; 16] = std::array::from_fn(|i| state_energy(model, &states[i], theta_d4));
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: [f64; 16] = std::array::from_fn(|i| (-(energies[i] - e_min)).exp());
    let z: f64 = weights.iter().sum();
    weights.map(|w| w / z)
}

/// Total probability of even (Πs = +1) and odd states.
pub fn parity_totals(p: &[f64; 16]) -> (f64, f64) {
    let mut even = 0.0;
    let mut odd = 0.0;
    for (s, &q) in SpinState::all().iter().zip(p) {
        if s.parity() > 0 {
            even += q;
        } else {
            odd += q;
        }
    }
    (even, odd)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParityPoint {
    pub theta_p: f64,
    pub even: f64,
    pub odd: f64,
}

/// Even/odd totals as the plaquette pump phase sweeps over `theta_p`, with θ_p1 absorbing
/// the change.
pub fn parity_curve(
    beta: f64,
    theta_p: &[f64],
    config: &OscillationConfig,
    ints: &InteractionSet,
) -> Vec<ParityPoint> {
    theta_p
        .iter()
        .map(|&tp| {
            let cfg = config.with_plaquette_phase(tp);
            let model = EffectiveEnergyModel::from_config(beta, &cfg, ints);
            let (even, odd) = parity_totals(&boltzmann_probabilities(&model, cfg.theta_d[3]));
            ParityPoint { theta_p: tp, even, odd }
        })
        .collect()
}

/// β such that the even-parity total at θ_p = 0 equals `target`.
pub fn calibrate_beta(config: &OscillationConfig, ints: &InteractionSet, target: f64) -> Result<f64> {
    let even_at = |beta: f64| parity_curve(beta, &[0.0], config, ints)[0].even;
    let base = even_at(0.0);
    let mut hi = 1e-12;
    while (even_at(hi) - target) * (base - target) > 0.0 {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::InvalidParameter(format!(
                "even-parity probability {target} is not reachable from {base:.4}"
            )));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (even_at(mid) - target) * (base - target) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn state_indexing_round_trips() {
        for (i, s) in SpinState::all().iter().enumerate() {
            assert_eq!(s.index(), i);
            assert_eq!(SpinState::parse(&s.label()), Some(*s));
        }
        assert_eq!(SpinState::all()[0].label(), "++++");
    }

    #[test]
    fn simple_energies() {
        let s = SpinState([1, 1, 1, 1]);
        let mut m = EffectiveEnergyModel::default();
        assert_eq!(state_energy(&m, &s, 0.0), 0.0);
        m.eta = -1.0;
        m.nu[0] = -2.0;
        assert_eq!(state_energy(&m, &s, 0.0), -3.0);
    }

    #[test]
    fn null_model_is_uniform() {
        let p = boltzmann_probabilities(&EffectiveEnergyModel::default(), 0.3);
        assert!(p.iter().all(|&x| (x - 1.0 / 16.0).abs() < 1e-15));
    }

    #[test]
    fn pump_phase_pi_removes_bias() {
        let cfg = OscillationConfig {
            alpha: [1.0; 4],
            epsilon: [0.0; 4],
            theta_d: [0.0; 4],
            theta_p: [PI, 0.0, 0.0, 0.0],
        };
        let c = effective_coefficients(&cfg, &InteractionSet { h4: 1.0, ..Default::default() });
        assert!(c.h4.abs() < 1e-15);
        let c0 = effective_coefficients(
            &cfg.with_plaquette_phase(0.0),
            &InteractionSet { h4: 1.0, ..Default::default() },
        );
        assert!(c0.h4 < 0.0);
    }
}
