//! Coefficient extraction from state probabilities measured on a θ_d4 grid.
//!
//! log(p_s/p_ref) = −(βE_s − βE_ref) is linear in the fifteen coefficients, so the fit is a
//! single least-squares solve over all non-reference states and grid points. The partition
//! function never appears. The reference state is (−,−,−,−).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{features, EffectiveEnergyModel, SpinState};
use crate::error::{Error, Result};

/// Probabilities are clamped to this value before taking logarithms.
pub const PROBABILITY_FLOOR: f64 = 1e-12;
/// Largest accepted condition number of the design matrix.
const MAX_CONDITION: f64 = 1e10;
const MIN_POINTS: usize = 16;

/// State probabilities per θ_d4, columns in [`SpinState::all`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    pub theta: Vec<f64>,
    pub probs: Vec<[f64; 16]>,
}

impl ProbabilityTable {
    pub fn from_model(model: &EffectiveEnergyModel, theta: &[f64]) -> Self {
        ProbabilityTable {
            theta: theta.to_vec(),
            probs: theta
                .iter()
                .map(|&t| super::boltzmann_probabilities(model, t))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyFit {
    pub model: EffectiveEnergyModel,
    /// p_ref = A·exp(B sin θ_d4 + C).
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// RMS residual of the log-ratio fit.
    pub residual: f64,
    /// RMS residual of the reference-probability fit in log space.
    pub reference_residual: f64,
    pub condition_number: f64,
    /// Number of probabilities raised to the floor.
    pub floored: usize,
}

fn solve(design: DMatrix<f64>, rhs: DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let svd = design.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond < MAX_CONDITION) {
        return Err(Error::IllConditioned(cond));
    }
    let x = svd
        .solve(&rhs, smax * f64::EPSILON)
        .map_err(|e| Error::DegenerateInput(e.to_string()))?;
    Ok((x, cond))
}

pub fn fit_energy_model(data: &ProbabilityTable) -> Result<EnergyFit> {
    let rows = data.theta.len();
    if rows != data.probs.len() {
        return Err(Error::InvalidData("one probability row per grid point is required".into()));
    }
    if rows < MIN_POINTS {
        return Err(Error::InvalidData(format!(
            "need at least {MIN_POINTS} grid points, got {rows}"
        )));
    }
    let mut floored = 0;
    let mut logp = Vec::with_capacity(rows);
    for row in &data.probs {
        let mut l = [0.0; 16];
        for (i, &p) in row.iter().enumerate() {
            if !(p >= 0.0) {
                return Err(Error::InvalidData(format!("negative or missing probability {p}")));
            }
            if p < PROBABILITY_FLOOR {
                floored += 1;
            }
            l[i] = p.max(PROBABILITY_FLOOR).ln();
        }
        logp.push(l);
    }
    if floored > 0 {
        log::warn!("{floored} probabilities below {PROBABILITY_FLOOR:e} were floored");
    }
    let reference = SpinState([-1, -1, -1, -1]);
    let r = reference.index();
    let states = SpinState::all();
    let mut design = DMatrix::<f64>::zeros(rows * 15, 15);
    let mut rhs = DVector::<f64>::zeros(rows * 15);
    let mut k = 0;
    for (t, l) in data.theta.iter().zip(&logp) {
        let f_ref = features(&reference, *t, true);
        for (i, s) in states.iter().enumerate() {
            if i == r {
                continue;
            }
            let f = features(s, *t, true);
            for c in 0..15 {
                design[(k, c)] = -(f[c] - f_ref[c]);
            }
            rhs[k] = l[i] - l[r];
            k += 1;
        }
    }
    let (x, condition_number) = solve(design.clone(), rhs.clone())?;
    let resid = &design * &x - &rhs;
    let residual = (resid.norm_squared() / resid.len() as f64).sqrt();
    let coeffs: [f64; 15] = std::array::from_fn(|i| x[i]);
    let model = EffectiveEnergyModel::from_vector(&coeffs, true);

    // Reference probability: log p_ref = I + B sin θ_d4, then C is the constant part of
    // −βE_ref and A absorbs the rest (only I = ln A + C is identifiable).
    let mut d2 = DMatrix::<f64>::zeros(rows, 2);
    let mut y2 = DVector::<f64>::zeros(rows);
    for (i, (t, l)) in data.theta.iter().zip(&logp).enumerate() {
        d2[(i, 0)] = 1.0;
        d2[(i, 1)] = t.sin();
        y2[i] = l[r];
    }
    let (ib, _) = solve(d2.clone(), y2.clone())?;
    let r2 = &d2 * &ib - &y2;
    let reference_residual = (r2.norm_squared() / rows as f64).sqrt();
    let f_ref0 = features(&reference, 0.0, true);
    let c: f64 = -coeffs.iter().zip(f_ref0).map(|(a, f)| a * f).sum::<f64>();
    Ok(EnergyFit {
        model,
        a: (ib[0] - c).exp(),
        b: ib[1],
        c,
        residual,
        reference_residual,
        condition_number,
        floored,
    })
}

/// |h⁽⁴⁾| from the fitted ratio η/ν₄ with ν₄ = 2βε₄α₄ and η = βȟ⁽⁴⁾:
/// |h⁽⁴⁾| = |η/ν₄|·2ε₄α₄ / (2α₁α₂α₃α₄|cos(θ_p/2)|).
pub fn estimate_h4(eta: f64, nu4: f64, eps4: f64, alpha: &[f64; 4], theta_p: f64) -> Result<f64> {
    if nu4 == 0.0 {
        return Err(Error::InvalidParameter("nu4 must be nonzero".into()));
    }
    let denom = 2.0 * alpha.iter().product::<f64>() * (theta_p / 2.0).cos().abs();
    if !(denom > 0.0) {
        return Err(Error::InvalidParameter(
            "amplitudes and cos(theta_p/2) must be nonzero".into(),
        ));
    }
    Ok((eta / nu4).abs() * 2.0 * eps4 * alpha[3] / denom)
}
