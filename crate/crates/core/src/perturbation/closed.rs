//! Closed-form four-body couplings. All inputs and outputs in rad/s except the
//! dimensionless mixing coefficients.
//!
//! Sign convention: the four-body Hamiltonian term is −c·(a₁†a₂†a₃a₄ + h.c.) for every
//! coupling c returned here.

use crate::error::{Error, Result};

fn positive_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "unit detuning must be positive, got {eps:e}"
        )));
    }
    Ok(())
}

/// Δ_jk = ω_j − ω_k for 0-based indices, erroring on degeneracy.
fn delta(omega: &[f64; 4], j: usize, k: usize) -> Result<f64> {
    let d = omega[j] - omega[k];
    if d == 0.0 {
        return Err(Error::Degenerate(j, k));
    }
    Ok(d)
}

/// g⁽⁴⁾ = 2 g̃₁g̃₂g̃₃g̃₄ K_g.
pub fn g4_closed_form(k_g: f64, g_tilde: &[f64; 4]) -> f64 {
    2.0 * g_tilde.iter().product::<f64>() * k_g
}

/// g⁽⁴⁾ = g_g⁴ K_g / (2ε⁴) on the ω_g ± ε, ω_g ± 2ε ladder.
pub fn g4_symmetric(g_g: f64, eps: f64, k_g: f64) -> Result<f64> {
    positive_eps(eps)?;
    Ok(g_g.powi(4) / (2.0 * eps.powi(4)) * k_g)
}

/// h⁽⁴⁾ = Σ_j 2K_j Π_{k≠j} h̃_kj.
pub fn h4_general(kerr: &[f64; 4], h_tilde: &[Vec<f64>]) -> f64 {
    (0..4)
        .map(|j| {
            let prod: f64 = (0..4).filter(|&k| k != j).map(|k| h_tilde[k][j]).product();
            2.0 * kerr[j] * prod
        })
        .sum()
}

/// Symmetric circuit (h₁₂ = h₃₄, other pairs h₁₃) with ω₁ + ω₂ = ω₃ + ω₄:
/// h⁽⁴⁾ = 2h₁₂h₁₃²[(K₂ − K₁)Δ₃₄ + (K₃ − K₄)Δ₁₂]/(Δ₁₂Δ₁₃Δ₁₄Δ₃₄).
pub fn h4_symmetric(h12: f64, h13: f64, kerr: &[f64; 4], omega: &[f64; 4]) -> Result<f64> {
    let d12 = delta(omega, 0, 1)?;
    let d13 = delta(omega, 0, 2)?;
    let d14 = delta(omega, 0, 3)?;
    let d34 = delta(omega, 2, 3)?;
    let num = (kerr[1] - kerr[0]) * d34 + (kerr[2] - kerr[3]) * d12;
    Ok(2.0 * h12 * h13 * h13 * num / (d12 * d13 * d14 * d34))
}

/// Equal couplings on the ω₂ = ω₁ − 3ε, ω₃ = ω₁ − ε, ω₄ = ω₁ − 2ε ladder:
/// h⁽⁴⁾ = h_q³[(K₂ − K₁) + 3(K₃ − K₄)]/(3ε³).
pub fn h4_detuning(h_q: f64, eps: f64, kerr: &[f64; 4]) -> Result<f64> {
    positive_eps(eps)?;
    let num = (kerr[1] - kerr[0]) + 3.0 * (kerr[2] - kerr[3]);
    Ok(h_q.powi(3) * num / (3.0 * eps.powi(3)))
}

/// Mixed SQUID/SNAIL plaquette on the same ladder, KPOs 1 and 4 being SNAILs:
/// h⁽⁴⁾ = h_QN²[−h_NN(K₁ + 3K₄) + h_QQ(K₂ + 3K₃)]/(3ε³).
pub fn h4_snail(h_qn: f64, h_nn: f64, h_qq: f64, kerr: &[f64; 4], eps: f64) -> Result<f64> {
    positive_eps(eps)?;
    let num = -h_nn * (kerr[0] + 3.0 * kerr[3]) + h_qq * (kerr[1] + 3.0 * kerr[2]);
    Ok(h_qn * h_qn * num / (3.0 * eps.powi(3)))
}

/// Only KPO 4 couples to the others (all with h′): h̃⁽⁴⁾ = −2h′³K₄/(Δ₁₃Δ₁₄Δ₃₄).
pub fn h4_tilde(h_prime: f64, omega: &[f64; 4], k4: f64) -> Result<f64> {
    let d13 = delta(omega, 0, 2)?;
    let d14 = delta(omega, 0, 3)?;
    let d34 = delta(omega, 2, 3)?;
    Ok(-2.0 * h_prime.powi(3) * k4 / (d13 * d14 * d34))
}

/// [`h4_tilde`] on the ladder: h̃⁽⁴⁾ = −h′³K₄/ε³.
pub fn h4_tilde_ladder(h_prime: f64, eps: f64, k4: f64) -> Result<f64> {
    positive_eps(eps)?;
    Ok(-h_prime.powi(3) * k4 / eps.powi(3))
}

/// All pairs except 2–3 coupled with h″:
/// h̃̃⁽⁴⁾ = 2K₁h̃₂₁h̃₃₁h̃₄₁ + 2K₄h̃₁₄h̃₂₄h̃₃₄ = −2h″³(K₁Δ₃₄ + K₄Δ₁₂)/(Δ₁₂Δ₁₃Δ₁₄Δ₃₄).
pub fn h4_double_tilde(h_dprime: f64, omega: &[f64; 4], k1: f64, k4: f64) -> Result<f64> {
    let d12 = delta(omega, 0, 1)?;
    let d13 = delta(omega, 0, 2)?;
    let d14 = delta(omega, 0, 3)?;
    let d34 = delta(omega, 2, 3)?;
    Ok(-2.0 * h_dprime.powi(3) * (k1 * d34 + k4 * d12) / (d12 * d13 * d14 * d34))
}

/// Frequencies ω₁, ω₁ − 3ε, ω₁ − ε, ω₁ − 2ε.
pub fn kpo_ladder(omega1: f64, eps: f64) -> [f64; 4] {
    [omega1, omega1 - 3.0 * eps, omega1 - eps, omega1 - 2.0 * eps]
}

/// Frequencies ω_g + 2ε, ω_g − 2ε, ω_g + ε, ω_g − ε.
pub fn coupler_ladder(omega_g: f64, eps: f64) -> [f64; 4] {
    [omega_g + 2.0 * eps, omega_g - 2.0 * eps, omega_g + eps, omega_g - eps]
}
