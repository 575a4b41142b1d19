//! Resonance frequency and Kerr nonlinearity of junction-based resonators.
//!
//! A KPO or coupler is a capacitance `C` shunted by a linear inductance `L` in series
//! with Josephson elements. SQUIDs are represented by their effective inductance at the
//! operating point; single junctions by their critical current. SNAILs have their own
//! expansion about the flux-biased equilibrium (see [`snail`]).

mod snail;

pub use snail::{
    snail_current, snail_equilibrium_phase, snail_expansion, snail_kerr_frequency_fit,
    snail_mode_params, snail_potential, LinearFit, Snail, SnailExpansion,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{charging_rate, PHI0};

/// Josephson element attached to a resonator branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum JunctionElement {
    /// SQUID modeled by its effective Josephson inductance (H).
    Squid { l_jsq: f64 },
    /// Single junction with critical current `i0` (A).
    SingleJunction { i0: f64 },
    /// Elements in series; the Kerr formula cubes each junction inductance separately.
    SeriesStack(Vec<JunctionElement>),
    Snail(Snail),
}

/// Angular frequency and signed Kerr nonlinearity of one mode, both in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    pub omega: f64,
    pub kerr: f64,
}

/// Josephson inductance φ₀/I₀.
pub fn josephson_inductance(i0: f64) -> f64 {
    PHI0 / i0
}

/// Critical current giving the Josephson inductance `l_j`.
pub fn critical_current(l_j: f64) -> f64 {
    PHI0 / l_j
}

impl JunctionElement {
    /// Josephson inductances of every junction-like component, flattened.
    pub fn junction_inductances(&self) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        self.collect_inductances(&mut out)?;
        Ok(out)
    }

    fn collect_inductances(&self, out: &mut Vec<f64>) -> Result<()> {
        match self {
            JunctionElement::Squid { l_jsq } => {
                if !(*l_jsq > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "SQUID inductance must be positive, got {l_jsq:e} H"
                    )));
                }
                out.push(*l_jsq);
            }
            JunctionElement::SingleJunction { i0 } => {
                if !(*i0 > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "critical current must be positive, got {i0:e} A"
                    )));
                }
                out.push(josephson_inductance(*i0));
            }
            JunctionElement::SeriesStack(items) => {
                if items.is_empty() {
                    return Err(Error::InvalidParameter("empty series stack".into()));
                }
                for item in items {
                    item.collect_inductances(out)?;
                }
            }
            JunctionElement::Snail(_) => {
                return Err(Error::InvalidParameter(
                    "SNAIL elements are handled by snail_mode_params".into(),
                ))
            }
        }
        Ok(())
    }
}

/// ω = 1/√(C(L+ΣL_J)) and ħK = ΣL_J³/(L+ΣL_J)³ · e²/2C.
pub fn kpo_mode_params(c_eff: f64, l_geom: f64, element: &JunctionElement) -> Result<ModeParams> {
    if !(c_eff > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "effective capacitance must be positive, got {c_eff:e} F"
        )));
    }
    if l_geom < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "linear inductance must be non-negative, got {l_geom:e} H"
        )));
    }
    let l_j = element.junction_inductances()?;
    let l_total = l_geom + l_j.iter().sum::<f64>();
    let cubes: f64 = l_j.iter().map(|l| l * l * l).sum();
    let omega = 1.0 / (c_eff * l_total).sqrt();
    let kerr = cubes / l_total.powi(3) * charging_rate(c_eff);
    Ok(ModeParams { omega, kerr })
}

/// Total inductance that places the resonance at `omega`.
fn required_inductance(omega: f64, c_eff: f64) -> Result<f64> {
    if !(omega > 0.0) || !(c_eff > 0.0) {
        return Err(Error::InvalidParameter(
            "target frequency and capacitance must be positive".into(),
        ));
    }
    Ok(1.0 / (omega * omega * c_eff))
}

/// L_Jsq = 1/(ω²C) − L − L_Jsr.
pub fn squid_inductance_for_frequency(
    omega_target: f64,
    c_eff: f64,
    l_geom: f64,
    l_jsr: f64,
) -> Result<f64> {
    let l_jsq = required_inductance(omega_target, c_eff)? - l_geom - l_jsr;
    if l_jsq <= 0.0 {
        return Err(Error::Unreachable(format!(
            "{:.6} GHz needs L_Jsq = {:.3} pH",
            crate::units::to_ghz(omega_target),
            l_jsq * 1e12
        )));
    }
    Ok(l_jsq)
}

/// Critical current of a single junction that places the resonance at `omega`.
pub fn junction_current_for_frequency(omega_target: f64, c_eff: f64, l_geom: f64) -> Result<f64> {
    let l_j = squid_inductance_for_frequency(omega_target, c_eff, l_geom, 0.0)?;
    Ok(critical_current(l_j))
}
