//! TOML run configurations. Every key is optional; command-line flags override file values.

use std::f64::consts::PI;
use std::path::Path;

use kpo4_core::presets::device;
use kpo4_core::spinmodel::{InteractionSet, OscillationConfig};
use kpo4_core::units::mhz;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::output::Provenance;
use crate::CliError;

/// Reads `path` (if any) into `T` and records its bytes in the provenance hash.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>, prov: &mut Provenance) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    prov.feed(text.as_bytes());
    toml::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Linear or logarithmic grid with `points ≥ 2` and `start < stop`.
pub fn grid(start: f64, stop: f64, points: usize, log: bool) -> Result<Vec<f64>, CliError> {
    if points < 2 {
        return Err(CliError::Usage(format!("need at least 2 points, got {points}")));
    }
    if !(start < stop) {
        return Err(CliError::Usage(format!("start {start} must be below stop {stop}")));
    }
    if log && !(start > 0.0) {
        return Err(CliError::Usage("logarithmic grids need a positive start".into()));
    }
    let t = |i: usize| i as f64 / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if log {
                (start.ln() + (stop.ln() - start.ln()) * t(i)).exp()
            } else {
                start + (stop - start) * t(i)
            }
        })
        .collect())
}

/// Oscillation amplitudes, drives and couplings of the spin model. Frequencies in MHz,
/// phases in rad.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelFile {
    pub alpha: [f64; 4],
    pub epsilon_mhz: [f64; 4],
    pub theta_d: [f64; 4],
    pub theta_p: [f64; 4],
    pub h4_mhz: f64,
    pub g1_mhz: f64,
    pub g2_mhz: f64,
    pub g3_mhz: f64,
    pub g4_mhz: f64,
    /// Fixed β in s/rad; when absent β is calibrated to `target_even`.
    pub beta: Option<f64>,
    /// Even-parity probability at θ_p = 0 used to calibrate β.
    pub target_even: f64,
}

impl Default for ModelFile {
    /// The measured amplitudes with no coherent drive and h⁽⁴⁾ = 0.1 MHz.
    fn default() -> Self {
        ModelFile {
            alpha: device::ALPHA,
            epsilon_mhz: [0.0; 4],
            theta_d: [0.0, 0.0, 0.0, PI / 2.0],
            theta_p: [0.0; 4],
            h4_mhz: 0.1,
            g1_mhz: 0.0,
            g2_mhz: 0.0,
            g3_mhz: 0.0,
            g4_mhz: 0.0,
            beta: None,
            target_even: device::EVEN_PARITY_MAX,
        }
    }
}

impl ModelFile {
    pub fn oscillation(&self) -> OscillationConfig {
        OscillationConfig {
            alpha: self.alpha,
            epsilon: self.epsilon_mhz.map(mhz),
            theta_d: self.theta_d,
            theta_p: self.theta_p,
        }
    }

    pub fn interactions(&self) -> InteractionSet {
        InteractionSet {
            h4: mhz(self.h4_mhz),
            g1: mhz(self.g1_mhz),
            g2: mhz(self.g2_mhz),
            g3: mhz(self.g3_mhz),
            g4: mhz(self.g4_mhz),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(grid(1.0, 3.0, 3, false).unwrap(), vec![1.0, 2.0, 3.0]);
        let g = grid(10.0, 1000.0, 3, true).unwrap();
        assert!((g[1] - 100.0).abs() < 1e-9);
        assert!(grid(1.0, 1.0, 3, false).is_err());
        assert!(grid(0.0, 1.0, 3, true).is_err());
        assert!(grid(0.0, 1.0, 1, false).is_err());
    }

    #[test]
    fn model_file_keys() {
        let m: ModelFile = toml::from_str("h4_mhz = 0.2\nbeta = 1e-9").unwrap();
        assert_eq!(m.h4_mhz, 0.2);
        assert_eq!(m.alpha, device::ALPHA);
        assert!(toml::from_str::<ModelFile>("h4 = 1").is_err());
    }
}
