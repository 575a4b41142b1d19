//! Pump-frequency bookkeeping: four-body mixing conditions, integer resonance relations,
//! and nine-frequency plans for LHZ lattices.

mod lhz;
mod relations;

pub use lhz::{
    default_frequencies, lhz_frequencies, lhz_plan, validate_plan, LhzPlan, Plaquette,
    PlaquetteViolation, Site, StarReport, DEFAULT_OFFSETS, PLAQUETTE_LINES,
};
pub use relations::{detect_residual, RelationClass, ResonanceCondition, MAX_RELATION_ORDER};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::khz;

/// Default tolerance for resonance conditions, rad/s.
pub fn default_tolerance() -> f64 {
    khz(1.0)
}

/// Pump frequency and phase for each KPO of a plaquette (or lattice).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpAssignment {
    /// rad/s
    pub omega_p: Vec<f64>,
    /// rad
    pub theta_p: Vec<f64>,
}

impl PumpAssignment {
    pub fn new(omega_p: Vec<f64>) -> Result<Self> {
        let theta_p = vec![0.0; omega_p.len()];
        Self::with_phases(omega_p, theta_p)
    }

    pub fn with_phases(omega_p: Vec<f64>, theta_p: Vec<f64>) -> Result<Self> {
        if omega_p.len() != theta_p.len() {
            return Err(Error::InvalidParameter(
                "one pump phase per pump frequency is required".into(),
            ));
        }
        if let Some(w) = omega_p.iter().find(|w| !(**w > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "pump frequencies must be positive, got {w:e}"
            )));
        }
        Ok(PumpAssignment { omega_p, theta_p })
    }

    /// θ_p = θ_p1 + θ_p2 − θ_p3 − θ_p4 for the first four pumps.
    pub fn plaquette_phase(&self) -> f64 {
        let t = &self.theta_p;
        t[0] + t[1] - t[2] - t[3]
    }
}

/// Pairing of four KPOs into two pairs with equal pump-frequency sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Partition {
    /// ω_p1 + ω_p2 = ω_p3 + ω_p4
    P12_34,
    /// ω_p1 + ω_p3 = ω_p2 + ω_p4
    P13_24,
    /// ω_p1 + ω_p4 = ω_p2 + ω_p3
    P14_23,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::P12_34, Partition::P13_24, Partition::P14_23];

    /// 0-based index pairs ((a, b), (c, d)) with ω_a + ω_b = ω_c + ω_d.
    pub fn pairs(&self) -> ((usize, usize), (usize, usize)) {
        match self {
            Partition::P12_34 => ((0, 1), (2, 3)),
            Partition::P13_24 => ((0, 2), (1, 3)),
            Partition::P14_23 => ((0, 3), (1, 2)),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Partition::P12_34 => "12|34",
            Partition::P13_24 => "13|24",
            Partition::P14_23 => "14|23",
        }
    }
}

/// Partitions of the first four pumps whose sums agree to within `tol` (rad/s).
pub fn check_mixing(pump: &PumpAssignment, tol: f64) -> Result<Vec<Partition>> {
    if pump.omega_p.len() != 4 {
        return Err(Error::InvalidParameter(format!(
            "mixing check needs exactly four pumps, got {}",
            pump.omega_p.len()
        )));
    }
    let w = &pump.omega_p;
    Ok(Partition::ALL
        .into_iter()
        .filter(|p| {
            let ((a, b), (c, d)) = p.pairs();
            ((w[a] + w[b]) - (w[c] + w[d])).abs() <= tol
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ghz;

    fn pumps(f: [f64; 4]) -> PumpAssignment {
        PumpAssignment::new(f.iter().map(|&x| ghz(2.0 * x)).collect()).unwrap()
    }

    #[test]
    fn matched_set_meets_one_partition() {
        let p = pumps([9.270, 9.249, 9.290, 9.229]);
        assert_eq!(check_mixing(&p, default_tolerance()).unwrap(), vec![Partition::P12_34]);
    }

    #[test]
    fn detuned_set_meets_nothing() {
        let p = pumps([9.270, 9.249, 9.289, 9.229]);
        assert!(check_mixing(&p, default_tolerance()).unwrap().is_empty());
    }

    #[test]
    fn equal_pumps_meet_everything() {
        let p = pumps([9.0; 4]);
        assert_eq!(check_mixing(&p, 0.0).unwrap().len(), 3);
    }

    #[test]
    fn plaquette_phase_combination() {
        let p = PumpAssignment::with_phases(vec![1.0; 4], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!((p.plaquette_phase() - (-0.4)).abs() < 1e-15);
    }
}
