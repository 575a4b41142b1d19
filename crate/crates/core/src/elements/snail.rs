//! SNAIL: `n` large junctions (critical current I₀) in a loop with one small junction (γI₀),
//! threaded by an external flux phase φ_X.
//!
//! All potential-derived quantities are normalized by φ₀I₀.

use serde::{Deserialize, Serialize};

use super::ModeParams;
use crate::error::{Error, Result};
use crate::units::{charging_rate, PHI0};

const SCAN_STEP: f64 = 1e-3;
/// Half-width of the window scanned around the previous branch point.
const TRACK_WINDOW: f64 = 0.5;
/// Largest flux increment between continuation steps.
const FLUX_STEP: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Snail {
    /// Critical current of each large junction, A.
    pub i0: f64,
    /// Small-to-large critical current ratio.
    pub gamma: f64,
    /// Number of large junctions.
    pub n: u32,
    /// External flux phase, rad.
    pub phi_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnailExpansion {
    pub phi_bar: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// Inductive participation of the SNAIL.
    pub p: f64,
}

impl Snail {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "SNAIL gamma must lie in (0, 1), got {}",
                self.gamma
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidParameter("SNAIL needs n >= 1".into()));
        }
        if !(self.i0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "SNAIL critical current must be positive, got {:e} A",
                self.i0
            )));
        }
        if !self.phi_x.is_finite() {
            return Err(Error::InvalidParameter("SNAIL flux must be finite".into()));
        }
        Ok(())
    }

    fn with_flux(&self, phi_x: f64) -> Snail {
        Snail { phi_x, ..*self }
    }
}

/// U(φ)/φ₀I₀ = −γ cos φ − n cos((φ_X − φ)/n).
pub fn snail_potential(s: &Snail, phi: f64) -> f64 {
    let n = s.n as f64;
    -s.gamma * phi.cos() - n * ((s.phi_x - phi) / n).cos()
}

/// Normalized loop current dU/dφ / φ₀I₀ = γ sin φ − sin((φ_X − φ)/n).
pub fn snail_current(s: &Snail, phi: f64) -> f64 {
    let n = s.n as f64;
    s.gamma * phi.sin() - ((s.phi_x - phi) / n).sin()
}

fn curvature(s: &Snail, phi: f64) -> f64 {
    let n = s.n as f64;
    s.gamma * phi.cos() + ((s.phi_x - phi) / n).cos() / n
}

fn bisect(s: &Snail, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = snail_current(s, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-14 {
            return mid;
        }
        let f_mid = snail_current(s, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Stable roots of the current equation in `[lo, hi]`.
fn stable_roots(s: &Snail, lo: f64, hi: f64) -> Vec<f64> {
    let steps = ((hi - lo) / SCAN_STEP).ceil() as usize;
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut f0 = snail_current(s, x0);
    for i in 1..=steps {
        let x1 = (lo + i as f64 * SCAN_STEP).min(hi);
        let f1 = snail_current(s, x1);
        if f0 == 0.0 || (f0 < 0.0) != (f1 < 0.0) {
            let r = if f0 == 0.0 { x0 } else { bisect(s, x0, x1) };
            if curvature(s, r) > 0.0 && roots.last().map_or(true, |&p: &f64| (r - p).abs() > 1e-9) {
                roots.push(r);
            }
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// Equilibrium phase on the branch continuously connected to φ̄ = 0 at φ_X = 0.
pub fn snail_equilibrium_phase(s: &Snail) -> Result<f64> {
    s.validate()?;
    if s.phi_x < 0.0 {
        return Ok(-snail_equilibrium_phase(&s.with_flux(-s.phi_x))?);
    }
    let steps = ((s.phi_x / FLUX_STEP).ceil() as usize).max(1);
    let mut phi = 0.0;
    for i in 1..=steps {
        let flux = s.phi_x * i as f64 / steps as f64;
        let cur = s.with_flux(flux);
        let (lo, hi) = (phi - TRACK_WINDOW, phi + TRACK_WINDOW);
        let roots = stable_roots(&cur, lo, hi);
        phi = roots
            .into_iter()
            .min_by(|a, b| (a - phi).abs().total_cmp(&(b - phi).abs()))
            .ok_or(Error::Bracketing { lo, hi })?;
    }
    Ok(phi)
}

/// Expansion coefficients c₂..c₄ at `phi_bar` and the participation for series inductance `l_geom`.
pub fn snail_expansion(s: &Snail, phi_bar: f64, l_geom: f64) -> Result<SnailExpansion> {
    s.validate()?;
    let n = s.n as f64;
    let u = (s.phi_x - phi_bar) / n;
    let c2 = s.gamma * phi_bar.cos() + u.cos() / n;
    let c3 = -s.gamma * phi_bar.sin() + u.sin() / (n * n);
    let c4 = -s.gamma * phi_bar.cos() - u.cos() / (n * n * n);
    if c2 <= 0.0 {
        return Err(Error::UnstableEquilibrium(c2));
    }
    let p = PHI0 / (PHI0 + c2 * l_geom * s.i0);
    Ok(SnailExpansion { phi_bar, c2, c3, c4, p })
}

/// Frequency and Kerr nonlinearity of a capacitively shunted SNAIL with series inductance.
pub fn snail_mode_params(c: f64, l_geom: f64, s: &Snail) -> Result<ModeParams> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "capacitance must be positive, got {c:e} F"
        )));
    }
    let phi_bar = snail_equilibrium_phase(s)?;
    let x = snail_expansion(s, phi_bar, l_geom)?;
    let r = x.c3 * x.c3 / x.c2;
    let bracket = x.c4 - 3.0 * r * (1.0 - x.p) - 5.0 / 3.0 * r * x.p;
    let kerr = -(x.p.powi(3) / x.c2) * bracket * charging_rate(c);
    let omega = 1.0 / (c * (l_geom + PHI0 / (x.c2 * s.i0))).sqrt();
    Ok(ModeParams { omega, kerr })
}

/// Least-squares line K(ω) = slope·ω + intercept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub max_residual: f64,
    /// max K − min K over the fitted points.
    pub kerr_range: f64,
}

impl LinearFit {
    pub fn eval(&self, omega: f64) -> f64 {
        self.slope * omega + self.intercept
    }
}

pub fn snail_kerr_frequency_fit(sweep: &[ModeParams]) -> Result<LinearFit> {
    if sweep.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "need at least 3 sweep points, got {}",
            sweep.len()
        )));
    }
    let n = sweep.len() as f64;
    let mean_w = sweep.iter().map(|m| m.omega).sum::<f64>() / n;
    let mean_k = sweep.iter().map(|m| m.kerr).sum::<f64>() / n;
    let sxx: f64 = sweep.iter().map(|m| (m.omega - mean_w).powi(2)).sum();
    let sxy: f64 = sweep
        .iter()
        .map(|m| (m.omega - mean_w) * (m.kerr - mean_k))
        .sum();
    if sxx <= (mean_w.abs() * 1e-12).powi(2) * n {
        return Err(Error::DegenerateInput("all sweep frequencies are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_k - slope * mean_w;
    let residuals: Vec<f64> = sweep
        .iter()
        .map(|m| m.kerr - (slope * m.omega + intercept))
        .collect();
    let rms_residual = (residuals.iter().map(|r| r * r).sum::<f64>() / n).sqrt();
    let max_residual = residuals.iter().fold(0.0_f64, |a, r| a.max(r.abs()));
    let (kmin, kmax) = sweep
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), m| {
            (a.min(m.kerr), b.max(m.kerr))
        });
    Ok(LinearFit {
        slope,
        intercept,
        rms_residual,
        max_residual,
        kerr_range: kmax - kmin,
    })
}
