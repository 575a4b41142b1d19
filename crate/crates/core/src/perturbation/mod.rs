//! First-order Schrieffer-Wolff treatment of capacitively coupled Kerr oscillators.
//!
//! Two-body couplings are removed to first order by the mixing coefficients
//! h̃_jk = h_jk/(ω_j − ω_k) and g̃_j = g_j/(ω_j − ω_g). Substituting the mixed operators
//! into the Kerr terms yields four-body and residual interactions; [`engine`] does this on
//! explicit operator polynomials, [`closed`] evaluates the corresponding closed forms.

pub mod closed;
pub mod dressed;
pub mod engine;
mod polynomial;

pub use closed::*;
pub use dressed::{cross_kerr, dressed_spectrum, invert_dressed, BareEstimate, CrossKerr, DressedSpectrum};
pub use engine::{classify, rwa_filter, transform_kerr, FourBodyReport, ReportEntry, TermClass};
pub use polynomial::{BosonicPolynomial, Monomial, PRUNE_THRESHOLD};

use serde::{Deserialize, Serialize};

use crate::elements::ModeParams;
use crate::error::{Error, Result};

/// Mixing magnitude above which a warning is logged.
pub const MIXING_WARN: f64 = 0.2;
/// Mixing magnitude above which the first-order treatment is refused.
pub const MIXING_LIMIT: f64 = 0.5;

/// Bare KPO modes and an optional coupler mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub kpo: Vec<ModeParams>,
    pub coupler: Option<ModeParams>,
}

impl ModeSpectrum {
    pub fn new(kpo: Vec<ModeParams>) -> Self {
        ModeSpectrum { kpo, coupler: None }
    }

    pub fn with_coupler(kpo: Vec<ModeParams>, coupler: ModeParams) -> Self {
        ModeSpectrum {
            kpo,
            coupler: Some(coupler),
        }
    }

    pub fn n_kpo(&self) -> usize {
        self.kpo.len()
    }

    /// KPO modes followed by the coupler, the mode order used by polynomials.
    pub fn all_modes(&self) -> Vec<ModeParams> {
        self.kpo.iter().copied().chain(self.coupler).collect()
    }
}

/// Two-body couplings in the form −h(a_j − a_j†)(a_k − a_k†) and −s_j g_j(a_j − a_j†)(a_g − a_g†).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingGraph {
    /// Symmetric KPO-KPO couplings with zero diagonal, rad/s.
    pub h: Vec<Vec<f64>>,
    /// KPO-coupler coupling magnitudes, rad/s. Empty when there is no coupler.
    pub g: Vec<f64>,
    /// Sign factors s_j ∈ {+1, −1}, one per KPO when a coupler is present.
    pub s: Vec<i8>,
}

impl CouplingGraph {
    pub fn uncoupled(n: usize) -> Self {
        CouplingGraph {
            h: vec![vec![0.0; n]; n],
            g: Vec::new(),
            s: Vec::new(),
        }
    }

    /// Every KPO pair coupled with the same `h`.
    pub fn uniform(n: usize, h: f64) -> Self {
        let mut c = Self::uncoupled(n);
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    c.h[j][k] = h;
                }
            }
        }
        c
    }

    pub fn set_h(&mut self, j: usize, k: usize, value: f64) {
        self.h[j][k] = value;
        self.h[k][j] = value;
    }

    /// Attaches a coupler with the given magnitudes and the (+, +, −, −, ...) sign pattern.
    pub fn with_coupler(mut self, g: Vec<f64>) -> Self {
        let n = g.len();
        self.s = (0..n).map(|j| if j < n / 2 { 1 } else { -1 }).collect();
        self.g = g;
        self
    }

    pub fn n_kpo(&self) -> usize {
        self.h.len()
    }

    pub fn has_coupler(&self) -> bool {
        !self.g.is_empty()
    }

    pub fn sign(&self, j: usize) -> f64 {
        self.s.get(j).copied().unwrap_or(1) as f64
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_kpo();
        for (j, row) in self.h.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidParameter("coupling matrix must be square".into()));
            }
            if row[j] != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "self-coupling h[{j}][{j}] must be zero"
                )));
            }
            for k in 0..n {
                if row[k] != self.h[k][j] {
                    return Err(Error::InvalidParameter(format!(
                        "coupling matrix not symmetric at ({j}, {k})"
                    )));
                }
            }
        }
        if self.has_coupler() {
            if self.g.len() != n || self.s.len() != n {
                return Err(Error::InvalidParameter(
                    "coupler couplings and signs need one entry per KPO".into(),
                ));
            }
            if self.s.iter().any(|&s| s != 1 && s != -1) {
                return Err(Error::InvalidParameter("sign factors must be +1 or -1".into()));
            }
        }
        Ok(())
    }

    /// Excitation-exchange matrix J over all modes (coupler last): J_jk = h_jk, J_jg = s_j g_j.
    pub fn exchange_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n_kpo();
        let m = n + usize::from(self.has_coupler());
        let mut out = vec![vec![0.0; m]; m];
        for j in 0..n {
            out[j][..n].copy_from_slice(&self.h[j]);
            if self.has_coupler() {
                out[j][n] = self.sign(j) * self.g[j];
                out[n][j] = out[j][n];
            }
        }
        out
    }
}

/// First-order mixing coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingCoefficients {
    /// h̃_jk = h_jk/(ω_j − ω_k); antisymmetric.
    pub h_tilde: Vec<Vec<f64>>,
    /// g̃_j = g_j/(ω_j − ω_g).
    pub g_tilde: Vec<f64>,
    pub s: Vec<i8>,
}

impl MixingCoefficients {
    pub fn n_kpo(&self) -> usize {
        self.h_tilde.len()
    }

    pub fn sign(&self, j: usize) -> f64 {
        self.s.get(j).copied().unwrap_or(1) as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.h_tilde
            .iter()
            .flatten()
            .chain(&self.g_tilde)
            .fold(0.0_f64, |a, x| a.max(x.abs()))
    }

    /// Coefficient of b_k in the first-order expansion of a_j over all modes (coupler last).
    pub fn transform_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n_kpo();
        let coupled = !self.g_tilde.is_empty();
        let m = n + usize::from(coupled);
        let mut t = vec![vec![0.0; m]; m];
        for j in 0..m {
            t[j][j] = 1.0;
        }
        for j in 0..n {
            for k in 0..n {
                if k != j {
                    t[j][k] = self.h_tilde[k][j];
                }
            }
            if coupled {
                t[j][n] = -self.sign(j) * self.g_tilde[j];
                t[n][j] = self.sign(j) * self.g_tilde[j];
            }
        }
        t
    }
}

fn check_mixing(value: f64, j: usize, k: usize) -> Result<f64> {
    let mag = value.abs();
    if mag > MIXING_LIMIT {
        return Err(Error::Nonperturbative(mag, j, k));
    }
    if mag > MIXING_WARN {
        log::warn!(
            "mixing {mag:.3} between modes {} and {} exceeds {MIXING_WARN}; first-order results are rough",
            j + 1,
            k + 1
        );
    }
    Ok(value)
}

fn ratio(coupling: f64, detuning: f64, j: usize, k: usize) -> Result<f64> {
    if coupling == 0.0 {
        return Ok(0.0);
    }
    if detuning == 0.0 {
        return Err(Error::Degenerate(j, k));
    }
    check_mixing(coupling / detuning, j, k)
}

/// h̃_jk and g̃_j with the validity guard. Mode indices in errors are 0-based; the coupler is `n`.
pub fn sw_mixing(spectrum: &ModeSpectrum, couplings: &CouplingGraph) -> Result<MixingCoefficients> {
    couplings.validate()?;
    let n = spectrum.n_kpo();
    if couplings.n_kpo() != n {
        return Err(Error::InvalidParameter(format!(
            "{} KPO modes but a {}-mode coupling graph",
            n,
            couplings.n_kpo()
        )));
    }
    let mut h_tilde = vec![vec![0.0; n]; n];
    for j in 0..n {
        for k in (j + 1)..n {
            let d = spectrum.kpo[j].omega - spectrum.kpo[k].omega;
            let x = ratio(couplings.h[j][k], d, j, k)?;
            h_tilde[j][k] = x;
            h_tilde[k][j] = -x;
        }
    }
    let g_tilde = if couplings.has_coupler() {
        let g = spectrum.coupler.ok_or_else(|| {
            Error::InvalidParameter("coupler couplings given without a coupler mode".into())
        })?;
        (0..n)
            .map(|j| ratio(couplings.g[j], spectrum.kpo[j].omega - g.omega, j, n))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(MixingCoefficients {
        h_tilde,
        g_tilde,
        s: couplings.s.clone(),
    })
}
