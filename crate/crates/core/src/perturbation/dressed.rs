//! Dressed frequencies and Kerr coefficients, cross-Kerr couplings, and the leading-order
//! inversion from measured dressed values back to bare ones.
//!
//! The coupler, when present, is treated as one more mode (last index) coupled through
//! s_j g_j.

use serde::{Deserialize, Serialize};

use super::{sw_mixing, CouplingGraph, MixingCoefficients, ModeSpectrum};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DressedSpectrum {
    /// ω̃_j = ω_j − K_j + Ω_j, rad/s.
    pub omega: Vec<f64>,
    /// K̃_j, rad/s.
    pub kerr: Vec<f64>,
    /// −K_j, the shift from normal ordering the quartic potential.
    pub lamb_shift: Vec<f64>,
    /// The three sums making up Ω_j: second order, and the two third-order pieces
    /// (the last one already carries its minus sign).
    pub omega_terms: Vec<[f64; 3]>,
}

impl DressedSpectrum {
    /// Ω_j.
    pub fn exchange_shift(&self, j: usize) -> f64 {
        self.omega_terms[j].iter().sum()
    }
}

pub fn dressed_spectrum(spectrum: &ModeSpectrum, couplings: &CouplingGraph) -> Result<DressedSpectrum> {
    // Validates shapes, degeneracy and the perturbative guard.
    sw_mixing(spectrum, couplings)?;
    let modes = spectrum.all_modes();
    let j_mat = couplings.exchange_matrix();
    let m = modes.len();
    let d = |a: usize, b: usize| modes[a].omega - modes[b].omega;
    let x = |a: usize, b: usize| {
        if j_mat[a][b] == 0.0 {
            0.0
        } else {
            j_mat[a][b] / d(a, b)
        }
    };
    let mut omega = Vec::with_capacity(m);
    let mut kerr = Vec::with_capacity(m);
    let mut lamb_shift = Vec::with_capacity(m);
    let mut omega_terms = Vec::with_capacity(m);
    for j in 0..m {
        let others: Vec<usize> = (0..m).filter(|&k| k != j).collect();
        let s1: f64 = others.iter().map(|&k| j_mat[j][k] * x(j, k)).sum();
        let mut s2 = 0.0;
        let mut s3 = 0.0;
        for &k in &others {
            for &l in &others {
                if k == l {
                    continue;
                }
                s2 += j_mat[j][k] * x(k, l) * x(l, j);
                if k < l {
                    s3 += x(j, k) * j_mat[k][l] * x(l, j);
                }
            }
        }
        let mix2: f64 = others.iter().map(|&k| x(j, k) * x(k, j)).sum();
        let terms = [s1, s2, -s3];
        lamb_shift.push(-modes[j].kerr);
        omega.push(modes[j].omega - modes[j].kerr + terms.iter().sum::<f64>());
        kerr.push((1.0 + 2.0 * mix2) * modes[j].kerr);
        omega_terms.push(terms);
    }
    Ok(DressedSpectrum {
        omega,
        kerr,
        lamb_shift,
        omega_terms,
    })
}

/// Leading-order bare parameters from measured dressed ones: ω = ω̃ + K̃, K = K̃.
/// Higher-order corrections (Ω_j and the K̃ renormalization) are neglected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BareEstimate {
    pub omega: Vec<f64>,
    pub kerr: Vec<f64>,
    pub higher_orders_neglected: bool,
}

pub fn invert_dressed(omega_dressed: &[f64], kerr_dressed: &[f64]) -> BareEstimate {
    assert_eq!(omega_dressed.len(), kerr_dressed.len(), "length mismatch");
    BareEstimate {
        omega: omega_dressed
            .iter()
            .zip(kerr_dressed)
            .map(|(w, k)| w + k)
            .collect(),
        kerr: kerr_dressed.to_vec(),
        higher_orders_neglected: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossKerr {
    pub j: usize,
    pub k: usize,
    /// Coefficient of n_j n_k, rad/s.
    pub chi: f64,
}

/// χ_jk = −2x_jk²(K_j + K_k) for every coupled pair, x being h̃_jk or g̃_j.
pub fn cross_kerr(spectrum: &ModeSpectrum, mixing: &MixingCoefficients) -> Vec<CrossKerr> {
    let modes = spectrum.all_modes();
    let n = mixing.n_kpo();
    let mut out = Vec::new();
    for j in 0..n {
        for k in (j + 1)..n {
            let x = mixing.h_tilde[j][k];
            if x != 0.0 {
                out.push(CrossKerr {
                    j,
                    k,
                    chi: -2.0 * x * x * (modes[j].kerr + modes[k].kerr),
                });
            }
        }
    }
    for (j, &x) in mixing.g_tilde.iter().enumerate() {
        if x != 0.0 {
            out.push(CrossKerr {
                j,
                k: n,
                chi: -2.0 * x * x * (modes[j].kerr + modes[n].kerr),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::ModeParams;
    use crate::units::{ghz, mhz};

    #[test]
    fn uncoupled_is_lamb_shift_only() {
        let spec = ModeSpectrum::new(vec![
            ModeParams { omega: ghz(10.0), kerr: mhz(5.0) },
            ModeParams { omega: ghz(9.9), kerr: mhz(20.0) },
        ]);
        let d = dressed_spectrum(&spec, &CouplingGraph::uncoupled(2)).unwrap();
        assert_eq!(d.omega[0], ghz(10.0) - mhz(5.0));
        assert_eq!(d.omega[1], ghz(9.9) - mhz(20.0));
        assert_eq!(d.kerr[1], mhz(20.0));
    }

    #[test]
    fn kerr_is_reduced() {
        let spec = ModeSpectrum::new(vec![
            ModeParams { omega: ghz(10.0), kerr: mhz(5.0) },
            ModeParams { omega: ghz(9.9), kerr: mhz(20.0) },
        ]);
        let mut c = CouplingGraph::uncoupled(2);
        c.set_h(0, 1, mhz(5.0));
        let d = dressed_spectrum(&spec, &c).unwrap();
        assert!(d.kerr[0] < mhz(5.0) && d.kerr[1] < mhz(20.0));
    }

    #[test]
    fn leading_order_inversion() {
        let b = invert_dressed(&[ghz(9.33)], &[mhz(10.4)]);
        assert!((b.omega[0] - ghz(9.3404)).abs() < 1e-3);
        let z = invert_dressed(&[ghz(9.33)], &[0.0]);
        assert_eq!(z.omega[0], ghz(9.33));
    }

    #[test]
    fn opposite_kerr_cancels_cross_kerr() {
        let spec = ModeSpectrum::with_coupler(
            vec![ModeParams { omega: ghz(10.1), kerr: mhz(10.0) }],
            ModeParams { omega: ghz(10.0), kerr: mhz(-10.0) },
        );
        let c = CouplingGraph::uncoupled(1).with_coupler(vec![mhz(5.0)]);
        let mix = sw_mixing(&spec, &c).unwrap();
        let chi = cross_kerr(&spec, &mix);
        assert_eq!(chi.len(), 1);
        assert_eq!(chi[0].chi, 0.0);
    }
}
