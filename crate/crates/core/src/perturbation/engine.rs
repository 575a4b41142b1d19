//! Operator-level engine: Kerr terms under the first-order mode mixing, then the
//! rotating-wave filter of a pump assignment.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BosonicPolynomial, MixingCoefficients, ModeSpectrum, Monomial};
use crate::pumpplan::PumpAssignment;

/// Σ_j −(K_j/2) a_j†² a_j² with every a_j replaced by its first-order mixed form.
///
/// Mode order is KPOs then the coupler. The result is Hermitian.
pub fn transform_kerr(spectrum: &ModeSpectrum, mixing: &MixingCoefficients) -> BosonicPolynomial {
    let modes = spectrum.all_modes();
    let t = mixing.transform_matrix();
    let m = modes.len();
    assert_eq!(t.len(), m, "mixing and spectrum disagree on the mode count");
    let mut out = BosonicPolynomial::zero(m);
    for (j, mode) in modes.iter().enumerate() {
        if mode.kerr == 0.0 {
            continue;
        }
        let coeffs: Vec<Complex64> = t[j].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let a = BosonicPolynomial::linear_annihilation(&coeffs);
        let ad = a.dagger();
        let term = ad.mul(&ad).mul(&a).mul(&a);
        out = out.add(&term.scale(Complex64::new(-mode.kerr / 2.0, 0.0)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TermClass {
    Quadratic,
    SelfKerr,
    CrossKerr,
    /// a_i†a_j†a_k a_l with four distinct modes.
    FourBody,
    /// a_i†a_j†a_k² and its conjugate.
    ResidualOne,
    /// a_i†³a_j²a_k and its conjugate.
    ResidualTwo,
    Other,
}

impl TermClass {
    pub fn label(&self) -> &'static str {
        match self {
            TermClass::Quadratic => "quadratic",
            TermClass::SelfKerr => "self-kerr",
            TermClass::CrossKerr => "cross-kerr",
            TermClass::FourBody => "four-body",
            TermClass::ResidualOne => "residual-1",
            TermClass::ResidualTwo => "residual-2",
            TermClass::Other => "other",
        }
    }
}

/// Sorted nonzero exponents on one side of a monomial.
fn side_pattern(exps: &[u8]) -> Vec<u8> {
    let mut v: Vec<u8> = exps.iter().copied().filter(|&e| e > 0).collect();
    v.sort_unstable();
    v
}

pub fn classify(m: &Monomial) -> TermClass {
    let deg = m.degree();
    if deg == 2 {
        return TermClass::Quadratic;
    }
    if m.is_number_conserving() && deg == 4 {
        let active = m.cre.iter().filter(|&&e| e > 0).count();
        return match active {
            1 => TermClass::SelfKerr,
            2 => TermClass::CrossKerr,
            _ => TermClass::Other,
        };
    }
    let overlap = m.cre.iter().zip(&m.ann).any(|(&c, &a)| c > 0 && a > 0);
    if overlap {
        return TermClass::Other;
    }
    let (c, a) = (side_pattern(&m.cre), side_pattern(&m.ann));
    let (small, large) = if c <= a { (c, a) } else { (a, c) };
    match (small.as_slice(), large.as_slice()) {
        ([1, 1], [1, 1]) => TermClass::FourBody,
        ([1, 1], [2]) => TermClass::ResidualOne,
        ([1, 2], [3]) => TermClass::ResidualTwo,
        _ => TermClass::Other,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub monomial: Monomial,
    pub class: TermClass,
    /// rad/s
    pub coefficient: Complex64,
    /// Net rotation in the pump frame, rad/s.
    pub rotation_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FourBodyReport {
    pub entries: Vec<ReportEntry>,
}

impl FourBodyReport {
    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.entries
            .iter()
            .find(|e| &e.monomial == m)
            .map(|e| e.coefficient)
            .unwrap_or_default()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.entries.iter().any(|e| &e.monomial == m)
    }

    pub fn of_class(&self, class: TermClass) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(move |e| e.class == class)
    }
}

/// Keeps monomials that are stationary in the frame rotating at ω_pj/2 for each KPO.
///
/// Modes beyond the pumped ones (the coupler) rotate at their own frequency, so any
/// monomial that changes their excitation number is dropped.
pub fn rwa_filter(poly: &BosonicPolynomial, pump: &PumpAssignment, tol: f64) -> FourBodyReport {
    let pumped = pump.omega_p.len();
    let mut entries = Vec::new();
    for (m, &c) in poly.terms() {
        let change = m.excitation_change();
        if change.iter().skip(pumped).any(|&d| d != 0) {
            continue;
        }
        let rotation: f64 = change
            .iter()
            .zip(&pump.omega_p)
            .map(|(&d, &w)| d as f64 * w / 2.0)
            .sum();
        if rotation.abs() < tol {
            entries.push(ReportEntry {
                monomial: m.clone(),
                class: classify(m),
                coefficient: c,
                rotation_residual: rotation,
            });
        }
    }
    FourBodyReport { entries }
}
