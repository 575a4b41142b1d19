//! Physical constants (CODATA exact values) and frequency unit conversions.

use std::f64::consts::PI;

/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant, J s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Reduced flux quantum ħ/2e, Wb.
pub const PHI0: f64 = HBAR / (2.0 * E_CHARGE);

pub const FEMTO: f64 = 1e-15;
pub const PICO: f64 = 1e-12;
pub const NANO: f64 = 1e-9;

/// Angular frequency (rad/s) from an ordinary frequency in GHz.
pub fn ghz(f: f64) -> f64 {
    2.0 * PI * f * 1e9
}

/// Angular frequency (rad/s) from an ordinary frequency in MHz.
pub fn mhz(f: f64) -> f64 {
    2.0 * PI * f * 1e6
}

/// Angular frequency (rad/s) from an ordinary frequency in kHz.
pub fn khz(f: f64) -> f64 {
    2.0 * PI * f * 1e3
}

/// Ordinary frequency in GHz from an angular frequency.
pub fn to_ghz(w: f64) -> f64 {
    w / (2.0 * PI * 1e9)
}

/// Ordinary frequency in MHz from an angular frequency.
pub fn to_mhz(w: f64) -> f64 {
    w / (2.0 * PI * 1e6)
}

/// Ordinary frequency in Hz from an angular frequency.
pub fn to_hz(w: f64) -> f64 {
    w / (2.0 * PI)
}

/// Charging energy e²/2C expressed as an angular frequency.
pub fn charging_rate(c: f64) -> f64 {
    E_CHARGE * E_CHARGE / (2.0 * c) / HBAR
}
