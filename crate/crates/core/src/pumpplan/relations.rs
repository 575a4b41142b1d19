//! Exhaustive search for small integer relations Σ n_j ω_pj ≈ 0 among pump frequencies.

use serde::{Deserialize, Serialize};

use super::PumpAssignment;
use crate::units::to_hz;

/// Largest supported Σ|n_j|.
pub const MAX_RELATION_ORDER: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationClass {
    /// Pattern (1, 1, −1, −1).
    FourBody,
    /// Pattern (1, 1, −2).
    ResidualOne,
    /// Pattern (3, −2, −1).
    ResidualTwo,
    Other,
}

impl RelationClass {
    pub fn label(&self) -> &'static str {
        match self {
            RelationClass::FourBody => "four-body",
            RelationClass::ResidualOne => "residual-1",
            RelationClass::ResidualTwo => "residual-2",
            RelationClass::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceCondition {
    /// Primitive coefficient vector, first nonzero entry positive.
    pub coefficients: Vec<i32>,
    /// Σ|n_j|.
    pub order: u32,
    pub class: RelationClass,
    /// Σ n_j ω_pj, rad/s.
    pub residual: f64,
}

impl ResonanceCondition {
    /// Human-readable relation, e.g. `w1 + w4 - 2 w2 = 0`.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (j, &n) in self.coefficients.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let sign = if n < 0 { "-" } else { "+" };
            if s.is_empty() {
                if n < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if n.abs() != 1 {
                s.push_str(&format!("{} ", n.abs()));
            }
            s.push_str(&format!("w{}", j + 1));
        }
        s.push_str(" = 0");
        s
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn classify_relation(n: &[i32]) -> RelationClass {
    let mut pos: Vec<i32> = n.iter().copied().filter(|&x| x > 0).collect();
    let mut neg: Vec<i32> = n.iter().copied().filter(|&x| x < 0).map(|x| -x).collect();
    pos.sort_unstable();
    neg.sort_unstable();
    let (a, b) = if pos <= neg { (pos, neg) } else { (neg, pos) };
    match (a.as_slice(), b.as_slice()) {
        ([1, 1], [1, 1]) => RelationClass::FourBody,
        ([1, 1], [2]) => RelationClass::ResidualOne,
        ([1, 2], [3]) => RelationClass::ResidualTwo,
        _ => RelationClass::Other,
    }
}

/// Visits every coefficient vector with Σ|n_j| ≤ `order`.
fn enumerate(len: usize, order: i32, cur: &mut Vec<i32>, visit: &mut impl FnMut(&[i32])) {
    if cur.len() == len {
        visit(cur);
        return;
    }
    let used: i32 = cur.iter().map(|x| x.abs()).sum();
    let left = order - used;
    for v in -left..=left {
        cur.push(v);
        enumerate(len, order, cur, visit);
        cur.pop();
    }
}

/// Frequencies as exact integer hertz when they all lie on a 1 Hz grid.
fn integer_grid(omega: &[f64]) -> Option<Vec<i128>> {
    omega
        .iter()
        .map(|&w| {
            let f = to_hz(w);
            let r = f.round();
            ((f - r).abs() < 1e-3).then_some(r as i128)
        })
        .collect()
}

/// All primitive relations with Σ|n_j| ≤ `max_order` (capped at [`MAX_RELATION_ORDER`])
/// and |Σ n_j ω_pj| ≤ `tol`, one representative per ± pair.
///
/// Frequencies on an integer-hertz grid are summed exactly in integer arithmetic.
pub fn detect_residual(pump: &PumpAssignment, max_order: u32, tol: f64) -> Vec<ResonanceCondition> {
    let order = max_order.min(MAX_RELATION_ORDER) as i32;
    let omega = &pump.omega_p;
    let grid = integer_grid(omega);
    let tol_hz = to_hz(tol);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(omega.len());
    enumerate(omega.len(), order, &mut cur, &mut |n: &[i32]| {
        let Some(first) = n.iter().find(|&&x| x != 0) else {
            return;
        };
        if *first < 0 {
            return;
        }
        let g = n.iter().fold(0u32, |acc, &x| gcd(acc, x.unsigned_abs()));
        if g != 1 {
            return;
        }
        let (hit, residual) = match &grid {
            Some(hz) => {
                let s: i128 = n.iter().zip(hz).map(|(&c, &f)| c as i128 * f).sum();
                ((s as f64).abs() <= tol_hz, 2.0 * std::f64::consts::PI * s as f64)
            }
            None => {
                let s: f64 = n.iter().zip(omega).map(|(&c, &w)| c as f64 * w).sum();
                (s.abs() <= tol, s)
            }
        };
        if hit {
            out.push(ResonanceCondition {
                coefficients: n.to_vec(),
                order: n.iter().map(|x| x.unsigned_abs()).sum(),
                class: classify_relation(n),
                residual,
            });
        }
    });
    out.sort_by(|a, b| a.order.cmp(&b.order).then(b.coefficients.cmp(&a.coefficients)));
    out
}
