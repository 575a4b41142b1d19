//! Exact diagonalization in a truncated Fock space.
//!
//! H = Σ_j [ω_j n_j − (K_j/2) n_j(n_j − 1)] − Σ_{j<k} c_jk (a_j − a_j†)(a_k − a_k†), with
//! c_jk = h_jk between KPOs and s_j g_j between a KPO and the coupler (last mode). Both
//! rotating and counter-rotating coupling terms are kept. The basis is ordered
//! lexicographically in the occupation numbers, mode 1 most significant.

mod eigen;

pub use eigen::{lowest_eigenpairs, lowest_eigenpairs_iterative, Eigenpairs, DENSE_LIMIT};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perturbation::{CouplingGraph, ModeSpectrum};

/// Largest Hilbert-space dimension accepted by [`build_hamiltonian`].
pub const DIMENSION_LIMIT: usize = 1_000_000;
/// Minimum overlap for identifying a dressed state with a bare one.
pub const OVERLAP_THRESHOLD: f64 = 0.5;

/// Sparse real symmetric Hamiltonian in CSR form, rad/s.
#[derive(Debug, Clone, PartialEq)]
pub struct FockHamiltonian {
    pub modes: usize,
    pub truncation: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl FockHamiltonian {
    pub fn dim(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn occupation(&self, mut index: usize) -> Vec<usize> {
        let d = self.truncation;
        let mut occ = vec![0; self.modes];
        for j in (0..self.modes).rev() {
            occ[j] = index % d;
            index /= d;
        }
        occ
    }

    pub fn index_of(&self, occ: &[usize]) -> usize {
        occ.iter().fold(0, |i, &o| i * self.truncation + o)
    }

    /// Nonzero entries (column, value) of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(p) => self.vals[r.start + p],
            Err(_) => 0.0,
        }
    }

    /// max |H_ij − H_ji| / max |H_ij|.
    pub fn hermiticity_defect(&self) -> f64 {
        let scale = self.vals.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let mut worst = 0.0_f64;
        for i in 0..self.dim() {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.entry(j, i)).abs());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }

    /// Sorted basis indices with total excitation number of the given parity.
    pub fn parity_block(&self, parity: Parity) -> Vec<usize> {
        let want = match parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        (0..self.dim())
            .filter(|&i| self.occupation(i).iter().sum::<usize>() % 2 == want)
            .collect()
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

pub fn build_hamiltonian(spectrum: &ModeSpectrum, couplings: &CouplingGraph, d: usize) -> Result<FockHamiltonian> {
    couplings.validate()?;
    if couplings.n_kpo() != spectrum.n_kpo() || couplings.has_coupler() != spectrum.coupler.is_some() {
        return Err(Error::InvalidParameter(
            "spectrum and coupling graph describe different mode sets".into(),
        ));
    }
    if d < 3 {
        return Err(Error::InvalidParameter(format!("Fock truncation must be at least 3, got {d}")));
    }
    let modes = spectrum.all_modes();
    let m = modes.len();
    let dim = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(d).filter(|&x| x <= DIMENSION_LIMIT));
    let Some(dim) = dim else {
        return Err(Error::DimensionTooLarge {
            dim: (d as f64).powi(m as i32) as usize,
            limit: DIMENSION_LIMIT,
        });
    };
    let j_mat = couplings.exchange_matrix();
    let pairs: Vec<(usize, usize, f64)> = (0..m)
        .flat_map(|j| ((j + 1)..m).map(move |k| (j, k)))
        .filter_map(|(j, k)| (j_mat[j][k] != 0.0).then_some((j, k, j_mat[j][k])))
        .collect();
    let mut h = FockHamiltonian {
        modes: m,
        truncation: d,
        row_ptr: vec![0],
        cols: Vec::new(),
        vals: Vec::new(),
    };
    let stride: Vec<usize> = (0..m).map(|j| d.pow((m - 1 - j) as u32)).collect();
    let mut row: Vec<(usize, f64)> = Vec::new();
    for i in 0..dim {
        let occ = h.occupation(i);
        row.clear();
        let diag: f64 = occ
            .iter()
            .zip(&modes)
            .map(|(&n, p)| {
                let n = n as f64;
                p.omega * n - 0.5 * p.kerr * n * (n - 1.0)
            })
            .sum();
        row.push((i, diag));
        for &(j, k, c) in &pairs {
            let (nj, nk) = (occ[j], occ[k]);
            // −c(a_j − a_j†)(a_k − a_k†) = −c a_j a_k + c a_j a_k† + c a_j† a_k − c a_j† a_k†
            for (dj, dk, sign) in [(-1i64, -1i64, -1.0), (-1, 1, 1.0), (1, -1, 1.0), (1, 1, -1.0)] {
                let mj = nj as i64 + dj;
                let mk = nk as i64 + dk;
                if mj < 0 || mk < 0 || mj >= d as i64 || mk >= d as i64 {
                    continue;
                }
                let aj = (nj.max(mj as usize) as f64).sqrt();
                let ak = (nk.max(mk as usize) as f64).sqrt();
                let target = (i as i64 + dj * stride[j] as i64 + dk * stride[k] as i64) as usize;
                row.push((target, sign * c * aj * ak));
            }
        }
        row.sort_by_key(|e| e.0);
        let mut last = usize::MAX;
        for &(col, v) in &row {
            if col == last {
                *h.vals.last_mut().unwrap() += v;
            } else {
                h.cols.push(col);
                h.vals.push(v);
                last = col;
            }
        }
        h.row_ptr.push(h.cols.len());
    }
    let defect = h.hermiticity_defect();
    if defect > 1e-12 {
        return Err(Error::Eigensolver(format!("assembled matrix not Hermitian ({defect:e})")));
    }
    Ok(h)
}

/// Lowest eigenvalue, in the even block.
pub fn ground_energy(h: &FockHamiltonian) -> Result<f64> {
    Ok(lowest_eigenpairs(h, &h.parity_block(Parity::Even), 1)?.values[0])
}

/// Per-mode single-excitation energies minus the ground energy, each identified by its
/// largest overlap with the bare one-photon state.
pub fn dressed_frequencies_exact(h: &FockHamiltonian) -> Result<Vec<f64>> {
    let e0 = ground_energy(h)?;
    let pairs = lowest_eigenpairs(h, &h.parity_block(Parity::Odd), h.modes)?;
    (0..h.modes)
        .map(|j| {
            let mut occ = vec![0; h.modes];
            occ[j] = 1;
            let b = h.index_of(&occ);
            let (best, w) = (0..pairs.values.len())
                .map(|i| (i, pairs.weight(i, b)))
                .max_by(|a, c| a.1.total_cmp(&c.1))
                .unwrap();
            if w < OVERLAP_THRESHOLD {
                return Err(Error::AmbiguousState {
                    label: format!("single excitation of mode {}", j + 1),
                    overlap: w,
                });
            }
            Ok(pairs.values[best] - e0)
        })
        .collect()
}

/// Offsets δ (rad/s) added to ω₄, centred on the bare condition ω₁ + ω₂ = ω₃ + ω₄.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapScan {
    pub half_width: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    /// δ relative to the bare condition, rad/s.
    pub offsets: Vec<f64>,
    pub gaps: Vec<f64>,
    pub min_offset: f64,
    pub min_gap: f64,
    /// g_min/2, rad/s.
    pub h_eff: f64,
}

/// Splitting of the two even-block eigenstates with most weight on |1100⟩ and |0011⟩.
fn pair_gap(spectrum: &ModeSpectrum, couplings: &CouplingGraph, d: usize, delta: f64) -> Result<f64> {
    let mut s = spectrum.clone();
    s.kpo[3].omega += delta;
    let h = build_hamiltonian(&s, couplings, d)?;
    let m = h.modes;
    let mut a = vec![0; m];
    a[0] = 1;
    a[1] = 1;
    let mut b = vec![0; m];
    b[2] = 1;
    b[3] = 1;
    let (ia, ib) = (h.index_of(&a), h.index_of(&b));
    // Ground state plus the whole two-excitation manifold, with margin.
    let k = 1 + m * (m + 1) / 2 + 2;
    let pairs = lowest_eigenpairs(&h, &h.parity_block(Parity::Even), k)?;
    let mut w: Vec<(usize, f64)> = (0..pairs.values.len())
        .map(|i| (i, pairs.weight(i, ia) + pairs.weight(i, ib)))
        .collect();
    w.sort_by(|x, y| y.1.total_cmp(&x.1));
    Ok((pairs.values[w[0].0] - pairs.values[w[1].0]).abs())
}

/// Minimum splitting between the dressed |1100⟩ and |0011⟩ states as ω₄ is detuned;
/// |h_eff| = g_min/2.
pub fn four_body_from_gap(
    spectrum: &ModeSpectrum,
    couplings: &CouplingGraph,
    d: usize,
    scan: &GapScan,
) -> Result<GapResult> {
    if spectrum.n_kpo() != 4 {
        return Err(Error::InvalidParameter("gap extraction needs four KPOs".into()));
    }
    if scan.points < 3 || !(scan.half_width > 0.0) {
        return Err(Error::InvalidParameter(
            "gap scan needs at least 3 points and a positive width".into(),
        ));
    }
    let w = |i: usize| spectrum.kpo[i].omega;
    let centre = w(0) + w(1) - w(2) - w(3);
    let offsets: Vec<f64> = (0..scan.points)
        .map(|i| -scan.half_width + 2.0 * scan.half_width * i as f64 / (scan.points - 1) as f64)
        .collect();
    let gaps: Vec<f64> = offsets
        .par_iter()
        .map(|&x| pair_gap(spectrum, couplings, d, centre + x))
        .collect::<Result<_>>()?;
    let imin = (0..gaps.len()).min_by(|&a, &b| gaps[a].total_cmp(&gaps[b])).unwrap();
    if imin == 0 || imin == gaps.len() - 1 {
        return Err(Error::NoCrossing);
    }
    // Golden-section refinement inside the bracketing scan cell pair.
    let f = |x: f64| pair_gap(spectrum, couplings, d, centre + x);
    let (mut lo, mut hi) = (offsets[imin - 1], offsets[imin + 1]);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let tol = 1e-9 * scan.half_width;
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let (min_offset, min_gap) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    let (min_offset, min_gap) = if gaps[imin] < min_gap {
        (offsets[imin], gaps[imin])
    } else {
        (min_offset, min_gap)
    };
    Ok(GapResult {
        offsets,
        gaps,
        min_offset,
        min_gap,
        h_eff: min_gap / 2.0,
    })
}
