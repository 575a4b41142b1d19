//! Normal-ordered polynomials in bosonic creation and annihilation operators.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Coefficients smaller than this (rad/s) are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-18;

/// Normal-ordered monomial Π_j a_j†^{cre_j} · Π_j a_j^{ann_j}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub cre: Vec<u8>,
    pub ann: Vec<u8>,
}

impl Monomial {
    pub fn identity(modes: usize) -> Self {
        Monomial {
            cre: vec![0; modes],
            ann: vec![0; modes],
        }
    }

    /// Builds a monomial from lists of mode indices (repetition raises the power).
    pub fn from_indices(modes: usize, cre: &[usize], ann: &[usize]) -> Self {
        let mut m = Monomial::identity(modes);
        for &j in cre {
            m.cre[j] += 1;
        }
        for &j in ann {
            m.ann[j] += 1;
        }
        m
    }

    pub fn modes(&self) -> usize {
        self.cre.len()
    }

    pub fn degree(&self) -> usize {
        self.cre.iter().chain(&self.ann).map(|&e| e as usize).sum()
    }

    pub fn dagger(&self) -> Self {
        Monomial {
            cre: self.ann.clone(),
            ann: self.cre.clone(),
        }
    }

    /// True when every mode carries as many creation as annihilation operators.
    pub fn is_number_conserving(&self) -> bool {
        self.cre == self.ann
    }

    /// Net excitation change per mode, cre_j − ann_j.
    pub fn excitation_change(&self) -> Vec<i32> {
        self.cre
            .iter()
            .zip(&self.ann)
            .map(|(&c, &a)| c as i32 - a as i32)
            .collect()
    }
}

impl fmt::Display for Monomial {
    /// Writes `a1†a2†a3a4` with 1-based mode labels and `^k` powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        for (j, &e) in self.cre.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "a{}†", j + 1)?,
                _ => write!(f, "a{}†^{}", j + 1, e)?,
            }
        }
        for (j, &e) in self.ann.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "a{}", j + 1)?,
                _ => write!(f, "a{}^{}", j + 1, e)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BosonicPolynomial {
    modes: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl BosonicPolynomial {
    pub fn zero(modes: usize) -> Self {
        BosonicPolynomial {
            modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(modes: usize, c: Complex64) -> Self {
        Self::monomial(Monomial::identity(modes), c)
    }

    pub fn monomial(m: Monomial, c: Complex64) -> Self {
        let mut p = Self::zero(m.modes());
        p.add_term(m, c);
        p
    }

    pub fn annihilation(modes: usize, j: usize) -> Self {
        Self::monomial(Monomial::from_indices(modes, &[], &[j]), Complex64::new(1.0, 0.0))
    }

    pub fn creation(modes: usize, j: usize) -> Self {
        Self::monomial(Monomial::from_indices(modes, &[j], &[]), Complex64::new(1.0, 0.0))
    }

    /// Σ_k c_k a_k.
    pub fn linear_annihilation(coeffs: &[Complex64]) -> Self {
        let mut p = Self::zero(coeffs.len());
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::from_indices(coeffs.len(), &[], &[k]), c);
        }
        p
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Adds `c` to the coefficient of `m`, pruning the entry if it becomes negligible.
    pub fn add_term(&mut self, m: Monomial, c: Complex64) {
        assert_eq!(m.modes(), self.modes, "mode count mismatch");
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().norm() < PRUNE_THRESHOLD {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if c.norm() >= PRUNE_THRESHOLD {
                    e.insert(c);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.modes);
        for (m, &v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Hermitian conjugate.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zero(self.modes);
        for (m, &v) in &self.terms {
            out.add_term(m.dagger(), v.conj());
        }
        out
    }

    /// Normal-ordered product. Per mode, a^p a†^q = Σ_k C(p,k) C(q,k) k! a†^{q−k} a^{p−k}.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modes, other.modes, "mode count mismatch");
        let mut out = Self::zero(self.modes);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let mut partial: Vec<(Monomial, f64)> = vec![(Monomial::identity(self.modes), 1.0)];
                for j in 0..self.modes {
                    let p = ma.ann[j] as u32;
                    let q = mb.cre[j] as u32;
                    let mut next = Vec::with_capacity(partial.len() * (p.min(q) as usize + 1));
                    for (mono, w) in &partial {
                        for k in 0..=p.min(q) {
                            let weight = binomial(p, k) * binomial(q, k) * factorial(k);
                            let mut m = mono.clone();
                            m.cre[j] = ma.cre[j] + (q - k) as u8;
                            m.ann[j] = (p - k) as u8 + mb.ann[j];
                            next.push((m, w * weight));
                        }
                    }
                    partial = next;
                }
                for (m, w) in partial {
                    out.add_term(m, ca * cb * w);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.modes, Complex64::new(1.0, 0.0)), |acc, _| {
            acc.mul(self)
        })
    }

    /// Largest |c(M†) − conj(c(M))| over all monomials.
    pub fn hermiticity_defect(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, &c)| (self.coefficient(&m.dagger()) - c.conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }
}
