//! Lowest eigenpairs of one parity block: dense for small blocks, Lanczos with full
//! reorthogonalization otherwise.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::FockHamiltonian;
use crate::error::{Error, Result};

/// Blocks up to this size are diagonalized densely.
pub const DENSE_LIMIT: usize = 2000;
const RESIDUAL_TOL: f64 = 1e-10;

/// Eigenpairs within a block, ascending. Vectors are in block coordinates.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    /// Full-basis index of each block coordinate.
    pub basis: Vec<usize>,
    pub values: Vec<f64>,
    pub vectors: Vec<DVector<f64>>,
}

impl Eigenpairs {
    /// |⟨b|ψ_i⟩|² for full-basis state `b`, or 0 when `b` is outside the block.
    pub fn weight(&self, i: usize, b: usize) -> f64 {
        match self.basis.binary_search(&b) {
            Ok(p) => self.vectors[i][p].powi(2),
            Err(_) => 0.0,
        }
    }
}

struct Block<'a> {
    h: &'a FockHamiltonian,
    basis: &'a [usize],
    /// Full index → block index, `usize::MAX` outside.
    map: Vec<usize>,
}

impl<'a> Block<'a> {
    fn new(h: &'a FockHamiltonian, basis: &'a [usize]) -> Self {
        let mut map = vec![usize::MAX; h.dim()];
        for (p, &b) in basis.iter().enumerate() {
            map[b] = p;
        }
        Block { h, basis, map }
    }

    fn dense(&self) -> DMatrix<f64> {
        let n = self.basis.len();
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (p, &b) in self.basis.iter().enumerate() {
            for (c, v) in self.h.row(b) {
                let q = self.map[c];
                if q != usize::MAX {
                    m[(p, q)] += v;
                }
            }
        }
        m
    }

    fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::<f64>::zeros(x.len());
        for (p, &b) in self.basis.iter().enumerate() {
            let mut s = 0.0;
            for (c, v) in self.h.row(b) {
                let q = self.map[c];
                if q != usize::MAX {
                    s += v * x[q];
                }
            }
            y[p] = s;
        }
        y
    }
}

fn dense_pairs(block: &Block, k: usize) -> Eigenpairs {
    let eig = SymmetricEigen::new(block.dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order.truncate(k);
    Eigenpairs {
        basis: block.basis.to_vec(),
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect(),
    }
}

fn lanczos_pairs(block: &Block, k: usize) -> Result<Eigenpairs> {
    let n = block.basis.len();
    let mut steps = (4 * k + 60).min(n);
    loop {
        // Deterministic, non-symmetric start vector.
        let mut v0 = DVector::<f64>::from_fn(n, |i, _| 1.0 + ((i as f64) * 0.618_033_988_75).fract());
        v0 /= v0.norm();
        let mut q: Vec<DVector<f64>> = vec![v0];
        let mut alpha = Vec::with_capacity(steps);
        let mut beta: Vec<f64> = Vec::with_capacity(steps);
        for j in 0..steps {
            let mut w = block.apply(&q[j]);
            let a = w.dot(&q[j]);
            alpha.push(a);
            // Two passes of full reorthogonalization.
            for _ in 0..2 {
                for qi in &q {
                    let c = w.dot(qi);
                    w.axpy(-c, qi, 1.0);
                }
            }
            let b = w.norm();
            if j + 1 == steps || b < 1e-14 * a.abs().max(1.0) {
                break;
            }
            beta.push(b);
            q.push(w / b);
        }
        let m = alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        // Residuals are judged against the spectral scale, not |λ|, which can be near zero.
        let scale = t.amax().max(f64::MIN_POSITIVE);
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        order.truncate(k.min(m));
        let mut values = Vec::new();
        let mut vectors = Vec::new();
        let mut converged = true;
        for &i in &order {
            let s = eig.eigenvectors.column(i);
            let mut x = DVector::<f64>::zeros(n);
            for (qj, sj) in q.iter().zip(s.iter()) {
                x.axpy(*sj, qj, 1.0);
            }
            x /= x.norm();
            let lambda = eig.eigenvalues[i];
            let r = (block.apply(&x) - &x * lambda).norm();
            if r > RESIDUAL_TOL * scale {
                converged = false;
            }
            values.push(lambda);
            vectors.push(x);
        }
        if converged && values.len() == k.min(n) {
            return Ok(Eigenpairs {
                basis: block.basis.to_vec(),
                values,
                vectors,
            });
        }
        if steps == n {
            return Err(Error::Eigensolver(format!(
                "Lanczos did not converge for {k} eigenpairs of a {n}-dimensional block"
            )));
        }
        steps = (2 * steps).min(n);
    }
}

/// The `k` lowest eigenpairs of `h` restricted to `basis` (sorted full indices).
pub fn lowest_eigenpairs(h: &FockHamiltonian, basis: &[usize], k: usize) -> Result<Eigenpairs> {
    let block = Block::new(h, basis);
    if basis.len() <= DENSE_LIMIT {
        Ok(dense_pairs(&block, k))
    } else {
        lanczos_pairs(&block, k)
    }
}

/// Forces the Lanczos path regardless of size.
pub fn lowest_eigenpairs_iterative(h: &FockHamiltonian, basis: &[usize], k: usize) -> Result<Eigenpairs> {
    lanczos_pairs(&Block::new(h, basis), k)
}
