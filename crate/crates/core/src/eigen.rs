//! Lowest eigenpair of a real symmetric operator.
//!
//! Small problems go to a dense symmetric eigensolver. Larger ones use an
//! explicitly restarted Lanczos iteration with full reorthogonalization,
//! seeded from a fixed pseudo-random vector so results are reproducible.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::SparseOperator;

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Problems up to this dimension are solved densely.
    pub dense_cap: usize,
    /// Krylov vectors per Lanczos cycle.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Convergence when `||H v - E v|| <= tol * max(1, ||H||_inf)`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { dense_cap: 1024, krylov_dim: 120, max_restarts: 60, tol: 1e-11, seed: 0x5eed }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    /// Second-lowest eigenvalue when the dense path was used.
    pub next_value: Option<f64>,
}

/// Lowest eigenvalue and a normalized eigenvector of `h`.
pub fn lowest(h: &SparseOperator, opts: &EigenOptions) -> Result<EigenPair> {
    if h.dim() == 0 {
        return Err(Error::Domain("empty operator".into()));
    }
    if h.dim() <= opts.dense_cap {
        dense_lowest(h)
    } else {
        lanczos_lowest(h, opts)
    }
}

fn dense_lowest(h: &SparseOperator) -> Result<EigenPair> {
    let eig = SymmetricEigen::new(h.to_dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let k = order[0];
    let mut vector: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    canonical_sign(&mut vector);
    let value = eig.eigenvalues[k];
    let residual = residual(h, value, &vector);
    Ok(EigenPair { value, vector, residual, next_value: order.get(1).map(|&j| eig.eigenvalues[j]) })
}

fn lanczos_lowest(h: &SparseOperator, opts: &EigenOptions) -> Result<EigenPair> {
    let n = h.dim();
    let scale = h.norm_inf().max(1.0);
    let m = opts.krylov_dim.min(n).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    normalize(&mut start);

    let mut best = (f64::INFINITY, start.clone(), f64::INFINITY);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut w = vec![0.0; n];
    for _ in 0..=opts.max_restarts {
        basis.clear();
        basis.push(start.clone());
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            h.matvec(&basis[j], &mut w);
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            // full reorthogonalization, applied twice
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&w, v);
                    axpy(-c, v, &mut w);
                }
            }
            let b = norm(&w);
            if j + 1 == m || b < 1e-14 * scale {
                break;
            }
            beta.push(b);
            let next: Vec<f64> = w.iter().map(|x| x / b).collect();
            basis.push(next);
        }

        let k = alpha.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let idx = (0..k).min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).unwrap();
        let value = eig.eigenvalues[idx];
        let mut ritz = vec![0.0; n];
        for (i, v) in basis.iter().enumerate().take(k) {
            axpy(eig.eigenvectors[(i, idx)], v, &mut ritz);
        }
        normalize(&mut ritz);
        let res = residual(h, value, &ritz);
        if res < best.2 {
            best = (value, ritz.clone(), res);
        }
        if res <= opts.tol * scale {
            canonical_sign(&mut ritz);
            return Ok(EigenPair { value, vector: ritz, residual: res, next_value: None });
        }
        start = ritz;
    }
    Err(Error::NoConvergence { iterations: (opts.max_restarts + 1) * m, residual: best.2 })
}

fn residual(h: &SparseOperator, value: f64, v: &[f64]) -> f64 {
    let mut hv = vec![0.0; v.len()];
    h.matvec(v, &mut hv);
    hv.iter().zip(v).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt()
}

/// Fixes the sign so the largest-magnitude component (first on ties) is positive.
pub(crate) fn canonical_sign(v: &mut [f64]) {
    let mut pivot = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[pivot].abs() * (1.0 + 1e-9) {
            pivot = i;
        }
    }
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(c: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += c * xi);
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    v.iter_mut().for_each(|x| *x /= n);
}
