//! Real symmetric sparse matrices in CSR form.
//!
//! The Jordan-Wigner image of the Hubbard Hamiltonian has real matrix
//! elements in the occupation basis, so Hermitian here means symmetric.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<f64>,
}

impl SparseOperator {
    /// Assembles a matrix row by row. `row` receives the row index and a
    /// sink for `(column, value)` contributions; duplicate columns are summed
    /// and exact zeros dropped.
    pub fn from_rows<F>(dim: usize, mut row: F) -> Self
    where
        F: FnMut(usize, &mut Vec<(usize, f64)>),
    {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        let mut scratch = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            scratch.clear();
            row(i, &mut scratch);
            scratch.sort_unstable_by_key(|&(c, _)| c);
            let mut k = 0;
            while k < scratch.len() {
                let c = scratch[k].0;
                let mut v = 0.0;
                while k < scratch.len() && scratch[k].0 == c {
                    v += scratch[k].1;
                    k += 1;
                }
                if v != 0.0 {
                    cols.push(c as u32);
                    values.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self { dim, row_ptr, cols, values }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_rows(values.len(), |i, out| out.push((i, values[i])))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()].iter().map(|&c| c as usize).zip(self.values[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    /// `y = A x` for real vectors.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.cols[k] as usize];
            }
            *yi = acc;
        }
    }

    /// `y = A x` for complex vectors.
    pub fn matvec_complex(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += x[self.cols[k] as usize] * self.values[k];
            }
            *yi = acc;
        }
    }

    /// `<x|A|x>` without allocating.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (i, xi) in x.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += x[self.cols[k] as usize] * self.values[k];
            }
            total += xi.conj() * acc;
        }
        total
    }

    /// `self + scale * other`.
    pub fn add_scaled(&self, other: &Self, scale: f64) -> Result<Self> {
        if self.dim != other.dim {
            return domain(format!("dimension mismatch {} vs {}", self.dim, other.dim));
        }
        Ok(Self::from_rows(self.dim, |i, out| {
            out.extend(self.row(i));
            out.extend(other.row(i).map(|(c, v)| (c, scale * v)));
        }))
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self::from_rows(self.dim, |i, out| {
            out.extend(self.row(i));
            out.push((i, shift));
        })
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim).map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                worst = worst.max((v - other.get(i, j)).abs());
            }
            for (j, v) in other.row(i) {
                worst = worst.max((v - self.get(i, j)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let a = SparseOperator::from_rows(2, |i, out| {
            out.push((i, 1.0));
            out.push((i, 2.0));
            out.push((1 - i, 0.0));
        });
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.get(0, 1), 0.0);
    }

    #[test]
    fn quadratic_form_matches_matvec() {
        let a = SparseOperator::from_rows(3, |i, out| {
            out.push((i, i as f64));
            out.push(((i + 1) % 3, -0.5));
            out.push(((i + 2) % 3, -0.5));
        });
        assert_eq!(a.asymmetry(), 0.0);
        let x = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.7), Complex64::new(0.5, 0.0)];
        let mut y = [Complex64::default(); 3];
        a.matvec_complex(&x, &mut y);
        let direct: Complex64 = x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
        assert!((direct - a.quadratic_form(&x)).norm() < 1e-15);
    }
}
