//! Small dense linear algebra: just what the SOCP solvers need.

use crate::error::{Error, Result};
use crate::scalar::{dot, norm2, Scalar};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Domain(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("ragged rows".into()));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    /// out = A x
    pub fn matvec_into(&self, x: &[T], out: &mut [T]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), x);
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.rows];
        self.matvec_into(x, &mut out);
        out
    }

    /// out = Aᵀ y
    pub fn matvec_t_into(&self, y: &[T], out: &mut [T]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        out.iter_mut().for_each(|o| *o = T::zero());
        for (i, &yi) in y.iter().enumerate() {
            if yi == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + yi * a;
            }
        }
    }

    pub fn matvec_t(&self, y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.cols];
        self.matvec_t_into(y, &mut out);
        out
    }

    /// A Aᵀ (rows × rows, symmetric).
    pub fn gram_rows(&self) -> Vec<T> {
        let m = self.rows;
        let mut g = vec![T::zero(); m * m];
        for i in 0..m {
            for j in 0..=i {
                let v = dot(self.row(i), self.row(j));
                g[i * m + j] = v;
                g[j * m + i] = v;
            }
        }
        g
    }

    /// Power-iteration estimate of the spectral norm ‖A‖₂ (a lower bound
    /// that tightens with `iterations`).
    pub fn spectral_norm_estimate(&self, iterations: usize) -> T {
        if self.rows == 0 || self.cols == 0 {
            return T::zero();
        }
        // deterministic, non-degenerate start
        let mut v: Vec<T> = (0..self.cols)
            .map(|j| T::one() + T::from_usize_lossy(j % 7) / T::lit(7.0))
            .collect();
        let mut av = vec![T::zero(); self.rows];
        let mut estimate = T::zero();
        for _ in 0..iterations.max(1) {
            let nv = norm2(&v);
            if nv == T::zero() {
                return T::zero();
            }
            v.iter_mut().for_each(|x| *x = *x / nv);
            self.matvec_into(&v, &mut av);
            estimate = norm2(&av);
            self.matvec_t_into(&av, &mut v);
        }
        estimate
    }
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    n: usize,
    l: Vec<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Factor the row-major `n × n` matrix `a`.
    pub fn factor(a: &[T], n: usize) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::Domain("cholesky: matrix is not square".into()));
        }
        let mut l = vec![T::zero(); n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for p in 0..j {
                d = d - l[j * n + p] * l[j * n + p];
            }
            if !(d > T::zero()) {
                return Err(Error::Numerical(format!(
                    "cholesky: matrix not positive definite at pivot {j}"
                )));
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let s = a[i * n + j] - dot(&l[i * n..i * n + j], &l[j * n..j * n + j]);
                l[i * n + j] = s / d;
            }
        }
        Ok(Self { n, l })
    }

    /// Solve (L Lᵀ) x = b in place.
    pub fn solve_in_place(&self, b: &mut [T]) {
        let n = self.n;
        for i in 0..n {
            let s = b[i] - dot(&self.l[i * n..i * n + i], &b[..i]);
            b[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for p in i + 1..n {
                s = s - self.l[p * n + i] * b[p];
            }
            b[i] = s / self.l[i * n + i];
        }
    }
}
