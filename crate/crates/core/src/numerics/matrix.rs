use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense real matrix used for adjacency, covariance, and noise matrices.
///
/// Thin wrapper over [`nalgebra::DMatrix`] so the rest of the crate works with
/// one concrete type and `(row, col)` indexing.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix(DMatrix<f64>);

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        DenseMatrix(DMatrix::identity(n, n))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        DenseMatrix(DMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 }))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        DenseMatrix(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row slices; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Config("matrix must have at least one row and column".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Config("ragged rows".into()));
        }
        Ok(DenseMatrix(DMatrix::from_fn(r, c, |i, j| rows[i][j])))
    }

    pub fn from_nalgebra(m: DMatrix<f64>) -> Self {
        DenseMatrix(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<f64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn transpose(&self) -> Self {
        DenseMatrix(self.0.transpose())
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Self {
        DenseMatrix(&self.0 * &other.0)
    }

    pub fn add(&self, other: &DenseMatrix) -> Self {
        DenseMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Self {
        DenseMatrix(&self.0 - &other.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        DenseMatrix(&self.0 * factor)
    }

    /// `self += factor * other`, in place.
    pub fn add_scaled(&mut self, factor: f64, other: &DenseMatrix) {
        self.0 += &other.0 * factor;
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.transpose()) <= tol
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols()).map(|j| self.0[(i, j)]).collect()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Inverse via LU; fails when the matrix is numerically singular.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Config("inverse of a non-square matrix".into()));
        }
        self.0
            .clone()
            .try_inverse()
            .filter(|inv| inv.iter().all(|v| v.is_finite()))
            .map(DenseMatrix)
            .ok_or_else(|| Error::Singular("matrix is not invertible".into()))
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, exponent: u32) -> Self {
        let mut result = DenseMatrix::identity(self.rows());
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
            }
        }
        result
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut f64 {
        &mut self.0[idx]
    }
}
