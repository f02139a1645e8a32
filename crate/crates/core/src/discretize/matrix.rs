use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite entry at ({}, {})", i / cols, i % cols)));
        }
        Ok(DenseMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseMatrix::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry (i, j), 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }

    /// CSV rows, entries with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| crate::report::fmt17(*v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// H_ij = 1/(i+j-1), 1-based.
pub fn hilbert_matrix(n: usize) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("Hilbert matrix needs N >= 1".into()));
    }
    DenseMatrix::from_fn(n, n, |i, j| 1.0 / ((i + j + 1) as f64))
}

/// Midpoint product-quadrature collocation of the Riemann-Liouville integral
/// J^alpha on s_i = (i - 1/2)/N.
///
/// Cells left of the collocation point use the midpoint value
/// h (s_i - t_j)^(alpha-1) / Gamma(alpha); the cell holding s_i is integrated
/// exactly over its left half, (h/2)^alpha / (alpha Gamma(alpha)).
pub fn riemann_liouville_matrix(alpha: f64, n: usize) -> Result<DenseMatrix> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
    }
    if n < 8 {
        return Err(Error::InvalidInput(format!("Riemann-Liouville matrix needs N >= 8, got {n}")));
    }
    let h = 1.0 / n as f64;
    let g = gamma(alpha);
    let diag = (0.5 * h).powf(alpha) / (alpha * g);
    DenseMatrix::from_fn(n, n, |i, j| {
        if j < i {
            // s_i - t_j = (i - j) h
            h * ((i - j) as f64 * h).powf(alpha - 1.0) / g
        } else if j == i {
            diag
        } else {
            0.0
        }
    })
}
