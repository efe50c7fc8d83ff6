//! CSR sparse matrix with f64 values and the sparse-times-dense kernel the
//! convolution layers run on.

use crate::error::{Error, Result};
use ndarray::Array2;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    num_rows: usize,
    num_cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Wrap pre-validated CSR arrays. Callers guarantee sorted, in-range
    /// column indices per row; debug builds verify.
    pub fn from_csr_unchecked(
        num_rows: usize,
        num_cols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(row_offsets.len(), num_rows + 1);
        debug_assert_eq!(col_indices.len(), values.len());
        debug_assert_eq!(*row_offsets.last().unwrap_or(&0), col_indices.len());
        debug_assert!(row_offsets.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!((0..num_rows).all(|i| {
            let row = &col_indices[row_offsets[i]..row_offsets[i + 1]];
            row.windows(2).all(|w| w[0] < w[1]) && row.iter().all(|&j| j < num_cols)
        }));
        Self {
            num_rows,
            num_cols,
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Identity matrix, handy in tests.
    pub fn identity(n: usize) -> Self {
        Self::from_csr_unchecked(n, n, (0..=n).collect(), (0..n).collect(), vec![1.0; n])
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries of one row as parallel (column, value) slices.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        (&self.col_indices[range.clone()], &self.values[range])
    }

    /// Entry (i, j), zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(pos) => vals[pos],
            Err(_) => 0.0,
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.num_rows.min(self.num_cols))
            .map(|i| self.get(i, i))
            .sum()
    }

    /// Largest |a_ij - a_ji| over stored entries; 0 for a symmetric matrix.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.num_rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// CSR x dense product. `x` must have `num_cols` rows.
    pub fn mul_dense(&self, x: &Array2<f64>) -> Result<Array2<f64>> {
        if x.nrows() != self.num_cols {
            return Err(Error::DimensionMismatch {
                context: "sparse-dense product",
                expected: self.num_cols,
                actual: x.nrows(),
            });
        }
        let width = x.ncols();
        let mut out = Array2::<f64>::zeros((self.num_rows, width));
        for i in 0..self.num_rows {
            let (cols, vals) = self.row(i);
            let mut out_row = out.row_mut(i);
            let out_slice = out_row.as_slice_mut().expect("row-major output");
            for (&j, &v) in cols.iter().zip(vals) {
                let x_row = x.row(j);
                let x_slice = x_row.as_slice().expect("row-major input");
                for k in 0..width {
                    out_slice[k] += v * x_slice[k];
                }
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut out = Array2::<f64>::zeros((self.num_rows, self.num_cols));
        for i in 0..self.num_rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                out[[i, j]] = v;
            }
        }
        out
    }

    /// Row-major flat dense copy, the layout the eigensolver operates on.
    pub fn to_dense_flat(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.num_rows * self.num_cols];
        for i in 0..self.num_rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                out[i * self.num_cols + j] = v;
            }
        }
        out
    }
}
