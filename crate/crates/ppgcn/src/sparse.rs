//! Compressed sparse row matrices over `f64`.
//!
//! All construction paths sort entries row-major, merge duplicates and drop
//! explicit zeros, so iteration order is deterministic and two matrices with
//! the same entries compare equal. Products accumulate in a fixed order,
//! which keeps repeated runs bitwise identical.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SparseError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left_rows}x{left_cols} * {right_rows}x{right_cols}")]
    DimMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("entry ({row},{col}) out of bounds for {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// Sparse matrix in CSR form. Entries are kept sorted by (row, col) with no
/// explicit zeros stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Matrix with no stored entries.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            indptr: vec![0; rows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Build from (row, col, value) triplets. Duplicates are summed, zeros
    /// (including sums that cancel to zero) are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, SparseError> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(SparseError::OutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            entries.push((r, c, v));
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut i = 0;
        while i < entries.len() {
            let (r, c, mut v) = entries[i];
            i += 1;
            while i < entries.len() && entries[i].0 == r && entries[i].1 == c {
                v += entries[i].2;
                i += 1;
            }
            if v != 0.0 {
                indices.push(c);
                values.push(v);
                indptr[r + 1] = indices.len();
            }
        }
        // forward-fill row pointers for rows without entries
        for r in 0..rows {
            indptr[r + 1] = indptr[r + 1].max(indptr[r]);
        }
        Ok(SparseMatrix {
            rows,
            cols,
            indptr,
            indices,
            values,
        })
    }

    /// Build directly from row-major sorted entries without merging.
    /// Callers must guarantee sorted, in-bounds, duplicate-free, nonzero input.
    pub(crate) fn from_sorted_entries(
        rows: usize,
        cols: usize,
        entries: &[(usize, usize)],
        values: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(entries.len(), values.len());
        debug_assert!(entries.windows(2).all(|w| w[0] < w[1]));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(entries.len());
        for &(r, c) in entries {
            debug_assert!(r < rows && c < cols);
            indices.push(c);
            indptr[r + 1] += 1;
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        SparseMatrix {
            rows,
            cols,
            indptr,
            indices,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Column indices and values of one row, in ascending column order.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let lo = self.indptr[r];
        let hi = self.indptr[r + 1];
        (&self.indices[lo..hi], &self.values[lo..hi])
    }

    /// Stored value at (r, c), or 0.0.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(pos) => vals[pos],
            Err(_) => 0.0,
        }
    }

    /// Row-major iteration over stored entries.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals.iter()).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Dense copy of the main diagonal (square matrices).
    pub fn diagonal(&self) -> Vec<f64> {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self.get(i, i)).collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let triplets: Vec<(usize, usize, f64)> =
            self.iter().map(|(r, c, v)| (c, r, v)).collect();
        SparseMatrix::from_triplets(self.cols, self.rows, triplets)
            .expect("transpose of a valid matrix is valid")
    }

    /// Exact symmetry check: every stored (i,j) has a stored (j,i) with an
    /// identical value.
    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.iter().all(|(r, c, v)| self.get(c, r) == v)
    }

    /// Sparse-sparse product accumulated row by row. For each output row the
    /// contributions are added in left-row index order, so the result is
    /// reproducible bit for bit.
    pub fn matmul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, SparseError> {
        if self.cols != rhs.rows {
            return Err(SparseError::DimMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut indptr = Vec::with_capacity(self.rows + 1);
        indptr.push(0usize);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut scratch = vec![0.0f64; rhs.cols];
        let mut marked = vec![false; rhs.cols];
        let mut touched: Vec<usize> = Vec::new();
        for r in 0..self.rows {
            let (lcols, lvals) = self.row(r);
            for (&k, &lv) in lcols.iter().zip(lvals.iter()) {
                let (rcols, rvals) = rhs.row(k);
                for (&c, &rv) in rcols.iter().zip(rvals.iter()) {
                    if !marked[c] {
                        marked[c] = true;
                        touched.push(c);
                    }
                    scratch[c] += lv * rv;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                let v = scratch[c];
                scratch[c] = 0.0;
                marked[c] = false;
                if v != 0.0 {
                    indices.push(c);
                    values.push(v);
                }
            }
            touched.clear();
            indptr.push(indices.len());
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            indptr,
            indices,
            values,
        })
    }

    pub fn max_abs_diff(&self, other: &SparseMatrix) -> f64 {
        let mut worst = 0.0f64;
        for (r, c, v) in self.iter() {
            worst = worst.max((v - other.get(r, c)).abs());
        }
        for (r, c, v) in other.iter() {
            worst = worst.max((v - self.get(r, c)).abs());
        }
        worst
    }
}
