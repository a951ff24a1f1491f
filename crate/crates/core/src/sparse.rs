//! Compressed sparse row matrices used for transition kernels.

/// Row-major sparse matrix. Column indices within a row are sorted and unique.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl CsrMatrix {
    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            ncols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            data: vec![1.0; n],
        }
    }

    /// Build from per-row `(col, value)` entries. Duplicate columns are
    /// summed and exact zeros dropped.
    pub fn from_rows<I, R>(ncols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = (usize, f64)>,
    {
        let mut indptr = vec![0];
        let mut indices = Vec::new();
        let mut data = Vec::new();
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        for row in rows {
            scratch.clear();
            scratch.extend(row);
            scratch.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for &(c, v) in &scratch {
                assert!(c < ncols, "column {c} out of range {ncols}");
                if last == Some(c) {
                    *data.last_mut().unwrap() += v;
                } else {
                    indices.push(c);
                    data.push(v);
                    last = Some(c);
                }
            }
            // drop entries that are exactly zero
            let start = *indptr.last().unwrap();
            let mut w = start;
            for r in start..indices.len() {
                if data[r] != 0.0 {
                    indices[w] = indices[r];
                    data[w] = data[r];
                    w += 1;
                }
            }
            indices.truncate(w);
            data.truncate(w);
            indptr.push(w);
        }
        CsrMatrix {
            ncols,
            indptr,
            indices,
            data,
        }
    }

    pub fn nrows(&self) -> usize {
        self.indptr.len() - 1
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.data[span].iter().copied())
    }

    pub fn row_sum(&self, r: usize) -> f64 {
        self.data[self.indptr[r]..self.indptr[r + 1]].iter().sum()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(i) => self.data[span.start + i],
            Err(_) => 0.0,
        }
    }

    /// `out = self * v`
    pub fn mul_vec_into(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.ncols);
        debug_assert_eq!(out.len(), self.nrows());
        for (r, o) in out.iter_mut().enumerate() {
            let (lo, hi) = (self.indptr[r], self.indptr[r + 1]);
            let mut acc = 0.0;
            for (&c, &p) in self.indices[lo..hi].iter().zip(&self.data[lo..hi]) {
                acc += p * v[c];
            }
            *o = acc;
        }
    }

    /// `self * a` and `self * b` in one pass over the matrix.
    pub fn mul_vec2_into(&self, a: &[f64], b: &[f64], out_a: &mut [f64], out_b: &mut [f64]) {
        debug_assert_eq!(a.len(), self.ncols);
        debug_assert_eq!(b.len(), self.ncols);
        for r in 0..self.nrows() {
            let (lo, hi) = (self.indptr[r], self.indptr[r + 1]);
            let (mut sa, mut sb) = (0.0, 0.0);
            for (&c, &p) in self.indices[lo..hi].iter().zip(&self.data[lo..hi]) {
                sa += p * a[c];
                sb += p * b[c];
            }
            out_a[r] = sa;
            out_b[r] = sb;
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.nrows()];
        self.mul_vec_into(v, &mut out);
        out
    }

    /// Sparse matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &CsrMatrix) -> CsrMatrix {
        assert_eq!(self.ncols, rhs.nrows(), "dimension mismatch");
        let n = rhs.ncols;
        let mut acc = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; n];
        let rows = (0..self.nrows()).map(|r| {
            touched.clear();
            for (k, a) in self.row(r) {
                for (c, b) in rhs.row(k) {
                    if !mark[c] {
                        mark[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            let out: Vec<(usize, f64)> = touched
                .iter()
                .map(|&c| {
                    let v = acc[c];
                    acc[c] = 0.0;
                    mark[c] = false;
                    (c, v)
                })
                .collect();
            out
        });
        let rows: Vec<Vec<(usize, f64)>> = rows.collect();
        CsrMatrix::from_rows(n, rows)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.nrows())
            .map(|r| {
                let mut row = vec![0.0; self.ncols];
                for (c, v) in self.row(r) {
                    row[c] = v;
                }
                row
            })
            .collect()
    }

    /// Largest absolute deviation of any row sum from 1.
    pub fn max_row_sum_error(&self) -> f64 {
        (0..self.nrows())
            .map(|r| (self.row_sum(r) - 1.0).abs())
            .fold(0.0, f64::max)
    }
}
