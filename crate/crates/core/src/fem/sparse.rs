use alloc::vec;
use alloc::vec::Vec;

/// Symmetric sparse matrix storing only its lower triangle, row-compressed.
///
/// Column indices are ascending within each row, so the diagonal is the last entry of a
/// non-empty row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    dim: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    /// Builds the matrix from `(row, col, value)` triplets; entries above the diagonal are
    /// mirrored into the lower triangle and duplicates are summed in input order.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        for t in triplets.iter_mut() {
            if t.1 > t.0 {
                core::mem::swap(&mut t.0, &mut t.1);
            }
        }
        // stable, so equal keys keep input order and the sums are reproducible
        triplets.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_offsets = vec![0usize; dim + 1];
        let mut col_indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < dim, "triplet row {r} out of range for dimension {dim}");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_indices.push(c);
                values.push(v);
                row_offsets[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_offsets[i + 1] += row_offsets[i];
        }
        SparseSymMatrix {
            dim,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, 1.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (lower-triangle) entries.
    pub fn stored_len(&self) -> usize {
        self.values.len()
    }

    /// Stored part of row `i`: columns `<= i` and their values.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        (&self.col_indices[range.clone()], &self.values[range])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            let xi = x[i];
            let mut acc = 0.0;
            for (&j, &a) in cols.iter().zip(vals) {
                acc += a * x[j];
                if j != i {
                    y[j] += a * xi;
                }
            }
            y[i] += acc;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `xᵀ A x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            for (&j, &a) in cols.iter().zip(vals) {
                let t = a * x[i] * x[j];
                s += if j == i { t } else { 2.0 * t };
            }
        }
        s
    }

    /// Sums of the rows of the full symmetric matrix.
    pub fn row_sums(&self) -> Vec<f64> {
        self.mul_vec(&vec![1.0; self.dim])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_mirror() {
        let m = SparseSymMatrix::from_triplets(
            3,
            vec![
                (0, 0, 2.0),
                (0, 1, -1.0),
                (1, 0, -0.5),
                (1, 1, 3.0),
                (2, 2, 1.0),
                (1, 1, 1.0),
            ],
        );
        assert_eq!(m.stored_len(), 4);
        assert_eq!(m.get(1, 0), -1.5);
        assert_eq!(m.get(0, 1), -1.5);
        assert_eq!(m.get(1, 1), 4.0);
        assert_eq!(m.get(2, 0), 0.0);
        assert_eq!(m.mul_vec(&[1.0, 1.0, 1.0]), vec![0.5, 2.5, 1.0]);
        assert_eq!(m.quad_form(&[1.0, 2.0, 0.0]), 2.0 - 6.0 + 16.0);
    }
}
