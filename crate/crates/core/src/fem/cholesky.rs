//! Envelope (profile) Cholesky factorization under a reverse Cuthill–McKee ordering.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::sparse::SparseSymMatrix;
use crate::error::{Error, Result};

/// Symmetric adjacency lists of the matrix graph, diagonal excluded.
fn adjacency(matrix: &SparseSymMatrix) -> Vec<Vec<usize>> {
    let n = matrix.dim();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for &j in matrix.row(i).0 {
            if j != i {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

/// Breadth-first level structure from `root`; returns the visit order and each node's level.
fn bfs(adj: &[Vec<usize>], root: usize, level: &mut [usize]) -> Vec<usize> {
    level.iter_mut().for_each(|l| *l = usize::MAX);
    let mut order = vec![root];
    level[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in &adj[v] {
            if level[w] == usize::MAX {
                level[w] = level[v] + 1;
                order.push(w);
            }
        }
    }
    order
}

/// Start node of maximal eccentricity, found by repeated level-structure sweeps.
fn pseudo_peripheral(adj: &[Vec<usize>], start: usize, level: &mut [usize]) -> usize {
    let mut root = start;
    let mut depth = 0;
    for _ in 0..16 {
        let order = bfs(adj, root, level);
        let last_level = level[*order.last().unwrap()];
        if last_level <= depth && depth > 0 {
            break;
        }
        depth = last_level;
        let candidate = order
            .iter()
            .copied()
            .filter(|&v| level[v] == last_level)
            .min_by_key(|&v| (adj[v].len(), v))
            .unwrap();
        if candidate == root {
            break;
        }
        root = candidate;
    }
    root
}

/// Reverse Cuthill–McKee ordering: `perm[new] = old`.
pub fn rcm_ordering(matrix: &SparseSymMatrix) -> Vec<usize> {
    let n = matrix.dim();
    let adj = adjacency(matrix);
    let mut level = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    let mut perm = Vec::with_capacity(n);

    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (adj[v].len(), v));

    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let root = pseudo_peripheral(&adj, seed, &mut level);
        let root = if visited[root] { seed } else { root };
        let mut queue = VecDeque::from([root]);
        visited[root] = true;
        while let Some(v) = queue.pop_front() {
            perm.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (adj[w].len(), w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    perm.reverse();
    perm
}

/// `L Lᵀ = P A Pᵀ` with `L` stored row by row from its first nonzero column.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    inverse: Vec<usize>,
    first: Vec<usize>,
    starts: Vec<usize>,
    data: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..a.len() {
        s += a[i] * b[i];
    }
    s
}

impl EnvelopeCholesky {
    /// Factors `Σ coeff · A` over the given terms, which must share one dimension.
    pub fn factor_combination(terms: &[(f64, &SparseSymMatrix)], perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        for (_, m) in terms {
            if m.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.dim(),
                });
            }
        }
        let mut inverse = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }

        let mut first: Vec<usize> = (0..n).collect();
        for (_, m) in terms {
            for r in 0..n {
                for &c in m.row(r).0 {
                    let (pr, pc) = (inverse[r], inverse[c]);
                    let (row, col) = if pr >= pc { (pr, pc) } else { (pc, pr) };
                    first[row] = first[row].min(col);
                }
            }
        }
        let mut starts = Vec::with_capacity(n + 1);
        let mut total = 0;
        for (i, &f) in first.iter().enumerate() {
            starts.push(total);
            total += i - f + 1;
        }
        starts.push(total);

        let mut data = vec![0.0; total];
        for &(coeff, m) in terms {
            for r in 0..n {
                let (cols, vals) = m.row(r);
                for (&c, &v) in cols.iter().zip(vals) {
                    let (pr, pc) = (inverse[r], inverse[c]);
                    let (row, col) = if pr >= pc { (pr, pc) } else { (pc, pr) };
                    data[starts[row] + col - first[row]] += coeff * v;
                }
            }
        }

        for i in 0..n {
            let fi = first[i];
            let (before, rest) = data.split_at_mut(starts[i]);
            let row_i = &mut rest[..i - fi + 1];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let row_j = &before[starts[j]..starts[j] + (j - fj + 1)];
                let s = dot(&row_i[lo - fi..j - fi], &row_j[lo - fj..j - fj]);
                row_i[j - fi] = (row_i[j - fi] - s) / row_j[j - fj];
            }
            let off = &row_i[..i - fi];
            let d = row_i[i - fi] - dot(off, off);
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: perm[i] });
            }
            row_i[i - fi] = libm::sqrt(d);
        }

        Ok(EnvelopeCholesky {
            perm: perm.to_vec(),
            inverse,
            first,
            starts,
            data,
        })
    }

    pub fn factor(matrix: &SparseSymMatrix) -> Result<Self> {
        let perm = rcm_ordering(matrix);
        Self::factor_combination(&[(1.0, matrix)], &perm)
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Stored entries of `L`.
    pub fn envelope_len(&self) -> usize {
        self.data.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[self.starts[i]..self.starts[i + 1]]
    }

    /// Solves `A x = rhs`; `work` must have the matrix dimension.
    pub fn solve_into(&self, rhs: &[f64], x: &mut [f64], work: &mut [f64]) {
        let n = self.dim();
        assert!(rhs.len() == n && x.len() == n && work.len() == n);
        for (new, &old) in self.perm.iter().enumerate() {
            work[new] = rhs[old];
        }
        for i in 0..n {
            let fi = self.first[i];
            let row = self.row(i);
            let s = dot(&row[..i - fi], &work[fi..i]);
            work[i] = (work[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = self.row(i);
            let xi = work[i] / row[i - fi];
            work[i] = xi;
            for (w, &l) in work[fi..i].iter_mut().zip(&row[..i - fi]) {
                *w -= l * xi;
            }
        }
        for (old, &new) in self.inverse.iter().enumerate() {
            x[old] = work[new];
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        let mut work = vec![0.0; self.dim()];
        self.solve_into(rhs, &mut x, &mut work);
        x
    }
}
