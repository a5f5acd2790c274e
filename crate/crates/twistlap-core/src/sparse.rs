//! Compressed-sparse-row complex matrices and dense vector helpers.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Euclidean inner product `⟨u, v⟩ = Σ conj(u_i) v_i`.
pub fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Euclidean norm.
pub fn norm(v: &[Complex64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// Weighted norm `(Σ w_i |v_i|²)^{1/2}`.
pub fn weighted_norm(v: &[Complex64], w: &[f64]) -> f64 {
    libm::sqrt(v.iter().zip(w).map(|(z, wi)| wi * z.norm_sqr()).sum::<f64>())
}

/// In-place scaling `v ← α v`.
pub fn scale(v: &mut [Complex64], alpha: f64) {
    for z in v {
        *z *= alpha;
    }
}

/// In-place update `y ← y + α x`.
pub fn axpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Sparse complex matrix in compressed-sparse-row form with sorted,
/// duplicate-free column indices in every row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl CsrMatrix {
    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed
    /// and entries that sum to exactly zero are dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, Complex64)],
    ) -> Result<Self> {
        let mut counts = vec![0usize; nrows + 1];
        for &(r, c, _) in triplets {
            if r >= nrows || c >= ncols {
                return Err(invalid("triplet index out of bounds"));
            }
            counts[r + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![Complex64::new(0.0, 0.0); triplets.len()];
        for &(r, c, v) in triplets {
            cols[fill[r]] = c;
            vals[fill[r]] = v;
            fill[r] += 1;
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        let mut scratch: Vec<(usize, Complex64)> = Vec::new();
        for r in 0..nrows {
            scratch.clear();
            scratch.extend((counts[r]..counts[r + 1]).map(|k| (cols[k], vals[k])));
            scratch.sort_by_key(|&(c, _)| c);
            let mut k = 0;
            while k < scratch.len() {
                let c = scratch[k].0;
                let mut acc = Complex64::new(0.0, 0.0);
                while k < scratch.len() && scratch[k].0 == c {
                    acc += scratch[k].1;
                    k += 1;
                }
                if acc != Complex64::new(0.0, 0.0) {
                    col_idx.push(c);
                    values.push(acc);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// `n × n` identity scaled by `alpha`.
    pub fn scaled_identity(n: usize, alpha: f64) -> Self {
        let t: Vec<_> = (0..n).map(|i| (i, i, Complex64::new(alpha, 0.0))).collect();
        Self::from_triplets(n, n, &t).expect("indices in range")
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates over the stored entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// Entry `(r, c)` (zero when not stored).
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `y ← A x`.
    pub fn matvec_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.ncols, "matvec: input length mismatch");
        assert_eq!(y.len(), self.nrows, "matvec: output length mismatch");
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yr = acc;
        }
    }

    /// Returns `A x`.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    /// Conjugate transpose `Aᴴ`.
    pub fn adjoint(&self) -> Self {
        let t: Vec<_> = (0..self.nrows)
            .flat_map(|r| self.row(r).map(move |(c, v)| (c, r, v.conj())))
            .collect();
        Self::from_triplets(self.ncols, self.nrows, &t).expect("indices in range")
    }

    /// Sparse product `A B`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(invalid("matmul: inner dimensions differ"));
        }
        let mut t = Vec::new();
        for r in 0..self.nrows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    t.push((r, c, a * b));
                }
            }
        }
        Self::from_triplets(self.nrows, other.ncols, &t)
    }

    /// Linear combination `α A + β B` of equally shaped matrices.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(invalid("combine: shapes differ"));
        }
        let mut t = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.nrows {
            t.extend(self.row(r).map(|(c, v)| (r, c, alpha * v)));
            t.extend(other.row(r).map(|(c, v)| (r, c, beta * v)));
        }
        Self::from_triplets(self.nrows, self.ncols, &t)
    }

    /// `diag(left) · A · diag(right)`.
    pub fn scale_rows_cols(&self, left: &[f64], right: &[f64]) -> Self {
        assert_eq!(left.len(), self.nrows);
        assert_eq!(right.len(), self.ncols);
        let mut out = self.clone();
        for (r, l) in left.iter().enumerate() {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                out.values[k] *= l * right[self.col_idx[k]];
            }
        }
        out
    }

    /// Maximum absolute row sum `‖A‖_∞`, an upper bound for the spectral
    /// radius of a Hermitian matrix.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows)
            .map(|r| self.row(r).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation `max |A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                if c < self.nrows && r < self.ncols {
                    worst = worst.max((v - self.get(c, r).conj()).norm());
                } else {
                    worst = worst.max(v.norm());
                }
            }
        }
        worst
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut d = vec![Complex64::new(0.0, 0.0); self.nrows * self.ncols];
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                d[r * self.ncols + c] = v;
            }
        }
        d
    }

    /// If the matrix is real symmetric and its sparsity graph is a disjoint
    /// union of paths, returns a permutation `perm` (new index → old index)
    /// together with the diagonal and off-diagonal of the permuted
    /// tridiagonal matrix. Couplings between consecutive path components are
    /// zero.
    pub fn path_tridiagonal(&self) -> Option<(Vec<usize>, Vec<f64>, Vec<f64>)> {
        let n = self.nrows;
        if n != self.ncols {
            return None;
        }
        let mut nbrs: Vec<[usize; 2]> = vec![[usize::MAX; 2]; n];
        let mut degree = vec![0usize; n];
        for r in 0..n {
            for (c, v) in self.row(r) {
                if v.im != 0.0 || v != self.get(c, r).conj() {
                    return None;
                }
                if c != r {
                    if degree[r] == 2 {
                        return None;
                    }
                    nbrs[r][degree[r]] = c;
                    degree[r] += 1;
                }
            }
        }
        let mut visited = vec![false; n];
        let mut perm = Vec::with_capacity(n);
        // Walk every path from one of its endpoints; a remaining unvisited
        // vertex of degree two lies on a cycle.
        for start in 0..n {
            if visited[start] || degree[start] == 2 {
                continue;
            }
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                visited[cur] = true;
                perm.push(cur);
                let next = nbrs[cur][..degree[cur]].iter().copied().find(|&x| x != prev);
                match next {
                    Some(x) if !visited[x] => {
                        prev = cur;
                        cur = x;
                    }
                    Some(_) => return None,
                    None => break,
                }
            }
        }
        if perm.len() != n {
            return None;
        }
        let diag: Vec<f64> = perm.iter().map(|&i| self.get(i, i).re).collect();
        let off: Vec<f64> = perm.windows(2).map(|w| self.get(w[1], w[0]).re).collect();
        Some((perm, diag, off))
    }
}
