//! Real symmetric tridiagonal eigenproblems: Sturm-sequence bisection for
//! eigenvalues selected by index, inverse iteration for eigenvectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::rng::ProbeRng;

/// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples `i` and `i + 1`).
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    pivmin: f64,
    norm: f64,
}

impl SymTridiagonal {
    /// Wraps the diagonal and off-diagonal; `off.len() + 1 == diag.len()`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty() && off.len() + 1 == diag.len(), "tridiagonal shape mismatch");
        let max_off2 = off.iter().map(|e| e * e).fold(1.0, f64::max);
        let norm = (0..diag.len())
            .map(|i| {
                let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < diag.len() { off[i].abs() } else { 0.0 };
                diag[i].abs() + left + right
            })
            .fold(0.0, f64::max);
        Self {
            diag,
            off,
            pivmin: f64::MIN_POSITIVE * max_off2,
            norm,
        }
    }

    /// Dimension.
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// Always false: an empty tridiagonal matrix cannot be constructed.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// `‖T‖_∞`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] / q };
            q = self.diag[i] - x - coupling;
            if q.abs() <= self.pivmin {
                q = -self.pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        let pad = 2.0 * f64::EPSILON * self.norm.max(f64::MIN_POSITIVE) * n as f64 + self.pivmin;
        (lo - pad, hi + pad)
    }

    /// The `j`-th smallest eigenvalue (0-based), by bisection to full
    /// working precision.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        assert!(j < self.len());
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + self.pivmin {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvalues with indices `first..first + count`.
    pub fn eigenvalues(&self, first: usize, count: usize) -> Vec<f64> {
        (first..first + count).map(|j| self.eigenvalue(j)).collect()
    }

    /// `T x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Solves `(T − σ I) x = b` in place by Gaussian elimination with
    /// partial pivoting; exactly singular pivots are replaced by a tiny
    /// multiple of `‖T‖` (the classical inverse-iteration safeguard).
    fn shifted_solve(&self, sigma: f64, b: &mut [f64]) {
        let n = self.len();
        let tiny = f64::EPSILON * self.norm.max(f64::MIN_POSITIVE);
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - sigma).collect();
        let mut dl = self.off.clone();
        let mut du = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for i in 0..n - 1 {
            if swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            } else {
                b[i + 1] -= dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
    }

    /// Unit eigenvectors for the given (ascending) eigenvalues by inverse
    /// iteration, re-orthogonalized inside clusters of close eigenvalues.
    pub fn eigenvectors(&self, values: &[f64], seed: u64) -> Vec<Vec<f64>> {
        let n = self.len();
        let cluster_gap = 1e-9 * self.norm.max(1.0);
        let mut rng = ProbeRng::with_stream(seed, 0x7d1a);
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(values.len());
        for (idx, &lambda) in values.iter().enumerate() {
            let mut x: Vec<f64> = (0..n).map(|_| rng.symmetric()).collect();
            for _ in 0..4 {
                self.shifted_solve(lambda, &mut x);
                for prev in (0..idx).rev() {
                    if (values[prev] - lambda).abs() > cluster_gap {
                        break;
                    }
                    let p: f64 = out[prev].iter().zip(&x).map(|(a, b)| a * b).sum();
                    for (xi, pi) in x.iter_mut().zip(&out[prev]) {
                        *xi -= p * pi;
                    }
                }
                let nrm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
                if nrm == 0.0 || !nrm.is_finite() {
                    x = (0..n).map(|_| rng.symmetric()).collect();
                    continue;
                }
                for xi in &mut x {
                    *xi /= nrm;
                }
            }
            out.push(x);
        }
        out
    }
}
