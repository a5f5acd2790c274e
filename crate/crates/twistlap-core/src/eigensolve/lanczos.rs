//! Thick-restart Lanczos with full reorthogonalization and locking.
//!
//! Converged Ritz pairs are locked (deflated) from the bottom of the
//! spectrum upward. Because a Krylov space started from a single vector
//! contains only one direction of each exactly degenerate eigenspace, the
//! driver finishes with deflated restarts: fresh random starts in the
//! orthogonal complement of everything locked so far, repeated until the
//! lowest eigenvalue of the complement lies at or above the `k`-th locked
//! value. This is what makes multiplicity counts (Landau levels) reliable.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::dense::hermitian_eigen;
use crate::error::{Error, Result};
use crate::rng::ProbeRng;
use crate::sparse::{dot, norm, scale, CsrMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Limits for [`lanczos_smallest`].
#[derive(Debug, Clone, Copy)]
pub struct LanczosLimits {
    /// Maximum number of restart cycles summed over all inner runs.
    pub max_restarts: usize,
    /// Minimum Krylov basis size per cycle.
    pub min_basis: usize,
}

impl LanczosLimits {
    /// Defaults for `k` wanted pairs: `50·k` restarts, basis of at least 64.
    pub fn for_k(k: usize) -> Self {
        Self {
            max_restarts: 50 * k.max(1),
            min_basis: 64,
        }
    }
}

struct Locked {
    values: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

struct Run<'a> {
    a: &'a CsrMatrix,
    tol: f64,
    breakdown: f64,
    rng: ProbeRng,
    restarts: usize,
    limits: LanczosLimits,
}

/// Orthogonalizes `w` against the locked vectors and the basis with two
/// classical Gram–Schmidt passes; returns the accumulated basis coefficients.
fn orthogonalize(w: &mut [Complex64], locked: &[Vec<Complex64>], basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut coefs = vec![ZERO; basis.len()];
    for _ in 0..2 {
        for v in locked {
            let c = dot(v, w);
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= c * vi;
            }
        }
        for (v, acc) in basis.iter().zip(coefs.iter_mut()) {
            let c = dot(v, w);
            *acc += c;
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= c * vi;
            }
        }
    }
    coefs
}

impl Run<'_> {
    fn residual(&self, x: &[Complex64], theta: f64) -> f64 {
        let ax = self.a.matvec(x);
        libm::sqrt(ax.iter().zip(x).map(|(p, q)| (p - theta * q).norm_sqr()).sum::<f64>())
    }

    /// A random unit vector orthogonal to `locked` and `basis`; `None` when
    /// their span already fills the space.
    fn fresh_direction(&mut self, locked: &[Vec<Complex64>], basis: &[Vec<Complex64>]) -> Option<Vec<Complex64>> {
        let n = self.a.nrows();
        if locked.len() + basis.len() >= n {
            return None;
        }
        for _ in 0..8 {
            let mut w = self.rng.unit_vector(n);
            orthogonalize(&mut w, locked, basis);
            let nrm = norm(&w);
            if nrm > 1e-8 {
                scale(&mut w, 1.0 / nrm);
                return Some(w);
            }
        }
        None
    }

    /// Locks the `want` smallest eigenpairs of `A` restricted to the
    /// orthogonal complement of the already locked vectors.
    fn lock_lowest(&mut self, locked: &mut Locked, want: usize) -> Result<()> {
        let n = self.a.nrows();
        let target = (locked.values.len() + want).min(n);
        let Some(start) = self.fresh_direction(&locked.vectors, &[]) else {
            return Ok(());
        };
        let mut basis: Vec<Vec<Complex64>> = vec![start];
        // Projected matrix, row-major with leading dimension `m`.
        let mut h: Vec<f64> = Vec::new();
        loop {
            let remaining = target - locked.values.len();
            let free = n - locked.values.len();
            let m = (2 * remaining + 30).max(self.limits.min_basis).min(free);
            if h.len() != m * m {
                debug_assert!(h.is_empty(), "restart keeps the basis size");
                h = vec![0.0; m * m];
            }
            // Extend the Krylov basis to `m` vectors.
            let mut next: Option<Vec<Complex64>> = None;
            let mut beta_next = 0.0;
            let mut j = basis.len() - 1;
            loop {
                let mut w = self.a.matvec(&basis[j]);
                let coefs = orthogonalize(&mut w, &locked.vectors, &basis);
                for (i, c) in coefs.iter().enumerate() {
                    h[i * m + j] = c.re;
                    h[j * m + i] = c.re;
                }
                let beta = norm(&w);
                let (v, b) = if beta > self.breakdown {
                    scale(&mut w, 1.0 / beta);
                    (Some(w), beta)
                } else {
                    // Invariant subspace: continue with an unrelated direction.
                    (self.fresh_direction(&locked.vectors, &basis), 0.0)
                };
                if basis.len() < m {
                    match v {
                        Some(v) => {
                            h[(j + 1) * m + j] = b;
                            h[j * m + j + 1] = b;
                            basis.push(v);
                            j += 1;
                        }
                        None => break,
                    }
                } else {
                    next = v;
                    beta_next = b;
                    break;
                }
            }
            let size = basis.len();
            let mut hs = vec![ZERO; size * size];
            for i in 0..size {
                for jj in 0..size {
                    hs[i * size + jj] = Complex64::new(h[i * m + jj], 0.0);
                }
            }
            let (theta, y) = hermitian_eigen(&hs, size)?;
            let yr: Vec<Vec<f64>> = y.iter().map(|col| col.iter().map(|z| z.re).collect()).collect();
            let ritz = |col: &[f64], basis: &[Vec<Complex64>]| -> Vec<Complex64> {
                let mut x = vec![ZERO; n];
                for (v, &c) in basis.iter().zip(col) {
                    if c != 0.0 {
                        for (xi, vi) in x.iter_mut().zip(v) {
                            *xi += vi * c;
                        }
                    }
                }
                x
            };
            // Lock converged pairs from the bottom upward.
            let remaining = target - locked.values.len();
            let mut nlock = 0;
            let mut worst = 0.0f64;
            while nlock < remaining.min(size) {
                let est = (beta_next * yr[nlock][size - 1]).abs();
                if est > self.tol {
                    worst = worst.max(est);
                    break;
                }
                let mut x = ritz(&yr[nlock], &basis);
                let nx = norm(&x);
                scale(&mut x, 1.0 / nx);
                let r = self.residual(&x, theta[nlock]);
                if r > self.tol {
                    worst = worst.max(r);
                    break;
                }
                nlock += 1;
                locked.values.push(theta[nlock - 1]);
                locked.vectors.push(x);
            }
            if locked.values.len() >= target {
                return Ok(());
            }
            if next.is_none() {
                // The basis spans the whole complement, so every Ritz pair is
                // exact; anything unconverged is a rounding-floor failure.
                return Err(Error::Convergence {
                    iterations: self.restarts,
                    best_residual: worst,
                });
            }
            self.restarts += 1;
            if self.restarts > self.limits.max_restarts {
                let best = (nlock..remaining.min(size))
                    .map(|i| (beta_next * yr[i][size - 1]).abs())
                    .fold(worst, f64::max);
                return Err(Error::Convergence {
                    iterations: self.restarts,
                    best_residual: best,
                });
            }
            // Thick restart: keep the lowest unlocked Ritz vectors plus the
            // residual direction; the projected matrix becomes an arrowhead.
            let still = target - locked.values.len();
            let free = n - locked.values.len();
            let m_new = (2 * still + 30).max(self.limits.min_basis).min(free);
            let keep = (still + (m_new - still) / 2).min(size - nlock).min(m_new.saturating_sub(1));
            let kept: Vec<usize> = (nlock..nlock + keep).collect();
            let mut new_basis: Vec<Vec<Complex64>> = kept.iter().map(|&i| ritz(&yr[i], &basis)).collect();
            for v in &mut new_basis {
                let nv = norm(v);
                scale(v, 1.0 / nv);
            }
            new_basis.push(next.expect("checked above"));
            let mut nh = vec![0.0; m_new * m_new];
            for (t, &i) in kept.iter().enumerate() {
                nh[t * m_new + t] = theta[i];
                let s = beta_next * yr[i][size - 1];
                nh[t * m_new + keep] = s;
                nh[keep * m_new + t] = s;
            }
            h = nh;
            basis = new_basis;
        }
    }
}

/// The `k` smallest eigenpairs of the Hermitian matrix `a`, each with an
/// explicit residual `‖A x − θ x‖ ≤ tol`. Eigenvalues are returned in
/// ascending order with unit-norm eigenvectors.
pub fn lanczos_smallest(
    a: &CsrMatrix,
    k: usize,
    tol: f64,
    seed: u64,
    limits: LanczosLimits,
) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let n = a.nrows();
    assert!(k >= 1 && k <= n);
    let anorm = a.norm_inf().max(f64::MIN_POSITIVE);
    let mut run = Run {
        a,
        tol,
        breakdown: 1e-13 * anorm,
        rng: ProbeRng::with_stream(seed, 0x1a2c),
        restarts: 0,
        limits,
    };
    let mut locked = Locked {
        values: Vec::new(),
        vectors: Vec::new(),
    };
    run.lock_lowest(&mut locked, k)?;
    // Deflated restarts: recover degenerate copies missed by the Krylov space.
    loop {
        if locked.values.len() >= n {
            break;
        }
        let mut sorted = locked.values.clone();
        sorted.sort_by(f64::total_cmp);
        let kth = sorted[k - 1];
        let before = locked.values.len();
        run.lock_lowest(&mut locked, 1)?;
        if locked.values.len() == before {
            break;
        }
        let mu = locked.values[before];
        if mu >= kth - 2.0 * tol {
            break;
        }
    }
    let mut order: Vec<usize> = (0..locked.values.len()).collect();
    order.sort_by(|&x, &y| locked.values[x].total_cmp(&locked.values[y]));
    order.truncate(k);
    let values = order.iter().map(|&i| locked.values[i]).collect();
    let vectors = order.iter().map(|&i| locked.vectors[i].clone()).collect();
    Ok((values, vectors))
}
