//! Dense complex Hermitian eigensolver: Householder reduction to a real
//! symmetric tridiagonal matrix followed by the implicit QL algorithm.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};

const QL_MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of the `n × n` Hermitian matrix stored row-major in
/// `a` (only the lower triangle is read). Returns ascending eigenvalues and
/// the matching orthonormal eigenvectors.
pub fn hermitian_eigen(a: &[Complex64], n: usize) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    assert_eq!(a.len(), n * n, "dense matrix has wrong size");
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut m = a.to_vec();
    // Mirror the lower triangle so that the working copy is exactly Hermitian.
    for i in 0..n {
        m[i * n + i] = Complex64::new(m[i * n + i].re, 0.0);
        for j in 0..i {
            m[j * n + i] = m[i * n + j].conj();
        }
    }
    let reflectors = householder_tridiagonalize(&mut m, n);
    let mut diag: Vec<f64> = (0..n).map(|i| m[i * n + i].re).collect();
    let sub: Vec<Complex64> = (0..n - 1).map(|i| m[(i + 1) * n + i]).collect();
    // Diagonal unitary scaling making the off-diagonal real and nonnegative.
    let mut phase = vec![Complex64::new(1.0, 0.0); n];
    let mut off = vec![0.0; n];
    for i in 0..n - 1 {
        let r = sub[i].norm();
        off[i] = r;
        phase[i + 1] = if r > 0.0 { phase[i] * (sub[i] / r) } else { phase[i] };
    }
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    implicit_ql(&mut diag, &mut off, &mut z, n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let values = order.iter().map(|&j| diag[j]).collect();
    let vectors = order
        .iter()
        .map(|&j| {
            let mut w: Vec<Complex64> = (0..n).map(|i| phase[i] * z[i * n + j]).collect();
            for (k, u) in reflectors.iter().enumerate().rev() {
                if let Some(u) = u {
                    let tail = &mut w[k + 1..];
                    let p: Complex64 = u.iter().zip(tail.iter()).map(|(a, b)| a.conj() * b).sum();
                    for (t, ui) in tail.iter_mut().zip(u) {
                        *t -= ui * p;
                    }
                }
            }
            w
        })
        .collect();
    Ok((values, vectors))
}

/// Reduces the Hermitian matrix in place to tridiagonal form `T = Qᴴ A Q`
/// with `Q = P_0 P_1 ⋯`; reflector `P_k = I − u uᴴ` (`uᴴu = 2`) acts on
/// indices `k+1..n`.
fn householder_tridiagonalize(m: &mut [Complex64], n: usize) -> Vec<Option<Vec<Complex64>>> {
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x: Vec<Complex64> = (k + 1..n).map(|i| m[i * n + k]).collect();
        let alpha = libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if alpha == 0.0 {
            reflectors.push(None);
            continue;
        }
        let x0 = x[0].norm();
        let phase = if x0 > 0.0 { x[0] / x0 } else { Complex64::new(1.0, 0.0) };
        let mut u = x;
        u[0] += phase * alpha;
        let vnorm2 = 2.0 * alpha * (alpha + x0);
        let s = libm::sqrt(2.0 / vnorm2);
        for ui in &mut u {
            *ui *= s;
        }
        // p = B u, q = p − (uᴴp/2) u, B ← B − u qᴴ − q uᴴ.
        let mut p = vec![Complex64::new(0.0, 0.0); len];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = (k + 1 + i) * n + k + 1;
            *pi = m[row..row + len].iter().zip(&u).map(|(a, b)| a * b).sum();
        }
        let kk: Complex64 = u.iter().zip(&p).map(|(a, b)| a.conj() * b).sum::<Complex64>() * 0.5;
        let q: Vec<Complex64> = p.iter().zip(&u).map(|(pi, ui)| pi - kk.re * ui).collect();
        for i in 0..len {
            let row = (k + 1 + i) * n + k + 1;
            for j in 0..len {
                m[row + j] -= u[i] * q[j].conj() + q[i] * u[j].conj();
            }
            m[row + i] = Complex64::new(m[row + i].re, 0.0);
        }
        m[(k + 1) * n + k] = -phase * alpha;
        m[k * n + k + 1] = (-phase * alpha).conj();
        for i in k + 2..n {
            m[i * n + k] = Complex64::new(0.0, 0.0);
            m[k * n + i] = Complex64::new(0.0, 0.0);
        }
        reflectors.push(Some(u));
    }
    reflectors
}

/// Implicit QL iteration with Wilkinson-type shifts on a real symmetric
/// tridiagonal matrix (`off[i]` couples `i` and `i+1`; `off[n-1]` is
/// scratch). Eigenvalues overwrite `diag`; the columns of the row-major
/// `z` are rotated into eigenvectors.
fn implicit_ql(diag: &mut [f64], off: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    off[n - 1] = 0.0;
    // Normwise deflation floor: neglecting |e| ≤ ε‖T‖ perturbs T by no more
    // than the Householder reduction already did, and it prevents stalls
    // next to exactly zero eigenvalues where the relative test never fires.
    let tnorm = (0..n)
        .map(|i| diag[i].abs() + off[i].abs() + if i > 0 { off[i - 1].abs() } else { 0.0 })
        .fold(0.0, f64::max);
    let floor = f64::EPSILON * tnorm;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd || off[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::Convergence {
                    iterations: sweeps,
                    best_residual: off[l].abs(),
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = libm::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = libm::hypot(f, g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                for row in 0..n {
                    let zi1 = z[row * n + i + 1];
                    let zi = z[row * n + i];
                    z[row * n + i + 1] = s * zi + c * zi1;
                    z[row * n + i] = c * zi - s * zi1;
                }
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::ProbeRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two() {
        let a = [c(2.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)];
        let (vals, _) = hermitian_eigen(&a, 2).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-15 && (vals[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn complex_pauli_y() {
        let a = [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)];
        let (vals, vecs) = hermitian_eigen(&a, 2).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-15 && (vals[1] - 1.0).abs() < 1e-15);
        // A v = λ v
        for (v, lam) in vecs.iter().zip(&vals) {
            let av0 = a[0] * v[0] + a[1] * v[1];
            let av1 = a[2] * v[0] + a[3] * v[1];
            assert!((av0 - lam * v[0]).norm() < 1e-15 && (av1 - lam * v[1]).norm() < 1e-15);
        }
    }

    #[test]
    fn random_hermitian_residuals_and_orthonormality() {
        let n = 37;
        let mut rng = ProbeRng::new(11);
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..=i {
                let z = if i == j { c(rng.symmetric(), 0.0) } else { c(rng.symmetric(), rng.symmetric()) };
                a[i * n + j] = z;
                a[j * n + i] = z.conj();
            }
        }
        let (vals, vecs) = hermitian_eigen(&a, n).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for (v, lam) in vecs.iter().zip(&vals) {
            let mut r = 0.0;
            for i in 0..n {
                let av: Complex64 = (0..n).map(|j| a[i * n + j] * v[j]).sum();
                r += (av - lam * v[i]).norm_sqr();
            }
            assert!(libm::sqrt(r) < 1e-13);
        }
        for p in 0..n {
            for q in 0..n {
                let ip: Complex64 = vecs[p].iter().zip(&vecs[q]).map(|(x, y)| x.conj() * y).sum();
                let expect = if p == q { 1.0 } else { 0.0 };
                assert!((ip - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn degenerate_identity() {
        let n = 5;
        let mut a = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c(2.0, 0.0);
        }
        let (vals, _) = hermitian_eigen(&a, n).unwrap();
        assert!(vals.iter().all(|v| (v - 2.0).abs() < 1e-15));
    }
}
