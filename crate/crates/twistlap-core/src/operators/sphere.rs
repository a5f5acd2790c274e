//! Sphere backend: one azimuthal Fourier mode of a monopole line bundle.
//!
//! Sections of the degree-`d` bundle are written `f(θ) e^{imφ}` in the
//! north-pole gauge, where the constant-curvature connection has potential
//! `a(θ) = (d/2)(1 − cos θ)`. The unknowns are cell averages at
//! `θ_j = (j + ½)h`, `h = π/N`. First-order operators are sampled on cell
//! faces `θ = jh`:
//!
//! ```text
//!   (∂_θ f)_face = (f_{j+1} − f_j)/h,   (f)_face = (f_j + f_{j+1})/2,
//!   ∂̄_A f  ∝ ∂_θ f − (m − a)/sinθ · f,
//!   ∇_A f  = (∂_θ f, i(m − a)/sinθ · f) / radius.
//! ```
//!
//! Faces at the poles carry the same stencil with a zero ghost value. They
//! exist only when the mode is singular there (`m ≠ 0` at the north pole,
//! `m ≠ d` at the south pole), where they supply the centrifugal barrier
//! that keeps the discrete operator free of spurious kernel. Their
//! effective polar radius is half a cell, `s_p = h/2`.
//!
//! With these face-staggered forms the discrete Weitzenböck defect
//! `Δ − ½∇*∇ + ½c` is the constant `−(c/2)(1 − sinc(h/2))`, i.e. the
//! identity holds up to an `O(h²)` scalar.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::RangeInclusive;

use num_complex::Complex64;

use super::{Backend, OperatorSet};
use crate::bundle::BundleSpec;
use crate::error::{invalid, Result};
use crate::geometry::{SurfaceGeometry, SurfaceKind};
use crate::sparse::CsrMatrix;

/// Smallest admissible number of θ-cells.
pub const MIN_SPHERE_GRID: usize = 16;

/// Modes `m ∈ [d − k − 2, k + 2]` that contain the `k` lowest eigenvalues
/// of the degree-`d` Dolbeault Laplacian (`d < 0`).
pub fn default_mode_range(degree: i64, k: usize) -> RangeInclusive<i64> {
    let k = k as i64;
    (degree.min(0) - k - 2)..=(degree.max(0) + k + 2)
}

/// Assembles the operators of azimuthal mode `m` on an `N`-cell θ-grid.
pub fn assemble_sphere_mode(geometry: &SurfaceGeometry, bundle: &BundleSpec, m: i64, n: usize) -> Result<OperatorSet> {
    bundle.require_numeric(false)?;
    assemble_sphere_mode_unrestricted(geometry, bundle, m, n)
}

/// [`assemble_sphere_mode`] without the negative-degree requirement; used
/// for untwisted and positive-degree baselines.
pub fn assemble_sphere_mode_unrestricted(
    geometry: &SurfaceGeometry,
    bundle: &BundleSpec,
    m: i64,
    n: usize,
) -> Result<OperatorSet> {
    if geometry.kind() != SurfaceKind::Sphere {
        return Err(invalid("sphere-mode assembly requires a sphere geometry"));
    }
    bundle.require_numeric(true)?;
    if n < MIN_SPHERE_GRID {
        return Err(invalid(format!("sphere grid must have at least {MIN_SPHERE_GRID} cells, got {n}")));
    }
    let radius = geometry.sphere_radius().expect("sphere");
    let d = bundle.degree() as f64;
    let mf = m as f64;
    let h = PI / n as f64;
    let area = 2.0 * PI * radius * radius;
    let potential = |theta: f64| 0.5 * d * (1.0 - libm::cos(theta));

    let weights_sec: Vec<f64> = (0..n)
        .map(|j| area * h * libm::sin((j as f64 + 0.5) * h))
        .collect();
    let lambda_curvature: Vec<f64> = (0..n)
        .map(|j| 2.0 * PI * (potential((j + 1) as f64 * h) - potential(j as f64 * h)) / weights_sec[j])
        .collect();

    // Face rows: (left cell, right cell, polar radius sinθ, twist (m − a)/sinθ).
    let mut faces: Vec<(Option<usize>, Option<usize>, f64, f64)> = Vec::with_capacity(n + 1);
    let polar = 0.5 * h;
    if m != 0 {
        faces.push((None, Some(0), polar, mf / polar));
    }
    for j in 0..n - 1 {
        let theta = (j + 1) as f64 * h;
        let s = libm::sin(theta);
        faces.push((Some(j), Some(j + 1), s, (mf - potential(theta)) / s));
    }
    if m != bundle.degree() {
        faces.push((Some(n - 1), None, polar, (mf - d) / polar));
    }

    let nf = faces.len();
    let mut t_dbar = Vec::with_capacity(2 * nf);
    let mut t_theta = Vec::with_capacity(2 * nf);
    let mut t_phi = Vec::with_capacity(2 * nf);
    let mut weights_form = Vec::with_capacity(nf);
    let dscale = 1.0 / (core::f64::consts::SQRT_2 * radius);
    let gscale = 1.0 / radius;
    for (row, &(left, right, s, twist)) in faces.iter().enumerate() {
        weights_form.push(area * s * h);
        for (cell, diff) in [(left, -1.0 / h), (right, 1.0 / h)] {
            if let Some(c) = cell {
                let mean = 0.5 * twist;
                t_dbar.push((row, c, Complex64::new((diff - mean) * dscale, 0.0)));
                t_theta.push((row, c, Complex64::new(diff * gscale, 0.0)));
                t_phi.push((row, c, Complex64::new(0.0, mean * gscale)));
            }
        }
    }
    let dbar = CsrMatrix::from_triplets(nf, n, &t_dbar)?;
    let grad = [
        CsrMatrix::from_triplets(nf, n, &t_theta)?,
        CsrMatrix::from_triplets(nf, n, &t_phi)?,
    ];
    Ok(OperatorSet {
        backend: Backend::SphereMode { m },
        grid_size: n,
        geometry: *geometry,
        bundle: *bundle,
        dbar,
        grad,
        weights_grad: weights_form.clone(),
        weights_sec,
        weights_form,
        lambda_curvature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_range_brackets_ground_modes() {
        assert_eq!(default_mode_range(-3, 2), -7..=4);
        assert_eq!(default_mode_range(-1, 0), -3..=2);
    }

    #[test]
    fn pole_rows_only_for_singular_modes() {
        let g = SurfaceGeometry::sphere(2.0).unwrap();
        let b = BundleSpec::line(&g, -2).unwrap();
        let n = 32;
        assert_eq!(assemble_sphere_mode(&g, &b, 0, n).unwrap().form_dim(), n);
        assert_eq!(assemble_sphere_mode(&g, &b, -2, n).unwrap().form_dim(), n);
        assert_eq!(assemble_sphere_mode(&g, &b, -1, n).unwrap().form_dim(), n + 1);
        assert_eq!(assemble_sphere_mode(&g, &b, 3, n).unwrap().form_dim(), n + 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = SurfaceGeometry::sphere(2.0).unwrap();
        let t = SurfaceGeometry::torus(1.0).unwrap();
        let b = BundleSpec::line(&g, -1).unwrap();
        assert!(assemble_sphere_mode(&t, &b, 0, 32).is_err());
        assert!(assemble_sphere_mode(&g, &b, 0, 8).is_err());
        let b0 = BundleSpec::line(&g, 0).unwrap();
        assert!(assemble_sphere_mode(&g, &b0, 0, 32).is_err());
        assert!(assemble_sphere_mode_unrestricted(&g, &b0, 0, 32).is_ok());
        let b2 = BundleSpec::new(&g, -1, 2, 1).unwrap();
        assert!(assemble_sphere_mode(&g, &b2, 0, 32).is_err());
    }
}
