//! Torus backend: uniform `N × N` grid with Peierls phases.
//!
//! Nodes `p = (i, j)` sit at `(ih, jh)`, `h = √vol / N`. The link variable
//! `U_x(p)` (resp. `U_y(p)`) transports from `p + x̂` (resp. `p + ŷ`) back
//! to `p`, so covariant forward differences read
//! `(F_x ψ)(p) = (U_x(p) ψ(p + x̂) − ψ(p)) / h`.
//!
//! Landau gauge: `U_y(i, j) = e^{−iφ i}`, `U_x(i, j) = 1` except across the
//! seam, `U_x(N−1, j) = e^{iφNj}`, with `φ = 2π d / N²`. Every plaquette
//! then has holonomy `e^{−iφ}`, i.e. flux `φ = c h²` of `iΛF_A`, and the
//! seam phases close the cocycle because `φN² ∈ 2πℤ`.
//!
//! The discrete `∂̄_A = (∇_x + i∇_y)/√2` is sampled twice, once with
//! forward and once with backward covariant differences, each copy
//! carrying half the form weight. The one-sided forward operator alone
//! has `|d|` spurious zero modes at the corner of the Brillouin zone (the
//! lattice doubler); the symmetric pair removes them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::{Backend, OperatorSet};
use crate::bundle::BundleSpec;
use crate::error::{invalid, Result};
use crate::geometry::{SurfaceGeometry, SurfaceKind};
use crate::sparse::CsrMatrix;

/// Smallest admissible grid size.
pub const MIN_TORUS_GRID: usize = 8;

fn cis(angle: f64) -> Complex64 {
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// Link variables of a lattice U(1) connection on the `N × N` torus grid,
/// indexed by `p = i + N j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeierlsLinks {
    n: usize,
    ux: Vec<Complex64>,
    uy: Vec<Complex64>,
}

impl PeierlsLinks {
    /// Landau-gauge links of uniform flux `2π·degree/N²` per plaquette.
    pub fn landau(n: usize, degree: i64) -> Self {
        let phi = 2.0 * PI * degree as f64 / (n * n) as f64;
        let mut ux = vec![Complex64::new(1.0, 0.0); n * n];
        let mut uy = vec![Complex64::new(1.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..n {
                let p = i + n * j;
                uy[p] = cis(-phi * i as f64);
                if i == n - 1 {
                    // Reduce the seam angle modulo 2π before evaluating.
                    let turns = (degree as i128 * j as i128).rem_euclid(n as i128);
                    ux[p] = cis(2.0 * PI * turns as f64 / n as f64);
                }
            }
        }
        Self { n, ux, uy }
    }

    /// Grid size `N`.
    pub fn grid_size(&self) -> usize {
        self.n
    }

    /// Links in the x direction.
    pub fn ux(&self) -> &[Complex64] {
        &self.ux
    }

    /// Links in the y direction.
    pub fn uy(&self) -> &[Complex64] {
        &self.uy
    }

    fn east(&self, p: usize) -> usize {
        let (i, j) = (p % self.n, p / self.n);
        (i + 1) % self.n + self.n * j
    }

    fn north(&self, p: usize) -> usize {
        let (i, j) = (p % self.n, p / self.n);
        i + self.n * ((j + 1) % self.n)
    }

    /// Gauge transform by `g_p = e^{iχ_p}`: `U(p→q) ↦ g_p U(p→q) conj(g_q)`.
    pub fn gauge_transform(&self, chi: &[f64]) -> Self {
        assert_eq!(chi.len(), self.n * self.n, "gauge function has wrong length");
        let mut out = self.clone();
        for p in 0..self.n * self.n {
            out.ux[p] = cis(chi[p]) * self.ux[p] * cis(-chi[self.east(p)]);
            out.uy[p] = cis(chi[p]) * self.uy[p] * cis(-chi[self.north(p)]);
        }
        out
    }

    /// Holonomy `U_x(p) U_y(p+x̂) conj(U_x(p+ŷ)) conj(U_y(p))` of every plaquette.
    pub fn plaquette_holonomies(&self) -> Vec<Complex64> {
        (0..self.n * self.n)
            .map(|p| self.ux[p] * self.uy[self.east(p)] * self.ux[self.north(p)].conj() * self.uy[p].conj())
            .collect()
    }

    /// Flux of `iΛF_A` through every plaquette, `−arg(holonomy) ∈ [−π, π)`.
    pub fn plaquette_fluxes(&self) -> Vec<f64> {
        self.plaquette_holonomies().iter().map(|z| -z.arg()).collect()
    }

    /// Product of all plaquette holonomies: the parallel transport around the
    /// boundary of the fundamental domain, `e^{−2πi·degree} = 1`.
    pub fn fundamental_domain_holonomy(&self) -> Complex64 {
        self.plaquette_holonomies()
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, z| acc * z)
    }
}

/// Assembles the torus operators for a bundle of negative degree.
pub fn assemble_torus(geometry: &SurfaceGeometry, bundle: &BundleSpec, n: usize) -> Result<OperatorSet> {
    bundle.require_numeric(false)?;
    assemble_torus_unrestricted(geometry, bundle, n)
}

/// [`assemble_torus`] for any degree (including the untwisted `d = 0`
/// baseline and positive degrees).
pub fn assemble_torus_unrestricted(geometry: &SurfaceGeometry, bundle: &BundleSpec, n: usize) -> Result<OperatorSet> {
    assemble_torus_with_links(geometry, bundle, &PeierlsLinks::landau(n, bundle.degree()))
}

/// Assembles the torus operators from explicit link variables (any gauge).
pub fn assemble_torus_with_links(geometry: &SurfaceGeometry, bundle: &BundleSpec, links: &PeierlsLinks) -> Result<OperatorSet> {
    if geometry.kind() != SurfaceKind::Torus {
        return Err(invalid("torus assembly requires a torus geometry"));
    }
    bundle.require_numeric(true)?;
    let n = links.grid_size();
    if n < MIN_TORUS_GRID {
        return Err(invalid(format!("torus grid must be at least {MIN_TORUS_GRID}, got {n}")));
    }
    let nn = n * n;
    let h = geometry.torus_side().expect("torus") / n as f64;
    let inv_h = 1.0 / h;
    let one = Complex64::new(1.0, 0.0);

    // Forward and backward covariant differences in both directions.
    let mut fx = Vec::with_capacity(2 * nn);
    let mut fy = Vec::with_capacity(2 * nn);
    let mut bx = Vec::with_capacity(2 * nn);
    let mut by = Vec::with_capacity(2 * nn);
    for p in 0..nn {
        let (e, nb) = (links.east(p), links.north(p));
        fx.push((p, p, -one * inv_h));
        fx.push((p, e, links.ux[p] * inv_h));
        fy.push((p, p, -one * inv_h));
        fy.push((p, nb, links.uy[p] * inv_h));
        // Backward difference at the neighbour: (ψ(q) − conj(U(p)) ψ(p)) / h with q = p + x̂.
        bx.push((e, e, one * inv_h));
        bx.push((e, p, -links.ux[p].conj() * inv_h));
        by.push((nb, nb, one * inv_h));
        by.push((nb, p, -links.uy[p].conj() * inv_h));
    }
    let fx = CsrMatrix::from_triplets(nn, nn, &fx)?;
    let fy = CsrMatrix::from_triplets(nn, nn, &fy)?;
    let bx = CsrMatrix::from_triplets(nn, nn, &bx)?;
    let by = CsrMatrix::from_triplets(nn, nn, &by)?;

    let s = core::f64::consts::FRAC_1_SQRT_2;
    let i_unit = Complex64::new(0.0, 1.0);
    let forward = fx.combine(Complex64::new(s, 0.0), &fy, i_unit * s)?;
    let backward = bx.combine(Complex64::new(s, 0.0), &by, i_unit * s)?;
    let mut t = Vec::with_capacity(forward.nnz() + backward.nnz());
    for r in 0..nn {
        t.extend(forward.row(r).map(|(c, v)| (r, c, v)));
        t.extend(backward.row(r).map(|(c, v)| (nn + r, c, v)));
    }
    let dbar = CsrMatrix::from_triplets(2 * nn, nn, &t)?;

    let cell = h * h;
    let lambda_curvature = links.plaquette_fluxes().iter().map(|f| f / cell).collect();
    Ok(OperatorSet {
        backend: Backend::TorusGrid,
        grid_size: n,
        geometry: *geometry,
        bundle: *bundle,
        dbar,
        grad: [fx, fy],
        weights_sec: vec![cell; nn],
        weights_form: vec![0.5 * cell; 2 * nn],
        weights_grad: vec![cell; nn],
        lambda_curvature,
    })
}
