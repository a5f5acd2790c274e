//! Hermitian line bundles: degree, rank and the Hermitian-Einstein constant.
//!
//! The curvature convention is `iΛF_A = c·𝟙` with
//! `c = 2π·deg / ((n−1)!·rk·vol)`, so that `c < 0` for negative degree.

use alloc::format;
use core::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::geometry::SurfaceGeometry;

/// `(n−1)!` in exact integer arithmetic.
fn factorial_of_predecessor(n: u32) -> Result<u128> {
    let mut acc: u128 = 1;
    for j in 2..n as u128 {
        acc = acc
            .checked_mul(j)
            .ok_or_else(|| invalid(format!("(n-1)! overflows for n = {n}")))?;
    }
    Ok(acc)
}

/// Hermitian-Einstein constant `2π·degree / ((n−1)!·rank·volume)`.
pub fn he_constant(n: u32, degree: i64, rank: u32, volume: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("complex dimension n must be at least 1"));
    }
    if rank == 0 {
        return Err(invalid("rank must be at least 1"));
    }
    if !(volume.is_finite() && volume > 0.0) {
        return Err(invalid("volume must be positive and finite"));
    }
    let fact = factorial_of_predecessor(n)?;
    Ok(2.0 * PI * degree as f64 / (fact as f64 * rank as f64 * volume))
}

/// Degree of `K^{1/2} ⊗ E`: `degree − rank·(1 − genus)`.
pub fn half_canonical_twist_degree(degree: i64, rank: u32, genus: u32) -> i64 {
    degree - rank as i64 * (1 - genus as i64)
}

/// `iΛΩ` for the anticanonical bundle `K⁻¹` (degree `2 − 2g`, rank 1),
/// computed as its Hermitian-Einstein constant; equals `R/2`.
pub fn anticanonical_lambda_curvature(geometry: &SurfaceGeometry) -> f64 {
    let degree = 2 - 2 * geometry.genus() as i64;
    2.0 * PI * degree as f64 / geometry.volume()
}

/// A Hermitian vector bundle over a [`SurfaceGeometry`], described by its
/// topological data and its Hermitian-Einstein constant.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BundleSpec {
    degree: i64,
    rank: u32,
    complex_dimension: u32,
    he_constant: f64,
}

impl BundleSpec {
    /// Bundle of the given degree and rank over a base of complex dimension `n`
    /// with volume taken from `geometry`.
    pub fn new(geometry: &SurfaceGeometry, degree: i64, rank: u32, n: u32) -> Result<Self> {
        let c = he_constant(n, degree, rank, geometry.volume())?;
        Ok(Self {
            degree,
            rank,
            complex_dimension: n,
            he_constant: c,
        })
    }

    /// Line bundle (`rank = 1`, `n = 1`) of the given degree over `geometry`.
    pub fn line(geometry: &SurfaceGeometry, degree: i64) -> Result<Self> {
        Self::new(geometry, degree, 1, 1)
    }

    /// Degree `deg(E)`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Rank `rk(E)`.
    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Complex dimension `n` of the base.
    pub fn complex_dimension(&self) -> u32 {
        self.complex_dimension
    }

    /// Hermitian-Einstein constant `c`.
    pub fn he_constant(&self) -> f64 {
        self.he_constant
    }

    /// Checks the preconditions of the numerical backends:
    /// rank 1, complex dimension 1 and (unless `allow_nonnegative`) negative degree.
    pub(crate) fn require_numeric(&self, allow_nonnegative: bool) -> Result<()> {
        if self.rank != 1 {
            return Err(invalid("numerical operators support rank-1 bundles only"));
        }
        if self.complex_dimension != 1 {
            return Err(invalid("numerical operators support complex dimension 1 only"));
        }
        if !allow_nonnegative && self.degree >= 0 {
            return Err(invalid(format!(
                "operator assembly requires negative degree, got {}",
                self.degree
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SurfaceGeometry;

    #[test]
    fn he_constant_examples() {
        assert!((he_constant(1, -2, 1, 4.0 * PI).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(he_constant(1, 0, 3, 7.0).unwrap(), 0.0);
        assert!((he_constant(2, -6, 2, 3.0 * PI).unwrap() + 2.0).abs() < 1e-15);
        assert!(he_constant(1, -1, 0, 1.0).is_err());
        assert!(he_constant(1, -1, 1, 0.0).is_err());
        assert!(he_constant(0, -1, 1, 1.0).is_err());
    }

    #[test]
    fn factorial_is_exact() {
        assert_eq!(factorial_of_predecessor(1).unwrap(), 1);
        assert_eq!(factorial_of_predecessor(5).unwrap(), 24);
        assert_eq!(factorial_of_predecessor(21).unwrap(), 2_432_902_008_176_640_000);
        assert!(factorial_of_predecessor(40).is_err());
    }

    #[test]
    fn twist_degree_examples() {
        assert_eq!(half_canonical_twist_degree(-1, 1, 0), -2);
        assert_eq!(half_canonical_twist_degree(-7, 1, 1), -7);
        assert_eq!(half_canonical_twist_degree(-3, 2, 0), -5);
    }

    #[test]
    fn anticanonical_curvature_is_half_scalar_curvature() {
        let s = SurfaceGeometry::sphere(2.0).unwrap();
        assert!((anticanonical_lambda_curvature(&s) - 1.0).abs() < 1e-15);
        let s = SurfaceGeometry::sphere(8.0 * PI).unwrap();
        assert!((anticanonical_lambda_curvature(&s) - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
        let t = SurfaceGeometry::torus(3.0).unwrap();
        assert_eq!(anticanonical_lambda_curvature(&t), 0.0);
    }

    #[test]
    fn numeric_preconditions() {
        let s = SurfaceGeometry::sphere(2.0).unwrap();
        assert!(BundleSpec::line(&s, -1).unwrap().require_numeric(false).is_ok());
        assert!(BundleSpec::line(&s, 0).unwrap().require_numeric(false).is_err());
        assert!(BundleSpec::line(&s, 0).unwrap().require_numeric(true).is_ok());
        assert!(BundleSpec::new(&s, -1, 2, 1).unwrap().require_numeric(false).is_err());
        assert!(BundleSpec::new(&s, -1, 1, 2).unwrap().require_numeric(false).is_err());
    }
}
