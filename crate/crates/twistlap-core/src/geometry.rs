//! Constant-curvature base surfaces: the round sphere and the flat square torus.

use core::f64::consts::PI;

use crate::error::{invalid, Result};

/// Which base surface a [`SurfaceGeometry`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SurfaceKind {
    /// Round 2-sphere of constant scalar curvature `R > 0`.
    Sphere,
    /// Flat torus with a square fundamental domain.
    Torus,
}

/// A compact Riemann surface with a constant-curvature metric.
///
/// Instances can only be built through [`SurfaceGeometry::sphere`] and
/// [`SurfaceGeometry::torus`], which enforce Gauss–Bonnet
/// (`vol · R = 8π` on the sphere, `R = 0` on the torus).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SurfaceGeometry {
    kind: SurfaceKind,
    volume: f64,
    scalar_curvature: f64,
    genus: u32,
}

impl SurfaceGeometry {
    /// Round sphere of scalar curvature `scalar_curvature`; its area is `8π/R`.
    pub fn sphere(scalar_curvature: f64) -> Result<Self> {
        if !(scalar_curvature.is_finite() && scalar_curvature > 0.0) {
            return Err(invalid("sphere scalar curvature must be positive and finite"));
        }
        Ok(Self {
            kind: SurfaceKind::Sphere,
            volume: 8.0 * PI / scalar_curvature,
            scalar_curvature,
            genus: 0,
        })
    }

    /// Flat square torus of area `volume`.
    pub fn torus(volume: f64) -> Result<Self> {
        if !(volume.is_finite() && volume > 0.0) {
            return Err(invalid("torus volume must be positive and finite"));
        }
        Ok(Self {
            kind: SurfaceKind::Torus,
            volume,
            scalar_curvature: 0.0,
            genus: 1,
        })
    }

    /// Surface kind.
    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    /// Total area.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Scalar curvature `R` (constant over the surface).
    pub fn scalar_curvature(&self) -> f64 {
        self.scalar_curvature
    }

    /// Minimum of the scalar curvature; equals [`Self::scalar_curvature`]
    /// because only constant-curvature metrics are supported.
    pub fn min_scalar_curvature(&self) -> f64 {
        self.scalar_curvature
    }

    /// Genus (0 for the sphere, 1 for the torus).
    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Radius `√(2/R)` of the sphere, `None` for the torus.
    pub fn sphere_radius(&self) -> Option<f64> {
        match self.kind {
            SurfaceKind::Sphere => Some(libm::sqrt(2.0 / self.scalar_curvature)),
            SurfaceKind::Torus => None,
        }
    }

    /// Side length `√vol` of the square fundamental domain, `None` for the sphere.
    pub fn torus_side(&self) -> Option<f64> {
        match self.kind {
            SurfaceKind::Torus => Some(libm::sqrt(self.volume)),
            SurfaceKind::Sphere => None,
        }
    }
}

/// Round sphere of scalar curvature `R`; see [`SurfaceGeometry::sphere`].
pub fn make_sphere(scalar_curvature: f64) -> Result<SurfaceGeometry> {
    SurfaceGeometry::sphere(scalar_curvature)
}

/// Flat square torus of the given area; see [`SurfaceGeometry::torus`].
pub fn make_torus(volume: f64) -> Result<SurfaceGeometry> {
    SurfaceGeometry::torus(volume)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_volume_from_gauss_bonnet() {
        let s = make_sphere(2.0).unwrap();
        assert!((s.volume() - 4.0 * PI).abs() < 1e-14);
        assert_eq!(s.genus(), 0);
        let s = make_sphere(8.0 * PI).unwrap();
        assert!((s.volume() - 1.0).abs() < 1e-15);
        assert!(make_sphere(0.0).is_err());
        assert!(make_sphere(-1.0).is_err());
        assert!(make_sphere(f64::NAN).is_err());
    }

    #[test]
    fn torus_side_and_curvature() {
        let t = make_torus(1.0).unwrap();
        assert_eq!(t.torus_side(), Some(1.0));
        assert_eq!(t.scalar_curvature(), 0.0);
        assert_eq!(t.genus(), 1);
        let t = make_torus(4.0 * PI * PI).unwrap();
        assert!((t.torus_side().unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!(make_torus(-1.0).is_err());
        assert!(make_torus(0.0).is_err());
    }

    #[test]
    fn radius_only_on_sphere() {
        assert!((make_sphere(2.0).unwrap().sphere_radius().unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(make_torus(1.0).unwrap().sphere_radius(), None);
        assert_eq!(make_sphere(2.0).unwrap().torus_side(), None);
    }
}
