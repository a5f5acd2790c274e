//! Closed-form lower bounds and spectra.
//!
//! * Dolbeault bounds: the naive estimate `−π·d / ((n−1)!·rk·vol)` and the
//!   sharp estimate, larger by the factor `2n / (2n − 1)`.
//! * Dirac bounds: complex `√(−4πd/(rk·vol))` and real
//!   `√(4π(1−g)/vol − 4πd/(rk·vol))`.
//! * Explicit spectra: Dirac and Dolbeault eigenvalues on the round sphere,
//!   Landau levels on the flat torus.
//! * The Dolbeault → Dirac transfer `μ = √(2λ)` for nonzero eigenvalues.
//!
//! Every function is pure; inputs outside a formula's hypotheses return an
//! error instead of an extrapolated value.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::bundle::he_constant;
use crate::error::{Error, Result};

/// The four lower bounds the crate can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BoundKind {
    /// Dolbeault bound from the Weitzenböck formula alone.
    NaiveDolbeault,
    /// Sharp Dolbeault bound (factor `2n/(2n−1)` above the naive one).
    MainDolbeault,
    /// Bound for nonzero eigenvalues of the twisted complex Dirac operator.
    ComplexDirac,
    /// Bound for nonzero eigenvalues of the twisted real Dirac operator.
    RealDirac,
}

fn require_negative(degree: i64, what: &str) -> Result<()> {
    if degree >= 0 {
        return Err(Error::OutOfHypothesis(format!(
            "{what} requires negative degree, got {degree}"
        )));
    }
    Ok(())
}

fn require_volume(volume: f64) -> Result<()> {
    if !(volume.is_finite() && volume > 0.0) {
        return Err(Error::InvalidParameter("volume must be positive and finite".into()));
    }
    Ok(())
}

fn require_curvature(r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter("scalar curvature must be positive and finite".into()));
    }
    Ok(())
}

/// Naive Dolbeault bound `−π·degree / ((n−1)!·rank·volume) = −c/2`.
pub fn bound_dolbeault_naive(n: u32, degree: i64, rank: u32, volume: f64) -> Result<f64> {
    Ok(-0.5 * he_constant(n, degree, rank, volume)?)
}

/// Sharp Dolbeault bound `(2n/(2n−1)) · bound_dolbeault_naive`; requires
/// negative degree.
pub fn bound_dolbeault_main(n: u32, degree: i64, rank: u32, volume: f64) -> Result<f64> {
    require_negative(degree, "the sharp Dolbeault bound")?;
    let naive = bound_dolbeault_naive(n, degree, rank, volume)?;
    Ok(sharpening_factor(n) * naive)
}

/// The ratio `2n / (2n − 1)` between the sharp and the naive bound.
pub fn sharpening_factor(n: u32) -> f64 {
    let two_n = 2.0 * n as f64;
    two_n / (two_n - 1.0)
}

/// Complex Dirac bound `√(−4π·degree / (rank·volume))`.
pub fn bound_dirac_complex(degree: i64, rank: u32, volume: f64) -> Result<f64> {
    require_volume(volume)?;
    if rank == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    if degree >= 0 {
        return Err(Error::Domain(format!(
            "complex Dirac bound needs negative degree (square root of {})",
            -4.0 * PI * degree as f64 / (rank as f64 * volume)
        )));
    }
    Ok(libm::sqrt(-4.0 * PI * degree as f64 / (rank as f64 * volume)))
}

/// Real Dirac bound `√(4π(1−genus)/volume − 4π·degree/(rank·volume))`.
pub fn bound_dirac_real(genus: u32, degree: i64, rank: u32, volume: f64) -> Result<f64> {
    require_volume(volume)?;
    if rank == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    let radicand = 4.0 * PI * (1.0 - genus as f64) / volume - 4.0 * PI * degree as f64 / (rank as f64 * volume);
    if radicand < 0.0 {
        return Err(Error::Domain(format!("real Dirac bound has negative radicand {radicand}")));
    }
    Ok(libm::sqrt(radicand))
}

/// Curvature form of the real Dirac bound, `√(R₀/2 − 4π·degree/(rank·volume))`
/// with `R₀` the minimum scalar curvature.
pub fn bound_dirac_real_curvature(min_scalar_curvature: f64, degree: i64, rank: u32, volume: f64) -> Result<f64> {
    require_volume(volume)?;
    if rank == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    let radicand = 0.5 * min_scalar_curvature - 4.0 * PI * degree as f64 / (rank as f64 * volume);
    if radicand < 0.0 {
        return Err(Error::Domain(format!("real Dirac bound has negative radicand {radicand}")));
    }
    Ok(libm::sqrt(radicand))
}

/// Evaluates a [`BoundKind`] for a line bundle over a surface of the given
/// genus and volume (`n = 1`, rank 1).
pub fn bound_for_surface(kind: BoundKind, genus: u32, degree: i64, volume: f64) -> Result<f64> {
    match kind {
        BoundKind::NaiveDolbeault => bound_dolbeault_naive(1, degree, 1, volume),
        BoundKind::MainDolbeault => bound_dolbeault_main(1, degree, 1, volume),
        BoundKind::ComplexDirac => bound_dirac_complex(degree, 1, volume),
        BoundKind::RealDirac => bound_dirac_real(genus, degree, 1, volume),
    }
}

/// Positive Dirac eigenvalues `√((R/2)((q+1)² − (q+1)·degL))`, `q = 0..=q_max`,
/// on the round sphere twisted by a line bundle of degree `degL ≤ 0`.
pub fn sphere_dirac_spectrum(r: f64, deg_l: i64, q_max: u32) -> Result<Vec<f64>> {
    require_curvature(r)?;
    if deg_l > 0 {
        return Err(Error::OutOfHypothesis(format!(
            "sphere Dirac spectrum requires degL <= 0, got {deg_l}"
        )));
    }
    Ok((0..=q_max)
        .map(|q| {
            let k = (q + 1) as f64;
            libm::sqrt(0.5 * r * (k * k - k * deg_l as f64))
        })
        .collect())
}

/// Dolbeault eigenvalues `(R/4)((q+1)² − (q+1)(1+d))`, `q = 0..=q_max`, on
/// the round sphere for a line bundle of degree `d < 0`.
pub fn sphere_dolbeault_spectrum(r: f64, degree: i64, q_max: u32) -> Result<Vec<f64>> {
    require_curvature(r)?;
    require_negative(degree, "the sphere Dolbeault spectrum")?;
    Ok((0..=q_max)
        .map(|q| {
            let k = (q + 1) as f64;
            0.25 * r * (k * k - k * (1.0 + degree as f64))
        })
        .collect())
}

/// Torus Dolbeault levels `(−2π·d·(k+1)/vol, |d|)`, `k = 0..=k_max`.
pub fn torus_dolbeault_spectrum(volume: f64, degree: i64, k_max: u32) -> Result<Vec<(f64, usize)>> {
    require_volume(volume)?;
    require_negative(degree, "the torus Dolbeault spectrum")?;
    let mult = degree.unsigned_abs() as usize;
    Ok((0..=k_max)
        .map(|k| (-2.0 * PI * degree as f64 * (k + 1) as f64 / volume, mult))
        .collect())
}

/// Nonzero Dirac eigenvalues `√(2λ)` from Dolbeault eigenvalues `λ ≥ 0`
/// (zeros dropped), ascending.
pub fn dirac_from_dolbeault(values: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = values.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::Domain(format!("Dolbeault eigenvalues must be nonnegative, got {bad}")));
    }
    let mut out: Vec<f64> = values
        .iter()
        .filter(|v| **v > 0.0)
        .map(|v| libm::sqrt(2.0 * v))
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}
