//! Discrete first-order operators and the Hermitian operators derived from them.
//!
//! An [`OperatorSet`] stores, for one discretized line bundle,
//!
//! * `dbar` — the discrete `∂̄_A` from section space to `(0,1)`-form space,
//! * `grad` — the two components of the covariant derivative `∇_A`,
//!   assembled independently of `dbar`,
//! * diagonal quadrature weights for sections, forms and gradient samples.
//!
//! Adjoints are always taken with respect to these weights. The derived
//! operators are returned as [`HermitianOperator`]s in the symmetrized form
//! `W^{1/2} A W^{-1/2}`, which is Hermitian in the Euclidean sense exactly
//! when `A` is self-adjoint in the weighted inner product.

pub mod sphere;
pub mod torus;

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::bundle::BundleSpec;
use crate::error::{Error, Result};
use crate::geometry::SurfaceGeometry;
use crate::rng::ProbeRng;
use crate::sparse::{dot, norm, weighted_norm, CsrMatrix};

pub use sphere::{assemble_sphere_mode, default_mode_range};
pub use torus::{assemble_torus, assemble_torus_with_links, PeierlsLinks};

/// Which discretization produced an [`OperatorSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Backend {
    /// One azimuthal Fourier mode `e^{imφ}` on the sphere.
    SphereMode {
        /// Azimuthal quantum number.
        m: i64,
    },
    /// Uniform square grid with Peierls phases on the torus.
    TorusGrid,
}

/// Assembled discrete operators for one line bundle (and, on the sphere,
/// one azimuthal mode).
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub(crate) backend: Backend,
    pub(crate) grid_size: usize,
    pub(crate) geometry: SurfaceGeometry,
    pub(crate) bundle: BundleSpec,
    pub(crate) dbar: CsrMatrix,
    pub(crate) grad: [CsrMatrix; 2],
    pub(crate) weights_sec: Vec<f64>,
    pub(crate) weights_form: Vec<f64>,
    pub(crate) weights_grad: Vec<f64>,
    /// Discrete `iΛF_A` sampled per section node (cell or vertex).
    pub(crate) lambda_curvature: Vec<f64>,
}

impl OperatorSet {
    /// Discretization backend.
    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Grid parameter `N`.
    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Base surface.
    pub fn geometry(&self) -> &SurfaceGeometry {
        &self.geometry
    }

    /// Twisting bundle.
    pub fn bundle(&self) -> &BundleSpec {
        &self.bundle
    }

    /// Hermitian-Einstein constant `c` of the bundle.
    pub fn he_constant(&self) -> f64 {
        self.bundle.he_constant()
    }

    /// Discrete `∂̄_A` (forms × sections).
    pub fn dbar(&self) -> &CsrMatrix {
        &self.dbar
    }

    /// Components of the discrete covariant derivative (gradient samples × sections).
    pub fn grad(&self) -> &[CsrMatrix; 2] {
        &self.grad
    }

    /// Quadrature weights of section space.
    pub fn weights_sec(&self) -> &[f64] {
        &self.weights_sec
    }

    /// Quadrature weights of `(0,1)`-form space.
    pub fn weights_form(&self) -> &[f64] {
        &self.weights_form
    }

    /// Quadrature weights of the gradient samples.
    pub fn weights_grad(&self) -> &[f64] {
        &self.weights_grad
    }

    /// Number of section unknowns.
    pub fn section_dim(&self) -> usize {
        self.weights_sec.len()
    }

    /// Number of `(0,1)`-form unknowns.
    pub fn form_dim(&self) -> usize {
        self.weights_form.len()
    }

    /// Quadrature of the discrete curvature `iΛF_A` against the constant
    /// section, normalized by the total weight: `Σ w_j (iΛF)_j / Σ w_j`.
    /// Equals the Hermitian-Einstein constant `c` (sign convention check).
    pub fn lambda_curvature_quadrature(&self) -> f64 {
        let total: f64 = self.weights_sec.iter().sum();
        self.weights_sec
            .iter()
            .zip(&self.lambda_curvature)
            .map(|(w, f)| w * f)
            .sum::<f64>()
            / total
    }

    /// Pointwise discrete curvature `iΛF_A` per section node.
    pub fn lambda_curvature(&self) -> &[f64] {
        &self.lambda_curvature
    }

    fn symmetrize(&self, m: &CsrMatrix, row_weights: &[f64]) -> CsrMatrix {
        let left: Vec<f64> = row_weights.iter().map(|w| libm::sqrt(*w)).collect();
        let right: Vec<f64> = self.weights_sec.iter().map(|w| 1.0 / libm::sqrt(*w)).collect();
        m.scale_rows_cols(&left, &right)
    }

    /// `W_form^{1/2} ∂̄ W_sec^{-1/2}`.
    pub fn dbar_symmetrized(&self) -> CsrMatrix {
        self.symmetrize(&self.dbar, &self.weights_form)
    }

    fn sqrt_sec(&self) -> Vec<f64> {
        self.weights_sec.iter().map(|w| libm::sqrt(*w)).collect()
    }

    /// Squared weighted norm of the covariant derivative, `‖∇ψ‖²`.
    pub fn gradient_energy(&self, psi: &[Complex64]) -> f64 {
        self.grad
            .iter()
            .map(|g| {
                let gp = g.matvec(psi);
                let nrm = weighted_norm(&gp, &self.weights_grad);
                nrm * nrm
            })
            .sum()
    }
}

/// A Hermitian operator in weighted coordinates, stored as its symmetrized
/// matrix `Ã = W^{1/2} A W^{-1/2}` together with `W^{1/2}`.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: CsrMatrix,
    sqrt_weights: Vec<f64>,
}

impl HermitianOperator {
    /// Wraps a symmetrized matrix and the square roots of its weights.
    pub fn new(matrix: CsrMatrix, sqrt_weights: Vec<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() != sqrt_weights.len() {
            return Err(Error::InvalidParameter("operator and weight dimensions differ".into()));
        }
        if sqrt_weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter("weights must be positive".into()));
        }
        Ok(Self { matrix, sqrt_weights })
    }

    /// Operator with unit weights.
    pub fn unweighted(matrix: CsrMatrix) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(matrix, alloc::vec![1.0; n])
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.sqrt_weights.len()
    }

    /// Symmetrized matrix `Ã`.
    pub fn symmetrized(&self) -> &CsrMatrix {
        &self.matrix
    }

    /// `W^{1/2}`.
    pub fn sqrt_weights(&self) -> &[f64] {
        &self.sqrt_weights
    }

    /// Quadrature weights `W`.
    pub fn weights(&self) -> Vec<f64> {
        self.sqrt_weights.iter().map(|s| s * s).collect()
    }

    /// Maps symmetrized coordinates to physical ones and normalizes in the
    /// weighted norm.
    pub fn to_physical(&self, x: &[Complex64]) -> Vec<Complex64> {
        let nx = norm(x);
        x.iter()
            .zip(&self.sqrt_weights)
            .map(|(z, s)| z / (s * nx))
            .collect()
    }

    /// Maps physical coordinates to symmetrized ones.
    pub fn to_symmetrized(&self, u: &[Complex64]) -> Vec<Complex64> {
        u.iter().zip(&self.sqrt_weights).map(|(z, s)| z * s).collect()
    }

    /// Applies the operator in physical coordinates, `A u = W^{-1/2} Ã W^{1/2} u`.
    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let y = self.matrix.matvec(&self.to_symmetrized(u));
        y.iter().zip(&self.sqrt_weights).map(|(z, s)| z / s).collect()
    }

    /// Weighted inner product `⟨u, v⟩_W`.
    pub fn inner(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        dot(&self.to_symmetrized(u), &self.to_symmetrized(v))
    }

    /// Weighted norm `‖u‖_W`.
    pub fn norm(&self, u: &[Complex64]) -> f64 {
        norm(&self.to_symmetrized(u))
    }

    /// Relative eigen-residual `‖Aψ − λψ‖_W / ‖ψ‖_W`.
    pub fn residual(&self, lambda: f64, psi: &[Complex64]) -> f64 {
        let a = self.apply(psi);
        let r: Vec<Complex64> = a.iter().zip(psi).map(|(x, y)| x - lambda * y).collect();
        self.norm(&r) / self.norm(psi)
    }

    /// `‖Ã‖_∞`, an upper bound on the spectral radius.
    pub fn norm_estimate(&self) -> f64 {
        self.matrix.norm_inf()
    }

    /// Largest normalized Hermiticity defect
    /// `|⟨Au, v⟩_W − ⟨u, Av⟩_W| / (‖u‖_W ‖v‖_W)` over `probes` seeded pairs.
    pub fn hermiticity_residual(&self, seed: u64, probes: usize) -> f64 {
        let mut rng = ProbeRng::with_stream(seed, 0x4e57);
        let mut worst: f64 = 0.0;
        for _ in 0..probes {
            let u = rng.complex_vector(self.dim());
            let v = rng.complex_vector(self.dim());
            let lhs = self.inner(&self.apply(&u), &v);
            let rhs = self.inner(&u, &self.apply(&v));
            worst = worst.max((lhs - rhs).norm() / (self.norm(&u) * self.norm(&v)));
        }
        worst
    }
}

/// Dolbeault Laplacian `∂̄_A*∂̄_A` on sections.
pub fn dolbeault_laplacian(ops: &OperatorSet) -> HermitianOperator {
    let d = ops.dbar_symmetrized();
    let lap = d.adjoint().matmul(&d).expect("conforming shapes");
    HermitianOperator::new(lap, ops.sqrt_sec()).expect("valid weights")
}

/// Dolbeault Laplacian `∂̄_A ∂̄_A*` on `(0,1)`-forms.
pub fn dolbeault_laplacian_forms(ops: &OperatorSet) -> HermitianOperator {
    let d = ops.dbar_symmetrized();
    let lap = d.matmul(&d.adjoint()).expect("conforming shapes");
    let s = ops.weights_form.iter().map(|w| libm::sqrt(*w)).collect();
    HermitianOperator::new(lap, s).expect("valid weights")
}

/// Trace Laplacian `∇_A*∇_A`, assembled from the covariant-derivative
/// components only.
pub fn trace_laplacian(ops: &OperatorSet) -> HermitianOperator {
    let mut acc: Option<CsrMatrix> = None;
    for g in &ops.grad {
        let gs = ops.symmetrize(g, &ops.weights_grad);
        let term = gs.adjoint().matmul(&gs).expect("conforming shapes");
        acc = Some(match acc {
            None => term,
            Some(a) => a
                .combine(Complex64::new(1.0, 0.0), &term, Complex64::new(1.0, 0.0))
                .expect("same shape"),
        });
    }
    HermitianOperator::new(acc.expect("two components"), ops.sqrt_sec()).expect("valid weights")
}

/// Block Dirac operator `√2 [[0, ∂̄*], [∂̄, 0]]` on sections ⊕ `(0,1)`-forms.
pub fn dirac_block(ops: &OperatorSet) -> HermitianOperator {
    let d = ops.dbar_symmetrized();
    let ns = ops.section_dim();
    let nf = ops.form_dim();
    let r2 = core::f64::consts::SQRT_2;
    let mut t = Vec::with_capacity(2 * d.nnz());
    for r in 0..nf {
        for (c, v) in d.row(r) {
            t.push((ns + r, c, v * r2));
            t.push((c, ns + r, v.conj() * r2));
        }
    }
    let m = CsrMatrix::from_triplets(ns + nf, ns + nf, &t).expect("indices in range");
    let mut s = ops.sqrt_sec();
    s.extend(ops.weights_form.iter().map(|w| libm::sqrt(*w)));
    HermitianOperator::new(m, s).expect("valid weights")
}

/// Number of probe vectors used by [`weitzenbock_residual`].
pub const WEITZENBOCK_PROBES: usize = 8;

/// Default probe seed of [`weitzenbock_residual`].
pub const WEITZENBOCK_SEED: u64 = 0x5eed;

/// `max ‖(Δ − ½∇*∇ + ½c) u‖_W` over a fixed batch of pseudo-random
/// weighted-unit vectors `u`.
pub fn weitzenbock_residual(ops: &OperatorSet) -> f64 {
    weitzenbock_residual_seeded(ops, WEITZENBOCK_SEED, WEITZENBOCK_PROBES)
}

/// [`weitzenbock_residual`] with an explicit probe seed and batch size.
pub fn weitzenbock_residual_seeded(ops: &OperatorSet, seed: u64, probes: usize) -> f64 {
    let lap = dolbeault_laplacian(ops);
    let tr = trace_laplacian(ops);
    let c = ops.he_constant();
    let mut rng = ProbeRng::with_stream(seed, 0x3e1b);
    let mut worst: f64 = 0.0;
    for _ in 0..probes {
        let x = rng.unit_vector(ops.section_dim());
        let a = lap.symmetrized().matvec(&x);
        let b = tr.symmetrized().matvec(&x);
        let r: Vec<Complex64> = a
            .iter()
            .zip(&b)
            .zip(&x)
            .map(|((ai, bi), xi)| ai - 0.5 * bi + 0.5 * c * xi)
            .collect();
        worst = worst.max(norm(&r));
    }
    worst
}

/// Eigen-residual bound accepted by [`sharpness_defect`], relative to `max(1, |λ|)`.
pub const SHARPNESS_RESIDUAL_LIMIT: f64 = 1e-8;

/// Normalized twistor defect `(‖∇ψ‖² − (λ/n)‖ψ‖²) / ‖∇ψ‖²` of a Dolbeault
/// eigenpair `(λ, ψ)`; zero exactly when `ψ` solves the twistor equation.
pub fn sharpness_defect(ops: &OperatorSet, eigenvector: &[Complex64], eigenvalue: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("complex dimension n must be at least 1".into()));
    }
    if eigenvector.len() != ops.section_dim() {
        return Err(Error::InvalidParameter("eigenvector has the wrong length".into()));
    }
    let lap = dolbeault_laplacian(ops);
    let residual = lap.residual(eigenvalue, eigenvector);
    let limit = SHARPNESS_RESIDUAL_LIMIT * eigenvalue.abs().max(1.0);
    if !(residual <= limit) {
        return Err(Error::StaleEigenpair { residual, limit });
    }
    let grad2 = ops.gradient_energy(eigenvector);
    let psi_norm = weighted_norm(eigenvector, &ops.weights_sec);
    let psi2 = psi_norm * psi_norm;
    Ok((grad2 - eigenvalue / n as f64 * psi2) / grad2)
}

/// Selects one of the derived Hermitian operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum OperatorKind {
    /// [`dolbeault_laplacian`].
    Dolbeault,
    /// [`trace_laplacian`].
    Trace,
    /// [`dirac_block`].
    Dirac,
}

/// Builds the operator selected by `kind`.
pub fn derived_operator(ops: &OperatorSet, kind: OperatorKind) -> HermitianOperator {
    match kind {
        OperatorKind::Dolbeault => dolbeault_laplacian(ops),
        OperatorKind::Trace => trace_laplacian(ops),
        OperatorKind::Dirac => dirac_block(ops),
    }
}

/// Lifts a Dolbeault eigenpair `(λ > 0, ψ)` to the Dirac eigenpair
/// `(√(2λ), (ψ, √2 ∂̄ψ/√(2λ)))` in physical coordinates of [`dirac_block`].
pub fn lift_to_dirac(ops: &OperatorSet, lambda: f64, psi: &[Complex64]) -> (f64, Vec<Complex64>) {
    let mu = libm::sqrt(2.0 * lambda);
    let form = ops.dbar.matvec(psi);
    let scale = core::f64::consts::SQRT_2 / mu;
    let mut out = psi.to_vec();
    out.extend(form.iter().map(|z| z * scale));
    (mu, out)
}
