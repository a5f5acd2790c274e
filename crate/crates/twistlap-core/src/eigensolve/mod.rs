//! Smallest eigenpairs of Hermitian operators in a weighted inner product.
//!
//! Operators arrive as [`HermitianOperator`]s, i.e. already similarity
//! transformed by `W^{1/2}`, so every backend solves a standard Hermitian
//! problem. Eigenvectors are mapped back to physical coordinates and
//! normalized in the weighted norm; residuals `‖Aψ − λψ‖_W / ‖ψ‖_W` are
//! recomputed explicitly for every returned pair.
//!
//! Backends: Sturm bisection + inverse iteration when the matrix is a real
//! symmetric path graph (sphere modes), dense Householder/QL up to
//! [`DENSE_LIMIT`], thick-restart Lanczos otherwise.

mod dense;
mod lanczos;
mod tridiagonal;

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

pub use dense::hermitian_eigen;
pub use lanczos::{lanczos_smallest, LanczosLimits};
pub use tridiagonal::SymTridiagonal;

use crate::error::{invalid, Error, Result};
use crate::operators::HermitianOperator;

/// Largest dimension solved by the dense backend under [`SolverKind::Auto`].
pub const DENSE_LIMIT: usize = 512;

/// Relative tolerance used for the clusters attached by the solvers.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// A group of numerically equal eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Cluster {
    /// Mean of the member eigenvalues.
    pub value: f64,
    /// Number of members.
    pub multiplicity: usize,
}

/// Sorted eigenvalues with residuals, optional eigenvectors and clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// `‖Aψ − λψ‖_W / ‖ψ‖_W` for every pair.
    pub residuals: Vec<f64>,
    /// Eigenvectors in physical coordinates, unit weighted norm.
    pub vectors: Option<Vec<Vec<Complex64>>>,
    /// Tolerance clusters of `eigenvalues`.
    pub clusters: Vec<Cluster>,
}

impl Spectrum {
    /// Spectrum from values and residuals only (no vectors), clustered with
    /// [`DEFAULT_CLUSTER_TOL`].
    pub fn from_values(eigenvalues: Vec<f64>, residuals: Vec<f64>) -> Self {
        let clusters = clusters_of(&eigenvalues, DEFAULT_CLUSTER_TOL);
        Self {
            eigenvalues,
            residuals,
            vectors: None,
            clusters,
        }
    }

    /// Number of eigenpairs.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    /// True if no eigenpairs are stored.
    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest stored residual (0 when empty).
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Drops eigenvector storage.
    pub fn without_vectors(mut self) -> Self {
        self.vectors = None;
        self
    }
}

/// Which backend [`solve`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    /// Tridiagonal if possible, dense up to [`DENSE_LIMIT`], else Lanczos.
    #[default]
    Auto,
    /// Bisection + inverse iteration; requires a real symmetric path graph.
    Tridiagonal,
    /// Dense Householder + implicit QL.
    Dense,
    /// Thick-restart Lanczos.
    Lanczos,
}

/// Parameters of an eigenvalue request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRequest {
    /// Number of eigenpairs.
    pub k: usize,
    /// Residual tolerance (absolute, in the weighted norm).
    pub tol: f64,
    /// Seed for start vectors.
    pub seed: u64,
    /// Backend selection.
    pub solver: SolverKind,
    /// If set, only eigenvalues strictly above this threshold are wanted.
    pub above: Option<f64>,
}

impl EigenRequest {
    /// The `k` smallest eigenpairs with automatic backend selection.
    pub fn smallest(k: usize, tol: f64, seed: u64) -> Self {
        Self {
            k,
            tol,
            seed,
            solver: SolverKind::Auto,
            above: None,
        }
    }
}

/// The `k` smallest eigenpairs of `op` with residuals at most `tol`.
pub fn smallest_eigs(op: &HermitianOperator, k: usize, tol: f64, seed: u64) -> Result<Spectrum> {
    solve(op, &EigenRequest::smallest(k, tol, seed))
}

/// The `k` smallest eigenpairs of `op` whose eigenvalues exceed `threshold`
/// (tridiagonal and dense backends only).
pub fn smallest_eigs_above(
    op: &HermitianOperator,
    threshold: f64,
    k: usize,
    tol: f64,
    seed: u64,
) -> Result<Spectrum> {
    let mut req = EigenRequest::smallest(k, tol, seed);
    req.above = Some(threshold);
    solve(op, &req)
}

/// Solves an [`EigenRequest`].
pub fn solve(op: &HermitianOperator, req: &EigenRequest) -> Result<Spectrum> {
    let n = op.dim();
    if req.k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    if req.k > n {
        return Err(invalid(format!("k = {} exceeds the operator dimension {n}", req.k)));
    }
    if !(req.tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let a = op.symmetrized();
    let path = match req.solver {
        SolverKind::Auto | SolverKind::Tridiagonal => a.path_tridiagonal(),
        SolverKind::Dense | SolverKind::Lanczos => None,
    };
    let backend = match (req.solver, &path) {
        (SolverKind::Tridiagonal, None) => {
            return Err(invalid("operator is not a real symmetric tridiagonal (path) matrix"));
        }
        (_, Some(_)) => SolverKind::Tridiagonal,
        (SolverKind::Auto, None) if n <= DENSE_LIMIT => SolverKind::Dense,
        (SolverKind::Auto, None) => SolverKind::Lanczos,
        (other, None) => other,
    };
    let (values, vectors): (Vec<f64>, Vec<Vec<Complex64>>) = match backend {
        SolverKind::Tridiagonal => {
            let (perm, diag, off) = path.expect("path structure detected");
            let t = SymTridiagonal::new(diag, off);
            let mut first = 0;
            if let Some(x) = req.above {
                first = t.count_below(x);
                while first < n && t.eigenvalue(first) <= x {
                    first += 1;
                }
            }
            if first + req.k > n {
                return Err(invalid("fewer eigenvalues above the threshold than requested"));
            }
            let vals = t.eigenvalues(first, req.k);
            let vecs = t
                .eigenvectors(&vals, req.seed)
                .into_iter()
                .map(|v| {
                    let mut x = alloc::vec![Complex64::new(0.0, 0.0); n];
                    for (p, &old) in perm.iter().enumerate() {
                        x[old] = Complex64::new(v[p], 0.0);
                    }
                    x
                })
                .collect();
            (vals, vecs)
        }
        SolverKind::Lanczos => {
            if req.above.is_some() {
                return Err(invalid("threshold requests are not supported by the Lanczos backend"));
            }
            lanczos_smallest(a, req.k, req.tol, req.seed, LanczosLimits::for_k(req.k))?
        }
        SolverKind::Dense | SolverKind::Auto => {
            let (vals, vecs) = hermitian_eigen(&a.to_dense(), n)?;
            let first = match req.above {
                Some(x) => vals.iter().take_while(|&&v| v <= x).count(),
                None => 0,
            };
            if first + req.k > n {
                return Err(invalid("fewer eigenvalues above the threshold than requested"));
            }
            (vals[first..first + req.k].to_vec(), vecs[first..first + req.k].to_vec())
        }
    };
    let mut residuals = Vec::with_capacity(values.len());
    let mut physical = Vec::with_capacity(values.len());
    for (lam, x) in values.iter().zip(vectors) {
        let psi = op.to_physical(&x);
        let r = op.residual(*lam, &psi);
        residuals.push(r);
        physical.push(psi);
    }
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > req.tol {
        return Err(Error::Convergence {
            iterations: 0,
            best_residual: worst,
        });
    }
    let clusters = clusters_of(&values, DEFAULT_CLUSTER_TOL);
    Ok(Spectrum {
        eigenvalues: values,
        residuals,
        vectors: Some(physical),
        clusters,
    })
}

fn clusters_of(values: &[f64], tol: f64) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    let mut start = 0;
    for i in 0..values.len() {
        let ends = i + 1 == values.len()
            || values[i + 1] - values[i] > tol * values[i].abs().max(1.0);
        if ends {
            let members = &values[start..=i];
            out.push(Cluster {
                value: members.iter().sum::<f64>() / members.len() as f64,
                multiplicity: members.len(),
            });
            start = i + 1;
        }
    }
    out
}

/// Re-clusters a sorted spectrum: consecutive eigenvalues whose gap is at
/// most `cluster_tol · max(1, |λ|)` join one cluster whose value is the mean.
pub fn cluster_multiplicities(spectrum: &Spectrum, cluster_tol: f64) -> Spectrum {
    let mut out = spectrum.clone();
    out.clusters = clusters_of(&spectrum.eigenvalues, cluster_tol);
    out
}
