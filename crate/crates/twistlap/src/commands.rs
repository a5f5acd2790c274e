//! Subcommand implementations: each produces a [`Document`] and a flag
//! telling whether a bound was violated.

use rayon::prelude::*;
use serde::Serialize;
use twistlap_core::bundle::{half_canonical_twist_degree, he_constant};
use twistlap_core::eigensolve::{cluster_multiplicities, smallest_eigs, smallest_eigs_above, Spectrum};
use twistlap_core::operators::{
    assemble_sphere_mode, assemble_torus, derived_operator, dirac_block, dolbeault_laplacian, lift_to_dirac,
    OperatorKind,
};
use twistlap_core::oracle;
use twistlap_core::verify::{self, ConvergenceOrder, ConvergenceTarget, VerifyOptions, SPHERE_REFERENCE_GRID, TORUS_REFERENCE_GRID};
use twistlap_core::{BoundKind, BoundReport, BundleSpec, SurfaceGeometry, SurfaceKind};

use crate::cli::*;
use crate::error::CliError;
use crate::output::{to_value, Cell, Document, OracleValue, Table};

/// A finished command.
pub struct Outcome {
    pub document: Document,
    /// Some verified bound was violated.
    pub violation: bool,
}

impl Outcome {
    fn ok(document: Document) -> Self {
        Self { document, violation: false }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn surface(args: &SurfaceArgs) -> Result<SurfaceGeometry, CliError> {
    Ok(match args.geometry {
        GeometryArg::Sphere => SurfaceGeometry::sphere(args.r)?,
        GeometryArg::Torus => SurfaceGeometry::torus(args.vol)?,
    })
}

fn reference_grid(kind: SurfaceKind) -> usize {
    match kind {
        SurfaceKind::Sphere => SPHERE_REFERENCE_GRID,
        SurfaceKind::Torus => TORUS_REFERENCE_GRID,
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be a positive number, got {v}")))
    }
}

fn operator_kind(op: OperatorArg) -> OperatorKind {
    match op {
        OperatorArg::Dolbeault => OperatorKind::Dolbeault,
        OperatorArg::Trace => OperatorKind::Trace,
        OperatorArg::Dirac => OperatorKind::Dirac,
    }
}

/// Dirac kernels are exact zeros up to rounding; positive eigenvalues lie
/// above this threshold.
fn dirac_threshold(norm: f64) -> f64 {
    1e-9 * norm.max(1.0)
}

#[derive(Serialize)]
struct SpectrumParams {
    geometry: GeometryLabel,
    scalar_curvature: f64,
    volume: f64,
    degree: i64,
    operator: OperatorKind,
    grid: usize,
    k: usize,
    tol: f64,
    cluster_tol: f64,
    mode: Option<i64>,
    seed: u64,
}

#[derive(Serialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum GeometryLabel {
    Sphere,
    Torus,
}

impl From<GeometryArg> for GeometryLabel {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Sphere => GeometryLabel::Sphere,
            GeometryArg::Torus => GeometryLabel::Torus,
        }
    }
}

#[derive(Serialize)]
struct SpectrumReport {
    geometry: SurfaceGeometry,
    operator: OperatorKind,
    degree: i64,
    grid: usize,
    he_constant: f64,
    mode_range: Option<(i64, i64)>,
    modes: Option<Vec<i64>>,
    max_residual: f64,
}

/// Closed-form levels of `kind` (the first `count` of them).
fn oracle_levels(geom: &SurfaceGeometry, degree: i64, kind: OperatorKind, count: usize) -> Result<Vec<OracleValue>, CliError> {
    let c = he_constant(1, degree, 1, geom.volume())?;
    let top = count.saturating_sub(1) as u32;
    let dolbeault: Vec<(f64, Option<usize>)> = match geom.kind() {
        SurfaceKind::Sphere => oracle::sphere_dolbeault_spectrum(geom.scalar_curvature(), degree, top)?
            .into_iter()
            .map(|v| (v, None))
            .collect(),
        SurfaceKind::Torus => oracle::torus_dolbeault_spectrum(geom.volume(), degree, top)?
            .into_iter()
            .map(|(v, m)| (v, Some(m)))
            .collect(),
    };
    Ok(match kind {
        OperatorKind::Dolbeault => dolbeault
            .into_iter()
            .map(|(value, multiplicity)| OracleValue { value, multiplicity })
            .collect(),
        // Weitzenböck: ∇*∇ = 2Δ + c.
        OperatorKind::Trace => dolbeault
            .into_iter()
            .map(|(v, multiplicity)| OracleValue { value: 2.0 * v + c, multiplicity })
            .collect(),
        OperatorKind::Dirac => match geom.kind() {
            SurfaceKind::Sphere => oracle::sphere_dirac_spectrum(geom.scalar_curvature(), degree + 1, top)?
                .into_iter()
                .map(OracleValue::bare)
                .collect(),
            SurfaceKind::Torus => dolbeault
                .into_iter()
                .map(|(v, multiplicity)| OracleValue { value: (2.0 * v).sqrt(), multiplicity })
                .collect(),
        },
    })
}

fn nearest(levels: &[OracleValue], v: f64) -> Option<f64> {
    levels
        .iter()
        .map(|l| l.value)
        .min_by(|a, b| (a - v).abs().total_cmp(&(b - v).abs()))
}

pub fn spectrum(a: &SpectrumArgs, seed: u64) -> Result<Outcome, CliError> {
    if a.k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    positive("tol", a.tol)?;
    positive("cluster-tol", a.cluster_tol)?;
    let geom = surface(&a.surface)?;
    let grid = a.grid.unwrap_or_else(|| reference_grid(geom.kind()));
    let kind = operator_kind(a.operator);
    let bundle = BundleSpec::line(&geom, a.degree)?;

    let mut mode_range = None;
    let mut modes = None;
    let (values, residuals) = match (geom.kind(), a.mode) {
        (SurfaceKind::Sphere, Some(m)) => {
            let ops = assemble_sphere_mode(&geom, &bundle, m, grid)?;
            let op = derived_operator(&ops, kind);
            let spec = match kind {
                OperatorKind::Dirac => smallest_eigs_above(&op, dirac_threshold(op.norm_estimate()), a.k, a.tol, seed)?,
                _ => smallest_eigs(&op, a.k, a.tol, seed)?,
            };
            mode_range = Some((m, m));
            (spec.eigenvalues, spec.residuals)
        }
        (SurfaceKind::Sphere, None) => {
            let union = verify::sphere_mode_union(&geom, a.degree, grid, kind, a.k, a.tol, seed)?;
            mode_range = Some(union.mode_range);
            modes = Some(union.modes);
            (union.spectrum.eigenvalues, union.spectrum.residuals)
        }
        (SurfaceKind::Torus, Some(_)) => return Err(usage("--mode applies to the sphere only")),
        (SurfaceKind::Torus, None) => {
            let ops = assemble_torus(&geom, &bundle, grid)?;
            match kind {
                OperatorKind::Dirac => {
                    // Positive Dirac eigenpairs are lifts of Dolbeault eigenpairs.
                    let spec = smallest_eigs(&dolbeault_laplacian(&ops), a.k, a.tol, seed)?;
                    let dirac = dirac_block(&ops);
                    let vectors = spec.vectors.as_ref().expect("solvers return vectors");
                    let mut vals = Vec::with_capacity(a.k);
                    let mut res = Vec::with_capacity(a.k);
                    for (lam, psi) in spec.eigenvalues.iter().zip(vectors) {
                        let (mu, phi) = lift_to_dirac(&ops, *lam, psi);
                        let r = dirac.residual(mu, &phi);
                        if r > a.tol * mu.max(1.0) * 10.0 {
                            return Err(CliError::Numerical(format!("lifted Dirac residual {r:e} at {mu}")));
                        }
                        vals.push(mu);
                        res.push(r);
                    }
                    (vals, res)
                }
                _ => {
                    let spec = smallest_eigs(&derived_operator(&ops, kind), a.k, a.tol, seed)?;
                    (spec.eigenvalues, spec.residuals)
                }
            }
        }
    };
    let spectrum = cluster_multiplicities(&Spectrum::from_values(values, residuals), a.cluster_tol);
    let levels = oracle_levels(&geom, a.degree, kind, a.k)?;

    let params = SpectrumParams {
        geometry: a.surface.geometry.into(),
        scalar_curvature: geom.scalar_curvature(),
        volume: geom.volume(),
        degree: a.degree,
        operator: kind,
        grid,
        k: a.k,
        tol: a.tol,
        cluster_tol: a.cluster_tol,
        mode: a.mode,
        seed,
    };
    let mut doc = Document::new("spectrum", params)?;
    let mut cluster_of = Vec::with_capacity(spectrum.len());
    for (i, c) in spectrum.clusters.iter().enumerate() {
        cluster_of.extend(std::iter::repeat(i).take(c.multiplicity));
    }
    doc.table = Table {
        header: vec!["index", "eigenvalue", "residual", "cluster", "mode", "oracle"],
        rows: spectrum
            .eigenvalues
            .iter()
            .zip(&spectrum.residuals)
            .enumerate()
            .map(|(i, (v, r))| {
                vec![
                    Cell::from(i),
                    Cell::from(*v),
                    Cell::from(*r),
                    Cell::from(cluster_of[i]),
                    Cell::from(modes.as_ref().map(|m| m[i]).or(a.mode)),
                    Cell::from(nearest(&levels, *v)),
                ]
            })
            .collect(),
    };
    doc.notes = spectrum
        .clusters
        .iter()
        .map(|c| format!("cluster {:.10e} x{}", c.value, c.multiplicity))
        .collect();
    doc.report = to_value(SpectrumReport {
        geometry: geom,
        operator: kind,
        degree: a.degree,
        grid,
        he_constant: bundle.he_constant(),
        mode_range,
        modes,
        max_residual: spectrum.max_residual(),
    })?;
    doc.eigenvalues = spectrum.eigenvalues;
    doc.residuals = spectrum.residuals;
    doc.clusters = spectrum.clusters;
    doc.oracle = levels;
    Ok(Outcome::ok(doc))
}

/// Parses `a..b` (inclusive, either direction) or a comma-separated list.
pub fn parse_degrees(text: &str) -> Result<Vec<i64>, CliError> {
    let bad = || usage(format!("malformed degree list '{text}' (expected a..b or a,b,c)"));
    let mut out: Vec<i64> = if let Some((a, b)) = text.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if a <= b {
            (a..=b).collect()
        } else {
            (b..=a).rev().collect()
        }
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err(bad());
    }
    // Sorted by |degree| for negative degrees; duplicates removed.
    out.sort_by(|a, b| b.cmp(a));
    out.dedup();
    Ok(out)
}

#[derive(Serialize)]
struct VerifyParams {
    geometry: GeometryLabel,
    scalar_curvature: f64,
    volume: f64,
    theorems: Vec<&'static str>,
    degrees: Vec<i64>,
    grid: usize,
    k: usize,
    tol: f64,
    slack: Option<f64>,
    sharp_tol: Option<f64>,
    seed: u64,
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    theorem: &'static str,
    #[serde(flatten)]
    report: &'a BoundReport,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    all_satisfied: bool,
    all_sharp: bool,
    rows: Vec<VerifyRow<'a>>,
}

fn theorem_name(kind: BoundKind) -> &'static str {
    match kind {
        BoundKind::MainDolbeault => "main",
        BoundKind::ComplexDirac => "cor1",
        BoundKind::RealDirac => "cor2",
        BoundKind::NaiveDolbeault => "naive",
    }
}

pub fn verify(a: &VerifyArgs, seed: u64) -> Result<Outcome, CliError> {
    let degrees = parse_degrees(&a.degrees)?;
    positive("tol", a.tol)?;
    if let Some(s) = a.slack {
        positive("slack", s)?;
    }
    if let Some(s) = a.sharp_tol {
        positive("sharp-tol", s)?;
    }
    if a.k == 0 {
        return Err(usage("--k must be at least 1"));
    }
    let geom = surface(&a.surface)?;
    let grid = a.grid.unwrap_or_else(|| reference_grid(geom.kind()));
    let kinds: Vec<BoundKind> = match a.theorem {
        TheoremArg::Main => vec![BoundKind::MainDolbeault],
        TheoremArg::Cor1 => vec![BoundKind::ComplexDirac],
        TheoremArg::Cor2 => vec![BoundKind::RealDirac],
        TheoremArg::All => vec![BoundKind::MainDolbeault, BoundKind::ComplexDirac, BoundKind::RealDirac],
    };
    let mut opts = VerifyOptions::new(grid, a.k, a.tol).with_seed(seed);
    opts.numeric_slack = a.slack;
    opts.sharp_tol = a.sharp_tol;

    let configs: Vec<(BoundKind, i64)> = kinds.iter().flat_map(|k| degrees.iter().map(move |d| (*k, *d))).collect();
    // Indexed parallel collection keeps the parameter order.
    let results: Vec<_> = configs
        .par_iter()
        .map(|(kind, d)| verify::verify_bound(*kind, &geom, *d, &opts))
        .collect();
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let params = VerifyParams {
        geometry: a.surface.geometry.into(),
        scalar_curvature: geom.scalar_curvature(),
        volume: geom.volume(),
        theorems: kinds.iter().map(|k| theorem_name(*k)).collect(),
        degrees,
        grid,
        k: a.k,
        tol: a.tol,
        slack: a.slack,
        sharp_tol: a.sharp_tol,
        seed,
    };
    let mut doc = Document::new("verify", params)?;
    let all_satisfied = reports.iter().all(|r| r.bound_satisfied);
    doc.table = Table {
        header: vec![
            "theorem",
            "geometry",
            "degree",
            "effective_degree",
            "grid",
            "oracle_bound",
            "computed_min",
            "relative_gap",
            "bound_satisfied",
            "sharp",
            "numeric_slack",
            "sharp_tol",
            "solver_residual",
            "ground_multiplicity",
            "naive_bound",
            "curvature_bound",
            "cross_check",
            "weitzenbock_residual",
            "sharpness_defect",
        ],
        rows: reports
            .iter()
            .map(|r| {
                vec![
                    Cell::from(theorem_name(r.bound_kind)),
                    Cell::from(match r.geometry.kind() {
                        SurfaceKind::Sphere => "sphere",
                        SurfaceKind::Torus => "torus",
                    }),
                    Cell::from(r.degree),
                    Cell::from(r.effective_degree),
                    Cell::from(r.discretization.grid),
                    Cell::from(r.oracle_bound),
                    Cell::from(r.computed_min),
                    Cell::from(r.relative_gap),
                    Cell::from(r.bound_satisfied),
                    Cell::from(r.sharp),
                    Cell::from(r.numeric_slack),
                    Cell::from(r.sharp_tol),
                    Cell::from(r.solver_residual),
                    Cell::from(r.ground_multiplicity),
                    Cell::from(r.naive_bound),
                    Cell::from(r.curvature_bound),
                    Cell::from(r.cross_check),
                    Cell::from(r.weitzenbock_residual),
                    Cell::from(r.sharpness_defect),
                ]
            })
            .collect(),
    };
    let violations = reports.iter().filter(|r| !r.bound_satisfied).count();
    doc.notes = vec![format!("{} rows, {} violations", reports.len(), violations)];
    doc.eigenvalues = reports.iter().map(|r| r.computed_min).collect();
    doc.residuals = reports.iter().map(|r| r.solver_residual).collect();
    doc.oracle = reports.iter().map(|r| OracleValue::bare(r.oracle_bound)).collect();
    doc.report = to_value(VerifyReport {
        all_satisfied,
        all_sharp: reports.iter().all(|r| r.sharp),
        rows: reports
            .iter()
            .map(|r| VerifyRow {
                theorem: theorem_name(r.bound_kind),
                report: r,
            })
            .collect(),
    })?;
    Ok(Outcome {
        document: doc,
        violation: !all_satisfied,
    })
}

#[derive(Serialize)]
struct ConvergenceParams {
    geometry: GeometryLabel,
    scalar_curvature: f64,
    volume: f64,
    degree: i64,
    grids: Vec<usize>,
    target: ConvergenceTarget,
    tol: f64,
    seed: u64,
}

pub fn convergence(a: &ConvergenceArgs, seed: u64) -> Result<Outcome, CliError> {
    positive("tol", a.tol)?;
    let geom = surface(&a.surface)?;
    let target = match a.target {
        TargetArg::GroundEig => ConvergenceTarget::GroundEig,
        TargetArg::WeitzenbockResidual => ConvergenceTarget::WeitzenbockResidual,
    };
    let table = verify::convergence_study(&geom, a.degree, &a.grids, target, a.tol, seed)?;
    let params = ConvergenceParams {
        geometry: a.surface.geometry.into(),
        scalar_curvature: geom.scalar_curvature(),
        volume: geom.volume(),
        degree: a.degree,
        grids: a.grids.clone(),
        target,
        tol: a.tol,
        seed,
    };
    let mut doc = Document::new("convergence", params)?;
    doc.table = Table {
        header: vec!["grid", "value", "error", "observed_order"],
        rows: table
            .rows
            .iter()
            .map(|r| vec![Cell::from(r.grid), Cell::from(r.value), Cell::from(r.error), Cell::from(r.observed_order)])
            .collect(),
    };
    doc.notes = vec![match table.order {
        ConvergenceOrder::Exact => "order: exact".to_owned(),
        ConvergenceOrder::Estimated(p) => format!("order: {p:.6}"),
        ConvergenceOrder::Undetermined => "order: undetermined".to_owned(),
    }];
    if target == ConvergenceTarget::GroundEig {
        doc.eigenvalues = table.rows.iter().map(|r| r.value).collect();
    }
    doc.oracle = vec![OracleValue::bare(table.oracle)];
    doc.report = to_value(&table)?;
    Ok(Outcome::ok(doc))
}

#[derive(Serialize)]
struct OracleReport {
    formula: &'static str,
    value: Option<serde_json::Value>,
}

pub fn oracle(cmd: &OracleCommand) -> Result<Outcome, CliError> {
    let (formula, params, values, scalar): (&'static str, serde_json::Value, Vec<OracleValue>, Option<serde_json::Value>) =
        match cmd {
            OracleCommand::BoundNaive(b) => {
                let v = oracle::bound_dolbeault_naive(b.n, b.degree, b.rank, b.vol)?;
                ("bound-naive", bundle_params(b), vec![OracleValue::bare(v)], Some(v.into()))
            }
            OracleCommand::BoundMain(b) => {
                let v = oracle::bound_dolbeault_main(b.n, b.degree, b.rank, b.vol)?;
                ("bound-main", bundle_params(b), vec![OracleValue::bare(v)], Some(v.into()))
            }
            OracleCommand::HeConstant(b) => {
                let v = he_constant(b.n, b.degree, b.rank, b.vol)?;
                ("he-constant", bundle_params(b), vec![OracleValue::bare(v)], Some(v.into()))
            }
            OracleCommand::BoundDiracComplex(b) => {
                let v = oracle::bound_dirac_complex(b.degree, b.rank, b.vol)?;
                let p = serde_json::json!({"degree": b.degree, "rank": b.rank, "vol": b.vol});
                ("bound-dirac-complex", p, vec![OracleValue::bare(v)], Some(v.into()))
            }
            OracleCommand::BoundDiracReal(b) => {
                let v = oracle::bound_dirac_real(b.genus, b.degree, b.rank, b.vol)?;
                let p = serde_json::json!({"genus": b.genus, "degree": b.degree, "rank": b.rank, "vol": b.vol});
                ("bound-dirac-real", p, vec![OracleValue::bare(v)], Some(v.into()))
            }
            OracleCommand::SphereDirac(b) => {
                let v = oracle::sphere_dirac_spectrum(b.r, b.deg_l, b.qmax)?;
                let p = serde_json::json!({"R": b.r, "degL": b.deg_l, "qmax": b.qmax});
                ("sphere-dirac", p, v.into_iter().map(OracleValue::bare).collect(), None)
            }
            OracleCommand::SphereDolbeault(b) => {
                let v = oracle::sphere_dolbeault_spectrum(b.r, b.degree, b.qmax)?;
                let p = serde_json::json!({"R": b.r, "degree": b.degree, "qmax": b.qmax});
                ("sphere-dolbeault", p, v.into_iter().map(OracleValue::bare).collect(), None)
            }
            OracleCommand::TorusDolbeault(b) => {
                let v = oracle::torus_dolbeault_spectrum(b.vol, b.degree, b.kmax)?;
                let p = serde_json::json!({"vol": b.vol, "degree": b.degree, "kmax": b.kmax});
                let levels = v
                    .into_iter()
                    .map(|(value, m)| OracleValue {
                        value,
                        multiplicity: Some(m),
                    })
                    .collect();
                ("torus-dolbeault", p, levels, None)
            }
            OracleCommand::DiracFromDolbeault(b) => {
                let v = oracle::dirac_from_dolbeault(&b.values)?;
                let p = serde_json::json!({"values": b.values});
                ("dirac-from-dolbeault", p, v.into_iter().map(OracleValue::bare).collect(), None)
            }
            OracleCommand::TwistDegree(b) => {
                let v = half_canonical_twist_degree(b.degree, b.rank, b.genus);
                let p = serde_json::json!({"degree": b.degree, "rank": b.rank, "genus": b.genus});
                ("twist-degree", p, vec![OracleValue::bare(v as f64)], Some(v.into()))
            }
        };
    let mut doc = Document::new("oracle", serde_json::json!({"formula": formula, "args": params}))?;
    doc.table = Table {
        header: vec!["index", "value", "multiplicity"],
        rows: values
            .iter()
            .enumerate()
            .map(|(i, v)| vec![Cell::from(i), Cell::from(v.value), Cell::from(v.multiplicity)])
            .collect(),
    };
    doc.report = to_value(OracleReport { formula, value: scalar })?;
    doc.oracle = values;
    Ok(Outcome::ok(doc))
}

fn bundle_params(b: &BundleArgs) -> serde_json::Value {
    serde_json::json!({"n": b.n, "degree": b.degree, "rank": b.rank, "vol": b.vol})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_lists() {
        assert_eq!(parse_degrees("-1..-3").unwrap(), vec![-1, -2, -3]);
        assert_eq!(parse_degrees("-3..-1").unwrap(), vec![-1, -2, -3]);
        assert_eq!(parse_degrees("-2,-1,-2").unwrap(), vec![-1, -2]);
        assert_eq!(parse_degrees("-4").unwrap(), vec![-4]);
        for bad in ["-1..x", "", "..", "a,b", "-1,,-2"] {
            assert!(parse_degrees(bad).is_err(), "{bad}");
        }
    }
}
