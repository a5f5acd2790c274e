//! Acceptance criteria: one `[PASS]`/`[FAIL]` line per criterion, exit
//! status 1 if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::DMatrix;
use twistlap_core::eigensolve::{cluster_multiplicities, smallest_eigs, smallest_eigs_above, Spectrum};
use twistlap_core::operators::*;
use twistlap_core::oracle::*;
use twistlap_core::rng::ProbeRng;
use twistlap_core::sparse::CsrMatrix;
use twistlap_core::verify::*;
use twistlap_core::{BoundReport, BundleSpec, Complex64, HermitianOperator, OperatorSet, SurfaceGeometry};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sphere() -> SurfaceGeometry {
    SurfaceGeometry::sphere(2.0).unwrap()
}

fn torus() -> SurfaceGeometry {
    SurfaceGeometry::torus(1.0).unwrap()
}

fn sphere_ops(d: i64, m: i64, n: usize) -> OperatorSet {
    let g = sphere();
    assemble_sphere_mode(&g, &BundleSpec::line(&g, d).unwrap(), m, n).unwrap()
}

fn torus_ops(d: i64, n: usize) -> OperatorSet {
    let g = torus();
    assemble_torus(&g, &BundleSpec::line(&g, d).unwrap(), n).unwrap()
}

#[derive(Default)]
struct Shared {
    sphere_main: Vec<BoundReport>,
    torus_main: Vec<BoundReport>,
}

fn c1(shared: &mut Shared) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for d in -6..=-1i64 {
        let rep = verify_main_theorem(&sphere(), d, &VerifyOptions::new(800, 4, 1e-10)).map_err(err)?;
        let exact = -2.0 * d as f64 / 4.0;
        let rel = (rep.computed_min - exact).abs() / exact;
        ensure(rel <= 1e-3, format!("d={d}: computed {} vs {exact}", rep.computed_min))?;
        worst = worst.max(rel);
        shared.sphere_main.push(rep);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 60.0, format!("runtime {secs:.1} s"))?;
    Ok(format!("max relative error {worst:.2e}, runtime {secs:.2} s"))
}

fn c2() -> Outcome {
    let mut worst: f64 = 0.0;
    for deg_l in [0i64, -1, -2] {
        let oracle = sphere_dirac_spectrum(2.0, deg_l, 4).map_err(err)?;
        // Each azimuthal mode contributes at most one eigenvalue per level.
        let d = deg_l - 1;
        let mut values = Vec::new();
        for m in default_mode_range(d, 5) {
            let op = dirac_block(&sphere_ops(d, m, 800));
            let thr = 1e-9 * op.norm_estimate().max(1.0);
            values.extend(smallest_eigs_above(&op, thr, 5, 1e-10, 0).map_err(err)?.eigenvalues);
        }
        values.sort_by(f64::total_cmp);
        let n = values.len();
        let levels = cluster_multiplicities(&Spectrum::from_values(values, vec![0.0; n]), 1e-3);
        ensure(levels.clusters.len() >= 5, format!("degL={deg_l}: only {} levels", levels.clusters.len()))?;
        for (c, o) in levels.clusters.iter().zip(&oracle) {
            let rel = (c.value - o).abs() / o;
            ensure(rel <= 1e-2, format!("degL={deg_l}: {} vs {o}", c.value))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("15 levels, max relative error {worst:.2e}"))
}

fn c3() -> Outcome {
    let mut min_gap = f64::INFINITY;
    let mut first = 0.0;
    for d in -6..=-1i64 {
        let rep = verify_cor1(&sphere(), d, &VerifyOptions::new(800, 2, 1e-10)).map_err(err)?;
        if d == -1 {
            first = rep.computed_min;
            ensure((rep.computed_min - 1.0).abs() <= 1e-2, format!("d=-1: mu = {}", rep.computed_min))?;
        }
        ensure(rep.relative_gap >= -5e-3, format!("d={d}: gap {}", rep.relative_gap))?;
        ensure(rep.cross_check.unwrap_or(f64::INFINITY) <= 1e-6, format!("d={d}: cross-check {:?}", rep.cross_check))?;
        min_gap = min_gap.min(rep.relative_gap);
    }
    Ok(format!("mu_min(d=-1) = {first:.8}, min relative gap {min_gap:.2e}"))
}

fn c4() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [-1i64, -2, -3] {
        let rep = verify_cor2(&sphere(), d, &VerifyOptions::new(800, 2, 1e-10)).map_err(err)?;
        let target = (1.0 - d as f64).sqrt();
        let q0 = sphere_dirac_spectrum(2.0, d, 0).map_err(err)?[0];
        ensure((q0 - target).abs() <= 1e-14, "q=0 formula differs from the bound")?;
        ensure(rep.effective_degree == d - 1, "degree shift")?;
        let rel = (rep.computed_min - target) / target;
        ensure(rel >= -1e-2 && rel.abs() <= 1e-2, format!("d={d}: {} vs {target}", rep.computed_min))?;
        worst = worst.max(rel.abs());
    }
    Ok(format!("max |relative gap| {worst:.2e}"))
}

fn c5(shared: &mut Shared) -> Outcome {
    // Fine-grid numerical oracle first: N = 96, Lanczos.
    for d in [-1i64, -3] {
        let spec = smallest_eigs(&dolbeault_laplacian(&torus_ops(d, 96)), d.unsigned_abs() as usize + 2, 1e-8, 0).map_err(err)?;
        let spec = cluster_multiplicities(&spec, GROUND_CLUSTER_TOL);
        let level = -2.0 * PI * d as f64;
        ensure(spec.clusters[0].multiplicity == d.unsigned_abs() as usize, format!("N=96 d={d}: multiplicity {}", spec.clusters[0].multiplicity))?;
        ensure((spec.clusters[0].value / level - 1.0).abs() <= 0.01, format!("N=96 d={d}: {}", spec.clusters[0].value))?;
    }
    let mut worst: f64 = 0.0;
    for d in -4..=-1i64 {
        let rep = verify_main_theorem(&torus(), d, &VerifyOptions::new(64, 4, 1e-8)).map_err(err)?;
        let level = -2.0 * PI * d as f64;
        let rel = (rep.computed_min / level - 1.0).abs();
        ensure(rel <= 0.02, format!("d={d}: {} vs {level}", rep.computed_min))?;
        ensure(rep.ground_multiplicity == d.unsigned_abs() as usize, format!("d={d}: multiplicity {}", rep.ground_multiplicity))?;
        worst = worst.max(rel);
        shared.torus_main.push(rep);
    }
    Ok(format!("N=96 oracle validated; N=64 max relative error {worst:.2e}, multiplicities |d|"))
}

fn c6_torus() -> Outcome {
    let mut vals = Vec::new();
    for n in [16usize, 32, 64] {
        vals.push((n, weitzenbock_residual(&torus_ops(-1, n))));
    }
    let text = vals.iter().map(|(n, r)| format!("N={n}: {r:.3e}")).collect::<Vec<_>>().join(", ");
    if vals.iter().all(|(_, r)| *r <= 1e-10) {
        Ok(text)
    } else {
        Err(format!("residual above 1e-10 ({text}); trace of Δ − ½∇*∇ is 0 on the lattice, not −c/2·dim"))
    }
}

fn c6_sphere() -> Outcome {
    let t = convergence_study(&sphere(), -1, &[200, 400, 800], ConvergenceTarget::WeitzenbockResidual, 1e-10, 0).map_err(err)?;
    ensure(t.rows.windows(2).all(|w| w[1].value < w[0].value), "not monotone")?;
    let p = match t.order {
        ConvergenceOrder::Estimated(p) => p,
        o => return Err(format!("order {o:?}")),
    };
    ensure(p >= 1.5, format!("order {p}"))?;
    let vals = t.rows.iter().map(|r| format!("{:.2e}", r.value)).collect::<Vec<_>>().join(" > ");
    Ok(format!("{vals}, order {p:.3}"))
}

fn c7(shared: &Shared) -> Outcome {
    ensure(!shared.sphere_main.is_empty() && !shared.torus_main.is_empty(), "C1/C5 reports missing")?;
    let mut worst: f64 = 0.0;
    for rep in shared.sphere_main.iter().chain(&shared.torus_main) {
        let factor = rep.computed_min / rep.naive_bound.ok_or("naive bound missing")?;
        let dev = (factor / sharpening_factor(1) - 1.0).abs();
        ensure(dev <= 0.02, format!("{:?} d={}: factor {factor}", rep.geometry.kind(), rep.degree))?;
        worst = worst.max(dev);
    }
    Ok(format!("10 configurations, max deviation from 2 is {:.2e} (relative)", worst))
}

fn c8() -> Outcome {
    let ops = sphere_ops(-1, 0, 800);
    let spec = smallest_eigs(&dolbeault_laplacian(&ops), 2, 1e-10, 0).map_err(err)?;
    let v = spec.vectors.as_ref().unwrap();
    let ground = sharpness_defect(&ops, &v[0], spec.eigenvalues[0], 1).map_err(err)?;
    let second = sharpness_defect(&ops, &v[1], spec.eigenvalues[1], 1).map_err(err)?;
    ensure(ground.abs() <= 1e-2, format!("ground defect {ground}"))?;
    ensure(second >= 0.1, format!("second defect {second}"))?;
    Ok(format!("ground {ground:.2e}, second {second:.4}"))
}

fn random_hermitian(n: usize, rng: &mut ProbeRng) -> Vec<Complex64> {
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..=i {
            let z = if i == j { Complex64::new(4.0 * rng.symmetric(), 0.0) } else { Complex64::new(rng.symmetric(), rng.symmetric()) };
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    a
}

fn c9() -> Outcome {
    // (a) Eigensolver vs nalgebra on 50 random Hermitian instances.
    let mut rng = ProbeRng::new(2024);
    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let n = 1 + (rng.uniform() * 200.0) as usize % 200;
        let dense = random_hermitian(n, &mut rng);
        let t: Vec<_> = (0..n * n).map(|p| (p / n, p % n, dense[p])).collect();
        let op = HermitianOperator::unweighted(CsrMatrix::from_triplets(n, n, &t).map_err(err)?).map_err(err)?;
        let k = n.min(10);
        let s = smallest_eigs(&op, k, 1e-9, case).map_err(err)?;
        let mut oracle: Vec<f64> = DMatrix::from_row_slice(n, n, &dense).symmetric_eigenvalues().iter().copied().collect();
        oracle.sort_by(f64::total_cmp);
        for (a, b) in s.eigenvalues.iter().zip(&oracle) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-9, format!("eigensolver deviation {worst:e}"))?;

    // (b) Hermiticity of every derived operator.
    for ops in [sphere_ops(-2, 1, 64), torus_ops(-2, 16)] {
        for kind in [OperatorKind::Dolbeault, OperatorKind::Trace, OperatorKind::Dirac] {
            let op = derived_operator(&ops, kind);
            let r = op.hermiticity_residual(1, 6);
            ensure(r <= 1e-10 * op.norm_estimate().max(1.0), format!("{kind:?} hermiticity {r:e}"))?;
        }
    }

    // (c) Cocycle and flux quantization.
    for d in [-1i64, -4] {
        let links = PeierlsLinks::landau(24, d);
        let total: f64 = links.plaquette_fluxes().iter().sum();
        ensure((total - 2.0 * PI * d as f64).abs() < 1e-10, "total flux")?;
        ensure((links.fundamental_domain_holonomy() - Complex64::new(1.0, 0.0)).norm() < 1e-10, "cocycle")?;
    }

    // (d) Gauge invariance of the spectrum.
    let g = torus();
    let b = BundleSpec::line(&g, -2).map_err(err)?;
    let links = PeierlsLinks::landau(10, -2);
    let mut prng = ProbeRng::new(5);
    let chi: Vec<f64> = (0..100).map(|_| PI * prng.symmetric()).collect();
    let a = dolbeault_laplacian(&assemble_torus_with_links(&g, &b, &links).map_err(err)?);
    let c = dolbeault_laplacian(&assemble_torus_with_links(&g, &b, &links.gauge_transform(&chi)).map_err(err)?);
    let sa = smallest_eigs(&a, 20, 1e-10, 0).map_err(err)?;
    let sc = smallest_eigs(&c, 20, 1e-10, 0).map_err(err)?;
    for (x, y) in sa.eigenvalues.iter().zip(&sc.eigenvalues) {
        ensure((x - y).abs() <= 1e-9 * a.norm_estimate(), "gauge invariance")?;
    }

    // (e) Determinism: identical calls give bitwise identical output.
    let lap = dolbeault_laplacian(&torus_ops(-3, 32));
    let r1: Spectrum = smallest_eigs(&lap, 5, 1e-9, 11).map_err(err)?;
    let r2 = smallest_eigs(&lap, 5, 1e-9, 11).map_err(err)?;
    ensure(r1 == r2, "nondeterministic solver")?;
    let v1 = verify_main_theorem(&sphere(), -2, &VerifyOptions::new(200, 3, 1e-10)).map_err(err)?;
    let v2 = verify_main_theorem(&sphere(), -2, &VerifyOptions::new(200, 3, 1e-10)).map_err(err)?;
    ensure(v1 == v2, "nondeterministic report")?;

    // (f) Oracle cross-consistency.
    for r in [0.5, 2.0, 8.0 * PI] {
        for d in -6..=-1i64 {
            let via = dirac_from_dolbeault(&sphere_dolbeault_spectrum(r, d, 10).map_err(err)?).map_err(err)?;
            let direct = sphere_dirac_spectrum(r, d + 1, 10).map_err(err)?;
            for (x, y) in via.iter().zip(&direct) {
                ensure((x - y).abs() <= 1e-12 * y.max(1.0), "dirac_from_dolbeault vs sphere_dirac")?;
            }
            let main = bound_dolbeault_main(1, d, 1, 8.0 * PI / r).map_err(err)?;
            let naive = bound_dolbeault_naive(1, d, 1, 8.0 * PI / r).map_err(err)?;
            ensure((main / naive - 2.0).abs() <= 1e-14, "sharpening ratio")?;
        }
    }
    Ok(format!("eigensolver max deviation {worst:.1e}; hermiticity, cocycle, gauge, determinism, oracle identities hold"))
}

fn run(label: &str, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
    });
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail, ok) = match outcome {
        Ok(d) => ("PASS", d, true),
        Err(d) => ("FAIL", d, false),
    };
    println!("[{tag}] {label} {title}: {detail} ({secs:.2} s)");
    ok
}

fn main() {
    let mut shared = Shared::default();
    let mut ok = true;
    ok &= run("C1", "sphere sharpness of the main theorem", || c1(&mut shared));
    ok &= run("C2", "sphere Dirac spectrum reproduction", c2);
    ok &= run("C3", "complex Dirac bound (corollary 1)", c3);
    ok &= run("C4", "real Dirac bound via degree shift (corollary 2)", c4);
    ok &= run("C5", "torus Landau attainment", || c5(&mut shared));
    ok &= run("C6a", "Weitzenbock identity, torus exactness", c6_torus);
    ok &= run("C6b", "Weitzenbock identity, sphere convergence", c6_sphere);
    ok &= run("C7", "naive-vs-sharp factor", || c7(&shared));
    ok &= run("C8", "twistor sharpness defect", c8);
    ok &= run("C9", "property suites", c9);
    if !ok {
        std::process::exit(1);
    }
}
