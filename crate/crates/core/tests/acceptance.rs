//! Acceptance criteria 1–10, one pass/fail line each.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chernkit::fields::{Field, FieldKind, FieldSpec};
use chernkit::geometry::PointGeometry;
use chernkit::linalg::relative_eigenvalues;
use chernkit::manifold::{
    build_manifold, conformal_torus, flat_torus, iwasawa, metric_at, quadrature_grid, CustomMetric,
    DerivativeMode, ManifoldConfig, ManifoldModel,
};
use chernkit::report::{run, Command, RunConfig};
use chernkit::verify::{
    theorem_report, verify_case, verify_manifold_case, verify_suite, CaseId, FieldTerms, ManifoldScan,
    SuiteOptions, TensorId, TheoremId, TheoremStatus, Tolerances, Verdict,
};
use chernkit::ModelError;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: ModelError) -> String {
    e.to_string()
}

fn symbolic() -> Tolerances {
    Tolerances::for_mode(DerivativeMode::Symbolic)
}

fn field(model: &ManifoldModel, spec: FieldSpec) -> Result<Field, String> {
    Field::from_spec(&spec, model).map_err(err)
}

fn random_points(model: &ManifoldModel, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| model.chart.random_point(&mut rng)).collect()
}

fn max_abs<'a>(values: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    values.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn elapsed_within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

/// Every Chern quantity at a point, flattened for comparison.
fn tensor_vector(geo: &PointGeometry) -> Vec<Complex64> {
    let conn = geo.connection();
    let curv = geo.curvature();
    let mut out = Vec::new();
    out.extend(conn.gamma.iter().copied());
    out.extend(conn.torsion.iter().copied());
    out.extend(curv.r.iter().copied());
    for m in [&curv.k, &curv.kstar, &curv.s, &curv.t, &curv.h] {
        out.extend(m.iter().copied());
    }
    out.extend(geo.lee_form());
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let m = flat_torus(n);
        let mut points = quadrature_grid(&m, 4).map_err(err)?.points;
        points.extend(random_points(&m, 50, n as u64));
        for p in &points {
            let geo = PointGeometry::new(&m, p).map_err(err)?;
            let conn = geo.connection();
            let curv = geo.curvature();
            worst = worst.max(max_abs(&conn.torsion)).max(max_abs(&curv.r));
            for t in [&curv.k, &curv.kstar, &curv.s, &curv.t, &curv.h] {
                worst = worst.max(max_abs(t.iter()));
            }
            worst = worst.max(max_abs(&geo.lee_form()));
            for a in 0..2 * n {
                for b in 0..2 * n {
                    for c in 0..2 * n {
                        worst = worst.max(geo.d_omega(a, b, c).norm());
                    }
                }
            }
        }
    }
    ensure(worst <= 1e-12, || format!("sup residual {worst:.3e} > 1e-12"))?;
    let t = elapsed_within(start, Duration::from_secs(5))?;
    Ok(format!("sup residual {worst:.1e}, {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let m = iwasawa();
    let tol = symbolic();
    let scan = ManifoldScan::new(&m, 4, &tol).map_err(err)?;
    ensure(scan.balanced.balanced && scan.balanced.theta <= 1e-10, || {
        format!("balanced {} with max|θ| {:.3e}", scan.balanced.balanced, scan.balanced.theta)
    })?;
    let (mut zero, mut t_dev, mut h_dev): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for p in &scan.grid.points {
        let geo = PointGeometry::new(&m, p).map_err(err)?;
        let curv = geo.curvature();
        for t in [&curv.k, &curv.kstar, &curv.s] {
            zero = zero.max(max_abs(t.iter()));
        }
        let mut ev = relative_eigenvalues(&geo.sample().g, &curv.t).ok_or("metric not positive definite")?;
        ev.sort_by(f64::total_cmp);
        for (x, want) in ev.iter().zip([0.0, 0.0, 2.0]) {
            t_dev = t_dev.max((x - want).abs());
        }
        let half = &curv.t * Complex64::new(0.5, 0.0);
        h_dev = h_dev.max(max_abs((&curv.h + &half).iter()));
    }
    ensure(zero <= 1e-10, || format!("max |k|, |k*|, |s| = {zero:.3e}"))?;
    ensure(t_dev <= 1e-9, || format!("t eigenvalues off {{0,0,2}} by {t_dev:.3e}"))?;
    ensure(h_dev <= 1e-10, || format!("|H + t/2| = {h_dev:.3e}"))?;
    let ks = verify_manifold_case(CaseId::KsEq, &scan, &tol);
    ensure(ks.verdict == Verdict::Pass, || format!("KS_EQ {:?}", ks.verdict))?;
    let t = elapsed_within(start, Duration::from_secs(30))?;
    Ok(format!(
        "max|θ| {:.1e}, k,k*,s {zero:.1e}, t spectrum dev {t_dev:.1e}, H+t/2 {h_dev:.1e}, {t:.2?}",
        scan.balanced.theta
    ))
}

fn criterion_3() -> Outcome {
    let m = iwasawa();
    let form = |name: &str| field(&m, FieldSpec::builtin(FieldKind::Form, name));
    let phi3 = FieldTerms::new(&m, &form("phi3")?, 4, false).map_err(err)?;
    let sup = phi3.sup(|t| t.lem44);
    let integral = phi3.mean(|t| t.lem44).abs();
    ensure(sup <= 1e-10 && integral <= 1e-10, || {
        format!("phi3 LEM44 sup {sup:.3e}, integral {integral:.3e}")
    })?;
    let mut worst: f64 = 0.0;
    for name in ["phi1", "phi2"] {
        let ft = FieldTerms::new(&m, &form(name)?, 4, false).map_err(err)?;
        worst = worst.max(ft.sup(|t| t.closed_20)).max(ft.sup(|t| t.h)).max(ft.sup(|t| t.lem44));
    }
    ensure(worst <= 1e-10, || format!("phi1/phi2 terms reach {worst:.3e}"))?;
    Ok(format!("phi3 sup {sup:.1e}, |∫| {integral:.1e}; phi1/phi2 terms {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let m = iwasawa();
    let tol = symbolic();
    let scan = ManifoldScan::new(&m, 4, &tol).map_err(err)?;
    let form = |name: &str| field(&m, FieldSpec::builtin(FieldKind::Form, name));
    let phi1 = FieldTerms::new(&m, &form("phi1")?, 4, true).map_err(err)?;
    let phi3 = FieldTerms::new(&m, &form("phi3")?, 4, true).map_err(err)?;
    ensure(phi1.harmonic() <= tol.residual && phi1.analytic_form() <= tol.residual, || {
        format!("phi1 harmonic {:.3e}, analytic {:.3e}", phi1.harmonic(), phi1.analytic_form())
    })?;
    ensure(phi1.h_pairing().abs() <= 1e-9, || format!("phi1 ∫H {:.3e}", phi1.h_pairing()))?;
    ensure(phi3.analytic_form() <= tol.residual && phi3.harmonic() > tol.residual, || {
        format!("phi3 analytic {:.3e}, harmonic {:.3e}", phi3.analytic_form(), phi3.harmonic())
    })?;
    let pairing = phi3.h_pairing();
    let phi1_pairing = phi1.h_pairing();
    ensure((pairing + 1.0).abs() <= 1e-8, || format!("phi3 ∫H = {pairing:.12} ≠ −1"))?;
    let reports = theorem_report(&scan, &[phi1, phi3], &tol);
    for id in [TheoremId::HarmonicAnalyticIff, TheoremId::AnalyticHarmonicIff] {
        let r = reports.iter().find(|r| r.id == id).expect("reported");
        ensure(r.status == TheoremStatus::Consistent, || format!("{id}: {:?}", r.status))?;
    }
    let iff = reports
        .iter()
        .find(|r| r.id == TheoremId::AnalyticHarmonicIff)
        .expect("reported");
    let phi3_check = iff.checks.iter().find(|c| c.field == "form:phi3").ok_or("no phi3 check")?;
    ensure(phi3_check.detail.contains("iff condition not met"), || phi3_check.detail.clone())?;
    Ok(format!("phi1 ∫H {phi1_pairing:.1e}; phi3 ∫H {pairing:.10}, iff condition not met, consistent"))
}

fn criterion_5() -> Outcome {
    let m = iwasawa();
    let tol = symbolic();
    let scan = ManifoldScan::new(&m, 4, &tol).map_err(err)?;
    let kappa = scan.definiteness(TensorId::Kappa, tol.zero);
    ensure(kappa.classification.to_string() == "zero", || format!("κ is {}", kappa.classification))?;
    let e3 = FieldTerms::new(&m, &field(&m, FieldSpec::builtin(FieldKind::Vector, "E3"))?, 4, true).map_err(err)?;
    let killing = e3.residuals.as_ref().ok_or("no residuals")?.killing.sup;
    let analytic = e3.analytic_vector();
    let k = e3.sup(|t| t.k);
    let delta_j = e3.sup(|t| t.delta_j);
    ensure(killing <= 1e-9, || format!("Killing residual {killing:.3e}"))?;
    ensure(analytic <= 1e-8, || format!("analytic residual {analytic:.3e}"))?;
    ensure(k <= 1e-10, || format!("|k(ξ,ξ)| {k:.3e}"))?;
    ensure(delta_j <= 1e-8, || format!("|δω_Jξ| {delta_j:.3e}"))?;
    let reports = theorem_report(&scan, &[e3], &tol);
    let r = reports
        .iter()
        .find(|r| r.id == TheoremId::KillingNonpositiveChern)
        .expect("reported");
    ensure(r.status == TheoremStatus::Consistent, || format!("{:?}: {}", r.status, r.hypothesis))?;
    Ok(format!(
        "κ zero; Killing {killing:.1e}, analytic {analytic:.1e}, |k| {k:.1e}, |δω_Jξ| {delta_j:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for (mode, bound) in [(DerivativeMode::Symbolic, 1e-9), (DerivativeMode::Fd, 1e-6)] {
        let mut worst: f64 = 0.0;
        for model in [flat_torus(2), iwasawa(), conformal_torus(0.1)] {
            let model = model.with_mode(mode);
            for seed in 0..20u64 {
                let kind = if seed % 2 == 0 { FieldKind::Form } else { FieldKind::Vector };
                let f = field(&model, FieldSpec::random(kind, 2, seed))?;
                let ft = FieldTerms::new(&model, &f, 8, false).map_err(err)?;
                let r = ft.sup(|t| t.ricci7s.relative()).max(ft.sup(|t| t.bianchi410.relative()));
                ensure(r <= bound, || {
                    format!("{} {:?} seed {seed}: residual {r:.3e} > {bound:.0e}", model.name, mode)
                })?;
                worst = worst.max(r);
            }
        }
        summary.push(format!("{mode:?} {worst:.1e}"));
    }
    let t = elapsed_within(start, Duration::from_secs(120))?;
    Ok(format!("{}, {t:.1?}", summary.join(", ")))
}

fn integral_residuals(
    model: &ManifoldModel,
    cases: &[CaseId],
    specs: &[FieldSpec],
    resolution: usize,
    tol: &Tolerances,
) -> Result<Vec<(String, CaseId, Verdict, f64)>, String> {
    let mut out = Vec::new();
    for spec in specs {
        let ft = FieldTerms::new(model, &field(model, spec.clone())?, resolution, false).map_err(err)?;
        for &case in cases {
            let r = verify_case(case, &ft, true, tol);
            out.push((ft.field.clone(), case, r.verdict, r.residual.unwrap_or(f64::NAN)));
        }
    }
    Ok(out)
}

fn criterion_7() -> Outcome {
    const FLOOR: f64 = 1e-12;
    let mut tol = symbolic();
    tol.integral = 1e-7;
    let trig = |seeds: &[u64]| -> Vec<FieldSpec> {
        seeds
            .iter()
            .flat_map(|&s| [FieldSpec::random(FieldKind::Form, 2, s), FieldSpec::random(FieldKind::Vector, 2, s)])
            .collect()
    };
    let balanced_cases = [CaseId::Int46, CaseId::Kill12, CaseId::Form47, CaseId::Form48];
    let runs: Vec<(ManifoldModel, Vec<CaseId>, Vec<FieldSpec>, usize, usize)> = vec![
        (conformal_torus(0.1), vec![CaseId::Vec7], trig(&[3, 4]), 16, 32),
        (iwasawa(), balanced_cases.to_vec(), trig(&[5, 6]), 8, 16),
        (flat_torus(2), balanced_cases.to_vec(), trig(&[7, 8]), 8, 16),
    ];
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (model, cases, specs, coarse, fine) in runs {
        let at16 = integral_residuals(&model, &cases, &specs, 16, &tol)?;
        for (f, case, verdict, r) in &at16 {
            ensure(*verdict == Verdict::Pass && *r <= 1e-7, || {
                format!("{} {case} {f}: {verdict} with |∫| {r:.3e}", model.name)
            })?;
            worst = worst.max(*r);
        }
        // Doubling: VEC7 on the conformal torus uses its first field only.
        let specs = if model.name == "conformal_torus" { &specs[..1] } else { &specs[..] };
        let a = integral_residuals(&model, &cases, specs, coarse, &tol)?;
        let b = integral_residuals(&model, &cases, specs, fine, &tol)?;
        for ((f, case, va, ra), (_, _, vb, rb)) in a.iter().zip(&b) {
            ensure(va == vb, || format!("{} {case} {f}: verdict {va} at {coarse}, {vb} at {fine}", model.name))?;
            ensure(*rb <= *ra || rb.max(*ra) <= FLOOR, || {
                format!("{} {case} {f}: |∫| grew {ra:.3e} → {rb:.3e} ({coarse} → {fine})", model.name)
            })?;
            checked += 1;
        }
    }
    Ok(format!("max |∫| {worst:.1e} at resolution 16; {checked} doubling checks"))
}

/// `θ_α = Σ g^{λμ̄}(∂_α g_{λμ̄} − ∂_λ g_{αμ̄})` from central differences of the
/// metric values.
fn theta_by_differences(model: &ManifoldModel, x: &[f64]) -> Result<Vec<Complex64>, String> {
    let n = model.dimension();
    let h = 1e-5;
    let g_at = |x: &[f64]| -> Result<Vec<Complex64>, String> {
        let p = model.chart.point(x).map_err(err)?;
        Ok(metric_at(model, &p).map_err(err)?.g.iter().copied().collect())
    };
    // dg[k][(i, j)] = ∂_{z_k} g_{ij̄}, column-major like the matrix storage.
    let mut dg = Vec::with_capacity(n);
    for k in 0..n {
        let diff = |axis: usize| -> Result<Vec<Complex64>, String> {
            let mut plus = x.to_vec();
            let mut minus = x.to_vec();
            plus[axis] += h;
            minus[axis] -= h;
            let (a, b) = (g_at(&plus)?, g_at(&minus)?);
            Ok(a.iter().zip(&b).map(|(a, b)| (a - b) / (2.0 * h)).collect())
        };
        let dx = diff(2 * k)?;
        let dy = diff(2 * k + 1)?;
        dg.push(
            dx.iter()
                .zip(&dy)
                .map(|(dx, dy)| 0.5 * (dx - Complex64::i() * dy))
                .collect::<Vec<_>>(),
        );
    }
    let p = model.chart.point(x).map_err(err)?;
    let sample = metric_at(model, &p).map_err(err)?;
    let at = |v: &[Complex64], i: usize, j: usize| v[j * n + i];
    Ok((0..n)
        .map(|a| {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..n {
                for mu in 0..n {
                    // g^{λμ̄} is the (μ, λ) entry of the matrix inverse.
                    let ginv = sample.inverse[(mu, l)];
                    acc += ginv * (at(&dg[a], l, mu) - at(&dg[l], a, mu));
                }
            }
            acc
        })
        .collect())
}

fn criterion_8() -> Outcome {
    let m = conformal_torus(0.1);
    let tol = symbolic();
    let scan = ManifoldScan::new(&m, 8, &tol).map_err(err)?;
    let b = &scan.balanced;
    ensure(!b.balanced && b.theta >= 0.05, || format!("balanced {} with max|θ| {:.3e}", b.balanced, b.theta))?;
    let mut oracle: f64 = 0.0;
    let mut xs = vec![b.theta_argmax.clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        xs.push(m.chart.random_point(&mut rng).iter().flat_map(|z| [z.re, z.im]).collect());
    }
    for x in &xs {
        let p = m.chart.point(x).map_err(err)?;
        let geo = PointGeometry::new(&m, &p).map_err(err)?;
        let fd = theta_by_differences(&m, x)?;
        for (a, b) in geo.lee_form().iter().zip(&fd) {
            oracle = oracle.max((a - b).norm());
        }
    }
    ensure(oracle <= 1e-6, || format!("θ differs from the difference oracle by {oracle:.3e}"))?;
    ensure(b.laplacian_deviation > 1e-3, || format!("Laplacian deviation {:.3e}", b.laplacian_deviation))?;
    let specs = chernkit::report::default_fields(&m, 0);
    let fields: Vec<Field> = specs.iter().map(|s| field(&m, s.clone())).collect::<Result<_, _>>()?;
    let mut options = SuiteOptions::new(&m, 8);
    options.theorems = false;
    let suite = verify_suite(&m, &fields, &options).map_err(err)?;
    let balanced_only: Vec<_> = suite.records.iter().filter(|r| r.id.requires_balanced()).collect();
    ensure(!balanced_only.is_empty(), || "no balanced-only records".into())?;
    for r in &balanced_only {
        ensure(r.verdict == Verdict::Inapplicable, || format!("{} reports {}", r.id, r.verdict))?;
    }
    Ok(format!(
        "max|θ| {:.4}, oracle gap {oracle:.1e}, Laplacian deviation {:.2e}, {} balanced-only records inapplicable",
        b.theta,
        b.laplacian_deviation,
        balanced_only.len()
    ))
}

fn polynomial_metric() -> Result<ManifoldModel, String> {
    let entries = vec![
        vec!["1 + re(z1)^2 + 0.5*im(z2)^2".to_string(), "0.2*z2 + 0.1*conj(z1)".to_string()],
        vec!["0.2*conj(z2) + 0.1*z1".to_string(), "2 + re(z1)*im(z1) + re(z2)^2".to_string()],
    ];
    build_manifold(&ManifoldConfig {
        custom: Some(CustomMetric {
            n: 2,
            entries,
            bounds: vec![[0.0, 1.0]; 4],
            params: BTreeMap::new(),
            name: Some("polynomial".into()),
            periodicity: None,
            invariant_metric: false,
        }),
        ..ManifoldConfig::default()
    })
    .map_err(err)
}

/// Largest `|a − b| / max(1, |a|)` between the two modes over the points.
fn mode_gap(model: &ManifoldModel, mode: DerivativeMode, points: &[Vec<Complex64>]) -> Result<f64, String> {
    let other = model.clone().with_mode(mode);
    let mut worst: f64 = 0.0;
    for p in points {
        let a = tensor_vector(&PointGeometry::new(model, p).map_err(err)?);
        let b = tensor_vector(&PointGeometry::new(&other, p).map_err(err)?);
        let scale = max_abs(&a).max(1.0);
        let gap = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        worst = worst.max(gap / scale);
    }
    Ok(worst)
}

fn criterion_9() -> Outcome {
    let polynomial = polynomial_metric()?;
    let mut lines = Vec::new();
    let models = [flat_torus(2), iwasawa(), conformal_torus(0.1), polynomial.clone()];
    for (i, m) in models.iter().enumerate() {
        let points = random_points(m, 100, 90 + i as u64);
        let gap = mode_gap(m, DerivativeMode::Fd, &points)?;
        ensure(gap <= 1e-6, || format!("{} FD gap {gap:.3e}", m.name))?;
        lines.push(format!("{} {gap:.1e}", m.name));
    }
    for (i, m) in [iwasawa(), polynomial].iter().enumerate() {
        let points = random_points(m, 100, 190 + i as u64);
        let gap = mode_gap(m, DerivativeMode::FdRichardson, &points)?;
        ensure(gap <= 1e-8, || format!("{} Richardson gap {gap:.3e}", m.name))?;
        lines.push(format!("{} Richardson {gap:.1e}", m.name));
    }
    Ok(lines.join(", "))
}

fn criterion_10() -> Outcome {
    let mut sizes = Vec::new();
    for (name, resolution) in [("iwasawa", 4), ("conformal_torus", 8)] {
        let mut config = RunConfig::new(ManifoldConfig::builtin(name));
        config.resolution = resolution;
        config.seed = 42;
        config.output.omit_timing = true;
        let run_with = |threads: usize| -> Result<String, String> {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| e.to_string())?
                .install(|| run(&config, Command::Verify).map(|r| r.to_json()).map_err(err))
        };
        let first = run_with(1)?;
        for threads in [1, 2, 8] {
            ensure(run_with(threads)? == first, || format!("{name}: report differs with {threads} threads"))?;
        }
        sizes.push(format!("{name} {} bytes", first.len()));
    }
    Ok(format!("identical across 1, 2, 8 threads ({})", sizes.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Kähler degeneration on flat tori", criterion_1),
        ("Iwasawa tensors and balanced verdict", criterion_2),
        ("LEM44 on the Iwasawa coframe", criterion_3),
        ("harmonic/analytic equivalence on Iwasawa", criterion_4),
        ("Killing field under nonpositive Chern curvature", criterion_5),
        ("pointwise identities under perturbation", criterion_6),
        ("integral identities on non-invariant data", criterion_7),
        ("non-balanced control", criterion_8),
        ("derivative-engine equivalence", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
