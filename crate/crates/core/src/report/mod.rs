//! Run configuration, pipeline orchestration and report serialization.
//!
//! A [`Report`] embeds the [`RunConfig`] that produced it. Everything except
//! the `timing` section is a pure function of the config, so two runs with
//! the same config serialize to the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::fields::{analyze_field, field_grid, Field, FieldAnalysis, FieldKind, FieldSpec};
use crate::geometry::{balanced_grid, is_balanced, BalancedReport, PointGeometry};
use crate::linalg::{self, CMatrix};
use crate::manifold::{build_manifold, DerivativeMode, ManifoldConfig, ManifoldModel};
use crate::verify::{
    verify_suite, CaseId, CaseRecord, DefinitenessVerdict, ManifoldScan, SuiteOptions, TensorId,
    TheoremReport, TheoremStatus, Tolerances, Verdict,
};

#[cfg(test)]
mod tests;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_RESOLUTION: usize = 8;
pub const DEFAULT_SAMPLES: usize = 4;
pub const DEFAULT_RANDOM_FIELDS: usize = 2;

/// Which part of the pipeline a run executes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Tensor tables at sample points.
    Tensors,
    /// Balanced conditions on the grid.
    Balanced,
    /// Residuals of every field.
    Classify,
    /// The identity suite and theorem report.
    Verify,
    /// Definiteness of the curvature tensors.
    Scan,
}

/// Case selection: `"all"` or a list of ids.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum CaseSelection {
    #[default]
    All,
    List(Vec<CaseId>),
}

impl Serialize for CaseSelection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CaseSelection::All => s.serialize_str("all"),
            CaseSelection::List(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for CaseSelection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            List(Vec<CaseId>),
        }
        match Raw::deserialize(d)? {
            Raw::Word(w) if w.eq_ignore_ascii_case("all") => Ok(CaseSelection::All),
            Raw::Word(w) => w
                .parse()
                .map(|c| CaseSelection::List(vec![c]))
                .map_err(serde::de::Error::custom),
            Raw::List(v) => Ok(CaseSelection::List(v)),
        }
    }
}

impl CaseSelection {
    pub fn cases(&self) -> Vec<CaseId> {
        match self {
            CaseSelection::All => CaseId::ALL.to_vec(),
            CaseSelection::List(v) => v.clone(),
        }
    }
}

/// Points at which tensor tables are sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    /// Explicit points as real coordinates `Re z1, Im z1, Re z2, …`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<f64>>,
    /// Seeded uniform points in the chart box, after the explicit ones.
    #[serde(default = "default_samples")]
    pub random: usize,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            points: Vec::new(),
            random: DEFAULT_SAMPLES,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory receiving `report.json` and `tensors.csv`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default)]
    pub csv: bool,
    /// Drops the timing section so reports compare byte for byte.
    #[serde(default)]
    pub omit_timing: bool,
}

/// Everything a run depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub manifold: ManifoldConfig,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub mode: DerivativeMode,
    /// Overrides of [`Tolerances::for_mode`] by name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    /// Fields to analyze; empty means the model's frame fields plus seeded
    /// random fields.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldSpec>,
    #[serde(default)]
    pub cases: CaseSelection,
    #[serde(default = "default_theorems")]
    pub theorems: bool,
    #[serde(default)]
    pub samples: SampleConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

fn default_theorems() -> bool {
    true
}

impl RunConfig {
    pub fn new(manifold: ManifoldConfig) -> RunConfig {
        RunConfig {
            manifold,
            resolution: DEFAULT_RESOLUTION,
            mode: DerivativeMode::Symbolic,
            tolerances: BTreeMap::new(),
            fields: Vec::new(),
            cases: CaseSelection::All,
            theorems: true,
            samples: SampleConfig::default(),
            output: OutputConfig::default(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<RunConfig, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Config(e.to_string()))
    }

    pub fn tolerances(&self) -> Result<Tolerances, ModelError> {
        let mut t = Tolerances::for_mode(self.mode);
        for (name, value) in &self.tolerances {
            t.set(name, *value)?;
        }
        Ok(t)
    }

    pub fn model(&self) -> Result<ManifoldModel, ModelError> {
        Ok(build_manifold(&self.manifold)?.with_mode(self.mode))
    }

    /// The configured fields, or the defaults when none are configured.
    pub fn field_specs(&self, model: &ManifoldModel) -> Vec<FieldSpec> {
        if !self.fields.is_empty() {
            return self.fields.clone();
        }
        default_fields(model, self.seed)
    }

    /// Explicit sample points followed by the seeded random ones.
    pub fn sample_points(&self, model: &ManifoldModel) -> Result<Vec<Vec<Complex64>>, ModelError> {
        let mut out = Vec::with_capacity(self.samples.points.len() + self.samples.random);
        for p in &self.samples.points {
            out.push(model.chart.point(p)?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        out.extend((0..self.samples.random).map(|_| model.chart.random_point(&mut rng)));
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.resolution < 2 {
            return Err(ModelError::Resolution(self.resolution));
        }
        self.tolerances()?;
        for f in &self.fields {
            f.kind()?;
        }
        Ok(())
    }
}

/// Coframe forms, frame vector fields, and seeded random fields of each kind.
pub fn default_fields(model: &ManifoldModel, seed: u64) -> Vec<FieldSpec> {
    let n = model.dimension();
    let (frame, coframe) = &model.frame.names;
    let mut out = Vec::new();
    for k in 1..=n {
        out.push(FieldSpec::builtin(FieldKind::Form, &format!("{coframe}{k}")));
    }
    for k in 1..=n {
        out.push(FieldSpec::builtin(FieldKind::Vector, &format!("{frame}{k}")));
    }
    for i in 0..DEFAULT_RANDOM_FIELDS as u64 {
        out.push(FieldSpec::random(FieldKind::Form, 2, seed.wrapping_add(i)));
        out.push(FieldSpec::random(FieldKind::Vector, 2, seed.wrapping_add(i)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldInfo {
    pub name: String,
    pub dimension: usize,
    pub invariant_metric: bool,
    pub periodicity: String,
    pub bounds: Vec<[f64; 2]>,
}

impl ManifoldInfo {
    fn new(model: &ManifoldModel) -> ManifoldInfo {
        ManifoldInfo {
            name: model.name.clone(),
            dimension: model.dimension(),
            invariant_metric: model.invariant_metric,
            periodicity: model.chart.periodicity.clone(),
            bounds: model.chart.bounds.clone(),
        }
    }
}

/// Full tensor matrices at one point, rows of `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorTables {
    pub g: Vec<Vec<Complex64>>,
    pub k: Vec<Vec<Complex64>>,
    pub kstar: Vec<Vec<Complex64>>,
    pub s: Vec<Vec<Complex64>>,
    pub t: Vec<Vec<Complex64>>,
    pub h: Vec<Vec<Complex64>>,
    /// `θ_α`
    pub theta: Vec<Complex64>,
}

fn rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Tensor eigenvalues relative to the metric at one sample point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    /// Real coordinates `Re z1, Im z1, …`.
    pub point: Vec<f64>,
    pub eigenvalues: BTreeMap<String, Vec<f64>>,
    /// `max_α |θ_α|`
    pub theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<TensorTables>,
}

const SAMPLED: [TensorId; 6] = [
    TensorId::K,
    TensorId::Kstar,
    TensorId::S,
    TensorId::T,
    TensorId::H,
    TensorId::KMinusHalfT,
];

fn sample_point(model: &ManifoldModel, p: &[Complex64], tables: bool) -> Result<PointSample, ModelError> {
    let geo = PointGeometry::new(model, p)?;
    let curv = geo.curvature();
    let g = &geo.sample().g;
    let eigenvalues = SAMPLED
        .iter()
        .map(|t| {
            let ev = linalg::relative_eigenvalues(g, &t.select(&curv)).expect("positive definite metric");
            (t.as_str().to_string(), ev)
        })
        .collect();
    let theta_form = geo.lee_form();
    Ok(PointSample {
        point: p.iter().flat_map(|z| [z.re, z.im]).collect(),
        eigenvalues,
        theta: theta_form.iter().map(|x| x.norm()).fold(0.0, f64::max),
        tables: tables.then(|| TensorTables {
            g: rows(g),
            k: rows(&curv.k),
            kstar: rows(&curv.kstar),
            s: rows(&curv.s),
            t: rows(&curv.t),
            h: rows(&curv.h),
            theta: theta_form,
        }),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
    pub hypothesis_not_met: usize,
    pub theorems_consistent: usize,
    pub theorems_violated: usize,
    pub theorems_not_applicable: usize,
}

impl Summary {
    fn new(cases: &[CaseRecord], theorems: &[TheoremReport]) -> Summary {
        let count = |v| cases.iter().filter(|r| r.verdict == v).count();
        let status = |s| theorems.iter().filter(|t| t.status == s).count();
        Summary {
            pass: count(Verdict::Pass),
            fail: count(Verdict::Fail),
            inapplicable: count(Verdict::Inapplicable),
            hypothesis_not_met: count(Verdict::HypothesisNotMet),
            theorems_consistent: status(TheoremStatus::Consistent),
            theorems_violated: status(TheoremStatus::Violated),
            theorems_not_applicable: status(TheoremStatus::NotApplicable),
        }
    }
}

/// Wall-clock data; the only run-dependent section of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Seconds since the Unix epoch at the start of the run.
    pub started_at: u64,
    pub total_seconds: f64,
    pub stages: Vec<Stage>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub seconds: f64,
}

struct Clock {
    start: Instant,
    started_at: u64,
    last: Instant,
    stages: Vec<Stage>,
}

impl Clock {
    fn start() -> Clock {
        let now = Instant::now();
        Clock {
            start: now,
            started_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            last: now,
            stages: Vec::new(),
        }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.stages.push(Stage {
            name: name.into(),
            seconds: (now - self.last).as_secs_f64(),
        });
        self.last = now;
    }

    fn finish(self) -> Timing {
        Timing {
            started_at: self.started_at,
            total_seconds: self.start.elapsed().as_secs_f64(),
            stages: self.stages,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub generator: String,
    pub command: Command,
    pub config: RunConfig,
    pub manifold: ManifoldInfo,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balanced: Option<BalancedReport>,
    /// Eigenvalue envelopes over the balanced grid.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tensors: Vec<DefinitenessVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<PointSample>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldAnalysis>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<CaseRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theorems: Vec<TheoremReport>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    /// 1 when any case fails or any theorem check is violated, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 || self.summary.theorems_violated > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Config(e.to_string()))
    }

    /// One row per sample point: coordinates, `|θ|`, then every eigenvalue.
    pub fn tensor_csv(&self) -> String {
        let n = self.manifold.dimension;
        let mut header: Vec<String> = (1..=n)
            .flat_map(|k| [format!("re_z{k}"), format!("im_z{k}")])
            .collect();
        header.push("theta".into());
        for t in SAMPLED {
            header.extend((1..=n).map(|i| format!("{}_{i}", t.as_str())));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).expect("in-memory write");
        for s in &self.samples {
            let mut row: Vec<String> = s.point.iter().map(|x| format!("{x:e}")).collect();
            row.push(format!("{:e}", s.theta));
            for t in SAMPLED {
                row.extend(s.eigenvalues[t.as_str()].iter().map(|x| format!("{x:e}")));
            }
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    /// Human-readable summary.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let m = &self.manifold;
        let _ = writeln!(out, "manifold: {} (n = {})", m.name, m.dimension);
        if let Some(b) = &self.balanced {
            let _ = writeln!(
                out,
                "balanced: {} (max |θ| {:.3e}, Laplacian deviation {:.3e}, {} points)",
                if b.balanced { "yes" } else { "no" },
                b.theta,
                b.laplacian_deviation,
                b.points
            );
        }
        if !self.tensors.is_empty() {
            let _ = writeln!(out, "\n{:<16} {:<11} {:>12} {:>12}", "tensor", "class", "min", "max");
            for t in &self.tensors {
                let _ = writeln!(
                    out,
                    "{:<16} {:<11} {:>12.4e} {:>12.4e}",
                    t.tensor.as_str(),
                    t.classification.to_string(),
                    t.min_eigenvalue,
                    t.max_eigenvalue
                );
            }
        }
        if !self.samples.is_empty() {
            let _ = writeln!(out, "\nsample point tensors (eigenvalues relative to g):");
            for s in &self.samples {
                let coords: Vec<String> = s.point.iter().map(|x| format!("{x:.4}")).collect();
                let _ = writeln!(out, "  at ({}): |θ| = {:.3e}", coords.join(", "), s.theta);
                for (name, ev) in &s.eigenvalues {
                    let ev: Vec<String> = ev.iter().map(|x| format!("{x:.6}")).collect();
                    let _ = writeln!(out, "    {name:<16} [{}]", ev.join(", "));
                }
            }
        }
        if !self.fields.is_empty() {
            let _ = writeln!(
                out,
                "\n{:<40} {:>10} {:>10} {:>8} {:>8} {:>8}",
                "field", "analytic", "harmonic", "killing", "cx-herm", "affine"
            );
            for f in &self.fields {
                let mark = |b: bool| if b { "yes" } else { "no" };
                let _ = writeln!(
                    out,
                    "{:<40} {:>10} {:>10} {:>8} {:>8} {:>8}",
                    f.field,
                    mark(f.analytic),
                    mark(f.harmonic),
                    mark(f.killing),
                    mark(f.complex_hermitian),
                    mark(f.affine)
                );
            }
        }
        if !self.cases.is_empty() {
            let _ = writeln!(
                out,
                "\n{:<11} {:<40} {:<19} {:>11} {:>9}",
                "case", "field", "verdict", "residual", "tol"
            );
            for r in &self.cases {
                let residual = r.residual.map_or("-".to_string(), |x| format!("{x:.3e}"));
                let _ = writeln!(
                    out,
                    "{:<11} {:<40} {:<19} {:>11} {:>9.1e}",
                    r.id.as_str(),
                    r.field.as_deref().unwrap_or("-"),
                    r.verdict.to_string(),
                    residual,
                    r.tolerance
                );
            }
        }
        if !self.theorems.is_empty() {
            let _ = writeln!(out);
            for t in &self.theorems {
                let status = match t.status {
                    TheoremStatus::NotApplicable => "not applicable",
                    TheoremStatus::Consistent => "consistent",
                    TheoremStatus::Violated => "VIOLATED",
                };
                let _ = writeln!(out, "theorem {:<26} {}", t.id.as_str(), status);
            }
        }
        let s = &self.summary;
        if !self.cases.is_empty() || !self.theorems.is_empty() {
            let _ = writeln!(
                out,
                "\n{} pass, {} fail, {} inapplicable, {} hypothesis not met; theorems: {} consistent, {} violated, {} not applicable",
                s.pass,
                s.fail,
                s.inapplicable,
                s.hypothesis_not_met,
                s.theorems_consistent,
                s.theorems_violated,
                s.theorems_not_applicable
            );
        }
        out
    }
}

fn build_fields(config: &RunConfig, model: &ManifoldModel) -> Result<Vec<Field>, ModelError> {
    config
        .field_specs(model)
        .iter()
        .map(|s| Field::from_spec(s, model))
        .collect()
}

/// Executes `command` for `config`.
pub fn run(config: &RunConfig, command: Command) -> Result<Report, ModelError> {
    config.validate()?;
    let mut clock = Clock::start();
    let model = config.model()?;
    let tol = config.tolerances()?;
    clock.lap("build");

    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        generator: format!("chernkit {}", env!("CARGO_PKG_VERSION")),
        command,
        config: config.clone(),
        manifold: ManifoldInfo::new(&model),
        tolerances: tol,
        balanced: None,
        tensors: Vec::new(),
        samples: Vec::new(),
        fields: Vec::new(),
        cases: Vec::new(),
        theorems: Vec::new(),
        summary: Summary::default(),
        timing: None,
    };

    let samples = |tables: bool| -> Result<Vec<PointSample>, ModelError> {
        config
            .sample_points(&model)?
            .iter()
            .map(|p| sample_point(&model, p, tables))
            .collect()
    };
    let envelopes = |scan: &ManifoldScan| -> Vec<DefinitenessVerdict> {
        TensorId::ALL.iter().map(|t| scan.definiteness(*t, tol.zero)).collect()
    };

    match command {
        Command::Tensors => {
            report.samples = samples(true)?;
            clock.lap("tensors");
        }
        Command::Balanced => {
            let grid = balanced_grid(&model, config.resolution)?;
            report.balanced = Some(is_balanced(&model, &grid, tol.balanced_tolerances())?);
            clock.lap("balanced");
        }
        Command::Scan => {
            let scan = ManifoldScan::new(&model, config.resolution, &tol)?;
            report.tensors = envelopes(&scan);
            report.balanced = Some(scan.balanced);
            clock.lap("scan");
            report.samples = samples(false)?;
            clock.lap("samples");
        }
        Command::Classify => {
            for f in build_fields(config, &model)? {
                let grid = field_grid(&model, &[&f], config.resolution)?;
                report.fields.push(analyze_field(&model, &f, &grid, tol.residual, tol.lie)?);
            }
            clock.lap("fields");
        }
        Command::Verify => {
            let fields = build_fields(config, &model)?;
            let mut options = SuiteOptions::new(&model, config.resolution);
            options.tolerances = tol;
            options.cases = config.cases.cases();
            options.theorems = config.theorems;
            let result = verify_suite(&model, &fields, &options)?;
            clock.lap("suite");
            report.tensors = envelopes(&result.scan);
            for (f, ft) in fields.iter().zip(&result.fields) {
                if let Some(res) = ft.residuals {
                    report
                        .fields
                        .push(FieldAnalysis::new(f, &ft.grid, res, tol.residual, tol.lie));
                }
            }
            report.balanced = Some(result.scan.balanced);
            report.cases = result.records;
            report.theorems = result.theorems;
            report.samples = samples(false)?;
            clock.lap("samples");
        }
    }
    report.summary = Summary::new(&report.cases, &report.theorems);
    if !config.output.omit_timing {
        report.timing = Some(clock.finish());
    }
    Ok(report)
}

/// Writes `report.json` (and `tensors.csv` when requested) into the
/// configured output directory.
pub fn emit_report(report: &Report, dir: &std::path::Path, csv: bool) -> std::io::Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let json = dir.join("report.json");
    std::fs::write(&json, report.to_json())?;
    written.push(json);
    if csv {
        let path = dir.join("tensors.csv");
        std::fs::write(&path, report.tensor_csv())?;
        written.push(path);
    }
    Ok(written)
}
