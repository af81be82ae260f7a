//! Compact Hermitian manifolds presented as one chart over a box.

mod quadrature;
pub mod samples;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ExprError, ModelError};
use crate::expr::{fd_jets, parse_expr, DerivativeTable, Expr, FdOptions, Params};
use crate::jet::Jet;
use crate::linalg::{self, CMatrix};

pub use quadrature::{integrate, quadrature_grid, quadrature_grid_on, QuadratureGrid, DEFAULT_POINT_CAP};

/// How metric and field derivatives are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    #[default]
    Symbolic,
    Fd,
    FdRichardson,
}

impl DerivativeMode {
    pub fn fd_options(self) -> Option<FdOptions> {
        match self {
            DerivativeMode::Symbolic => None,
            DerivativeMode::Fd => Some(FdOptions::default()),
            DerivativeMode::FdRichardson => Some(FdOptions::richardson()),
        }
    }

    pub fn is_symbolic(self) -> bool {
        self == DerivativeMode::Symbolic
    }
}

/// The fundamental-domain box of a single chart.
///
/// `bounds[2k]` bounds `Re z_{k+1}` and `bounds[2k+1]` bounds `Im z_{k+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub n: usize,
    pub bounds: Vec<[f64; 2]>,
    pub periodicity: String,
}

impl ChartSpec {
    pub fn unit_box(n: usize, periodicity: &str) -> ChartSpec {
        ChartSpec {
            n,
            bounds: vec![[0.0, 1.0]; 2 * n],
            periodicity: periodicity.to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n == 0 {
            return Err(ModelError::Config("chart dimension must be at least 1".into()));
        }
        if self.bounds.len() != 2 * self.n {
            return Err(ModelError::Config(format!(
                "box needs {} intervals, got {}",
                2 * self.n,
                self.bounds.len()
            )));
        }
        for (u, [lo, hi]) in self.bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(ModelError::Config(format!(
                    "box interval {u} is [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    /// Lebesgue volume of the box.
    pub fn volume(&self) -> f64 {
        self.bounds.iter().map(|[lo, hi]| hi - lo).product()
    }

    pub fn center(&self) -> Vec<Complex64> {
        (0..self.n)
            .map(|k| {
                let [a, b] = self.bounds[2 * k];
                let [c, d] = self.bounds[2 * k + 1];
                Complex64::new(0.5 * (a + b), 0.5 * (c + d))
            })
            .collect()
    }

    /// Point with real coordinates `x` (length `2n`).
    pub fn point(&self, x: &[f64]) -> Result<Vec<Complex64>, ModelError> {
        if x.len() != 2 * self.n {
            return Err(ModelError::Config(format!(
                "a point needs {} real coordinates, got {}",
                2 * self.n,
                x.len()
            )));
        }
        Ok(x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
    }

    /// Uniformly random point of the box.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Vec<Complex64> {
        (0..self.n)
            .map(|k| {
                let [a, b] = self.bounds[2 * k];
                let [c, d] = self.bounds[2 * k + 1];
                Complex64::new(rng.gen_range(a..b), rng.gen_range(c..d))
            })
            .collect()
    }
}

pub type MetricFn = dyn Fn(&[Complex64]) -> Result<Vec<Complex64>, ExprError> + Send + Sync;

#[derive(Clone)]
enum MetricSource {
    Symbolic(DerivativeTable),
    Opaque {
        f: Arc<MetricFn>,
        active: Vec<bool>,
    },
}

/// The entries `g_{αβ̄}(z)` of a Hermitian metric, row-major.
#[derive(Clone)]
pub struct MetricField {
    n: usize,
    source: MetricSource,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            MetricSource::Symbolic(t) => f
                .debug_struct("MetricField")
                .field("n", &self.n)
                .field("entries", &t.exprs().iter().map(|e| e.to_string()).collect::<Vec<_>>())
                .finish(),
            MetricSource::Opaque { .. } => f
                .debug_struct("MetricField")
                .field("n", &self.n)
                .field("entries", &"<opaque>")
                .finish(),
        }
    }
}

impl MetricField {
    pub fn symbolic(n: usize, entries: Vec<Expr>) -> Result<MetricField, ModelError> {
        if entries.len() != n * n {
            return Err(ModelError::Config(format!(
                "metric needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        for (i, e) in entries.iter().enumerate() {
            if let Some(name) = e.parameters().into_iter().next() {
                return Err(ModelError::Entry {
                    row: i / n,
                    col: i % n,
                    source: ExprError::UnboundParameter(name),
                });
            }
            if e.min_dimension() > n {
                return Err(ModelError::Entry {
                    row: i / n,
                    col: i % n,
                    source: ExprError::IndexOutOfRange {
                        index: e.min_dimension(),
                        n,
                        offset: 0,
                    },
                });
            }
        }
        Ok(MetricField {
            n,
            source: MetricSource::Symbolic(DerivativeTable::new(n, entries)),
        })
    }

    /// A metric known only through an evaluator returning the `n²` entries.
    /// Its derivatives always come from finite differences.
    pub fn opaque(n: usize, f: Arc<MetricFn>) -> MetricField {
        MetricField {
            n,
            source: MetricSource::Opaque {
                f,
                active: vec![true; n],
            },
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> Option<&[Expr]> {
        match &self.source {
            MetricSource::Symbolic(t) => Some(t.exprs()),
            MetricSource::Opaque { .. } => None,
        }
    }

    /// Complex coordinates the metric depends on.
    pub fn active(&self) -> &[bool] {
        match &self.source {
            MetricSource::Symbolic(t) => t.active(),
            MetricSource::Opaque { active, .. } => active,
        }
    }

    pub fn values(&self, point: &[Complex64]) -> Result<Vec<Complex64>, ExprError> {
        match &self.source {
            MetricSource::Symbolic(t) => t.values(point),
            MetricSource::Opaque { f, .. } => f(point),
        }
    }

    /// Second-order jets of the `n²` entries.
    pub fn jets(&self, point: &[Complex64], mode: DerivativeMode) -> Result<Vec<Jet>, ModelError> {
        match (&self.source, mode.fd_options()) {
            (MetricSource::Symbolic(t), None) => Ok(t.jets(point)?),
            (MetricSource::Symbolic(t), Some(opts)) => t.fd_jets(point, &opts),
            (MetricSource::Opaque { f, active }, opts) => {
                fd_jets(&|q: &[Complex64]| f(q), point, active, &opts.unwrap_or_default())
            }
        }
    }
}

/// A global frame `E_i = Σ_α frame[i][α] ∂_α` with dual coframe
/// `φ_i = Σ_α coframe[i][α] dz_α`, both row-major `n × n`.
#[derive(Clone, Debug)]
pub struct InvariantFrame {
    pub frame: Vec<Expr>,
    pub coframe: Vec<Expr>,
    pub names: (String, String),
}

impl InvariantFrame {
    pub fn coordinate(n: usize) -> InvariantFrame {
        let id: Vec<Expr> = (0..n * n)
            .map(|i| if i / n == i % n { Expr::one() } else { Expr::zero() })
            .collect();
        InvariantFrame {
            frame: id.clone(),
            coframe: id,
            names: ("d".into(), "dz".into()),
        }
    }
}

/// A compact Hermitian manifold given on one chart.
#[derive(Clone, Debug)]
pub struct ManifoldModel {
    pub name: String,
    pub chart: ChartSpec,
    pub metric: MetricField,
    pub invariant_metric: bool,
    pub mode: DerivativeMode,
    pub frame: InvariantFrame,
    /// Complex coordinates random fields may depend on.
    pub field_coordinates: Vec<bool>,
}

impl ManifoldModel {
    /// A symbolic metric over a box with coordinate frames.
    pub fn from_entries(
        name: &str,
        n: usize,
        entries: Vec<Expr>,
        bounds: Vec<[f64; 2]>,
        periodicity: &str,
    ) -> Result<ManifoldModel, ModelError> {
        let chart = ChartSpec {
            n,
            bounds,
            periodicity: periodicity.to_string(),
        };
        chart.validate()?;
        Ok(ManifoldModel {
            name: name.to_string(),
            chart,
            metric: MetricField::symbolic(n, entries)?,
            invariant_metric: false,
            mode: DerivativeMode::Symbolic,
            frame: InvariantFrame::coordinate(n),
            field_coordinates: vec![true; n],
        })
    }

    pub fn dimension(&self) -> usize {
        self.chart.n
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> ManifoldModel {
        self.mode = mode;
        self
    }
}

/// `g`, `g⁻¹` and `det g` at one point.
#[derive(Clone, Debug)]
pub struct MetricSample {
    pub g: CMatrix,
    pub inverse: CMatrix,
    pub det: f64,
}

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const CONDITION_CAP: f64 = 1e12;

/// Checks and inverts a metric matrix.
pub fn metric_sample(g: CMatrix, point: &[Complex64]) -> Result<MetricSample, ModelError> {
    let defect = linalg::hermitian_defect(&g);
    let scale = g.iter().map(|x| x.norm()).fold(1.0, f64::max);
    if defect > HERMITIAN_TOL * scale || !defect.is_finite() {
        return Err(ModelError::NotHermitian {
            point: point.to_vec(),
            defect,
        });
    }
    let ev = linalg::hermitian_eigenvalues(&g);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if !(lo > 0.0) {
        return Err(ModelError::NotPositiveDefinite {
            point: point.to_vec(),
            min_eigenvalue: lo,
        });
    }
    if hi / lo > CONDITION_CAP {
        return Err(ModelError::Singular {
            point: point.to_vec(),
            condition: hi / lo,
        });
    }
    let l = linalg::cholesky_lower(&g).ok_or_else(|| ModelError::NotPositiveDefinite {
        point: point.to_vec(),
        min_eigenvalue: lo,
    })?;
    let det: f64 = (0..g.nrows()).map(|j| l[(j, j)].re.powi(2)).product();
    let inverse = g.clone().try_inverse().ok_or_else(|| ModelError::Singular {
        point: point.to_vec(),
        condition: f64::INFINITY,
    })?;
    Ok(MetricSample { g, inverse, det })
}

/// `g_{αβ̄}` at `p` with its inverse and determinant.
pub fn metric_at(model: &ManifoldModel, p: &[Complex64]) -> Result<MetricSample, ModelError> {
    let n = model.dimension();
    if p.len() != n {
        return Err(ExprError::DimensionMismatch {
            expected: n,
            got: p.len(),
        }
        .into());
    }
    let values = model.metric.values(p)?;
    metric_sample(linalg::from_rows(n, &values), p)
}

/// Manifold selection as it appears in a run config.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomMetric>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomMetric {
    pub n: usize,
    pub entries: Vec<Vec<String>>,
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodicity: Option<String>,
    #[serde(default)]
    pub invariant_metric: bool,
}

impl ManifoldConfig {
    pub fn builtin(name: &str) -> ManifoldConfig {
        ManifoldConfig {
            builtin: Some(name.to_string()),
            ..ManifoldConfig::default()
        }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> ManifoldConfig {
        self.params.insert(name.to_string(), value);
        self
    }
}

pub const BUILTINS: [&str; 3] = ["flat_torus", "iwasawa", "conformal_torus"];

/// Builds and validates a manifold; the result is in symbolic mode.
pub fn build_manifold(config: &ManifoldConfig) -> Result<ManifoldModel, ModelError> {
    let model = match (&config.builtin, &config.custom) {
        (Some(name), None) => builtin(name, &config.params)?,
        (None, Some(custom)) => {
            if !config.params.is_empty() {
                return Err(ModelError::Config(
                    "custom metrics take params inside the custom block".into(),
                ));
            }
            custom_manifold(custom)?
        }
        (Some(_), Some(_)) => {
            return Err(ModelError::Config(
                "manifold takes either builtin or custom, not both".into(),
            ))
        }
        (None, None) => return Err(ModelError::Config("manifold needs builtin or custom".into())),
    };
    probe(&model)?;
    Ok(model)
}

fn take_params(
    name: &str,
    params: &BTreeMap<String, f64>,
    allowed: &[&str],
) -> Result<(), ModelError> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ModelError::Config(format!(
                "{name} has no parameter '{key}'"
            )));
        }
    }
    Ok(())
}

fn parse_all(n: usize, rows: &[&[&str]]) -> Vec<Expr> {
    rows.iter()
        .flat_map(|r| r.iter().map(|s| parse_expr(s, n).expect("built-in expression")))
        .collect()
}

fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<ManifoldModel, ModelError> {
    match name {
        "flat_torus" => {
            take_params(name, params, &["n"])?;
            let n = params.get("n").copied().unwrap_or(2.0);
            if !(n >= 1.0 && n <= 16.0 && n.fract() == 0.0) {
                return Err(ModelError::Config(format!("flat_torus n must be an integer in 1..=16, got {n}")));
            }
            Ok(flat_torus(n as usize))
        }
        "iwasawa" => {
            take_params(name, params, &[])?;
            Ok(iwasawa())
        }
        "conformal_torus" => {
            take_params(name, params, &["eps", "epsilon"])?;
            let eps = params
                .get("eps")
                .or_else(|| params.get("epsilon"))
                .copied()
                .unwrap_or(0.1);
            if !eps.is_finite() {
                return Err(ModelError::Config("conformal_torus eps must be finite".into()));
            }
            Ok(conformal_torus(eps))
        }
        other => Err(ModelError::Config(format!(
            "unknown built-in manifold '{other}' (expected one of {})",
            BUILTINS.join(", ")
        ))),
    }
}

/// The flat torus `Cⁿ/(Z + iZ)ⁿ` with `g = I`.
pub fn flat_torus(n: usize) -> ManifoldModel {
    let entries: Vec<Expr> = (0..n * n)
        .map(|i| if i / n == i % n { Expr::one() } else { Expr::zero() })
        .collect();
    ManifoldModel {
        name: "flat_torus".into(),
        chart: ChartSpec::unit_box(n, "z ~ z + m + i·m' for integer vectors m, m'"),
        metric: MetricField::symbolic(n, entries).expect("identity metric"),
        invariant_metric: true,
        mode: DerivativeMode::Symbolic,
        frame: InvariantFrame::coordinate(n),
        field_coordinates: vec![true; n],
    }
}

/// The Iwasawa manifold: the complex Heisenberg group modulo its Gaussian
/// integer lattice, with the metric `Σ φ_i ⊗ φ̄_i` of the left-invariant
/// coframe `φ1 = dz1, φ2 = dz2, φ3 = dz3 − z1·dz2`.
pub fn iwasawa() -> ManifoldModel {
    let entries = parse_all(
        3,
        &[
            &["1", "0", "0"],
            &["0", "1 + abs2(z1)", "-z1"],
            &["0", "-conj(z1)", "1"],
        ],
    );
    let coframe = parse_all(3, &[&["1", "0", "0"], &["0", "1", "0"], &["0", "-z1", "1"]]);
    let frame = parse_all(3, &[&["1", "0", "0"], &["0", "1", "z1"], &["0", "0", "1"]]);
    ManifoldModel {
        name: "iwasawa".into(),
        chart: ChartSpec::unit_box(
            3,
            "(z1, z2, z3) ~ (z1 + a, z2 + b, z3 + c + a·z2) for Gaussian integers a, b, c",
        ),
        metric: MetricField::symbolic(3, entries).expect("iwasawa metric"),
        invariant_metric: true,
        mode: DerivativeMode::Symbolic,
        frame: InvariantFrame {
            frame,
            coframe,
            names: ("E".into(), "phi".into()),
        },
        field_coordinates: vec![true, true, false],
    }
}

/// The torus `C²/(Z + iZ)²` with `g = e^{2u}·I`, `u = ε·cos(2π·Re z1)`.
pub fn conformal_torus(eps: f64) -> ManifoldModel {
    let mut params = Params::new();
    params.insert("eps".into(), eps);
    let f = parse_expr("exp(2*eps*cos(2*pi*re(z1)))", 2)
        .and_then(|e| e.bind(&params))
        .expect("conformal factor");
    let entries = vec![f.clone(), Expr::zero(), Expr::zero(), f];
    ManifoldModel {
        name: "conformal_torus".into(),
        chart: ChartSpec::unit_box(2, "z ~ z + m + i·m' for integer vectors m, m'"),
        metric: MetricField::symbolic(2, entries).expect("conformal metric"),
        invariant_metric: false,
        mode: DerivativeMode::Symbolic,
        frame: InvariantFrame::coordinate(2),
        field_coordinates: vec![true; 2],
    }
}

fn custom_manifold(c: &CustomMetric) -> Result<ManifoldModel, ModelError> {
    let n = c.n;
    if n == 0 {
        return Err(ModelError::Config("custom metric needs n >= 1".into()));
    }
    if c.entries.len() != n || c.entries.iter().any(|r| r.len() != n) {
        return Err(ModelError::Config(format!("custom metric entries must be {n}×{n}")));
    }
    let mut exprs = Vec::with_capacity(n * n);
    for (row, r) in c.entries.iter().enumerate() {
        for (col, text) in r.iter().enumerate() {
            let e = parse_expr(text, n)
                .and_then(|e| e.bind(&c.params))
                .map_err(|source| ModelError::Entry { row, col, source })?;
            exprs.push(e);
        }
    }
    let mut model = ManifoldModel::from_entries(
        c.name.as_deref().unwrap_or("custom"),
        n,
        exprs,
        c.bounds.clone(),
        c.periodicity
            .as_deref()
            .unwrap_or("user-asserted identifications of the box"),
    )?;
    model.invariant_metric = c.invariant_metric;
    Ok(model)
}

pub const PROBE_POINTS: usize = 10;
const PROBE_SEED: u64 = 0x5eed;

/// Checks Hermitian symmetry and positivity at the box center and at
/// [`PROBE_POINTS`] seeded random points.
pub fn probe(model: &ManifoldModel) -> Result<(), ModelError> {
    model.chart.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut points = vec![model.chart.center()];
    points.extend((0..PROBE_POINTS).map(|_| model.chart.random_point(&mut rng)));
    for p in &points {
        metric_at(model, p)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn flat_torus_is_identity() {
        let m = build_manifold(&ManifoldConfig::builtin("flat_torus")).unwrap();
        let s = metric_at(&m, &[c(0.3, 0.7), c(0.1, 0.9)]).unwrap();
        assert_eq!(s.g, CMatrix::identity(2, 2));
        assert_eq!(s.det, 1.0);
    }

    #[test]
    fn iwasawa_entries_at_z1_equal_one() {
        let m = iwasawa();
        let s = metric_at(&m, &[c(1.0, 0.0), c(0.2, 0.4), c(0.5, 0.5)]).unwrap();
        assert_eq!(s.g[(1, 1)], c(2.0, 0.0));
        assert_eq!(s.g[(1, 2)], c(-1.0, 0.0));
    }

    #[test]
    fn iwasawa_determinant_is_one() {
        let m = iwasawa();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let p = m.chart.random_point(&mut rng);
            let s = metric_at(&m, &p).unwrap();
            assert!((s.det - 1.0).abs() < 1e-14);
            let residual = (&s.g * &s.inverse - CMatrix::identity(3, 3)).norm();
            assert!(residual < 1e-12);
        }
    }

    #[test]
    fn iwasawa_metric_is_the_coframe_gram_matrix() {
        // g_{αβ̄} = Σ_i φ_i(∂_α)·conj(φ_i(∂_β))
        let m = iwasawa();
        let p = [c(0.4, -0.3), c(0.1, 0.2), c(0.6, 0.7)];
        let s = metric_at(&m, &p).unwrap();
        let phi: Vec<Complex64> = m
            .frame
            .coframe
            .iter()
            .map(|e| crate::expr::eval_expr(e, &p, &Params::new()).unwrap())
            .collect();
        for a in 0..3 {
            for b in 0..3 {
                let gram: Complex64 = (0..3).map(|i| phi[i * 3 + a] * phi[i * 3 + b].conj()).sum();
                assert!((gram - s.g[(a, b)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn conformal_torus_at_origin() {
        let m = conformal_torus(0.1);
        let s = metric_at(&m, &[c(0.0, 0.3), c(0.5, 0.5)]).unwrap();
        let f = (0.2f64).exp();
        assert!((s.g[(0, 0)].re - f).abs() < 1e-15);
        assert!((s.g[(1, 1)].re - f).abs() < 1e-15);
        assert_eq!(s.g[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn custom_metric_errors() {
        let bad = |entries: Vec<Vec<&str>>| ManifoldConfig {
            custom: Some(CustomMetric {
                n: 2,
                entries: entries
                    .into_iter()
                    .map(|r| r.into_iter().map(String::from).collect())
                    .collect(),
                bounds: vec![[0.0, 1.0]; 4],
                params: BTreeMap::new(),
                name: None,
                periodicity: None,
                invariant_metric: false,
            }),
            ..ManifoldConfig::default()
        };
        assert!(matches!(
            build_manifold(&bad(vec![vec!["1", "z1"], vec!["z1", "1"]])),
            Err(ModelError::NotHermitian { .. })
        ));
        assert!(matches!(
            build_manifold(&bad(vec![vec!["1", "2"], vec!["2", "1"]])),
            Err(ModelError::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            build_manifold(&bad(vec![vec!["1", "w"], vec!["0", "1"]])),
            Err(ModelError::Entry { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            build_manifold(&bad(vec![vec!["1", "0"]])),
            Err(ModelError::Config(_))
        ));
        assert!(build_manifold(&bad(vec![vec!["2", "0.5*i"], vec!["-0.5*i", "1"]])).is_ok());
    }

    #[test]
    fn unknown_builtin_and_params() {
        assert!(matches!(
            build_manifold(&ManifoldConfig::builtin("hopf")),
            Err(ModelError::Config(_))
        ));
        assert!(matches!(
            build_manifold(&ManifoldConfig::builtin("iwasawa").with_param("n", 2.0)),
            Err(ModelError::Config(_))
        ));
    }

    #[test]
    fn modes_agree_on_metric_jets() {
        let m = iwasawa();
        let p = [c(0.4, -0.3), c(0.1, 0.2), c(0.6, 0.7)];
        let exact = m.metric.jets(&p, DerivativeMode::Symbolic).unwrap();
        let approx = m.metric.jets(&p, DerivativeMode::FdRichardson).unwrap();
        for (e, a) in exact.iter().zip(&approx) {
            for x in 0..6 {
                assert!((e.d(x) - a.d(x)).norm() < 1e-9);
                for y in 0..6 {
                    assert!((e.dd(x, y) - a.dd(x, y)).norm() < 1e-8);
                }
            }
        }
    }
}
