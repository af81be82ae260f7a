use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{laplacians, PointGeometry};
use crate::error::ModelError;
use crate::expr::{parse_expr, DerivativeTable, Expr};
use crate::manifold::{quadrature_grid_on, ManifoldModel, QuadratureGrid, DEFAULT_POINT_CAP};

/// Five real trigonometric functions of `z1` and `z2` (or `z1` alone when
/// `n = 1`), periodic on every built-in box.
pub fn test_functions(n: usize) -> Vec<Expr> {
    let b = if n >= 2 { 2 } else { 1 };
    let texts = [
        "cos(2*pi*(re(z1) + im(z1)))".to_string(),
        format!("sin(2*pi*(im(z1) - re(z{b})))"),
        format!("cos(2*pi*(re(z{b}) + 2*im(z{b})))"),
        format!("sin(2*pi*re(z1))*cos(2*pi*im(z{b}))"),
        format!("cos(2*pi*(re(z1) + im(z1) + im(z{b})))"),
    ];
    texts
        .iter()
        .map(|t| parse_expr(t, n).expect("test function"))
        .collect()
}

/// Grid over the coordinates of the metric and of the test functions.
pub fn balanced_grid(model: &ManifoldModel, resolution: usize) -> Result<QuadratureGrid, ModelError> {
    let mut active = model.metric.active().to_vec();
    for f in test_functions(model.dimension()) {
        for k in f.coordinates() {
            active[k] = true;
        }
    }
    quadrature_grid_on(model, resolution, &active, DEFAULT_POINT_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalancedTolerances {
    /// Bound on `|θ|`, `|δΩ|` and the `dΩ` trace.
    pub form: f64,
    /// Bound on the Laplacian deviation.
    pub laplacian: f64,
}

/// Grid maxima of the four balanced conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalancedReport {
    pub points: usize,
    /// `max_α |Σ g^{αβ̄} dΩ(∂_γ, ∂_α, ∂_β̄)|`
    pub d_omega_trace: f64,
    /// `max |(δΩ)_α|`
    pub delta_omega: f64,
    /// `max |θ_α|`
    pub theta: f64,
    /// Real coordinates of the point attaining `theta`.
    pub theta_argmax: Vec<f64>,
    /// `max |Δ_{∂̄}f − ½Δ_d f|` over the test functions.
    pub laplacian_deviation: f64,
    pub tolerances: BalancedTolerances,
    pub balanced: bool,
}

struct PointReport {
    trace: f64,
    delta: f64,
    theta: f64,
    laplacian: f64,
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Evaluates conditions i)–iv) on the grid.
pub fn is_balanced(
    model: &ManifoldModel,
    grid: &QuadratureGrid,
    tolerances: BalancedTolerances,
) -> Result<BalancedReport, ModelError> {
    let n = model.dimension();
    let table = DerivativeTable::new(n, test_functions(n));
    let fd = model.mode.fd_options();
    let per_point = grid.map(|p| {
        let geo = PointGeometry::new(model, p)?;
        let jets = match &fd {
            None => table.jets(p)?,
            Some(opts) => table.fd_jets(p, opts)?,
        };
        let laplacian = jets
            .iter()
            .map(|f| laplacians(&geo, f).balanced_deviation())
            .fold(0.0, f64::max);
        Ok(PointReport {
            trace: max_abs(&geo.d_omega_trace()),
            delta: max_abs(&geo.delta_omega_bar()),
            theta: max_abs(&geo.lee_form()),
            laplacian,
        })
    })?;
    let mut report = BalancedReport {
        points: grid.len(),
        d_omega_trace: 0.0,
        delta_omega: 0.0,
        theta: 0.0,
        theta_argmax: Vec::new(),
        laplacian_deviation: 0.0,
        tolerances,
        balanced: false,
    };
    let mut argmax = 0;
    for (i, r) in per_point.iter().enumerate() {
        report.d_omega_trace = report.d_omega_trace.max(r.trace);
        report.delta_omega = report.delta_omega.max(r.delta);
        if r.theta > report.theta {
            report.theta = r.theta;
            argmax = i;
        }
        report.laplacian_deviation = report.laplacian_deviation.max(r.laplacian);
    }
    report.theta_argmax = grid.points[argmax]
        .iter()
        .flat_map(|z| [z.re, z.im])
        .collect();
    report.balanced = report.d_omega_trace <= tolerances.form
        && report.delta_omega <= tolerances.form
        && report.theta <= tolerances.form
        && report.laplacian_deviation <= tolerances.laplacian;
    Ok(report)
}
