use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::{frame_norm2_bilinear, frame_norm2_vector, norm2_11, norm2_20};
use super::{Field, FieldKind, FieldPoint, FieldSpec};
use crate::error::ModelError;
use crate::geometry::frame::FrameData;
use crate::geometry::PointGeometry;
use crate::manifold::{quadrature_grid_on, ManifoldModel, QuadratureGrid, DEFAULT_POINT_CAP};

/// Grid over the coordinates either the metric or the field depends on.
pub fn field_grid(
    model: &ManifoldModel,
    fields: &[&Field],
    resolution: usize,
) -> Result<QuadratureGrid, ModelError> {
    let mut active = model.metric.active().to_vec();
    for f in fields {
        for (a, &b) in active.iter_mut().zip(f.active()) {
            *a |= b;
        }
    }
    quadrature_grid_on(model, resolution, &active, DEFAULT_POINT_CAP)
}

/// Residual norms of one field at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointResiduals {
    /// `‖D_α ω_{β̄}‖`
    pub analytic_form: f64,
    /// `‖D_α ξ_β‖`
    pub analytic_vector: f64,
    /// `‖D_α ω_{β̄} − D_{β̄} ω_α‖`
    pub closed_11: f64,
    /// `‖D_α ω_β − D_β ω_α + T^σ_{αβ} ω_σ‖`
    pub closed_20: f64,
    /// `|δω|`
    pub codifferential: f64,
    /// `|δ(Jω)|`
    pub codifferential_j: f64,
    /// `‖∇ω_ξ + (∇ω_ξ)ᵀ‖`
    pub killing: f64,
    /// `‖D_α ξ_β + D_β ξ_α‖`
    pub killing_holomorphic: f64,
    /// Norm of the blocks of `L_ξ D` that do not commute with `J`.
    pub complex_hermitian: f64,
    /// `‖L_ξ D‖`
    pub affine: f64,
}

impl PointResiduals {
    pub fn new(geo: &PointGeometry, fp: &FieldPoint) -> PointResiduals {
        let n = geo.dimension();
        let m = 2 * n;
        let theta_up = geo.lee_vector();
        let a = fp.a_matrix();
        let sym: Vec<Complex64> = (0..n * n)
            .map(|i| a[i] + a[(i % n) * n + i / n])
            .collect();
        let frame = FrameData::new(geo);
        let lie = fp.lie_connection(geo);
        let mut mixed = lie.clone();
        for c in 0..m {
            for x in 0..m {
                for b in 0..m {
                    if (b < n) == (c < n) {
                        mixed[(c * m + x) * m + b] = Complex64::new(0.0, 0.0);
                    }
                }
            }
        }
        PointResiduals {
            analytic_form: norm2_11(geo, &fp.b_matrix()).max(0.0).sqrt(),
            analytic_vector: norm2_20(geo, &a).max(0.0).sqrt(),
            closed_11: norm2_11(geo, &fp.d_omega_11()).max(0.0).sqrt(),
            closed_20: norm2_20(geo, &fp.d_omega_20(geo)).max(0.0).sqrt(),
            codifferential: fp.codifferential(geo, &theta_up).abs(),
            codifferential_j: fp.codifferential_j(geo, &theta_up).abs(),
            killing: frame_norm2_bilinear(&frame, &fp.killing_tensor(geo)).sqrt(),
            killing_holomorphic: norm2_20(geo, &sym).max(0.0).sqrt(),
            complex_hermitian: frame_norm2_vector(geo, &frame, &mixed).max(0.0).sqrt(),
            affine: frame_norm2_vector(geo, &frame, &lie).max(0.0).sqrt(),
        }
    }

    fn values(&self) -> [f64; 10] {
        [
            self.analytic_form,
            self.analytic_vector,
            self.closed_11,
            self.closed_20,
            self.codifferential,
            self.codifferential_j,
            self.killing,
            self.killing_holomorphic,
            self.complex_hermitian,
            self.affine,
        ]
    }
}

/// Sup and quadrature-L² norm of a residual over a grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub sup: f64,
    /// `(Σ wᵢ rᵢ² / Σ wᵢ)^{1/2}`
    pub l2: f64,
}

impl Residual {
    pub fn from_values(grid: &QuadratureGrid, values: &[f64]) -> Residual {
        let squares: Vec<f64> = values.iter().map(|r| r * r).collect();
        Residual {
            sup: values.iter().copied().fold(0.0, f64::max),
            l2: grid.mean(&squares).sqrt(),
        }
    }
}

/// Grid norms of every residual in [`PointResiduals`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualSet {
    pub analytic_form: Residual,
    pub analytic_vector: Residual,
    pub closed_11: Residual,
    pub closed_20: Residual,
    pub codifferential: Residual,
    pub codifferential_j: Residual,
    pub killing: Residual,
    pub killing_holomorphic: Residual,
    pub complex_hermitian: Residual,
    pub affine: Residual,
}

impl ResidualSet {
    pub fn from_points(grid: &QuadratureGrid, points: &[PointResiduals]) -> ResidualSet {
        let column = |k: usize| {
            let values: Vec<f64> = points.iter().map(|p| p.values()[k]).collect();
            Residual::from_values(grid, &values)
        };
        ResidualSet {
            analytic_form: column(0),
            analytic_vector: column(1),
            closed_11: column(2),
            closed_20: column(3),
            codifferential: column(4),
            codifferential_j: column(5),
            killing: column(6),
            killing_holomorphic: column(7),
            complex_hermitian: column(8),
            affine: column(9),
        }
    }

    /// The defining block for the field's kind: `D_α ω_{β̄}` for forms,
    /// `D_α ξ_β` for vector fields.
    pub fn analytic(&self, kind: FieldKind) -> Residual {
        match kind {
            FieldKind::Form => self.analytic_form,
            FieldKind::Vector => self.analytic_vector,
        }
    }

    pub fn harmonic(&self) -> f64 {
        self.closed_11
            .sup
            .max(self.closed_20.sup)
            .max(self.codifferential.sup)
    }
}

/// Geometry and field derivatives at every grid point, in grid order.
pub fn field_points<T, F>(
    model: &ManifoldModel,
    field: &Field,
    grid: &QuadratureGrid,
    f: F,
) -> Result<Vec<T>, ModelError>
where
    T: Send,
    F: Fn(&PointGeometry, &FieldPoint) -> Result<T, ModelError> + Sync,
{
    grid.map(|p| {
        let geo = PointGeometry::new(model, p)?;
        let fp = FieldPoint::new(&geo, field.kind, field.jets(p, model.mode)?);
        f(&geo, &fp)
    })
}

pub fn residual_set(
    model: &ManifoldModel,
    field: &Field,
    grid: &QuadratureGrid,
) -> Result<ResidualSet, ModelError> {
    let points = field_points(model, field, grid, |geo, fp| Ok(PointResiduals::new(geo, fp)))?;
    Ok(ResidualSet::from_points(grid, &points))
}

pub fn analytic_residual(
    model: &ManifoldModel,
    field: &Field,
    grid: &QuadratureGrid,
) -> Result<Residual, ModelError> {
    Ok(residual_set(model, field, grid)?.analytic(field.kind))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicResidual {
    pub closed_11: Residual,
    pub closed_20: Residual,
    pub codifferential: Residual,
    pub codifferential_j: Residual,
}

pub fn harmonic_residual(
    model: &ManifoldModel,
    field: &Field,
    grid: &QuadratureGrid,
) -> Result<HarmonicResidual, ModelError> {
    let r = residual_set(model, field, grid)?;
    Ok(HarmonicResidual {
        closed_11: r.closed_11,
        closed_20: r.closed_20,
        codifferential: r.codifferential,
        codifferential_j: r.codifferential_j,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KillingResidual {
    pub full: Residual,
    pub holomorphic: Residual,
}

pub fn killing_residual(
    model: &ManifoldModel,
    field: &Field,
    grid: &QuadratureGrid,
) -> Result<KillingResidual, ModelError> {
    let r = residual_set(model, field, grid)?;
    Ok(KillingResidual {
        full: r.killing,
        holomorphic: r.killing_holomorphic,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieResidual {
    pub complex_hermitian: Residual,
    pub affine: Residual,
}

pub fn lie_connection_residual(
    model: &ManifoldModel,
    field: &Field,
    grid: &QuadratureGrid,
) -> Result<LieResidual, ModelError> {
    let r = residual_set(model, field, grid)?;
    Ok(LieResidual {
        complex_hermitian: r.complex_hermitian,
        affine: r.affine,
    })
}

/// Residuals of one field with verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldAnalysis {
    pub field: String,
    pub kind: FieldKind,
    pub spec: FieldSpec,
    pub points: usize,
    pub tolerance: f64,
    /// Tolerance of the `L_ξD` residuals.
    pub lie_tolerance: f64,
    pub residuals: ResidualSet,
    pub analytic: bool,
    pub harmonic: bool,
    pub killing: bool,
    pub killing_holomorphic: bool,
    pub complex_hermitian: bool,
    pub affine: bool,
}

impl FieldAnalysis {
    pub fn new(
        field: &Field,
        grid: &QuadratureGrid,
        residuals: ResidualSet,
        tolerance: f64,
        lie_tolerance: f64,
    ) -> Self {
        FieldAnalysis {
            field: field.name.clone(),
            kind: field.kind,
            spec: field.spec.clone(),
            points: grid.len(),
            tolerance,
            lie_tolerance,
            residuals,
            analytic: residuals.analytic(field.kind).sup <= tolerance,
            harmonic: residuals.harmonic() <= tolerance,
            killing: residuals.killing.sup <= tolerance,
            killing_holomorphic: residuals.killing_holomorphic.sup <= tolerance,
            complex_hermitian: residuals.complex_hermitian.sup <= lie_tolerance,
            affine: residuals.affine.sup <= lie_tolerance,
        }
    }
}

pub fn analyze_field(
    model: &ManifoldModel,
    field: &Field,
    grid: &QuadratureGrid,
    tolerance: f64,
    lie_tolerance: f64,
) -> Result<FieldAnalysis, ModelError> {
    let residuals = residual_set(model, field, grid)?;
    Ok(FieldAnalysis::new(field, grid, residuals, tolerance, lie_tolerance))
}
