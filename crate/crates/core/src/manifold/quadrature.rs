use num_complex::Complex64;
use rayon::prelude::*;

use super::{metric_at, ManifoldModel};
use crate::error::ModelError;

pub const DEFAULT_POINT_CAP: usize = 1 << 22;

/// Tensor-product midpoint grid over the chart box.
///
/// Only the real axes of `active` complex coordinates are subdivided; every
/// other axis is represented by its midpoint with the full interval length as
/// weight, which is exact for integrands independent of that coordinate.
/// Points are ordered lexicographically in the real axes
/// `Re z1, Im z1, Re z2, …` with the last axis varying fastest.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub resolution: usize,
    pub active: Vec<bool>,
    pub points: Vec<Vec<Complex64>>,
    /// Cell volume times `det g` at the point.
    pub weights: Vec<f64>,
    pub cell_volume: f64,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Evaluates `f` at every point in parallel; results keep grid order and
    /// the first failing point (in grid order) wins.
    pub fn map<T, F>(&self, f: F) -> Result<Vec<T>, ModelError>
    where
        T: Send,
        F: Fn(&[Complex64]) -> Result<T, ModelError> + Sync,
    {
        self.points.par_iter().map(|p| f(p)).collect()
    }

    /// `Σ wᵢ·vᵢ` summed in grid order.
    pub fn weighted_sum(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.weights.len(), "one value per grid point");
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// `Σ wᵢ·vᵢ / Σ wᵢ`.
    pub fn mean(&self, values: &[f64]) -> f64 {
        self.weighted_sum(values) / self.total_weight()
    }
}

/// Grid over every coordinate of the chart.
pub fn quadrature_grid(model: &ManifoldModel, resolution: usize) -> Result<QuadratureGrid, ModelError> {
    quadrature_grid_on(model, resolution, &vec![true; model.dimension()], DEFAULT_POINT_CAP)
}

/// Grid subdividing only the complex coordinates flagged in `active`.
pub fn quadrature_grid_on(
    model: &ManifoldModel,
    resolution: usize,
    active: &[bool],
    cap: usize,
) -> Result<QuadratureGrid, ModelError> {
    if resolution < 2 {
        return Err(ModelError::Resolution(resolution));
    }
    let chart = &model.chart;
    chart.validate()?;
    let n = chart.n;
    if active.len() != n {
        return Err(ModelError::Config(format!(
            "active mask has {} entries for a chart of dimension {n}",
            active.len()
        )));
    }
    let axes: Vec<usize> = (0..2 * n).filter(|u| active[u / 2]).collect();
    let requested = (resolution as u128).saturating_pow(axes.len() as u32);
    if requested > cap as u128 {
        return Err(ModelError::GridTooLarge { requested, cap });
    }
    let count = requested as usize;

    let mut cell_volume = 1.0;
    for (u, [lo, hi]) in chart.bounds.iter().enumerate() {
        let len = hi - lo;
        cell_volume *= if active[u / 2] { len / resolution as f64 } else { len };
    }
    let base: Vec<f64> = chart.bounds.iter().map(|[lo, hi]| 0.5 * (lo + hi)).collect();

    let mut points = Vec::with_capacity(count);
    let mut x = base.clone();
    for index in 0..count {
        let mut rest = index;
        for &u in axes.iter().rev() {
            let i = rest % resolution;
            rest /= resolution;
            let [lo, hi] = chart.bounds[u];
            x[u] = lo + (hi - lo) * (i as f64 + 0.5) / resolution as f64;
        }
        points.push(x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect::<Vec<_>>());
    }

    let dets: Vec<f64> = points
        .par_iter()
        .map(|p| metric_at(model, p).map(|s| s.det))
        .collect::<Result<_, _>>()?;
    let weights = dets.iter().map(|d| cell_volume * d).collect();
    Ok(QuadratureGrid {
        resolution,
        active: active.to_vec(),
        points,
        weights,
        cell_volume,
    })
}

/// `Σ wᵢ·f(pᵢ)` over the grid in grid order.
pub fn integrate<F>(grid: &QuadratureGrid, f: F) -> Result<f64, ModelError>
where
    F: Fn(&[Complex64]) -> Result<f64, ModelError> + Sync,
{
    let values = grid.map(|p| {
        let v = f(p)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ModelError::NonFinite {
                point: p.to_vec(),
                value: v,
            })
        }
    })?;
    Ok(grid.weighted_sum(&values))
}
