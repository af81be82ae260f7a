use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::geometry::{CurvatureTensors, PointGeometry};
use crate::linalg::{self, CMatrix};
use crate::manifold::{ManifoldModel, QuadratureGrid};

/// Hermitian (1,1) tensors whose sign is scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorId {
    H,
    K,
    Kstar,
    KMinusHalfT,
    /// The Chern form, scanned through `k`.
    Kappa,
    S,
    T,
}

impl TensorId {
    pub const ALL: [TensorId; 7] = [
        TensorId::H,
        TensorId::K,
        TensorId::Kstar,
        TensorId::KMinusHalfT,
        TensorId::Kappa,
        TensorId::S,
        TensorId::T,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TensorId::H => "h",
            TensorId::K => "k",
            TensorId::Kstar => "kstar",
            TensorId::KMinusHalfT => "k_minus_half_t",
            TensorId::Kappa => "kappa",
            TensorId::S => "s",
            TensorId::T => "t",
        }
    }

    pub fn select(self, curv: &CurvatureTensors) -> CMatrix {
        match self {
            TensorId::H => curv.h.clone(),
            TensorId::K | TensorId::Kappa => curv.k.clone(),
            TensorId::Kstar => curv.kstar.clone(),
            TensorId::KMinusHalfT => curv.k_minus_half_t(),
            TensorId::S => curv.s.clone(),
            TensorId::T => curv.t.clone(),
        }
    }
}

impl fmt::Display for TensorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TensorId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        TensorId::ALL
            .into_iter()
            .find(|t| t.as_str() == lower)
            .ok_or_else(|| ModelError::Config(format!("unknown tensor '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Definiteness {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "PSD")]
    Psd,
    #[serde(rename = "PD")]
    Pd,
    #[serde(rename = "NSD")]
    Nsd,
    #[serde(rename = "ND")]
    Nd,
    #[serde(rename = "indefinite")]
    Indefinite,
}

impl Definiteness {
    /// Classifies an eigenvalue envelope with zero-tolerance `tol`.
    pub fn classify(min: f64, max: f64, tol: f64) -> Definiteness {
        if min.abs() <= tol && max.abs() <= tol {
            Definiteness::Zero
        } else if min > tol {
            Definiteness::Pd
        } else if min >= -tol {
            Definiteness::Psd
        } else if max < -tol {
            Definiteness::Nd
        } else if max <= tol {
            Definiteness::Nsd
        } else {
            Definiteness::Indefinite
        }
    }

    pub fn is_psd(self) -> bool {
        matches!(self, Definiteness::Zero | Definiteness::Psd | Definiteness::Pd)
    }

    pub fn is_nsd(self) -> bool {
        matches!(self, Definiteness::Zero | Definiteness::Nsd | Definiteness::Nd)
    }

    pub fn is_pd(self) -> bool {
        self == Definiteness::Pd
    }

    pub fn is_nd(self) -> bool {
        self == Definiteness::Nd
    }
}

impl fmt::Display for Definiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Definiteness::Zero => "zero",
            Definiteness::Psd => "PSD",
            Definiteness::Pd => "PD",
            Definiteness::Nsd => "NSD",
            Definiteness::Nd => "ND",
            Definiteness::Indefinite => "indefinite",
        };
        f.write_str(s)
    }
}

/// Sign of a tensor over the sampled points. Eigenvalues are taken relative
/// to the metric, i.e. in a unitary frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefinitenessVerdict {
    pub tensor: TensorId,
    pub classification: Definiteness,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Largest pointwise smallest eigenvalue; positive beyond the tolerance
    /// when the tensor is positive definite at some sampled point.
    pub best_min_eigenvalue: f64,
    pub points: usize,
    pub tolerance: f64,
    pub sampling: String,
}

impl DefinitenessVerdict {
    pub fn positive_somewhere(&self) -> bool {
        self.best_min_eigenvalue > self.tolerance
    }
}

/// Pointwise relative eigenvalues of every tensor in `TensorId::ALL`.
pub fn eigenvalue_table(geo: &PointGeometry, curv: &CurvatureTensors) -> Vec<Vec<f64>> {
    TensorId::ALL
        .iter()
        .map(|t| {
            linalg::relative_eigenvalues(&geo.sample().g, &t.select(curv))
                .expect("positive definite metric")
        })
        .collect()
}

/// Folds per-point eigenvalue lists into a verdict.
pub fn verdict_from_eigenvalues(
    tensor: TensorId,
    per_point: &[Vec<f64>],
    tolerance: f64,
) -> DefinitenessVerdict {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut best_min = f64::NEG_INFINITY;
    for ev in per_point {
        let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        min = min.min(lo);
        max = max.max(hi);
        best_min = best_min.max(lo);
    }
    DefinitenessVerdict {
        tensor,
        classification: Definiteness::classify(min, max, tolerance),
        min_eigenvalue: min,
        max_eigenvalue: max,
        best_min_eigenvalue: best_min,
        points: per_point.len(),
        tolerance,
        sampling: "grid-sampled".into(),
    }
}

pub fn definiteness_scan(
    model: &ManifoldModel,
    tensor: TensorId,
    grid: &QuadratureGrid,
    tolerance: f64,
) -> Result<DefinitenessVerdict, ModelError> {
    let per_point = grid.map(|p| {
        let geo = PointGeometry::new(model, p)?;
        let m = tensor.select(&geo.curvature());
        Ok(linalg::relative_eigenvalues(&geo.sample().g, &m).expect("positive definite metric"))
    })?;
    Ok(verdict_from_eigenvalues(tensor, &per_point, tolerance))
}
