//! Residuals and verdicts for the integral and pointwise identities of
//! balanced Hermitian geometry.
//!
//! Every case is evaluated on a quadrature grid from integrands assembled
//! pointwise in [`PointTerms`]; integrals are reported as `|Σ wᵢfᵢ| / Σ wᵢ`,
//! i.e. after normalizing the volume to 1.

mod definiteness;
mod terms;
mod theorems;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use definiteness::{
    definiteness_scan, eigenvalue_table, verdict_from_eigenvalues, Definiteness,
    DefinitenessVerdict, TensorId,
};
pub use terms::{PointTerms, Sides};
pub use theorems::{theorem_report, TheoremCheck, TheoremId, TheoremReport, TheoremStatus};

use crate::error::ModelError;
use crate::fields::{field_grid, field_points, Field, FieldKind, PointResiduals, ResidualSet};
use crate::geometry::{balanced_grid, is_balanced, BalancedReport, BalancedTolerances, PointGeometry};
use crate::manifold::{DerivativeMode, ManifoldModel, QuadratureGrid};

/// Stable identifiers of the verification cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "VEC7")]
    Vec7,
    #[serde(rename = "RICCI7S")]
    Ricci7s,
    #[serde(rename = "PROP32")]
    Prop32,
    #[serde(rename = "INT46")]
    Int46,
    #[serde(rename = "KILL12")]
    Kill12,
    #[serde(rename = "KILL14")]
    Kill14,
    #[serde(rename = "FORM47")]
    Form47,
    #[serde(rename = "FORM48")]
    Form48,
    #[serde(rename = "BIANCHI410")]
    Bianchi410,
    #[serde(rename = "LEM43")]
    Lem43,
    #[serde(rename = "LEM44")]
    Lem44,
    #[serde(rename = "LEM43P")]
    Lem43p,
    #[serde(rename = "TH33")]
    Th33,
    #[serde(rename = "KS_EQ")]
    KsEq,
    #[serde(rename = "LAP_IV")]
    LapIv,
}

/// How a case turns grid data into a residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    /// `|∫ f dV| / vol`
    Integral,
    /// Largest relative difference of two sides over the grid.
    Pointwise,
    /// Agreement of two or more residual tests.
    Equivalence,
}

impl CaseId {
    pub const ALL: [CaseId; 15] = [
        CaseId::Vec7,
        CaseId::Ricci7s,
        CaseId::Prop32,
        CaseId::Int46,
        CaseId::Kill12,
        CaseId::Kill14,
        CaseId::Form47,
        CaseId::Form48,
        CaseId::Bianchi410,
        CaseId::Lem43,
        CaseId::Lem44,
        CaseId::Lem43p,
        CaseId::Th33,
        CaseId::KsEq,
        CaseId::LapIv,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Vec7 => "VEC7",
            CaseId::Ricci7s => "RICCI7S",
            CaseId::Prop32 => "PROP32",
            CaseId::Int46 => "INT46",
            CaseId::Kill12 => "KILL12",
            CaseId::Kill14 => "KILL14",
            CaseId::Form47 => "FORM47",
            CaseId::Form48 => "FORM48",
            CaseId::Bianchi410 => "BIANCHI410",
            CaseId::Lem43 => "LEM43",
            CaseId::Lem44 => "LEM44",
            CaseId::Lem43p => "LEM43P",
            CaseId::Th33 => "TH33",
            CaseId::KsEq => "KS_EQ",
            CaseId::LapIv => "LAP_IV",
        }
    }

    /// Cases that hold only on balanced manifolds and are refused otherwise.
    pub fn requires_balanced(self) -> bool {
        !matches!(
            self,
            CaseId::Vec7 | CaseId::Ricci7s | CaseId::Bianchi410 | CaseId::LapIv
        )
    }

    /// Cases evaluated once per field rather than once per manifold.
    pub fn needs_field(self) -> bool {
        !matches!(self, CaseId::KsEq | CaseId::LapIv)
    }

    pub fn kind(self) -> CaseKind {
        match self {
            CaseId::Ricci7s | CaseId::Bianchi410 | CaseId::KsEq => CaseKind::Pointwise,
            CaseId::Prop32 | CaseId::Th33 | CaseId::LapIv => CaseKind::Equivalence,
            _ => CaseKind::Integral,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.to_ascii_uppercase();
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == upper)
            .ok_or_else(|| {
                let known: Vec<&str> = CaseId::ALL.iter().map(|c| c.as_str()).collect();
                ModelError::Config(format!("unknown case '{s}' (known: {})", known.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// The manifold lacks the structure the case needs.
    Inapplicable,
    /// The field does not satisfy the case's precondition.
    HypothesisNotMet,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inapplicable => "INAPPLICABLE",
            Verdict::HypothesisNotMet => "HYPOTHESIS_NOT_MET",
        })
    }
}

/// Thresholds used by verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative two-sides difference of pointwise identities.
    pub pointwise: f64,
    /// Volume-normalized integrals.
    pub integral: f64,
    /// Sup of field residuals (analytic, harmonic, Killing).
    pub residual: f64,
    /// Sup of `L_ξD` residuals, which carry second derivatives of the field.
    pub lie: f64,
    /// Balanced form conditions.
    pub balanced: f64,
    /// Balanced Laplacian condition.
    pub laplacian: f64,
    /// Zero band of definiteness classification.
    pub zero: f64,
}

impl Tolerances {
    pub const NAMES: [&'static str; 7] = [
        "pointwise",
        "integral",
        "residual",
        "lie",
        "balanced",
        "laplacian",
        "zero",
    ];

    pub fn for_mode(mode: DerivativeMode) -> Tolerances {
        if mode.is_symbolic() {
            Tolerances {
                pointwise: 1e-9,
                integral: 1e-8,
                residual: 1e-8,
                lie: 1e-6,
                balanced: 1e-10,
                laplacian: 1e-9,
                zero: 1e-9,
            }
        } else {
            Tolerances {
                pointwise: 1e-6,
                integral: 1e-6,
                residual: 1e-6,
                lie: 1e-4,
                balanced: 1e-6,
                laplacian: 1e-5,
                zero: 1e-6,
            }
        }
    }

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "pointwise" => &mut self.pointwise,
            "integral" => &mut self.integral,
            "residual" => &mut self.residual,
            "lie" => &mut self.lie,
            "balanced" => &mut self.balanced,
            "laplacian" => &mut self.laplacian,
            "zero" => &mut self.zero,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ModelError> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(ModelError::Config(format!(
                "tolerance {name} must be a finite non-negative number, got {value}"
            )));
        }
        let slot = self.slot(name).ok_or_else(|| {
            ModelError::Config(format!(
                "unknown tolerance '{name}' (known: {})",
                Tolerances::NAMES.join(", ")
            ))
        })?;
        *slot = value;
        Ok(())
    }

    pub fn balanced_tolerances(&self) -> BalancedTolerances {
        BalancedTolerances {
            form: self.balanced,
            laplacian: self.laplacian,
        }
    }
}

/// Outcome of one case on one field (or on the manifold).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub id: CaseId,
    pub field: Option<String>,
    pub verdict: Verdict,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub detail: String,
}

/// Per-point integrands of one field, with optional full residuals.
#[derive(Clone, Debug)]
pub struct FieldTerms {
    pub field: String,
    pub kind: FieldKind,
    pub grid: QuadratureGrid,
    pub terms: Vec<PointTerms>,
    pub residuals: Option<ResidualSet>,
}

impl FieldTerms {
    /// Evaluates [`PointTerms`] on the field's grid; `full` also computes the
    /// Killing and `L_ξD` residuals.
    pub fn new(
        model: &ManifoldModel,
        field: &Field,
        resolution: usize,
        full: bool,
    ) -> Result<FieldTerms, ModelError> {
        let grid = field_grid(model, &[field], resolution)?;
        let pairs = field_points(model, field, &grid, |geo, fp| {
            let terms = PointTerms::new(geo, &geo.curvature(), fp, &geo.lee_vector());
            let residuals = full.then(|| PointResiduals::new(geo, fp));
            Ok((terms, residuals))
        })?;
        let (terms, residuals): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let residuals = if full {
            let points: Vec<PointResiduals> = residuals.into_iter().flatten().collect();
            Some(ResidualSet::from_points(&grid, &points))
        } else {
            None
        };
        Ok(FieldTerms {
            field: field.name.clone(),
            kind: field.kind,
            grid,
            terms,
            residuals,
        })
    }

    /// `Σ wᵢ f(tᵢ) / Σ wᵢ`
    pub fn mean<F: Fn(&PointTerms) -> f64>(&self, f: F) -> f64 {
        let values: Vec<f64> = self.terms.iter().map(f).collect();
        self.grid.mean(&values)
    }

    /// `max |f(tᵢ)|`
    pub fn sup<F: Fn(&PointTerms) -> f64>(&self, f: F) -> f64 {
        self.terms.iter().map(|t| f(t).abs()).fold(0.0, f64::max)
    }

    pub fn analytic_form(&self) -> f64 {
        self.sup(|t| t.analytic_form)
    }

    pub fn analytic_vector(&self) -> f64 {
        self.sup(|t| t.analytic_vector)
    }

    pub fn analytic(&self) -> f64 {
        match self.kind {
            FieldKind::Form => self.analytic_form(),
            FieldKind::Vector => self.analytic_vector(),
        }
    }

    /// Largest of the `dω` blocks and `δω`.
    pub fn harmonic(&self) -> f64 {
        self.sup(|t| t.closed_11)
            .max(self.sup(|t| t.closed_20))
            .max(self.sup(|t| t.delta))
    }

    pub fn killing_holomorphic(&self) -> f64 {
        self.sup(|t| t.killing_holomorphic)
    }

    pub fn norm(&self) -> f64 {
        self.sup(|t| t.norm2).sqrt()
    }

    /// `∫ H_{αβ̄} ω^α ω̄^β dV / vol`, half the real form `H(ω#, ω#)`.
    pub fn h_pairing(&self) -> f64 {
        0.5 * self.mean(|t| t.h)
    }
}

/// Manifold-level data shared by every case.
#[derive(Clone, Debug)]
pub struct ManifoldScan {
    pub grid: QuadratureGrid,
    pub balanced: BalancedReport,
    /// Relative eigenvalues per point, one list per [`TensorId::ALL`] entry.
    pub eigenvalues: Vec<Vec<Vec<f64>>>,
    /// `max |k − s| / max(1, |k|, |s|)` over the grid.
    pub k_minus_s: f64,
}

impl ManifoldScan {
    pub fn new(
        model: &ManifoldModel,
        resolution: usize,
        tolerances: &Tolerances,
    ) -> Result<ManifoldScan, ModelError> {
        let grid = balanced_grid(model, resolution)?;
        let balanced = is_balanced(model, &grid, tolerances.balanced_tolerances())?;
        let per_point = grid.map(|p| {
            let geo = PointGeometry::new(model, p)?;
            let curv = geo.curvature();
            let mut diff: f64 = 0.0;
            let mut scale: f64 = 1.0;
            for (k, s) in curv.k.iter().zip(curv.s.iter()) {
                diff = diff.max((k - s).norm());
                scale = scale.max(k.norm()).max(s.norm());
            }
            Ok((eigenvalue_table(&geo, &curv), diff / scale))
        })?;
        let mut eigenvalues = vec![Vec::with_capacity(grid.len()); TensorId::ALL.len()];
        let mut k_minus_s: f64 = 0.0;
        for (table, ks) in per_point {
            for (slot, ev) in eigenvalues.iter_mut().zip(table) {
                slot.push(ev);
            }
            k_minus_s = k_minus_s.max(ks);
        }
        Ok(ManifoldScan {
            grid,
            balanced,
            eigenvalues,
            k_minus_s,
        })
    }

    pub fn definiteness(&self, tensor: TensorId, tolerance: f64) -> DefinitenessVerdict {
        let i = TensorId::ALL.iter().position(|t| *t == tensor).expect("listed tensor");
        verdict_from_eigenvalues(tensor, &self.eigenvalues[i], tolerance)
    }
}

fn verdict_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Evaluates a manifold-level case (`KS_EQ`, `LAP_IV`).
pub fn verify_manifold_case(case: CaseId, scan: &ManifoldScan, tol: &Tolerances) -> CaseRecord {
    let balanced = &scan.balanced;
    let record = |verdict, residual, tolerance, detail: String| CaseRecord {
        id: case,
        field: None,
        verdict,
        residual,
        tolerance,
        detail,
    };
    if case.requires_balanced() && !balanced.balanced {
        return record(Verdict::Inapplicable, None, tol.pointwise, "manifold is not balanced".into());
    }
    match case {
        CaseId::KsEq => record(
            verdict_if(scan.k_minus_s <= tol.pointwise),
            Some(scan.k_minus_s),
            tol.pointwise,
            "max |k − s| relative".into(),
        ),
        CaseId::LapIv => {
            let forms = balanced.d_omega_trace <= tol.balanced
                && balanced.delta_omega <= tol.balanced
                && balanced.theta <= tol.balanced;
            let laplacian = balanced.laplacian_deviation <= tol.laplacian;
            record(
                verdict_if(forms == laplacian),
                Some(balanced.laplacian_deviation),
                tol.laplacian,
                format!(
                    "Laplacian identity holds: {}; form conditions hold: {}",
                    yes_no(laplacian),
                    yes_no(forms)
                ),
            )
        }
        _ => panic!("{case} is evaluated per field"),
    }
}

/// Evaluates a per-field case on precomputed terms.
///
/// `TH33` needs `ft.residuals`; without them it reports a failure.
pub fn verify_case(case: CaseId, ft: &FieldTerms, balanced: bool, tol: &Tolerances) -> CaseRecord {
    let mut record = CaseRecord {
        id: case,
        field: Some(ft.field.clone()),
        verdict: Verdict::Pass,
        residual: None,
        tolerance: tol.integral,
        detail: String::new(),
    };
    if case.requires_balanced() && !balanced {
        record.verdict = Verdict::Inapplicable;
        record.detail = "manifold is not balanced".into();
        return record;
    }
    let integral = |f: fn(&PointTerms) -> f64| ft.mean(f).abs();
    let precondition = |name: &str, residual: f64| {
        (residual <= tol.residual, format!("{name} residual {residual:.3e}"))
    };
    let (residual, hypothesis) = match case {
        CaseId::Vec7 => (integral(|t| t.vec7), None),
        CaseId::Int46 => (integral(|t| t.int46), None),
        CaseId::Kill12 => (integral(|t| t.kill12), None),
        CaseId::Form47 => (integral(|t| t.form47), None),
        CaseId::Form48 => (integral(|t| t.form48), None),
        CaseId::Kill14 => (
            integral(|t| t.kill14),
            Some(precondition("symmetrized D_αξ_β", ft.killing_holomorphic())),
        ),
        CaseId::Lem43 => (integral(|t| t.lem43), Some(precondition("harmonic", ft.harmonic()))),
        CaseId::Lem43p => (integral(|t| t.lem43p), Some(precondition("harmonic", ft.harmonic()))),
        CaseId::Lem44 => (
            integral(|t| t.lem44),
            Some(precondition("analytic", ft.analytic_form())),
        ),
        CaseId::Ricci7s | CaseId::Bianchi410 => {
            let r = if case == CaseId::Ricci7s {
                ft.sup(|t| t.ricci7s.relative())
            } else {
                ft.sup(|t| t.bianchi410.relative())
            };
            record.tolerance = tol.pointwise;
            record.residual = Some(r);
            record.verdict = verdict_if(r <= tol.pointwise);
            record.detail = "max relative difference of the two sides".into();
            return record;
        }
        CaseId::Prop32 => {
            let analytic = ft.analytic_vector();
            let ii = ft.sup(|t| t.laplace_ii);
            let iii = ft.sup(|t| t.laplace_iii);
            let flags = [analytic, ii, iii].map(|r| r <= tol.residual);
            record.tolerance = tol.residual;
            record.residual = Some(ii.max(iii));
            record.verdict = verdict_if(flags[0] == flags[1] && flags[1] == flags[2]);
            record.detail = format!(
                "analytic: {} ({analytic:.3e}); D^αD_αξ_β = 0: {} ({ii:.3e}); D_αD^αξ_β + k*ξ = 0: {} ({iii:.3e})",
                yes_no(flags[0]),
                yes_no(flags[1]),
                yes_no(flags[2])
            );
            return record;
        }
        CaseId::Th33 => {
            record.tolerance = tol.lie;
            let Some(res) = &ft.residuals else {
                record.verdict = Verdict::Fail;
                record.detail = "connection residuals were not computed".into();
                return record;
            };
            let analytic = ft.analytic_vector();
            let hermitian = res.complex_hermitian.sup;
            let (a, h) = (analytic <= tol.residual, hermitian <= tol.lie);
            record.residual = Some(hermitian);
            record.verdict = verdict_if(a == h);
            record.detail = format!(
                "analytic: {} ({analytic:.3e}); complex Hermitian: {} ({hermitian:.3e})",
                yes_no(a),
                yes_no(h)
            );
            return record;
        }
        CaseId::KsEq | CaseId::LapIv => panic!("{case} is evaluated per manifold"),
    };
    record.residual = Some(residual);
    match hypothesis {
        Some((false, detail)) => {
            record.verdict = Verdict::HypothesisNotMet;
            record.detail = detail;
        }
        other => {
            record.verdict = verdict_if(residual <= tol.integral);
            record.detail = match other {
                Some((_, detail)) => format!("|∫| / vol; {detail}"),
                None => "|∫| / vol".into(),
            };
        }
    }
    record
}

/// Settings of a suite run.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub resolution: usize,
    pub tolerances: Tolerances,
    pub cases: Vec<CaseId>,
    pub theorems: bool,
}

impl SuiteOptions {
    pub fn new(model: &ManifoldModel, resolution: usize) -> SuiteOptions {
        SuiteOptions {
            resolution,
            tolerances: Tolerances::for_mode(model.mode),
            cases: CaseId::ALL.to_vec(),
            theorems: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub scan: ManifoldScan,
    pub fields: Vec<FieldTerms>,
    pub records: Vec<CaseRecord>,
    pub theorems: Vec<TheoremReport>,
}

impl SuiteResult {
    pub fn failures(&self) -> usize {
        let cases = self.records.iter().filter(|r| r.verdict == Verdict::Fail).count();
        let theorems = self
            .theorems
            .iter()
            .filter(|t| t.status == TheoremStatus::Violated)
            .count();
        cases + theorems
    }
}

/// Runs the selected cases on every field, plus the theorem report.
///
/// Records come in case order, then field order.
pub fn verify_suite(
    model: &ManifoldModel,
    fields: &[Field],
    options: &SuiteOptions,
) -> Result<SuiteResult, ModelError> {
    let tol = &options.tolerances;
    let scan = ManifoldScan::new(model, options.resolution, tol)?;
    let balanced = scan.balanced.balanced;
    let full = options.theorems || options.cases.contains(&CaseId::Th33);
    let field_cases = options.cases.iter().any(|c| c.needs_field());
    let terms = if field_cases || options.theorems {
        fields
            .iter()
            .map(|f| FieldTerms::new(model, f, options.resolution, full))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let mut records = Vec::new();
    for &case in &options.cases {
        if !case.needs_field() {
            records.push(verify_manifold_case(case, &scan, tol));
        } else if case.requires_balanced() && !balanced {
            records.push(CaseRecord {
                id: case,
                field: None,
                verdict: Verdict::Inapplicable,
                residual: None,
                tolerance: tol.integral,
                detail: "manifold is not balanced".into(),
            });
        } else if terms.is_empty() {
            records.push(CaseRecord {
                id: case,
                field: None,
                verdict: Verdict::Inapplicable,
                residual: None,
                tolerance: tol.integral,
                detail: "no field supplied".into(),
            });
        } else {
            records.extend(terms.iter().map(|ft| verify_case(case, ft, balanced, tol)));
        }
    }
    let theorems = if options.theorems {
        theorem_report(&scan, &terms, tol)
    } else {
        Vec::new()
    };
    Ok(SuiteResult {
        scan,
        fields: terms,
        records,
        theorems,
    })
}

#[cfg(test)]
mod tests;
