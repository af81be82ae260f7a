use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DefinitenessVerdict, FieldTerms, ManifoldScan, TensorId, Tolerances};

/// Vanishing and equivalence theorems of compact balanced Hermitian
/// manifolds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// `L_ξD = 0` forces `ξ` analytic.
    AffineImpliesAnalytic,
    /// `κ ≤ 0`: Killing fields are analytic with `k(ξ,ξ) = δω_{Jξ} = 0`.
    KillingNonpositiveChern,
    /// `κ < 0`: no nonzero Killing fields.
    KillingNegativeChern,
    /// A harmonic form is analytic iff `∫H(ω#,ω#) = 0`.
    HarmonicAnalyticIff,
    /// An analytic form is harmonic iff `∫H(ω#,ω#) = 0`.
    AnalyticHarmonicIff,
    /// `H ≥ 0`: analytic and harmonic forms coincide and `H(ω#,ω#) = 0`.
    HSemidefinite,
    /// `H > 0`: no harmonic and no analytic forms.
    HDefinite,
    /// `k − ½t ≥ 0`: `ω#` is holomorphic for harmonic `ω`.
    KHalfTSemidefinite,
    /// `k − ½t > 0`: no harmonic forms.
    KHalfTDefinite,
    /// `k* < k − ½t`: neither analytic nor harmonic forms.
    MeanCurvatureBound,
    /// `H ≥ 0`, `k* ≥ 0` and `k* > 0` somewhere: no harmonic forms.
    HKstarSemidefinite,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::AffineImpliesAnalytic,
        TheoremId::KillingNonpositiveChern,
        TheoremId::KillingNegativeChern,
        TheoremId::HarmonicAnalyticIff,
        TheoremId::AnalyticHarmonicIff,
        TheoremId::HSemidefinite,
        TheoremId::HDefinite,
        TheoremId::KHalfTSemidefinite,
        TheoremId::KHalfTDefinite,
        TheoremId::MeanCurvatureBound,
        TheoremId::HKstarSemidefinite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::AffineImpliesAnalytic => "affine_implies_analytic",
            TheoremId::KillingNonpositiveChern => "killing_nonpositive_chern",
            TheoremId::KillingNegativeChern => "killing_negative_chern",
            TheoremId::HarmonicAnalyticIff => "harmonic_analytic_iff",
            TheoremId::AnalyticHarmonicIff => "analytic_harmonic_iff",
            TheoremId::HSemidefinite => "h_semidefinite",
            TheoremId::HDefinite => "h_definite",
            TheoremId::KHalfTSemidefinite => "k_half_t_semidefinite",
            TheoremId::KHalfTDefinite => "k_half_t_definite",
            TheoremId::MeanCurvatureBound => "mean_curvature_bound",
            TheoremId::HKstarSemidefinite => "h_kstar_semidefinite",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoremStatus {
    /// Hypothesis fails on the grid, or the field falls outside the premise.
    NotApplicable,
    Consistent,
    Violated,
}

/// Conclusion check for one field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub field: String,
    pub status: TheoremStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub id: TheoremId,
    pub hypothesis: String,
    pub hypothesis_holds: bool,
    pub status: TheoremStatus,
    pub checks: Vec<TheoremCheck>,
}

/// Field facts every conclusion check draws on.
struct Facts {
    zero: bool,
    analytic_form: bool,
    analytic_vector: bool,
    harmonic: bool,
    killing: bool,
    affine: bool,
    h_pairing: f64,
    h_sup: f64,
    k_sup: f64,
    k_half_t_sup: f64,
    delta_j_sup: f64,
}

impl Facts {
    fn new(ft: &FieldTerms, tol: &Tolerances) -> Facts {
        let res = ft.residuals.as_ref();
        Facts {
            zero: ft.norm() <= tol.residual,
            analytic_form: ft.analytic_form() <= tol.residual,
            analytic_vector: ft.analytic_vector() <= tol.residual,
            harmonic: ft.harmonic() <= tol.residual,
            killing: ft.killing_holomorphic() <= tol.residual
                || res.is_some_and(|r| r.killing.sup <= tol.residual),
            affine: res.is_some_and(|r| r.affine.sup <= tol.lie),
            h_pairing: ft.h_pairing(),
            h_sup: ft.sup(|t| t.h),
            k_sup: ft.sup(|t| t.k),
            k_half_t_sup: ft.sup(|t| t.k - 0.5 * t.t),
            delta_j_sup: ft.sup(|t| t.delta_j),
        }
    }
}

fn check(field: &str, premise: bool, conclusion: bool, detail: String) -> TheoremCheck {
    let status = match (premise, conclusion) {
        (false, _) => TheoremStatus::NotApplicable,
        (true, true) => TheoremStatus::Consistent,
        (true, false) => TheoremStatus::Violated,
    };
    TheoremCheck {
        field: field.to_string(),
        status,
        detail,
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn describe(d: &DefinitenessVerdict) -> String {
    format!(
        "{} is {} on the grid, eigenvalues in [{:.3e}, {:.3e}]",
        d.tensor, d.classification, d.min_eigenvalue, d.max_eigenvalue
    )
}

/// Hypothesis verdicts and per-field conclusion checks. Every theorem needs
/// a balanced manifold; unmet hypotheses give `NotApplicable`, never a
/// violation.
pub fn theorem_report(
    scan: &ManifoldScan,
    fields: &[FieldTerms],
    tol: &Tolerances,
) -> Vec<TheoremReport> {
    let balanced = scan.balanced.balanced;
    let kappa = scan.definiteness(TensorId::Kappa, tol.zero);
    let h = scan.definiteness(TensorId::H, tol.zero);
    let kt = scan.definiteness(TensorId::KMinusHalfT, tol.zero);
    let kstar = scan.definiteness(TensorId::Kstar, tol.zero);
    let facts: Vec<(String, Facts)> = if balanced {
        fields
            .iter()
            .map(|ft| (ft.field.clone(), Facts::new(ft, tol)))
            .collect()
    } else {
        Vec::new()
    };
    let pairing_zero = |f: &Facts| f.h_pairing.abs() <= tol.integral;

    TheoremId::ALL
        .into_iter()
        .map(|id| {
            let (hypothesis, holds) = match id {
                TheoremId::AffineImpliesAnalytic
                | TheoremId::HarmonicAnalyticIff
                | TheoremId::AnalyticHarmonicIff => ("balanced".to_string(), true),
                TheoremId::KillingNonpositiveChern => (describe(&kappa), kappa.classification.is_nsd()),
                TheoremId::KillingNegativeChern => (describe(&kappa), kappa.classification.is_nd()),
                TheoremId::HSemidefinite => (describe(&h), h.classification.is_psd()),
                TheoremId::HDefinite | TheoremId::MeanCurvatureBound => {
                    (describe(&h), h.classification.is_pd())
                }
                TheoremId::KHalfTSemidefinite => (describe(&kt), kt.classification.is_psd()),
                TheoremId::KHalfTDefinite => (describe(&kt), kt.classification.is_pd()),
                TheoremId::HKstarSemidefinite => (
                    format!(
                        "{}; {}; k* positive definite somewhere: {}",
                        describe(&h),
                        describe(&kstar),
                        flag(kstar.positive_somewhere())
                    ),
                    h.classification.is_psd()
                        && kstar.classification.is_psd()
                        && kstar.positive_somewhere(),
                ),
            };
            let hypothesis = if balanced {
                hypothesis
            } else {
                format!("manifold is not balanced; {hypothesis}")
            };
            let holds = holds && balanced;
            let checks: Vec<TheoremCheck> = if holds {
                facts
                    .iter()
                    .map(|(name, f)| conclusion(id, name, f, tol, pairing_zero(f)))
                    .collect()
            } else {
                Vec::new()
            };
            let status = if !holds {
                TheoremStatus::NotApplicable
            } else if checks.iter().any(|c| c.status == TheoremStatus::Violated) {
                TheoremStatus::Violated
            } else {
                TheoremStatus::Consistent
            };
            TheoremReport {
                id,
                hypothesis,
                hypothesis_holds: holds,
                status,
                checks,
            }
        })
        .collect()
}

fn conclusion(
    id: TheoremId,
    name: &str,
    f: &Facts,
    tol: &Tolerances,
    pairing_zero: bool,
) -> TheoremCheck {
    let pairing = format!("∫H(ω#,ω#) pairing {:.3e}", f.h_pairing);
    match id {
        TheoremId::AffineImpliesAnalytic => check(
            name,
            f.affine,
            f.analytic_vector,
            format!("affine: {}; analytic: {}", flag(f.affine), flag(f.analytic_vector)),
        ),
        TheoremId::KillingNonpositiveChern => {
            let ok = f.analytic_vector && f.k_sup <= tol.pointwise && f.delta_j_sup <= tol.residual;
            check(
                name,
                f.killing,
                ok,
                format!(
                    "Killing: {}; analytic: {}; max |k(ξ,ξ)| {:.3e}; max |δω_Jξ| {:.3e}",
                    flag(f.killing),
                    flag(f.analytic_vector),
                    f.k_sup,
                    f.delta_j_sup
                ),
            )
        }
        TheoremId::KillingNegativeChern => check(
            name,
            f.killing,
            f.zero,
            format!("Killing: {}; zero: {}", flag(f.killing), flag(f.zero)),
        ),
        TheoremId::HarmonicAnalyticIff => {
            let agree = f.analytic_form == pairing_zero;
            let detail = format!(
                "harmonic: {}; analytic: {}; {pairing}{}",
                flag(f.harmonic),
                flag(f.analytic_form),
                if pairing_zero { "" } else { "; iff condition not met" }
            );
            check(name, f.harmonic, agree, detail)
        }
        TheoremId::AnalyticHarmonicIff => {
            let agree = f.harmonic == pairing_zero;
            let detail = format!(
                "analytic: {}; harmonic: {}; {pairing}{}",
                flag(f.analytic_form),
                flag(f.harmonic),
                if pairing_zero { "" } else { "; iff condition not met" }
            );
            check(name, f.analytic_form, agree, detail)
        }
        TheoremId::HSemidefinite => {
            let premise = f.analytic_form || f.harmonic;
            let ok = f.analytic_form && f.harmonic && f.h_sup <= tol.pointwise;
            check(
                name,
                premise,
                ok,
                format!(
                    "analytic: {}; harmonic: {}; max |H(ω#,ω#)| {:.3e}",
                    flag(f.analytic_form),
                    flag(f.harmonic),
                    f.h_sup
                ),
            )
        }
        TheoremId::HDefinite | TheoremId::MeanCurvatureBound => {
            let premise = f.analytic_form || f.harmonic;
            check(
                name,
                premise,
                f.zero,
                format!(
                    "analytic: {}; harmonic: {}; zero: {}",
                    flag(f.analytic_form),
                    flag(f.harmonic),
                    flag(f.zero)
                ),
            )
        }
        TheoremId::KHalfTSemidefinite => {
            let ok = f.analytic_vector && f.k_half_t_sup <= tol.pointwise;
            check(
                name,
                f.harmonic,
                ok,
                format!(
                    "harmonic: {}; ω# holomorphic: {}; max |(k − ½t)(ω#,ω#)| {:.3e}",
                    flag(f.harmonic),
                    flag(f.analytic_vector),
                    f.k_half_t_sup
                ),
            )
        }
        TheoremId::KHalfTDefinite | TheoremId::HKstarSemidefinite => check(
            name,
            f.harmonic,
            f.zero,
            format!("harmonic: {}; zero: {}", flag(f.harmonic), flag(f.zero)),
        ),
    }
}
