use super::*;
use crate::fields::{Field, FieldKind, FieldSpec};
use crate::manifold::samples::{kahler_torus, skew_torus};
use crate::manifold::{conformal_torus, flat_torus, iwasawa, ManifoldModel};
use proptest::prelude::*;

fn field(model: &ManifoldModel, spec: FieldSpec) -> Field {
    Field::from_spec(&spec, model).unwrap()
}

fn terms(model: &ManifoldModel, spec: FieldSpec, res: usize) -> FieldTerms {
    FieldTerms::new(model, &field(model, spec), res, true).unwrap()
}

fn symbolic() -> Tolerances {
    Tolerances::for_mode(DerivativeMode::Symbolic)
}

#[test]
fn case_ids_round_trip() {
    for c in CaseId::ALL {
        assert_eq!(c.as_str().parse::<CaseId>().unwrap(), c);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, format!("\"{}\"", c.as_str()));
        assert_eq!(serde_json::from_str::<CaseId>(&json).unwrap(), c);
    }
    assert_eq!("ks_eq".parse::<CaseId>().unwrap(), CaseId::KsEq);
    let err = "VEC8".parse::<CaseId>().unwrap_err().to_string();
    assert!(err.contains("VEC7"), "{err}");
}

#[test]
fn verdict_strings() {
    let s = serde_json::to_string(&[
        Verdict::Pass,
        Verdict::Fail,
        Verdict::Inapplicable,
        Verdict::HypothesisNotMet,
    ])
    .unwrap();
    assert_eq!(s, r#"["PASS","FAIL","INAPPLICABLE","HYPOTHESIS_NOT_MET"]"#);
    assert_eq!(Verdict::HypothesisNotMet.to_string(), "HYPOTHESIS_NOT_MET");
}

#[test]
fn structure_requirements() {
    let any: Vec<CaseId> = CaseId::ALL
        .into_iter()
        .filter(|c| !c.requires_balanced())
        .collect();
    assert_eq!(
        any,
        [CaseId::Vec7, CaseId::Ricci7s, CaseId::Bianchi410, CaseId::LapIv]
    );
    assert_eq!(CaseId::Bianchi410.kind(), CaseKind::Pointwise);
    assert_eq!(CaseId::Lem44.kind(), CaseKind::Integral);
    assert!(!CaseId::KsEq.needs_field());
}

#[test]
fn tolerance_overrides() {
    let mut t = symbolic();
    t.set("integral", 1e-7).unwrap();
    assert_eq!(t.integral, 1e-7);
    assert!(t.set("integral", -1.0).is_err());
    assert!(t.set("integral", f64::NAN).is_err());
    let err = t.set("bogus", 1.0).unwrap_err().to_string();
    assert!(err.contains("pointwise"), "{err}");
    let fd = Tolerances::for_mode(DerivativeMode::Fd);
    assert_eq!(fd.pointwise, 1e-6);
}

#[test]
fn definiteness_classes() {
    use Definiteness::*;
    let tol = 1e-9;
    assert_eq!(Definiteness::classify(-1e-12, 1e-12, tol), Zero);
    assert_eq!(Definiteness::classify(0.0, 1.0, tol), Psd);
    assert_eq!(Definiteness::classify(0.5, 1.0, tol), Pd);
    assert_eq!(Definiteness::classify(-1.0, 0.0, tol), Nsd);
    assert_eq!(Definiteness::classify(-1.0, -0.5, tol), Nd);
    assert_eq!(Definiteness::classify(-1.0, 1.0, tol), Indefinite);
    assert!(Zero.is_psd() && Zero.is_nsd());
    assert!(!Indefinite.is_psd() && !Indefinite.is_nsd());
}

#[test]
fn h_flat_is_zero() {
    let m = flat_torus(2);
    let grid = crate::manifold::quadrature_grid(&m, 2).unwrap();
    let v = definiteness_scan(&m, TensorId::H, &grid, 1e-9).unwrap();
    assert_eq!(v.classification, Definiteness::Zero);
    assert_eq!(v.sampling, "grid-sampled");
    assert_eq!(v.points, grid.len());
}

#[test]
fn iwasawa_definiteness_oracles() {
    let m = iwasawa();
    let scan = ManifoldScan::new(&m, 4, &symbolic()).unwrap();
    assert!(scan.balanced.balanced);
    let h = scan.definiteness(TensorId::H, 1e-9);
    assert_eq!(h.classification, Definiteness::Nsd);
    assert!((h.min_eigenvalue + 1.0).abs() <= 1e-9);
    assert!(h.max_eigenvalue.abs() <= 1e-9);
    let kappa = scan.definiteness(TensorId::Kappa, 1e-9);
    assert_eq!(kappa.classification, Definiteness::Zero);
    let t = scan.definiteness(TensorId::T, 1e-9);
    assert_eq!(t.classification, Definiteness::Psd);
    assert!((t.max_eigenvalue - 2.0).abs() <= 1e-9);
    assert!(scan.k_minus_s <= 1e-12);
}

#[test]
fn conformal_has_no_zero_h() {
    let m = conformal_torus(0.1);
    let scan = ManifoldScan::new(&m, 8, &symbolic()).unwrap();
    assert!(!scan.balanced.balanced);
    let h = scan.definiteness(TensorId::H, 1e-9);
    assert_ne!(h.classification, Definiteness::Zero);
}

#[test]
fn lem44_on_phi3_vanishes_pointwise() {
    let ft = terms(&iwasawa(), FieldSpec::builtin(FieldKind::Form, "phi3"), 4);
    assert!(ft.analytic_form() <= 1e-12);
    assert!(ft.sup(|t| t.lem44) <= 1e-10);
    let r = verify_case(CaseId::Lem44, &ft, true, &symbolic());
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.residual.unwrap() <= 1e-10);
}

#[test]
fn lem43_on_phi3_is_hypothesis_not_met() {
    let ft = terms(&iwasawa(), FieldSpec::builtin(FieldKind::Form, "phi3"), 4);
    let r = verify_case(CaseId::Lem43, &ft, true, &symbolic());
    assert_eq!(r.verdict, Verdict::HypothesisNotMet);
    assert!(r.detail.contains("harmonic"), "{}", r.detail);
}

#[test]
fn lem43_on_flat_dx1_passes() {
    let ft = terms(&flat_torus(2), FieldSpec::builtin(FieldKind::Form, "dx1"), 4);
    let r = verify_case(CaseId::Lem43, &ft, true, &symbolic());
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.residual, Some(0.0));
}

#[test]
fn balanced_cases_refuse_non_balanced() {
    let m = conformal_torus(0.1);
    let ft = terms(&m, FieldSpec::random(FieldKind::Vector, 2, 3), 8);
    for c in CaseId::ALL.into_iter().filter(|c| c.needs_field()) {
        let r = verify_case(c, &ft, false, &symbolic());
        if c.requires_balanced() {
            assert_eq!(r.verdict, Verdict::Inapplicable, "{c}");
            assert_eq!(r.residual, None);
        } else {
            assert_eq!(r.verdict, Verdict::Pass, "{c}: {r:?}");
        }
    }
}

#[test]
fn integral_identities_on_random_fields() {
    let cases = [
        CaseId::Vec7,
        CaseId::Int46,
        CaseId::Kill12,
        CaseId::Form47,
        CaseId::Form48,
        CaseId::Ricci7s,
        CaseId::Bianchi410,
        CaseId::Prop32,
        CaseId::Th33,
    ];
    for (m, res) in [(iwasawa(), 8), (flat_torus(2), 8), (kahler_torus(), 12)] {
        for seed in 0..2 {
            let ft = terms(&m, FieldSpec::random(FieldKind::Form, 2, seed), res);
            for c in cases {
                let r = verify_case(c, &ft, true, &symbolic());
                assert_eq!(r.verdict, Verdict::Pass, "{} {c}: {r:?}", m.name);
            }
        }
    }
}

#[test]
fn any_metric_identities_on_skew_torus() {
    let m = skew_torus();
    let ft = terms(&m, FieldSpec::random(FieldKind::Vector, 1, 9), 16);
    for c in [CaseId::Vec7, CaseId::Ricci7s, CaseId::Bianchi410] {
        let r = verify_case(c, &ft, false, &symbolic());
        assert_eq!(r.verdict, Verdict::Pass, "{c}: {r:?}");
    }
}

#[test]
fn kill14_needs_symmetrized_condition() {
    let m = iwasawa();
    let e3 = terms(&m, FieldSpec::builtin(FieldKind::Vector, "E3"), 4);
    assert_eq!(verify_case(CaseId::Kill14, &e3, true, &symbolic()).verdict, Verdict::Pass);
    let rnd = terms(&m, FieldSpec::random(FieldKind::Vector, 2, 5), 8);
    assert_eq!(
        verify_case(CaseId::Kill14, &rnd, true, &symbolic()).verdict,
        Verdict::HypothesisNotMet
    );
}

#[test]
fn th33_without_residuals_fails() {
    let m = flat_torus(2);
    let f = field(&m, FieldSpec::builtin(FieldKind::Form, "dx1"));
    let ft = FieldTerms::new(&m, &f, 4, false).unwrap();
    let r = verify_case(CaseId::Th33, &ft, true, &symbolic());
    assert_eq!(r.verdict, Verdict::Fail);
}

#[test]
fn manifold_cases() {
    let tol = symbolic();
    let iw = ManifoldScan::new(&iwasawa(), 4, &tol).unwrap();
    for c in [CaseId::KsEq, CaseId::LapIv] {
        assert_eq!(verify_manifold_case(c, &iw, &tol).verdict, Verdict::Pass, "{c}");
    }
    let conf = ManifoldScan::new(&conformal_torus(0.1), 8, &tol).unwrap();
    assert_eq!(verify_manifold_case(CaseId::KsEq, &conf, &tol).verdict, Verdict::Inapplicable);
    let lap = verify_manifold_case(CaseId::LapIv, &conf, &tol);
    assert_eq!(lap.verdict, Verdict::Pass);
    assert!(lap.residual.unwrap() > 1e-3);
}

#[test]
fn suite_on_iwasawa() {
    let m = iwasawa();
    let fields: Vec<Field> = ["phi1", "phi3"]
        .iter()
        .map(|n| field(&m, FieldSpec::builtin(FieldKind::Form, n)))
        .chain(["E3"].iter().map(|n| field(&m, FieldSpec::builtin(FieldKind::Vector, n))))
        .collect();
    let result = verify_suite(&m, &fields, &SuiteOptions::new(&m, 4)).unwrap();
    assert_eq!(result.failures(), 0, "{:#?}", result.records);
    let lem43: Vec<Verdict> = result
        .records
        .iter()
        .filter(|r| r.id == CaseId::Lem43)
        .map(|r| r.verdict)
        .collect();
    assert_eq!(lem43, [Verdict::Pass, Verdict::HypothesisNotMet, Verdict::HypothesisNotMet]);

    let report = |id| result.theorems.iter().find(|t| t.id == id).unwrap();
    let th = report(TheoremId::AnalyticHarmonicIff);
    assert_eq!(th.status, TheoremStatus::Consistent);
    assert!(th.checks[1].detail.contains("iff condition not met"), "{:?}", th.checks[1]);
    let killing = report(TheoremId::KillingNonpositiveChern);
    assert!(killing.hypothesis_holds);
    assert_eq!(killing.checks[2].status, TheoremStatus::Consistent);
    assert_eq!(report(TheoremId::HSemidefinite).status, TheoremStatus::NotApplicable);
}

#[test]
fn suite_on_flat_torus() {
    let m = flat_torus(2);
    let fields = vec![
        field(&m, FieldSpec::builtin(FieldKind::Form, "dx1")),
        field(&m, FieldSpec::random(FieldKind::Form, 1, 4)),
    ];
    let result = verify_suite(&m, &fields, &SuiteOptions::new(&m, 6)).unwrap();
    assert_eq!(result.failures(), 0);
    let h = result
        .theorems
        .iter()
        .find(|t| t.id == TheoremId::HSemidefinite)
        .unwrap();
    assert!(h.hypothesis_holds);
    assert_eq!(h.checks[0].status, TheoremStatus::Consistent);
    assert_eq!(h.checks[1].status, TheoremStatus::NotApplicable);
}

#[test]
fn suite_without_fields_on_conformal() {
    let m = conformal_torus(0.1);
    let mut options = SuiteOptions::new(&m, 8);
    options.cases = vec![CaseId::Lem43, CaseId::Vec7, CaseId::LapIv];
    let result = verify_suite(&m, &[], &options).unwrap();
    let verdicts: Vec<Verdict> = result.records.iter().map(|r| r.verdict).collect();
    assert_eq!(verdicts, [Verdict::Inapplicable, Verdict::Inapplicable, Verdict::Pass]);
    assert!(result.records[1].detail.contains("no field"));
    assert!(result
        .theorems
        .iter()
        .all(|t| t.status == TheoremStatus::NotApplicable));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn classification_matches_envelope(a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let (lo, hi) = (a.min(b), a.max(b));
        let tol = 1e-3;
        let c = Definiteness::classify(lo, hi, tol);
        prop_assert_eq!(c.is_psd(), lo >= -tol);
        prop_assert_eq!(c.is_nsd(), hi <= tol);
        prop_assert_eq!(c.is_pd(), lo > tol);
        prop_assert_eq!(c.is_nd(), hi < -tol);
    }

    #[test]
    fn pointwise_identities_hold_on_random_fields(seed in 0u64..1000, vector in any::<bool>()) {
        let kind = if vector { FieldKind::Vector } else { FieldKind::Form };
        let m = conformal_torus(0.1);
        let ft = terms(&m, FieldSpec::random(kind, 2, seed), 4);
        prop_assert!(ft.sup(|t| t.ricci7s.relative()) <= 1e-9);
        prop_assert!(ft.sup(|t| t.bianchi410.relative()) <= 1e-9);
    }
}
