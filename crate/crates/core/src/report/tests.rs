use super::*;
use crate::manifold::ManifoldConfig;

fn config(manifold: &str, resolution: usize) -> RunConfig {
    let mut c = RunConfig::new(ManifoldConfig::builtin(manifold));
    c.resolution = resolution;
    c.output.omit_timing = true;
    c
}

#[test]
fn config_json_defaults() {
    let c = RunConfig::from_json(r#"{"manifold": {"builtin": "iwasawa"}}"#).unwrap();
    assert_eq!(c.resolution, DEFAULT_RESOLUTION);
    assert_eq!(c.cases, CaseSelection::All);
    assert_eq!(c.samples.random, DEFAULT_SAMPLES);
    assert!(c.theorems);
    let back = RunConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(back, c);
}

#[test]
fn config_case_selection_forms() {
    let parse = |cases: &str| {
        RunConfig::from_json(&format!(r#"{{"manifold": {{"builtin": "flat_torus"}}, "cases": {cases}}}"#))
    };
    assert_eq!(parse(r#""ALL""#).unwrap().cases, CaseSelection::All);
    assert_eq!(
        parse(r#""lem43""#).unwrap().cases,
        CaseSelection::List(vec![CaseId::Lem43])
    );
    assert_eq!(
        parse(r#"["VEC7", "KS_EQ"]"#).unwrap().cases.cases(),
        [CaseId::Vec7, CaseId::KsEq]
    );
    assert!(parse(r#""nope""#).is_err());
    assert!(parse(r#"["VEC9"]"#).is_err());
}

#[test]
fn config_rejects_malformed() {
    for text in [
        r#"{"manifold": {"builtin": "iwasawa"}, "resolutoin": 4}"#,
        r#"{"resolution": 4}"#,
        r#"{"manifold": {"builtin": "iwasawa"}, "mode": "exact"}"#,
        r#"{"manifold": {"builtin": "iwasawa"}, "samples": {"count": 3}}"#,
    ] {
        assert!(RunConfig::from_json(text).is_err(), "{text}");
    }
    let mut c = config("iwasawa", 4);
    c.tolerances.insert("bogus".into(), 1.0);
    assert!(run(&c, Command::Balanced).is_err());
    let c = config("iwasawa", 1);
    assert!(matches!(run(&c, Command::Balanced), Err(ModelError::Resolution(1))));
    let c = config("klein_bottle", 4);
    assert!(run(&c, Command::Scan).is_err());
}

#[test]
fn default_fields_cover_frames_and_random() {
    let m = crate::manifold::iwasawa();
    let specs = default_fields(&m, 7);
    let labels: Vec<String> = specs.iter().map(|s| s.label()).collect();
    assert_eq!(&labels[..6], ["form:phi1", "form:phi2", "form:phi3", "vector:E1", "vector:E2", "vector:E3"]);
    assert_eq!(labels[6], "form:random_trig(degree=2, seed=7)");
    assert_eq!(specs.len(), 6 + 2 * DEFAULT_RANDOM_FIELDS);
}

#[test]
fn tensors_on_flat_torus_are_zero() {
    let mut c = config("flat_torus", 4);
    c.samples.points = vec![vec![0.3, 0.7, 0.1, 0.9]];
    c.samples.random = 0;
    let r = run(&c, Command::Tensors).unwrap();
    assert_eq!(r.samples.len(), 1);
    let s = &r.samples[0];
    assert_eq!(s.point, [0.3, 0.7, 0.1, 0.9]);
    let t = s.tables.as_ref().unwrap();
    for m in [&t.k, &t.kstar, &t.s, &t.t, &t.h] {
        assert!(m.iter().flatten().all(|z| z.norm() == 0.0));
    }
    assert!(s.eigenvalues.values().flatten().all(|x| *x == 0.0));
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn sample_outside_the_chart_is_an_error() {
    let mut c = config("flat_torus", 4);
    c.samples.points = vec![vec![0.3, 0.7]];
    assert!(run(&c, Command::Tensors).is_err());
}

#[test]
fn verify_iwasawa_passes() {
    let c = config("iwasawa", 4);
    let r = run(&c, Command::Verify).unwrap();
    assert_eq!(r.exit_code(), 0, "{}", r.summary_table());
    assert!(r.balanced.as_ref().unwrap().balanced);
    assert_eq!(r.summary.fail, 0);
    assert!(r.summary.pass > 0);
    let h = r.tensors.iter().find(|t| t.tensor == TensorId::H).unwrap();
    let tol = r.tolerances.zero;
    assert!(h.min_eigenvalue >= -1.0 - tol && h.max_eigenvalue <= tol);
    assert!(r.cases.iter().all(|c| c.verdict != Verdict::Inapplicable));
    assert_eq!(r.fields.len(), 10);
    let table = r.summary_table();
    assert!(table.contains("balanced: yes"), "{table}");
    assert!(table.contains("LEM44"));
}

#[test]
fn verify_conformal_lem43_is_inapplicable() {
    let mut c = config("conformal_torus", 8);
    c.cases = CaseSelection::List(vec![CaseId::Lem43]);
    let r = run(&c, Command::Verify).unwrap();
    assert_eq!(r.cases.len(), 1);
    assert_eq!(r.cases[0].verdict, Verdict::Inapplicable);
    assert_eq!(r.exit_code(), 0);
    assert!(!r.balanced.unwrap().balanced);
}

#[test]
fn failing_case_sets_exit_code() {
    let mut c = config("flat_torus", 4);
    c.cases = CaseSelection::List(vec![CaseId::Vec7]);
    c.fields = vec![FieldSpec::random(FieldKind::Vector, 2, 1)];
    c.resolution = 2;
    c.theorems = false;
    let r = run(&c, Command::Verify).unwrap();
    assert_eq!(r.cases[0].verdict, Verdict::Fail, "{:?}", r.cases[0]);
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn json_round_trip() {
    let mut c = config("iwasawa", 4);
    c.output.omit_timing = false;
    let r = run(&c, Command::Verify).unwrap();
    assert!(r.timing.is_some());
    let back = Report::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.schema_version, SCHEMA_VERSION);
}

#[test]
fn csv_has_one_row_per_sample() {
    let mut c = config("iwasawa", 4);
    c.samples.points = vec![vec![0.1; 6]];
    c.samples.random = 5;
    let r = run(&c, Command::Scan).unwrap();
    let csv = r.tensor_csv();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(header.len(), 6 + 1 + 6 * 3);
    assert_eq!(&header[0], "re_z1");
    assert_eq!(reader.records().count(), 6);
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let c = config("conformal_torus", 6);
    let run_with = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run(&c, Command::Verify).unwrap().to_json())
    };
    let a = run_with(1);
    assert_eq!(a, run_with(4));
    assert_eq!(a, run_with(3));
}

#[test]
fn classify_reports_field_verdicts() {
    let mut c = config("iwasawa", 4);
    c.fields = vec![
        FieldSpec::builtin(FieldKind::Form, "phi1"),
        FieldSpec::builtin(FieldKind::Form, "phi3"),
        FieldSpec::builtin(FieldKind::Vector, "E3"),
    ];
    let r = run(&c, Command::Classify).unwrap();
    let flags: Vec<(bool, bool, bool)> = r
        .fields
        .iter()
        .map(|f| (f.analytic, f.harmonic, f.killing))
        .collect();
    assert_eq!(flags, [(true, true, false), (true, false, true), (true, false, true)]);
}

#[test]
fn emit_writes_json_and_csv() {
    let dir = std::env::temp_dir().join(format!("chernkit-emit-{}", std::process::id()));
    let r = run(&config("flat_torus", 2), Command::Scan).unwrap();
    let written = emit_report(&r, &dir, true).unwrap();
    assert_eq!(written.len(), 2);
    let json = std::fs::read_to_string(&written[0]).unwrap();
    assert_eq!(Report::from_json(&json).unwrap(), r);
    std::fs::remove_dir_all(&dir).unwrap();
}
