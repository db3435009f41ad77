use statex::corpus::{load_corpus, run_conformance};
use statex::normalize::NormalizeOptions;
use statex::pipeline::{Pipeline, PipelineOptions};

#[test]
fn default_pipeline_conforms() {
    let cases = load_corpus().unwrap();
    let report = run_conformance(&cases, &Pipeline::default());
    for f in &report.failures {
        eprintln!("{} {:?} lenient={} {:?}", f.id, f.input, f.lenient, f.mismatches);
    }
    assert_eq!(report.total, 187);
    assert_eq!(report.detected, 187);
    assert_eq!(report.p_clauses, 185);
    assert_eq!(report.p_detected, 184);
    assert_eq!(report.recalc_matches, report.recalc_expected);
    assert!(report.passed(), "{}", report.summary());
    assert_eq!(report.summary(), "187 detected / 184 p-clauses / pass");
}

#[test]
fn chi_folding_is_load_bearing() {
    let cases = load_corpus().unwrap();
    let pipeline = Pipeline::new(PipelineOptions {
        normalize: NormalizeOptions { fold_chi: false },
        ..PipelineOptions::default()
    });
    let report = run_conformance(&cases, &pipeline);
    let failed: Vec<u32> = report.strict_failures().map(|f| f.id).collect();
    for id in [5, 6, 7, 167, 168] {
        assert!(failed.contains(&id), "case {id} should fail without chi folding: {failed:?}");
    }
    assert!(!report.passed());
}

#[test]
fn empty_corpus_detects_nothing() {
    let report = run_conformance(&[], &Pipeline::default());
    assert_eq!(report.detected, 0);
    assert_eq!(report.total, 0);
}

#[test]
fn case_expectations_match_the_corpus_contract() {
    let cases = load_corpus().unwrap();
    let ids: Vec<u32> = cases.iter().map(|c| c.id).collect();
    assert_eq!(ids, (1..=187).collect::<Vec<_>>());
    let c176 = &cases[175];
    assert_eq!(c176.input, "t(12)=1..2, p=.n3");
    assert_eq!(c176.expected.stat_value, Some(1.0));
    assert_eq!(c176.expected.reported_p, None);
    let c179 = &cases[178].expected;
    assert_eq!((c179.beta, c179.se_beta, c179.z_estimate), (Some(1.2), Some(0.34), Some(3.53)));
    let c170 = &cases[169].expected;
    assert_eq!((c170.kind, c170.stat_value, c170.reported_p), (None, None, Some(0.12)));
    assert!(cases.iter().filter(|c| c.lenient).count() <= 4);
}
