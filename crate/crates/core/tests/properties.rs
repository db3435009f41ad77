use proptest::prelude::*;
use statex::check::{check_consistency, consistent, CheckOptions};
use statex::corpus::load_corpus;
use statex::extract::{extract_results, Comparator};
use statex::mutate::mutation_set;
use statex::normalize::{normalize_text, repair_pdf_artifacts};
use statex::pipeline::Pipeline;
use statex::stats::{recompute_p, TailMode};

fn normalized(s: &str) -> String {
    normalize_text(s).as_str().to_owned()
}

fn reference_inputs() -> Vec<String> {
    load_corpus().unwrap().into_iter().take(10).map(|c| c.input).collect()
}

#[test]
fn normalization_is_idempotent_on_corpus_and_mutants() {
    let corpus: Vec<String> = load_corpus().unwrap().into_iter().map(|c| c.input).collect();
    let refs: Vec<&str> = corpus.iter().map(String::as_str).collect();
    let mutants = mutation_set(&refs, 10_000, 0x5eed);
    assert_eq!(mutants.len(), 10_000);
    for s in corpus.iter().chain(mutants.iter().map(|m| &m.text)) {
        let once = normalized(s);
        assert_eq!(normalized(&once), once, "input {s:?}");
        let repaired = repair_pdf_artifacts(&normalize_text(s));
        let again = repair_pdf_artifacts(&normalize_text(repaired.as_str()));
        assert_eq!(again.as_str(), repaired.as_str(), "repair of {s:?}");
    }
}

fn messy_text() -> impl Strategy<Value = String> {
    let pieces = prop::sample::select(vec![
        "t", "F", "r", "p", "χ", "Χ", "ꭓ", "²", "^2", "<sup>2</sup>", "&#967;", "&chi;", "&lt;",
        "&amp;", "&nbsp;", "\u{a0}", "\u{2009}", "\u{2212}", "≤", "≥", "[", "]", "(", ")", "=", "<",
        ">", " ", "  ", "\t", "\n", ",", ";", ".", "5", " 5 ", "12", "2.3", ".05", "n.s.", "Chi",
        "chi-square", "CHI2", "’", "'s", "x", "X", "R2", "d", "SE", "beta",
    ]);
    prop::collection::vec(pieces, 0..24).prop_map(|v| v.concat())
}

fn well_formed_result() -> impl Strategy<Value = String> {
    let head = prop_oneof![
        (1u32..200).prop_map(|df| format!("t({df})")),
        (1u32..10, 1u32..300).prop_map(|(a, b)| format!("F({a}, {b})")),
        (1u32..200).prop_map(|df| format!("r({df})")),
        Just("Z".to_string()),
        (1u32..40).prop_map(|df| format!("χ²({df})")),
        (1u32..40).prop_map(|df| format!("Q({df})")),
        (1u32..40).prop_map(|df| format!("H({df})")),
    ];
    let comp = prop::sample::select(vec!["=", "<", ">", "≤", "≥"]);
    let value = (0u32..5000, 0usize..4).prop_map(|(v, d)| {
        let v = v as f64 / 100.0;
        format!("{v:.d$}")
    });
    let p = prop_oneof![
        (1u32..1000, 1usize..4, prop::sample::select(vec!["=", "<", ">", "<="]))
            .prop_map(|(p, d, c)| format!("p{c}{:.d$}", p as f64 / 1000.0)),
        Just("n.s.".to_string()),
    ];
    let lead = prop::sample::select(vec!["", "We found ", "as predicted, "]);
    (lead, head, comp, value, p).prop_map(|(l, h, c, v, p)| format!("{l}{h}{c}{v}, {p}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn normalization_is_idempotent(s in messy_text()) {
        let once = normalized(&s);
        prop_assert_eq!(normalized(&once), once);
    }

    #[test]
    fn offset_map_is_monotone_and_in_bounds(s in messy_text()) {
        let n = normalize_text(&s);
        prop_assert_eq!(n.offset_map().len(), n.len());
        prop_assert!(n.offset_map().windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(n.offset_map().iter().all(|&o| o <= s.len()));
    }

    #[test]
    fn render_then_parse_round_trips(s in well_formed_result()) {
        let results = extract_results(&normalize_text(&s));
        prop_assert_eq!(results.len(), 1, "input {:?}", s);
        let first = results[0].content();
        let rendered = first.render();
        let again = extract_results(&normalize_text(&rendered));
        prop_assert_eq!(again.len(), 1, "rendered {:?}", rendered);
        prop_assert_eq!(again[0].content(), first, "input {:?} rendered {:?}", s, rendered);
    }

    #[test]
    fn exact_rounding_is_consistent(p in 0.0f64..1.0, decimals in 1u32..5) {
        let scale = 10f64.powi(decimals as i32);
        let reported = (p * scale).round() / scale;
        prop_assert_eq!(consistent(p, Comparator::Eq, Some(reported), decimals, 0.05), Some(true));
    }

    #[test]
    fn values_outside_half_a_unit_are_inconsistent(
        reported_units in 0u32..1000,
        decimals in 1u32..4,
        offset in 0.5001f64..50.0,
        below in any::<bool>(),
    ) {
        let unit = 10f64.powi(-(decimals as i32));
        let reported = reported_units as f64 * unit;
        let computed = if below { reported - offset * unit } else { reported + offset * unit };
        prop_assume!((0.0..=1.0).contains(&computed));
        prop_assert_eq!(consistent(computed, Comparator::Eq, Some(reported), decimals, 0.05), Some(false));
    }

    #[test]
    fn error_is_monotone_in_computed_p(reported in 0.001f64..0.5, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let error = |p: f64| !consistent(p, Comparator::Lt, Some(reported), 3, 0.05).unwrap();
        prop_assert!(error(lo) <= error(hi));
    }

    #[test]
    fn verdict_is_invariant_to_alpha_that_crosses_nothing(
        stat in 0.1f64..6.0,
        df in 2u32..200,
        bound in prop::sample::select(vec![0.001, 0.01, 0.05, 0.1]),
        a1 in 0.0005f64..0.3,
        a2 in 0.0005f64..0.3,
    ) {
        let text = format!("t({df})={stat:.2}, p<{bound}");
        let result = extract_results(&normalize_text(&text)).remove(0);
        let computed = recompute_p(&result, TailMode::TwoTailed).unwrap();
        let side = |a: f64| (a < bound, a < computed.value);
        prop_assume!(side(a1) == side(a2));
        let verdict = |alpha: f64| {
            let opts = CheckOptions { alpha, ..CheckOptions::default() };
            let v = check_consistency(&result, Some(computed), &opts, false);
            (v.error, v.decision_error)
        };
        prop_assert_eq!(verdict(a1), verdict(a2));
    }
}

#[test]
fn corpus_results_round_trip_through_render() {
    let mut unprintable = Vec::new();
    for case in load_corpus().unwrap() {
        for r in extract_results(&repair_pdf_artifacts(&normalize_text(&case.input))) {
            // A garbled token has no printed form to come back from.
            if !r.malformed.is_empty() {
                unprintable.push(case.id);
                continue;
            }
            let rendered = r.render();
            let again = extract_results(&normalize_text(&rendered));
            assert_eq!(again.len(), 1, "case {} rendered {rendered:?}", case.id);
            assert_eq!(again[0].content(), r.content(), "case {} rendered {rendered:?}", case.id);
        }
    }
    assert_eq!(unprintable, [176]);
}

#[test]
fn mutated_reference_rows_are_still_detected() {
    let inputs = reference_inputs();
    let refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let mutants = mutation_set(&refs, 10_000, 2024);
    assert_eq!(mutants.len(), 10_000);
    let pipeline = Pipeline::default();
    let missed: Vec<&str> = mutants
        .iter()
        .filter(|m| pipeline.analyze(&m.text).results.is_empty())
        .map(|m| m.text.as_str())
        .collect();
    let rate = 1.0 - missed.len() as f64 / mutants.len() as f64;
    assert!(rate >= 0.99, "detection rate {rate}; first misses {:?}", &missed[..missed.len().min(10)]);
}

#[test]
fn mutation_sets_are_reproducible() {
    let inputs = reference_inputs();
    let refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
    assert_eq!(mutation_set(&refs, 2_000, 11), mutation_set(&refs, 2_000, 11));
}
