//! The embedded conformance corpus and the harness that scores a pipeline
//! against it.

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::CorpusError;
use crate::extract::{Comparator, StatKind};
use crate::pipeline::{CheckedResult, Pipeline};
use crate::stats::z_estimate;

/// Tab-separated source of the corpus, shipped inside the library.
pub const CORPUS_TSV: &str = include_str!("../data/corpus.tsv");

/// SHA-256 of [`CORPUS_TSV`].
pub const CORPUS_SHA256: &str = "b6912dab0a84dcdd3833ea2f2a4f2e3290e56b939f3ce924ccc09f90f1c4dbd3";

/// Tolerance for values printed at two decimals.
const PRINTED_TOLERANCE: f64 = 0.005 + 1e-9;

/// Expected extraction for one corpus input. Empty cells are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub kind: Option<StatKind>,
    pub stat_comp: Option<Comparator>,
    pub stat_value: Option<f64>,
    pub d: Option<f64>,
    pub r_squared: Option<f64>,
    pub df1: Option<f64>,
    pub df2: Option<f64>,
    pub beta: Option<f64>,
    pub se_beta: Option<f64>,
    pub z_estimate: Option<f64>,
    pub p_comp: Option<Comparator>,
    pub reported_p: Option<f64>,
    pub recomputed_p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusCase {
    pub id: u32,
    pub input: String,
    pub expected: Expected,
    /// Field mismatches are reported but do not fail conformance.
    pub lenient: bool,
}

pub fn load_corpus() -> Result<Vec<CorpusCase>, CorpusError> {
    load_corpus_from(CORPUS_TSV, CORPUS_SHA256)
}

/// Parses corpus data after verifying it against `checksum`.
pub fn load_corpus_from(data: &str, checksum: &str) -> Result<Vec<CorpusCase>, CorpusError> {
    let found = sha256_hex(data.as_bytes());
    if !found.eq_ignore_ascii_case(checksum) {
        return Err(CorpusError::CorruptCorpus {
            expected: checksum.to_string(),
            found,
        });
    }
    data.lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_record(i + 1, l))
        .collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_record(line: usize, record: &str) -> Result<CorpusCase, CorpusError> {
    let bad = |reason: String| CorpusError::BadRecord { line, reason };
    let cells: Vec<&str> = record.split('\t').collect();
    if cells.len() != 16 {
        return Err(bad(format!("expected 16 columns, found {}", cells.len())));
    }
    let num = |i: usize| -> Result<Option<f64>, CorpusError> {
        match cells[i].trim() {
            "" => Ok(None),
            s => s
                .parse()
                .map(Some)
                .map_err(|_| bad(format!("column {} is not a number: {s:?}", i + 1))),
        }
    };
    let comp = |i: usize| -> Result<Option<Comparator>, CorpusError> {
        match cells[i].trim() {
            "" => Ok(None),
            s => Comparator::from_symbol(s)
                .map(Some)
                .ok_or_else(|| bad(format!("unknown comparator {s:?}"))),
        }
    };
    let kind = match cells[2].trim() {
        "" => None,
        s => Some(StatKind::from_name(s).ok_or_else(|| bad(format!("unknown kind {s:?}")))?),
    };
    let id = cells[0]
        .parse()
        .map_err(|_| bad(format!("bad id {:?}", cells[0])))?;
    Ok(CorpusCase {
        id,
        input: cells[1].to_string(),
        expected: Expected {
            kind,
            stat_comp: comp(3)?,
            stat_value: num(4)?,
            d: num(5)?,
            r_squared: num(6)?,
            df1: num(7)?,
            df2: num(8)?,
            beta: num(9)?,
            se_beta: num(10)?,
            z_estimate: num(11)?,
            p_comp: comp(12)?,
            reported_p: num(13)?,
            recomputed_p: num(14)?,
        },
        lenient: cells[15].split(',').any(|f| f.trim() == "lenient"),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseFailure {
    pub id: u32,
    pub input: String,
    pub lenient: bool,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConformanceReport {
    pub total: usize,
    pub detected: usize,
    /// Inputs with an expected p comparator.
    pub p_clauses: usize,
    /// Inputs with an expected reported p-value.
    pub p_expected: usize,
    pub p_detected: usize,
    pub recalc_expected: usize,
    pub recalc_matches: usize,
    /// Ordered by case id. Includes lenient cases.
    pub failures: Vec<CaseFailure>,
}

impl ConformanceReport {
    pub fn strict_failures(&self) -> impl Iterator<Item = &CaseFailure> {
        self.failures.iter().filter(|f| !f.lenient)
    }

    pub fn passed(&self) -> bool {
        self.detected == self.total
            && self.p_detected == self.p_expected
            && self.recalc_matches == self.recalc_expected
            && self.strict_failures().next().is_none()
    }

    /// One-line report: detected results, extracted p-values, verdict.
    pub fn summary(&self) -> String {
        format!(
            "{} detected / {} p-clauses / {}",
            self.detected,
            self.p_detected,
            if self.passed() { "pass" } else { "FAIL" }
        )
    }
}

struct CaseOutcome {
    detected: bool,
    p_detected: bool,
    recalc_match: bool,
    failure: Option<CaseFailure>,
}

/// Runs every case through `pipeline` and compares the first extracted
/// result with the expected fields.
pub fn run_conformance(cases: &[CorpusCase], pipeline: &Pipeline) -> ConformanceReport {
    let outcomes: Vec<CaseOutcome> = cases.par_iter().map(|c| score_case(c, pipeline)).collect();
    let mut report = ConformanceReport {
        total: cases.len(),
        detected: 0,
        p_clauses: cases.iter().filter(|c| c.expected.p_comp.is_some()).count(),
        p_expected: cases.iter().filter(|c| c.expected.reported_p.is_some()).count(),
        p_detected: 0,
        recalc_expected: cases
            .iter()
            .filter(|c| c.expected.recomputed_p.is_some())
            .count(),
        recalc_matches: 0,
        failures: Vec::new(),
    };
    for o in outcomes {
        report.detected += usize::from(o.detected);
        report.p_detected += usize::from(o.p_detected);
        report.recalc_matches += usize::from(o.recalc_match);
        report.failures.extend(o.failure);
    }
    report
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= PRINTED_TOLERANCE
}

fn compare(out: &mut Vec<String>, field: &str, expected: Option<f64>, got: Option<f64>) {
    if let Some(e) = expected {
        match got {
            Some(g) if close(e, g) => {}
            _ => out.push(format!("{field}: expected {e}, got {got:?}")),
        }
    }
}

fn score_case(case: &CorpusCase, pipeline: &Pipeline) -> CaseOutcome {
    let analysis = pipeline.analyze(&case.input);
    let Some(first) = analysis.results.first() else {
        return CaseOutcome {
            detected: false,
            p_detected: false,
            recalc_match: false,
            failure: Some(CaseFailure {
                id: case.id,
                input: case.input.clone(),
                lenient: case.lenient,
                mismatches: vec!["no result detected".into()],
            }),
        };
    };
    let mut mismatches = Vec::new();
    let e = &case.expected;
    let r = &first.result;

    if let Some(kind) = e.kind {
        if r.kind != kind {
            mismatches.push(format!("kind: expected {}, got {}", kind.name(), r.kind.name()));
        }
    }
    if let Some(comp) = e.stat_comp {
        if r.stat_comp != Some(comp) {
            mismatches.push(format!("stat comparator: expected {comp:?}, got {:?}", r.stat_comp));
        }
    }
    compare(&mut mismatches, "stat", e.stat_value, r.stat_value);
    compare(&mut mismatches, "d", e.d, r.d);
    compare(&mut mismatches, "R2", e.r_squared, r.r_squared);
    compare(&mut mismatches, "df1", e.df1, r.df1);
    compare(&mut mismatches, "df2", e.df2, r.df2);
    compare(&mut mismatches, "beta", e.beta, r.beta);
    compare(&mut mismatches, "SE", e.se_beta, r.se_beta);
    compare(&mut mismatches, "Zest", e.z_estimate, z_estimate(r));

    match e.p_comp {
        Some(comp) if r.p_comp != Some(comp) => {
            mismatches.push(format!("p comparator: expected {comp:?}, got {:?}", r.p_comp))
        }
        None if !matches!(r.p_comp, None | Some(Comparator::Ns)) => {
            mismatches.push(format!("p comparator: expected none, got {:?}", r.p_comp))
        }
        _ => {}
    }
    let p_detected = match (e.reported_p, r.reported_p) {
        (Some(ep), Some(gp)) => (ep - gp).abs() < 1e-9,
        _ => false,
    };
    match (e.reported_p, r.reported_p) {
        (Some(ep), got) if !p_detected => {
            mismatches.push(format!("p: expected {ep}, got {got:?}"))
        }
        (None, Some(gp)) => mismatches.push(format!("p: expected none, got {gp}")),
        _ => {}
    }

    let recalc = recalc_value(first);
    let recalc_match = matches!((e.recomputed_p, recalc), (Some(ep), Some(gp)) if close(ep, gp));
    match (e.recomputed_p, recalc) {
        (Some(ep), got) if !recalc_match => {
            mismatches.push(format!("recalculated p: expected {ep}, got {got:?}"))
        }
        (None, Some(gp)) => {
            mismatches.push(format!("recalculated p: expected none, got {gp}"))
        }
        _ => {}
    }

    CaseOutcome {
        detected: true,
        p_detected,
        recalc_match,
        failure: (!mismatches.is_empty()).then(|| CaseFailure {
            id: case.id,
            input: case.input.clone(),
            lenient: case.lenient,
            mismatches,
        }),
    }
}

fn recalc_value(checked: &CheckedResult) -> Option<f64> {
    checked.recomputed.map(|p| p.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_corpus_loads() {
        let cases = load_corpus().unwrap();
        assert_eq!(cases.len(), 187);
        assert!(cases.windows(2).all(|w| w[0].id < w[1].id));
        assert_eq!(cases.iter().filter(|c| c.expected.p_comp.is_some()).count(), 185);
        assert_eq!(cases.iter().filter(|c| c.expected.reported_p.is_some()).count(), 184);
    }

    #[test]
    fn corrupted_corpus_is_rejected() {
        let tampered = CORPUS_TSV.replacen("2.3", "2.4", 1);
        assert!(matches!(
            load_corpus_from(&tampered, CORPUS_SHA256),
            Err(CorpusError::CorruptCorpus { .. })
        ));
    }

    #[test]
    fn bad_records_are_located() {
        let data = "header\n1\tonly two\n";
        let sum = sha256_hex(data.as_bytes());
        assert!(matches!(
            load_corpus_from(data, &sum),
            Err(CorpusError::BadRecord { line: 2, .. })
        ));
    }
}
