//! Consistency of a reported p-clause with the recomputed p-value.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::extract::{Comparator, ParsedResult};
use crate::normalize::NormalizedText;
use crate::stats::RecomputedP;

/// Slack added to the rounding tolerance so values that round exactly to
/// the reported digits are not lost to binary floating point.
const ROUNDING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub alpha: f64,
    /// Accept `p/2` for sign-symmetric statistics when the document
    /// mentions one-sided testing and only the halved value is consistent.
    pub one_tailed_txt: bool,
    /// Treat every sign-symmetric test as one-tailed.
    pub assume_one_tailed: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            one_tailed_txt: false,
            assume_one_tailed: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub recomputed: Option<RecomputedP>,
    /// `None` when no comparison was possible.
    pub error: Option<bool>,
    pub decision_error: Option<bool>,
    pub one_tailed_in_txt: bool,
}

/// Whether `computed` is compatible with the reported clause. `None` when
/// the clause carries nothing to compare against.
pub fn consistent(computed: f64, comp: Comparator, reported: Option<f64>, decimals: u32, alpha: f64) -> Option<bool> {
    if comp == Comparator::Ns {
        return Some(computed > alpha);
    }
    let reported = reported?;
    Some(match comp {
        Comparator::Eq => {
            let half_unit = 0.5 * 10f64.powi(-(decimals as i32));
            (computed - reported).abs() <= half_unit + ROUNDING_SLACK
        }
        Comparator::Lt => computed < reported,
        Comparator::Gt => computed > reported,
        Comparator::Le => computed <= reported,
        Comparator::Ge => computed >= reported,
        Comparator::Indeterminate | Comparator::Ns => return None,
    })
}

/// Significance claimed by the reported clause at level `alpha`.
fn reported_significant(comp: Comparator, reported: Option<f64>, alpha: f64) -> Option<bool> {
    match comp {
        Comparator::Ns => Some(false),
        Comparator::Indeterminate => None,
        Comparator::Lt | Comparator::Le | Comparator::Eq => reported.map(|p| p <= alpha),
        Comparator::Gt | Comparator::Ge => reported.map(|p| p < alpha),
    }
}

/// Compares a result's p-clause with its recomputed (two-tailed) p-value.
pub fn check_consistency(
    result: &ParsedResult,
    recomputed: Option<RecomputedP>,
    opts: &CheckOptions,
    one_tailed_in_txt: bool,
) -> Verdict {
    let mut verdict = Verdict {
        recomputed,
        error: None,
        decision_error: None,
        one_tailed_in_txt,
    };
    let (Some(two_tailed), Some(comp)) = (recomputed, result.p_comp) else {
        return verdict;
    };
    if result.stat_comp == Some(Comparator::Indeterminate) {
        return verdict;
    }
    let symmetric = two_tailed.method.is_sign_symmetric();
    let alpha = opts.alpha;
    let check = |p: f64| {
        consistent(p, comp, result.reported_p, result.reported_p_decimals, alpha)
    };

    let mut used = if opts.assume_one_tailed && symmetric {
        two_tailed.one_tailed()
    } else {
        two_tailed
    };
    let Some(mut ok) = check(used.value) else {
        return verdict;
    };
    if !ok && opts.one_tailed_txt && one_tailed_in_txt && symmetric && !opts.assume_one_tailed {
        let halved = two_tailed.one_tailed();
        if check(halved.value) == Some(true) {
            ok = true;
            used = halved;
        }
    }

    let error = !ok;
    let decision_error = match reported_significant(comp, result.reported_p, alpha) {
        Some(claimed) => error && claimed != (used.value <= alpha),
        None => false,
    };
    verdict.recomputed = Some(used);
    verdict.error = Some(error);
    verdict.decision_error = Some(decision_error);
    verdict
}

/// True when the document mentions one-sided, one-tailed or directional
/// testing.
pub fn detect_one_tailed_text(document: &NormalizedText) -> bool {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| {
        Regex::new(r"(?i)\b(?:one[- ]?(?:sided|tailed)|directional)\b").expect("valid regex")
    });
    re.is_match(document.as_str())
}
