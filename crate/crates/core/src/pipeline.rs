//! The normalize → repair → extract → recompute → check chain.

use crate::check::{check_consistency, detect_one_tailed_text, CheckOptions, Verdict};
use crate::extract::{extract_results, ParsedResult};
use crate::normalize::{normalize_text_with, repair_pdf_artifacts, NormalizeOptions, NormalizedText};
use crate::stats::{recompute_p, RecomputedP, TailMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub normalize: NormalizeOptions,
    pub repair_artifacts: bool,
    pub check: CheckOptions,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            normalize: NormalizeOptions::default(),
            repair_artifacts: true,
            check: CheckOptions::default(),
        }
    }
}

/// A parsed result with its two-tailed recomputation and verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckedResult {
    pub result: ParsedResult,
    pub recomputed: Option<RecomputedP>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub text: NormalizedText,
    pub one_tailed_in_txt: bool,
    pub results: Vec<CheckedResult>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Pipeline {
    pub options: PipelineOptions,
}

impl Pipeline {
    pub fn new(options: PipelineOptions) -> Self {
        Self { options }
    }

    pub fn prepare(&self, raw: &str) -> NormalizedText {
        let text = normalize_text_with(raw, self.options.normalize);
        if self.options.repair_artifacts {
            repair_pdf_artifacts(&text)
        } else {
            text
        }
    }

    pub fn analyze(&self, raw: &str) -> Analysis {
        let text = self.prepare(raw);
        let one_tailed_in_txt = detect_one_tailed_text(&text);
        let results = extract_results(&text)
            .into_iter()
            .map(|result| {
                let recomputed = recompute_p(&result, TailMode::TwoTailed);
                let verdict =
                    check_consistency(&result, recomputed, &self.options.check, one_tailed_in_txt);
                CheckedResult {
                    result,
                    recomputed,
                    verdict,
                }
            })
            .collect();
        Analysis {
            text,
            one_tailed_in_txt,
            results,
        }
    }
}
