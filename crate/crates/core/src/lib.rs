//! Extraction and consistency checking of statistical results reported in
//! prose.
//!
//! ```
//! use statex::pipeline::Pipeline;
//!
//! let analysis = Pipeline::default().analyze("t(12)=2.3, p<.05");
//! let checked = &analysis.results[0];
//! assert_eq!(checked.result.stat_value, Some(2.3));
//! assert_eq!(checked.verdict.error, Some(false));
//! ```

pub mod check;
pub mod corpus;
pub mod error;
pub mod extract;
pub mod mutate;
pub mod normalize;
pub mod number;
pub mod pipeline;
pub mod stats;

pub use check::{check_consistency, CheckOptions, Verdict};
pub use error::{CorpusError, DomainError, ExtractError, MalformedNumber, MutationError};
pub use extract::{extract_results, Comparator, ParsedResult, StatKind};
pub use normalize::{normalize_text, NormalizedText};
pub use number::parse_number;
pub use pipeline::{Analysis, CheckedResult, Pipeline, PipelineOptions};
pub use stats::{recompute_p, RecomputedP, TailMode};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/normalization.md")]
    mod normalization {}
    #[doc = include_str!("../../../book/src/extraction.md")]
    mod extraction {}
    #[doc = include_str!("../../../book/src/recomputation.md")]
    mod recomputation {}
    #[doc = include_str!("../../../book/src/consistency.md")]
    mod consistency {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
