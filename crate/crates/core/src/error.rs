use thiserror::Error;

/// A token in value position had no parseable numeric prefix.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed number: {token:?}")]
pub struct MalformedNumber {
    pub token: String,
}

impl MalformedNumber {
    pub fn new(token: impl Into<String>) -> Self {
        Self {
            token: token.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("no statistical result at {start}..{end}")]
    NoResult { start: usize, end: usize },
}

/// Argument outside the domain of a special function.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{function}: argument out of domain ({detail})")]
pub struct DomainError {
    pub function: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("embedded corpus checksum mismatch: expected {expected}, found {found}")]
    CorruptCorpus { expected: String, found: String },
    #[error("corpus line {line}: {reason}")]
    BadRecord { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("input cannot take a {kind} mutation: {reason}")]
    NotMutable { kind: &'static str, reason: String },
}
