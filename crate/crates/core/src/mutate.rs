//! Seeded corruptions of result strings, for robustness testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::MutationError;
use crate::extract::Comparator;
use crate::pipeline::Pipeline;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MutationKind {
    /// Replace one digit of the statistic value.
    DigitSubstitute,
    /// Drop one digit of the statistic value.
    DigitOmit,
    /// Insert a digit into the statistic value.
    DigitAdd,
    /// Exchange the statistic value and the p-value.
    SwapStatP,
    /// Replace the text between the statistic and the p-clause.
    SeparatorCorrupt,
    /// Replace a comparator with a garbled one.
    OperatorCorrupt,
}

impl MutationKind {
    pub const ALL: [MutationKind; 6] = [
        MutationKind::DigitSubstitute,
        MutationKind::DigitOmit,
        MutationKind::DigitAdd,
        MutationKind::SwapStatP,
        MutationKind::SeparatorCorrupt,
        MutationKind::OperatorCorrupt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MutationKind::DigitSubstitute => "digit-substitute",
            MutationKind::DigitOmit => "digit-omit",
            MutationKind::DigitAdd => "digit-add",
            MutationKind::SwapStatP => "swap-stat-p",
            MutationKind::SeparatorCorrupt => "separator-corrupt",
            MutationKind::OperatorCorrupt => "operator-corrupt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mutation {
    pub kind: MutationKind,
    pub seed: u64,
}

const SEPARATORS: [&str; 6] = [", ", "; ", " ", "", ": ", " , "];
const GARBLED_OPERATORS: [&str; 4] = [" ", " 5 ", "", "~"];

/// Applies `m` to the first result in `input`. The same input and mutation
/// always give the same output.
pub fn mutate(input: &str, m: Mutation) -> Result<String, MutationError> {
    let not_mutable = |reason: &str| MutationError::NotMutable {
        kind: m.kind.name(),
        reason: reason.to_string(),
    };
    let analysis = Pipeline::default().analyze(input);
    let result = analysis
        .results
        .first()
        .map(|c| &c.result)
        .ok_or_else(|| not_mutable("no result found"))?;
    let raw = |r: &std::ops::Range<usize>| analysis.text.raw_range(r.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(m.seed);

    match m.kind {
        MutationKind::DigitSubstitute | MutationKind::DigitOmit | MutationKind::DigitAdd => {
            let value = result
                .fields
                .stat_value
                .as_ref()
                .map(raw)
                .ok_or_else(|| not_mutable("no statistic value"))?;
            let digits: Vec<usize> = input[value.clone()]
                .char_indices()
                .filter(|(_, c)| c.is_ascii_digit())
                .map(|(i, _)| value.start + i)
                .collect();
            match m.kind {
                MutationKind::DigitSubstitute => {
                    let &at = digits.choose(&mut rng).ok_or_else(|| not_mutable("no digits"))?;
                    let old = input.as_bytes()[at];
                    let new = loop {
                        let d = b'0' + rng.gen_range(0..10u8);
                        if d != old {
                            break d;
                        }
                    };
                    Ok(splice(input, at..at + 1, &(new as char).to_string()))
                }
                MutationKind::DigitOmit => {
                    if digits.len() < 2 {
                        return Err(not_mutable("omitting the only digit removes the value"));
                    }
                    let &at = digits.choose(&mut rng).expect("non-empty");
                    Ok(splice(input, at..at + 1, ""))
                }
                _ => {
                    let at = rng.gen_range(value.start..=value.end);
                    let d = (b'0' + rng.gen_range(0..10u8)) as char;
                    Ok(splice(input, at..at, &d.to_string()))
                }
            }
        }
        MutationKind::SwapStatP => {
            let (Some(s), Some(p)) = (&result.fields.stat_value, &result.fields.p_value) else {
                return Err(not_mutable("needs both a statistic value and a p-value"));
            };
            let (s, p) = (raw(s), raw(p));
            if s.end > p.start {
                return Err(not_mutable("p-value precedes the statistic"));
            }
            let mut out = String::with_capacity(input.len());
            out.push_str(&input[..s.start]);
            out.push_str(&input[p.clone()]);
            out.push_str(&input[s.end..p.start]);
            out.push_str(&input[s.clone()]);
            out.push_str(&input[p.end..]);
            Ok(out)
        }
        MutationKind::SeparatorCorrupt => {
            let (Some(s), Some(pc)) = (&result.fields.stat_value, &result.fields.p_clause) else {
                return Err(not_mutable("needs a statistic value followed by a p-clause"));
            };
            let (s, pc) = (raw(s), raw(pc));
            if s.end > pc.start {
                return Err(not_mutable("p-clause precedes the statistic"));
            }
            let current = &input[s.end..pc.start];
            let options: Vec<&str> = SEPARATORS.iter().copied().filter(|o| *o != current).collect();
            let sep = options.choose(&mut rng).expect("non-empty");
            Ok(splice(input, s.end..pc.start, sep))
        }
        MutationKind::OperatorCorrupt => {
            let mut targets = Vec::new();
            if let Some(r) = &result.fields.stat_comp {
                targets.push(raw(r));
            }
            if result.p_comp.is_some_and(|c| c != Comparator::Ns) {
                if let Some(r) = &result.fields.p_comp {
                    targets.push(raw(r));
                }
            }
            let target = targets
                .choose(&mut rng)
                .cloned()
                .ok_or_else(|| not_mutable("no comparator"))?;
            let current = &input[target.clone()];
            let options: Vec<&str> = GARBLED_OPERATORS
                .iter()
                .copied()
                .filter(|o| *o != current)
                .collect();
            let op = options.choose(&mut rng).expect("non-empty");
            Ok(splice(input, target, op))
        }
    }
}

fn splice(input: &str, range: std::ops::Range<usize>, with: &str) -> String {
    let mut out = String::with_capacity(input.len() + with.len());
    out.push_str(&input[..range.start]);
    out.push_str(with);
    out.push_str(&input[range.end..]);
    out
}

/// A mutated input together with what produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutatedCase {
    pub source: usize,
    pub mutation: Mutation,
    pub text: String,
}

/// Draws `count` applicable mutations of `inputs`, cycling through the
/// mutation kinds. Deterministic in `seed`.
pub fn mutation_set(inputs: &[&str], count: usize, seed: u64) -> Vec<MutatedCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    if inputs.is_empty() {
        return out;
    }
    let mut misses = 0usize;
    while out.len() < count && misses < count.max(1000) * 10 {
        let kind = MutationKind::ALL[out.len() % MutationKind::ALL.len()];
        let source = rng.gen_range(0..inputs.len());
        let mutation = Mutation {
            kind,
            seed: rng.gen(),
        };
        match mutate(inputs[source], mutation) {
            Ok(text) => out.push(MutatedCase {
                source,
                mutation,
                text,
            }),
            Err(_) => misses += 1,
        }
    }
    out
}
