//! Text canonicalization with an offset map back to the raw input.
//!
//! The same visual symbol reaches us in many encodings: a Greek chi can be
//! `χ`, `&#967;`, a mathematical italic chi, or the spelled-out `Chi^2`; a
//! squared mark can be `²`, `^2` or `<sup>2</sup>`. [`normalize_text`]
//! folds all of these into one ASCII-leaning form so that the extractor only
//! has to understand a single representation per visual form.
//!
//! Every byte of the normalized text remembers the raw byte range it came
//! from, so spans found downstream can be reported against the original.

use std::ops::Range;
use std::sync::OnceLock;

use regex::{Captures, Regex};

/// Canonical text plus a monotone map from normalized bytes to raw bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedText {
    text: String,
    offset_map: Vec<usize>,
    raw_ends: Vec<usize>,
    raw_len: usize,
}

/// Switches for the individual folding stages.
///
/// Everything is on by default; the knobs exist so that the conformance
/// harness can show what breaks when a stage is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizeOptions {
    pub fold_chi: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        Self { fold_chi: true }
    }
}

impl NormalizedText {
    /// Wraps text that is already canonical, with an identity offset map.
    pub fn identity(text: &str) -> Self {
        Mapped::identity(text).into_normalized(text.len())
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    /// Raw byte offset for each normalized byte.
    pub fn offset_map(&self) -> &[usize] {
        &self.offset_map
    }

    /// Length of the raw text this was produced from.
    pub fn raw_len(&self) -> usize {
        self.raw_len
    }

    /// Maps a half-open normalized byte range to the raw byte range that
    /// produced it.
    pub fn raw_range(&self, range: Range<usize>) -> Range<usize> {
        if range.start >= range.end || range.start >= self.text.len() {
            let at = self.raw_offset(range.start);
            return at..at;
        }
        let end = range.end.min(self.text.len());
        self.offset_map[range.start]..self.raw_ends[end - 1]
    }

    /// Raw offset of a normalized position; `len()` maps to the raw end.
    pub fn raw_offset(&self, pos: usize) -> usize {
        if pos >= self.offset_map.len() {
            self.raw_len
        } else {
            self.offset_map[pos]
        }
    }

    fn as_mapped(&self) -> Mapped {
        Mapped {
            text: self.text.clone(),
            starts: self.offset_map.clone(),
            ends: self.raw_ends.clone(),
        }
    }
}

/// Intermediate stage output: text plus a raw range per byte.
#[derive(Debug, Clone)]
struct Mapped {
    text: String,
    starts: Vec<usize>,
    ends: Vec<usize>,
}

impl Mapped {
    fn identity(text: &str) -> Self {
        let mut starts = Vec::with_capacity(text.len());
        let mut ends = Vec::with_capacity(text.len());
        for (i, c) in text.char_indices() {
            for _ in 0..c.len_utf8() {
                starts.push(i);
                ends.push(i + c.len_utf8());
            }
        }
        Self {
            text: text.to_owned(),
            starts,
            ends,
        }
    }

    fn into_normalized(self, raw_len: usize) -> NormalizedText {
        NormalizedText {
            text: self.text,
            offset_map: self.starts,
            raw_ends: self.ends,
            raw_len,
        }
    }

    fn push_copy(&mut self, src: &Mapped, range: Range<usize>) {
        self.text.push_str(&src.text[range.clone()]);
        self.starts.extend_from_slice(&src.starts[range.clone()]);
        self.ends.extend_from_slice(&src.ends[range]);
    }

    fn push_replacement(&mut self, src: &Mapped, range: Range<usize>, replacement: &str) {
        let (start, end) = if range.is_empty() {
            let at = src.starts.get(range.start).copied().unwrap_or_else(|| {
                src.ends.last().copied().unwrap_or(0)
            });
            (at, at)
        } else {
            (src.starts[range.start], src.ends[range.end - 1])
        };
        self.text.push_str(replacement);
        for _ in 0..replacement.len() {
            self.starts.push(start);
            self.ends.push(end);
        }
    }

    /// Rewrites every match of `re`. Returning `None` from `f` keeps the
    /// match verbatim.
    fn rewrite<F>(&self, re: &Regex, mut f: F) -> Mapped
    where
        F: FnMut(&str, &Captures<'_>) -> Option<String>,
    {
        let mut out = Mapped {
            text: String::with_capacity(self.text.len()),
            starts: Vec::with_capacity(self.starts.len()),
            ends: Vec::with_capacity(self.ends.len()),
        };
        let mut last = 0;
        for caps in re.captures_iter(&self.text) {
            let m = caps.get(0).expect("group 0");
            out.push_copy(self, last..m.start());
            match f(&self.text, &caps) {
                Some(rep) => out.push_replacement(self, m.range(), &rep),
                None => out.push_copy(self, m.range()),
            }
            last = m.end();
        }
        out.push_copy(self, last..self.text.len());
        out
    }

    /// Applies a per-character substitution table.
    fn map_chars<F>(&self, f: F) -> Mapped
    where
        F: Fn(char) -> Option<&'static str>,
    {
        let mut out = Mapped {
            text: String::with_capacity(self.text.len()),
            starts: Vec::with_capacity(self.starts.len()),
            ends: Vec::with_capacity(self.ends.len()),
        };
        for (i, c) in self.text.char_indices() {
            let r = i..i + c.len_utf8();
            match f(c) {
                Some(rep) => out.push_replacement(self, r, rep),
                None => out.push_copy(self, r),
            }
        }
        out
    }
}

macro_rules! regex {
    ($re:expr) => {{
        static RE: OnceLock<Regex> = OnceLock::new();
        RE.get_or_init(|| Regex::new($re).expect("valid regex"))
    }};
}

/// Greek and mathematical chi code points, folded to plain `χ` before the
/// squared mark is considered.
pub(crate) const CHI_VARIANTS: &[char] = &[
    '\u{03C7}', // GREEK SMALL LETTER CHI
    '\u{03A7}', // GREEK CAPITAL LETTER CHI
    '\u{AB53}', // LATIN SMALL LETTER CHI
    '\u{1D6BE}', // MATHEMATICAL BOLD CAPITAL CHI
    '\u{1D6D8}', // MATHEMATICAL BOLD SMALL CHI
    '\u{1D6F8}', // MATHEMATICAL ITALIC CAPITAL CHI
    '\u{1D712}', // MATHEMATICAL ITALIC SMALL CHI
    '\u{1D732}', // MATHEMATICAL BOLD ITALIC CAPITAL CHI
    '\u{1D74C}', // MATHEMATICAL BOLD ITALIC SMALL CHI
    '\u{1D76C}', // MATHEMATICAL SANS-SERIF BOLD CAPITAL CHI
    '\u{1D786}', // MATHEMATICAL SANS-SERIF BOLD SMALL CHI
    '\u{1D7A6}', // MATHEMATICAL SANS-SERIF BOLD ITALIC CAPITAL CHI
    '\u{1D7C0}', // MATHEMATICAL SANS-SERIF BOLD ITALIC SMALL CHI
];

fn fold_char(c: char, fold_chi: bool) -> Option<&'static str> {
    match c {
        '\u{00B2}' => Some("2"),
        '\u{2264}' | '\u{2A7D}' | '\u{2266}' => Some("<="),
        '\u{2265}' | '\u{2A7E}' | '\u{2267}' => Some(">="),
        '\u{2212}' => Some("-"),
        '\u{2019}' => Some("'"),
        '\t' | '\n' | '\r' | '\u{000B}' | '\u{000C}' | '\u{00A0}' | '\u{2002}'..='\u{200A}'
        | '\u{202F}' | '\u{205F}' | '\u{3000}' => Some(" "),
        c if fold_chi && c != '\u{03C7}' && CHI_VARIANTS.contains(&c) => Some("\u{03C7}"),
        _ => None,
    }
}

fn decode_entities(text: &Mapped) -> Mapped {
    let re = regex!(r"&#(?:([0-9]{1,7})|[xX]([0-9a-fA-F]{1,6}));|&([A-Za-z]+[0-9]?);");
    text.rewrite(re, |_, caps| {
        let decoded = if let Some(dec) = caps.get(1) {
            dec.as_str().parse::<u32>().ok().and_then(char::from_u32)
        } else if let Some(hex) = caps.get(2) {
            u32::from_str_radix(hex.as_str(), 16)
                .ok()
                .and_then(char::from_u32)
        } else {
            match &caps[3] {
                "chi" => Some('\u{03C7}'),
                "Chi" => Some('\u{03A7}'),
                "lt" => Some('<'),
                "gt" => Some('>'),
                "le" => Some('\u{2264}'),
                "ge" => Some('\u{2265}'),
                "nbsp" | "thinsp" | "ensp" | "emsp" => Some(' '),
                "sup2" => Some('\u{00B2}'),
                "minus" => Some('-'),
                "beta" => Some('\u{03B2}'),
                _ => None,
            }
        };
        // An ampersand would let a second pass decode a fresh entity.
        match decoded {
            Some('&') | None => None,
            Some(c) => Some(c.to_string()),
        }
    })
}

fn fold_sup_markup(text: &Mapped) -> Mapped {
    let re = regex!(r"(?i)<sup>\s*(?:2|\x{00B2})\s*</sup>");
    text.rewrite(re, |_, _| Some("2".to_owned()))
}

fn fold_chi_tokens(text: &Mapped) -> Mapped {
    let greek = regex!(r"\x{03C7}(?:\^?2)?");
    let text = text.rewrite(greek, |_, _| Some("chi2".to_owned()));
    let ascii = regex!(r"(?i)\bchi(?:\^?2|[- ]squared?\b)");
    text.rewrite(ascii, |_, _| Some("chi2".to_owned()))
}

fn collapse_whitespace(text: &Mapped) -> Mapped {
    let re = regex!(r" {2,}");
    text.rewrite(re, |_, _| Some(" ".to_owned()))
}

fn bracket_df_groups(text: &Mapped) -> Mapped {
    // The label character is captured and re-emitted because the regex
    // crate has no look-behind.
    let re = regex!(r"([A-Za-z2'])\[( ?[0-9][0-9., ]*)\]");
    text.rewrite(re, |_, caps| Some(format!("{}({})", &caps[1], &caps[2])))
}

/// Canonicalizes raw text with the default options.
pub fn normalize_text(raw: &str) -> NormalizedText {
    normalize_text_with(raw, NormalizeOptions::default())
}

pub fn normalize_text_with(raw: &str, opts: NormalizeOptions) -> NormalizedText {
    let mut text = Mapped::identity(raw);
    text = decode_entities(&text);
    text = fold_sup_markup(&text);
    text = text.map_chars(|c| fold_char(c, opts.fold_chi));
    if opts.fold_chi {
        text = fold_chi_tokens(&text);
    }
    text = collapse_whitespace(&text);
    text = bracket_df_groups(&text);
    text.into_normalized(raw.len())
}

const REPAIR_WINDOW: usize = 40;

fn statistic_head_re() -> &'static Regex {
    regex!(r"(?:^|[^A-Za-z0-9])(?:chi2|beta|[A-Za-z](?:\^?2)?)(?:'s)?(?: ?\([^()]{1,24}\))? ?(?:<=>|<=|>=|=<|=>|[<>=])")
}

/// Repairs the two operator artifacts that PDF-to-text conversion leaves
/// behind, inside candidate result windows only:
///
/// * a statistic head followed by a bare number (`t(12) 1.2`) gets the
///   indeterminate comparator `<=>`;
/// * a `5` standing in for `=` after `p` (`p 5 .34`) becomes `=`.
pub fn repair_pdf_artifacts(text: &NormalizedText) -> NormalizedText {
    let mapped = text.as_mapped();

    let missing_comp =
        regex!(r"(^|[^A-Za-z0-9])(chi2|[A-Za-z](?:\^?2)?)('s)?( ?\([^()]{1,24}\))? (-?\.?[0-9])");
    let mapped = rewrite_missing_comparator(&mapped, missing_comp);

    let mapped = rewrite_p_five(&mapped);

    mapped.into_normalized(text.raw_len())
}

fn rewrite_missing_comparator(mapped: &Mapped, re: &Regex) -> Mapped {
    // Rebuilt by hand so that only the single space becomes `<=>` and the
    // surrounding bytes keep their own offsets.
    let s = &mapped.text;
    let mut out = Mapped {
        text: String::with_capacity(s.len() + 8),
        starts: Vec::with_capacity(s.len() + 8),
        ends: Vec::with_capacity(s.len() + 8),
    };
    let mut last = 0;
    for caps in re.captures_iter(s) {
        let label = &caps[2];
        let has_df = caps.get(4).is_some();
        let kind = crate::extract::classify_statistic(label);
        if kind == crate::extract::StatKind::Unknown {
            continue;
        }
        let num = caps.get(5).expect("number group");
        // Without a df group the head must be followed by a p-clause.
        if !has_df {
            let tail_end = floor_char_boundary(s, (num.end() + REPAIR_WINDOW).min(s.len()));
            let tail = &s[num.start()..tail_end];
            if !regex!(r"[ ,;]p ?(?:<|>|=|5 )").is_match(tail) {
                continue;
            }
        }
        let space = num.start() - 1;
        out.push_copy(mapped, last..space);
        out.push_replacement(mapped, space..space + 1, "<=>");
        last = space + 1;
    }
    out.push_copy(mapped, last..s.len());
    out
}

fn rewrite_p_five(mapped: &Mapped) -> Mapped {
    let s = &mapped.text;
    let mut out = Mapped {
        text: String::with_capacity(s.len()),
        starts: Vec::with_capacity(s.len()),
        ends: Vec::with_capacity(s.len()),
    };
    let mut last = 0;
    for caps in regex!(r"(?:^|[^A-Za-z0-9])p( 5 )[.0-9]").captures_iter(s) {
        let start = caps.get(0).expect("group 0").start();
        let window = &s[floor_char_boundary(s, start.saturating_sub(REPAIR_WINDOW))..start];
        if !statistic_head_re().is_match(window) {
            continue;
        }
        let five = caps.get(1).expect("five group");
        out.push_copy(mapped, last..five.start());
        // The `=` maps to the `5`; the spaces around it are dropped.
        out.push_replacement(mapped, five.start() + 1..five.start() + 2, "=");
        last = five.end();
    }
    out.push_copy(mapped, last..s.len());
    out
}

fn floor_char_boundary(s: &str, mut i: usize) -> usize {
    while i > 0 && !s.is_char_boundary(i) {
        i -= 1;
    }
    i
}
