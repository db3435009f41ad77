//! Result detection and parsing on normalized text.
//!
//! A result is anchored either on a statistic head (`label [df group]
//! comparator value`) or on a bare p-clause. From a head the scanner walks
//! forward over separators and companion values (`d=`, `df=`, `SE=`, ...)
//! until it meets the p-clause, another statistic, or ordinary prose.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::Range;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{ExtractError, MalformedNumber};
use crate::normalize::NormalizedText;
use crate::number::{parse_df, parse_number_detailed};

/// Recognized statistic families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatKind {
    T,
    F,
    R,
    Z,
    Chi2,
    Q,
    H,
    G2,
    U,
    R2,
    BetaSE,
    POnly,
    Unknown,
}

impl StatKind {
    pub const ALL: [StatKind; 13] = [
        StatKind::T,
        StatKind::F,
        StatKind::R,
        StatKind::Z,
        StatKind::Chi2,
        StatKind::Q,
        StatKind::H,
        StatKind::G2,
        StatKind::U,
        StatKind::R2,
        StatKind::BetaSE,
        StatKind::POnly,
        StatKind::Unknown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatKind::T => "t",
            StatKind::F => "F",
            StatKind::R => "r",
            StatKind::Z => "Z",
            StatKind::Chi2 => "Chi2",
            StatKind::Q => "Q",
            StatKind::H => "H",
            StatKind::G2 => "G2",
            StatKind::U => "U",
            StatKind::R2 => "R2",
            StatKind::BetaSE => "BetaSE",
            StatKind::POnly => "p",
            StatKind::Unknown => "Unknown",
        }
    }

    pub fn from_name(name: &str) -> Option<StatKind> {
        StatKind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Statistics whose one-tailed p is half the two-tailed p.
    pub fn is_sign_symmetric(self) -> bool {
        matches!(self, StatKind::T | StatKind::R | StatKind::Z | StatKind::BetaSE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparator {
    Eq,
    Lt,
    Gt,
    Le,
    Ge,
    /// `<=>`: the operator was lost (usually in PDF conversion).
    Indeterminate,
    /// "n.s." in place of a p-value.
    Ns,
}

impl Comparator {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Eq => "=",
            Comparator::Lt => "<",
            Comparator::Gt => ">",
            Comparator::Le => "<=",
            Comparator::Ge => ">=",
            Comparator::Indeterminate => "<=>",
            Comparator::Ns => "ns",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Comparator> {
        Some(match s {
            "=" => Comparator::Eq,
            "<" => Comparator::Lt,
            ">" => Comparator::Gt,
            "<=" => Comparator::Le,
            ">=" => Comparator::Ge,
            "<=>" => Comparator::Indeterminate,
            "ns" => Comparator::Ns,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RangeViolation {
    POutOfRange,
    ROutOfRange,
    R2OutOfRange,
}

/// Location of a result in the normalized text and in the raw input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResultSpan {
    pub start: usize,
    pub end: usize,
    pub raw_start: usize,
    pub raw_end: usize,
}

/// Normalized byte ranges of the individual tokens of a result.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FieldSpans {
    pub label: Option<Range<usize>>,
    pub stat_comp: Option<Range<usize>>,
    pub stat_value: Option<Range<usize>>,
    pub separator: Option<Range<usize>>,
    pub p_clause: Option<Range<usize>>,
    pub p_comp: Option<Range<usize>>,
    pub p_value: Option<Range<usize>>,
}

/// One extracted statistical report.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedResult {
    pub kind: StatKind,
    /// Head label as written, without plural or index decorations.
    pub label: Option<String>,
    pub stat_comp: Option<Comparator>,
    pub stat_value: Option<f64>,
    pub df1: Option<f64>,
    pub df2: Option<f64>,
    pub d: Option<f64>,
    pub r_squared: Option<f64>,
    pub beta: Option<f64>,
    pub se_beta: Option<f64>,
    pub p_comp: Option<Comparator>,
    pub reported_p: Option<f64>,
    pub reported_p_decimals: u32,
    pub plural: bool,
    pub range_violations: BTreeSet<RangeViolation>,
    pub malformed: Vec<MalformedNumber>,
    pub span: ResultSpan,
    pub fields: FieldSpans,
}

/// Maps a canonical head label to its statistic family.
///
/// The table is deliberately narrow: a squared mark does not make an
/// arbitrary letter a chi-square.
pub fn classify_statistic(label: &str) -> StatKind {
    let label = label
        .strip_suffix("'s")
        .or_else(|| label.strip_suffix("\u{2019}s"))
        .unwrap_or(label);
    match label {
        "t" | "t2" | "t^2" => StatKind::T,
        "F" => StatKind::F,
        "r" => StatKind::R,
        "r2" | "r^2" | "R2" | "R^2" => StatKind::R2,
        "Z" | "z" => StatKind::Z,
        "Q" | "q" | "Q2" | "Q^2" => StatKind::Q,
        "H" | "H2" | "H^2" => StatKind::H,
        "G2" | "G^2" => StatKind::G2,
        "U" => StatKind::U,
        "chi2" | "X2" | "x2" | "X^2" | "x^2" | "X" | "x" => StatKind::Chi2,
        "beta" | "Beta" | "\u{03B2}" => StatKind::BetaSE,
        _ => StatKind::Unknown,
    }
}

macro_rules! regex {
    ($re:expr) => {{
        static RE: OnceLock<Regex> = OnceLock::new();
        RE.get_or_init(|| Regex::new($re).expect("valid regex"))
    }};
}

const MAX_GROUP: usize = 40;
const MAX_COMPANIONS: usize = 4;

struct Scanner<'a> {
    s: &'a str,
    b: &'a [u8],
}

struct Label {
    text: String,
    range: Range<usize>,
    plural: bool,
}

struct Head {
    start: usize,
    label: Label,
    df_group: Option<Range<usize>>,
    comp: Comparator,
    comp_range: Range<usize>,
    value: Range<usize>,
    plural: bool,
}

struct PClause {
    start: usize,
    comp: Comparator,
    comp_range: Range<usize>,
    value: Option<Range<usize>>,
    plural: bool,
    end: usize,
}

struct Companion {
    label: String,
    value: Range<usize>,
    end: usize,
}

impl<'a> Scanner<'a> {
    fn new(s: &'a str) -> Self {
        Self { s, b: s.as_bytes() }
    }

    fn at(&self, i: usize) -> Option<u8> {
        self.b.get(i).copied()
    }

    fn is_alnum(&self, i: usize) -> bool {
        self.at(i).is_some_and(|c| c.is_ascii_alphanumeric())
    }

    fn boundary_before(&self, pos: usize) -> bool {
        pos == 0 || !(self.b[pos - 1].is_ascii_alphanumeric() || self.b[pos - 1] >= 0x80)
    }

    fn skip_spaces(&self, mut pos: usize) -> usize {
        while self.at(pos) == Some(b' ') {
            pos += 1;
        }
        pos
    }

    fn comparator(&self, pos: usize) -> Option<(Comparator, Range<usize>)> {
        const OPS: [(&str, Comparator); 9] = [
            ("<=>", Comparator::Indeterminate),
            ("<=", Comparator::Le),
            (">=", Comparator::Ge),
            ("=<", Comparator::Le),
            ("=>", Comparator::Ge),
            ("==", Comparator::Eq),
            ("<", Comparator::Lt),
            (">", Comparator::Gt),
            ("=", Comparator::Eq),
        ];
        let rest = &self.s[pos..];
        OPS.iter()
            .find(|(op, _)| rest.starts_with(op))
            .map(|(op, c)| (*c, pos..pos + op.len()))
    }

    /// A candidate value token: starts like a number, runs to the next
    /// separator or space.
    fn value_token(&self, pos: usize) -> Option<Range<usize>> {
        let first = self.at(pos)?;
        let starts_number = first.is_ascii_digit()
            || (first == b'.' && self.at(pos + 1).is_some_and(|c| c.is_ascii_alphanumeric()))
            || ((first == b'-' || first == b'+')
                && self
                    .at(pos + 1)
                    .is_some_and(|c| c.is_ascii_digit() || c == b'.'));
        if !starts_number {
            return None;
        }
        let mut end = pos + 1;
        while let Some(c) = self.at(end) {
            if c.is_ascii_alphanumeric() || matches!(c, b'.' | b'^' | b'/' | b'%' | b'+' | b'-') {
                end += 1;
            } else {
                break;
            }
        }
        // Sentence punctuation after the last digit is not part of the value.
        while end > pos + 1
            && matches!(self.b[end - 1], b'.' | b'^' | b'/' | b'+' | b'-')
            && self.b[end - 2].is_ascii_digit()
        {
            end -= 1;
        }
        Some(pos..end)
    }

    fn label(&self, pos: usize) -> Option<Label> {
        if !self.boundary_before(pos) {
            return None;
        }
        let rest = &self.s[pos..];
        let mut end = None;
        for word in ["chi2", "beta", "Beta", "\u{03B2}"] {
            if rest.starts_with(word) {
                end = Some(pos + word.len());
                break;
            }
        }
        let end = match end {
            Some(e) => e,
            None => {
                let c = self.at(pos)?;
                if !c.is_ascii_alphabetic() {
                    return None;
                }
                let mut e = pos + 1;
                if rest[1..].starts_with("^2") {
                    e += 2;
                } else if self.at(e) == Some(b'2') {
                    e += 1;
                }
                e
            }
        };
        if self.is_alnum(end) || self.at(end).is_some_and(|c| c >= 0x80) {
            return None;
        }
        let text = self.s[pos..end].to_owned();
        let after = &self.s[end..];
        let (plural, stop) = if after.starts_with("'s") {
            (true, end + 2)
        } else if after.starts_with("\u{2019}s") {
            (true, end + "\u{2019}s".len())
        } else {
            (false, end)
        };
        if self.is_alnum(stop) {
            return None;
        }
        Some(Label {
            text,
            range: pos..stop,
            plural,
        })
    }

    fn df_group(&self, pos: usize) -> Option<Range<usize>> {
        if self.at(pos) != Some(b'(') {
            return None;
        }
        let limit = (pos + MAX_GROUP).min(self.b.len());
        let close = self.b[pos + 1..limit].iter().position(|&c| c == b')' || c == b'(')?;
        let close = pos + 1 + close;
        if self.b[close] != b')' {
            return None;
        }
        if !self.b[pos + 1..close].iter().any(u8::is_ascii_digit) {
            return None;
        }
        Some(pos..close + 1)
    }

    fn head(&self, pos: usize) -> Option<Head> {
        let start = pos;
        let mut p = pos;
        let mut plural = false;
        if self.s[p..].len() > 4
            && self.s[p..p + 4].eq_ignore_ascii_case("all ")
            && self.boundary_before(p)
        {
            if let Some(h) = self.head(p + 4) {
                return Some(Head {
                    start,
                    plural: true,
                    ..h
                });
            }
            return None;
        }
        let label = self.label(p)?;
        plural |= label.plural;
        p = label.range.end;

        // Indexed label: "t index(12)".
        if label.text.len() == 1 {
            let m = regex!(r"^ [a-z]{2,12}\(").find(&self.s[p..]);
            if let Some(m) = m {
                p += m.end() - 1;
            }
        }

        let mut q = self.skip_spaces(p);
        let df_group = self.df_group(q);
        if let Some(g) = &df_group {
            q = g.end;
        } else if self.at(q) == Some(b'(') {
            return None;
        }
        q = self.skip_spaces(q);
        let (comp, comp_range) = self.comparator(q)?;
        q = self.skip_spaces(comp_range.end);
        let value = self.value_token(q)?;
        Some(Head {
            start,
            label,
            df_group,
            comp,
            comp_range,
            value,
            plural,
        })
    }

    fn p_clause(&self, pos: usize) -> Option<PClause> {
        if !self.boundary_before(pos) {
            return None;
        }
        let rest = &self.s[pos..];
        if let Some(m) = regex!(r"^(?:[nN]\. ?[sS]\.?|ns|NS|n\.s|not significant)").find(rest) {
            if !self.is_alnum(pos + m.end()) {
                return Some(PClause {
                    start: pos,
                    comp: Comparator::Ns,
                    comp_range: pos..pos + m.end(),
                    value: None,
                    plural: false,
                    end: pos + m.end(),
                });
            }
        }
        let m = regex!(r"^[pP](?:'s|\x{2019}s|[- ]values?|s)?").find(rest)?;
        let plural = m.as_str().ends_with('s') && m.as_str().len() > 1;
        let after = pos + m.end();
        if self.is_alnum(after) {
            return None;
        }
        let q = self.skip_spaces(after);
        let (comp, comp_range) = self.comparator(q)?;
        let q = self.skip_spaces(comp_range.end);
        let value = self.value_token(q).or_else(|| {
            // Keep a garbled token in value position so it can be reported.
            let end = self.b[q..]
                .iter()
                .position(|&c| c == b' ' || c == b',' || c == b';' || c == b')')
                .map_or(self.b.len(), |e| q + e);
            let token = &self.s[q..end];
            let numeric_ish = token.starts_with('.') || token.bytes().any(|c| c.is_ascii_digit());
            (end > q && numeric_ish).then_some(q..end)
        })?;
        Some(PClause {
            start: pos,
            comp,
            comp_range,
            end: value.end,
            value: Some(value),
            plural,
        })
    }

    fn companion(&self, pos: usize) -> Option<Companion> {
        if !self.boundary_before(pos) {
            return None;
        }
        let m = regex!(
            r"^[A-Za-z\x{0370}-\x{03FF}][A-Za-z0-9'^_\x{0370}-\x{03FF}]*(?: [A-Za-z][A-Za-z0-9'^_]*){0,2}"
        )
        .find(&self.s[pos..])?;
        let words = m.as_str();
        let last = words.rsplit(' ').next().unwrap_or(words);
        let mut q = self.skip_spaces(pos + m.end());
        if self.at(q) == Some(b'(') {
            return None;
        }
        let (_, comp) = self.comparator(q)?;
        q = self.skip_spaces(comp.end);
        let value = self.value_token(q)?;
        Some(Companion {
            label: last.to_owned(),
            end: value.end,
            value,
        })
    }

    /// Separators between clauses: spaces and at most one of `,;:`.
    fn separator(&self, pos: usize) -> usize {
        let mut q = self.skip_spaces(pos);
        if matches!(self.at(q), Some(b',' | b';' | b':')) {
            q = self.skip_spaces(q + 1);
        }
        q
    }
}

fn is_r2_label(label: &str) -> bool {
    classify_statistic(label) == StatKind::R2
}

/// Labels that start a new result when met inside a span.
fn starts_new_result(label: &str) -> bool {
    !matches!(
        classify_statistic(label),
        StatKind::Unknown | StatKind::R2
    )
}

fn number_at(
    s: &str,
    range: &Range<usize>,
    malformed: &mut Vec<MalformedNumber>,
) -> Option<crate::number::Number> {
    match parse_number_detailed(&s[range.clone()]) {
        Ok(n) => Some(n),
        Err(e) => {
            malformed.push(e);
            None
        }
    }
}

fn make_span(text: &NormalizedText, start: usize, end: usize) -> ResultSpan {
    let raw = text.raw_range(start..end);
    ResultSpan {
        start,
        end,
        raw_start: raw.start,
        raw_end: raw.end,
    }
}

fn apply_p(result: &mut ParsedResult, s: &str, pc: &PClause) {
    result.p_comp = Some(pc.comp);
    result.plural |= pc.plural;
    result.fields.p_clause = Some(pc.start..pc.end);
    result.fields.p_comp = Some(pc.comp_range.clone());
    result.fields.p_value = pc.value.clone();
    if let Some(v) = &pc.value {
        if let Some(n) = number_at(s, v, &mut result.malformed) {
            result.reported_p = Some(n.value);
            result.reported_p_decimals = n.decimals;
        }
    }
}

fn empty_result(kind: StatKind) -> ParsedResult {
    ParsedResult {
        kind,
        label: None,
        stat_comp: None,
        stat_value: None,
        df1: None,
        df2: None,
        d: None,
        r_squared: None,
        beta: None,
        se_beta: None,
        p_comp: None,
        reported_p: None,
        reported_p_decimals: 0,
        plural: false,
        range_violations: BTreeSet::new(),
        malformed: Vec::new(),
        span: ResultSpan {
            start: 0,
            end: 0,
            raw_start: 0,
            raw_end: 0,
        },
        fields: FieldSpans::default(),
    }
}

fn apply_companion(result: &mut ParsedResult, s: &str, c: &Companion) {
    let Some(n) = number_at(s, &c.value, &mut result.malformed) else {
        return;
    };
    match c.label.as_str() {
        "d" => result.d = Some(n.value),
        "df" => {
            if result.df1.is_none() {
                result.df1 = Some(n.value);
            }
        }
        "SE" | "se" | "SEbeta" => result.se_beta = Some(n.value),
        l if is_r2_label(l) => result.r_squared = Some(n.value),
        _ => {}
    }
}

fn finish(mut result: ParsedResult, text: &NormalizedText, start: usize, end: usize) -> ParsedResult {
    if let Some(p) = result.reported_p {
        if !(0.0..=1.0).contains(&p) {
            result.range_violations.insert(RangeViolation::POutOfRange);
        }
    }
    if result.kind == StatKind::R {
        if let Some(r) = result.stat_value {
            if r.abs() > 1.0 {
                result.range_violations.insert(RangeViolation::ROutOfRange);
            }
        }
    }
    let r2 = if result.kind == StatKind::R2 {
        result.stat_value
    } else {
        result.r_squared
    };
    if let Some(r2) = r2 {
        if !(0.0..=1.0).contains(&r2) {
            result.range_violations.insert(RangeViolation::R2OutOfRange);
        }
    }
    result.span = make_span(text, start, end);
    result
}

/// Tries to read one result starting exactly at `pos`.
fn result_at(text: &NormalizedText, pos: usize) -> Option<ParsedResult> {
    let s = text.as_str();
    let sc = Scanner::new(s);

    if let Some(pc) = sc.p_clause(pos) {
        let mut r = empty_result(StatKind::POnly);
        apply_p(&mut r, s, &pc);
        let end = trailing_companions(&sc, &mut r, pc.end);
        return Some(finish(r, text, pos, end));
    }

    let head = sc.head(pos)?;
    let mut r = empty_result(classify_statistic(&head.label.text));
    r.label = Some(head.label.text.clone());
    r.plural = head.plural;
    r.stat_comp = Some(head.comp);
    r.fields.label = Some(head.label.range.clone());
    r.fields.stat_comp = Some(head.comp_range.clone());
    r.fields.stat_value = Some(head.value.clone());
    if let Some(n) = number_at(s, &head.value, &mut r.malformed) {
        r.stat_value = Some(n.value);
    }
    if let Some(g) = &head.df_group {
        match parse_df(&s[g.clone()], r.kind) {
            Ok(df) => {
                r.df1 = Some(df.df1);
                r.df2 = df.df2;
            }
            Err(e) => r.malformed.push(e),
        }
    }
    if r.kind == StatKind::Chi2 && head.df_group.is_none() && matches!(head.label.text.as_str(), "X" | "x")
    {
        r.kind = StatKind::Unknown;
    }

    let mut end = head.value.end;
    let mut companions = 0;
    loop {
        let next = sc.separator(end);
        if let Some(pc) = sc.p_clause(next) {
            if next > end {
                r.fields.separator = Some(end..next);
            }
            apply_p(&mut r, s, &pc);
            end = trailing_companions(&sc, &mut r, pc.end);
            break;
        }
        if companions == MAX_COMPANIONS {
            break;
        }
        match sc.companion(next) {
            Some(c) if !starts_new_result(&c.label) => {
                apply_companion(&mut r, s, &c);
                end = c.end;
                companions += 1;
            }
            _ => break,
        }
    }

    if r.kind == StatKind::BetaSE {
        r.beta = r.stat_value;
        if r.beta.is_none() || r.se_beta.is_none() {
            r.kind = StatKind::Unknown;
        }
    }

    let has_p = r.p_comp.is_some();
    let keep = match r.kind {
        StatKind::Unknown => has_p,
        _ => r.stat_value.is_some() || r.reported_p.is_some() || has_p,
    };
    keep.then(|| finish(r, text, head.start, end))
}

/// Effect-size companions reported after the p-clause (`R2=`, `d=`).
fn trailing_companions(sc: &Scanner<'_>, r: &mut ParsedResult, mut end: usize) -> usize {
    for _ in 0..2 {
        let next = sc.separator(end);
        match sc.companion(next) {
            Some(c) if is_r2_label(&c.label) || c.label == "d" => {
                apply_companion(r, sc.s, &c);
                end = c.end;
            }
            _ => break,
        }
    }
    end
}

/// Scans the whole text and returns every result, left to right.
pub fn extract_results(text: &NormalizedText) -> Vec<ParsedResult> {
    let s = text.as_str();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < s.len() {
        if let Some(r) = result_at(text, pos) {
            pos = r.span.end.max(pos + 1);
            out.push(r);
            continue;
        }
        pos += s[pos..].chars().next().map_or(1, char::len_utf8);
    }
    out
}

/// Non-overlapping result spans in reading order.
pub fn find_result_spans(text: &NormalizedText) -> Vec<ResultSpan> {
    extract_results(text).into_iter().map(|r| r.span).collect()
}

/// Parses the result that starts at `span.start`.
pub fn parse_result(span: ResultSpan, text: &NormalizedText) -> Result<ParsedResult, ExtractError> {
    result_at(text, span.start).ok_or(ExtractError::NoResult {
        start: span.start,
        end: span.end,
    })
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

impl ParsedResult {
    /// Canonical one-line rendering; parsing it yields the same content.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.kind != StatKind::POnly {
            if let Some(label) = &self.label {
                out.push_str(label);
                if self.plural {
                    out.push_str("'s");
                }
                match (self.df1, self.df2) {
                    (Some(a), Some(b)) => {
                        let _ = write!(out, "({}, {})", fmt_num(a), fmt_num(b));
                    }
                    (Some(a), None) => {
                        let _ = write!(out, "({})", fmt_num(a));
                    }
                    _ => {}
                }
                out.push_str(self.stat_comp.unwrap_or(Comparator::Eq).symbol());
                if let Some(v) = self.stat_value {
                    out.push_str(&fmt_num(v));
                }
            }
            if let Some(se) = self.se_beta {
                let _ = write!(out, ", SE={}", fmt_num(se));
            }
            if let Some(d) = self.d {
                let _ = write!(out, ", d={}", fmt_num(d));
            }
        }
        match (self.p_comp, self.reported_p) {
            (Some(Comparator::Ns), _) => {
                if !out.is_empty() {
                    out.push_str(", ");
                }
                out.push_str("n.s.");
            }
            (Some(c), Some(p)) => {
                if !out.is_empty() {
                    out.push_str(", ");
                }
                out.push('p');
                if self.plural {
                    out.push_str("'s");
                }
                let _ = write!(out, "{}{:.*}", c.symbol(), self.reported_p_decimals as usize, p);
            }
            _ => {}
        }
        if let Some(r2) = self.r_squared {
            let _ = write!(out, ", R2={}", fmt_num(r2));
        }
        out
    }

    /// The result with positional information cleared, for content
    /// comparisons.
    pub fn content(&self) -> ParsedResult {
        let mut c = self.clone();
        c.span = ResultSpan {
            start: 0,
            end: 0,
            raw_start: 0,
            raw_end: 0,
        };
        c.fields = FieldSpans::default();
        c
    }
}
