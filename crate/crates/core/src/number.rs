//! Numeric literals and degrees-of-freedom groups as they appear in prose.

use crate::error::MalformedNumber;
use crate::extract::StatKind;

/// A parsed value together with the precision it was written at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Number {
    pub value: f64,
    /// Digits after the decimal point, as written (percent adds two).
    pub decimals: u32,
}

/// Parses a value token such as `.34`, `5%`, `4/5`, `1.2^3` or `1..2`.
///
/// Corrupted decimals fall back to the longest valid numeric prefix.
pub fn parse_number(token: &str) -> Result<f64, MalformedNumber> {
    parse_number_detailed(token).map(|n| n.value)
}

struct Mantissa<'a> {
    text: &'a str,
    decimals: u32,
    end: usize,
}

fn scan_mantissa(s: &str) -> Option<Mantissa<'_>> {
    let b = s.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'-' || b[i] == b'+') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let int_digits = i - int_start;
    let mut decimals = 0;
    if i < b.len() && b[i] == b'.' {
        let mut j = i + 1;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        decimals = (j - i - 1) as u32;
        if int_digits > 0 || decimals > 0 {
            i = j;
        }
    }
    if int_digits == 0 && decimals == 0 {
        return None;
    }
    Some(Mantissa {
        text: &s[..i],
        decimals,
        end: i,
    })
}

fn mantissa_value(text: &str) -> f64 {
    // "1." and "-.5" are accepted by Rust's float parser; a lone sign is
    // excluded by scan_mantissa.
    text.parse::<f64>().expect("scanned mantissa parses")
}

pub(crate) fn parse_number_detailed(token: &str) -> Result<Number, MalformedNumber> {
    let token = token.trim();
    let m = scan_mantissa(token).ok_or_else(|| MalformedNumber::new(token))?;
    let base = mantissa_value(m.text);
    let rest = &token[m.end..];

    if let Some(after) = rest.strip_prefix('%') {
        let _ = after;
        // Shifting the exponent in text keeps the result correctly rounded.
        let value = format!("{}e-2", m.text.trim_end_matches('.'))
            .parse::<f64>()
            .unwrap_or(base / 100.0);
        return Ok(Number {
            value,
            decimals: m.decimals + 2,
        });
    }
    if let Some(exp) = rest.strip_prefix('^') {
        if let Some(e) = scan_mantissa(exp) {
            return Ok(Number {
                value: base.powf(mantissa_value(e.text)),
                decimals: m.decimals,
            });
        }
    }
    if let Some(den) = rest.strip_prefix('/') {
        if let Some(d) = scan_mantissa(den) {
            let den = mantissa_value(d.text);
            if den != 0.0 {
                let value = base / den;
                return Ok(Number {
                    value,
                    decimals: shortest_decimals(value),
                });
            }
        }
    }
    if let Some(exp) = rest.strip_prefix(['e', 'E']) {
        let b = exp.as_bytes();
        let mut j = 0;
        if j < b.len() && (b[j] == b'-' || b[j] == b'+') {
            j += 1;
        }
        let digits_start = j;
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        if j > digits_start {
            let text = &token[..m.end + 1 + j];
            if let Ok(value) = text.parse::<f64>() {
                let e: i64 = exp[..j].parse().unwrap_or(0);
                let decimals = (i64::from(m.decimals) - e).max(0) as u32;
                return Ok(Number { value, decimals });
            }
        }
    }
    Ok(Number {
        value: base,
        decimals: m.decimals,
    })
}

fn shortest_decimals(value: f64) -> u32 {
    for d in 0..=10u32 {
        let scaled = value * 10f64.powi(d as i32);
        if (scaled - scaled.round()).abs() < 1e-9 * scaled.abs().max(1.0) {
            return d;
        }
    }
    10
}

/// Degrees of freedom read from a group such as `(1,23)` or `(12)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreesOfFreedom {
    pub df1: f64,
    pub df2: Option<f64>,
}

fn takes_two_df(kind: StatKind) -> bool {
    matches!(kind, StatKind::F | StatKind::Unknown)
}

/// Parses the parenthesized group after a statistic label, or the value of
/// a `df=` clause.
///
/// For statistics with a single df, `(1,234)` reads as one df with a
/// thousands separator; this needs exactly three digits after an
/// unspaced comma.
pub fn parse_df(group: &str, kind: StatKind) -> Result<DegreesOfFreedom, MalformedNumber> {
    let malformed = || MalformedNumber::new(group);
    let inner = group
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']'])
        .trim();
    let inner = inner
        .strip_prefix("df")
        .map(|s| s.trim_start().trim_start_matches('=').trim_start())
        .unwrap_or(inner);

    let mut parts: Vec<&str> = Vec::new();
    for (i, part) in inner.split(',').enumerate() {
        // Sample-size annotations like "N = 40" ride along in chi-square
        // groups; they are not degrees of freedom.
        if i > 0 && part.bytes().any(|c| c.is_ascii_alphabetic()) {
            break;
        }
        parts.push(part);
    }

    let number = |s: &str| -> Result<f64, MalformedNumber> {
        let s = s.trim();
        let m = scan_mantissa(s).ok_or_else(malformed)?;
        if m.end != s.len() || s.starts_with(['-', '+']) {
            return Err(malformed());
        }
        Ok(mantissa_value(m.text))
    };

    match parts.as_slice() {
        [one] => Ok(DegreesOfFreedom {
            df1: number(one)?,
            df2: None,
        }),
        [a, b] if takes_two_df(kind) => Ok(DegreesOfFreedom {
            df1: number(a)?,
            df2: Some(number(b)?),
        }),
        [a, b] => {
            let is_thousands = !a.ends_with(' ')
                && !b.starts_with(' ')
                && !a.is_empty()
                && a.bytes().all(|c| c.is_ascii_digit())
                && b.len() == 3
                && b.bytes().all(|c| c.is_ascii_digit());
            if is_thousands {
                Ok(DegreesOfFreedom {
                    df1: number(&format!("{a}{b}"))?,
                    df2: None,
                })
            } else {
                Err(malformed())
            }
        }
        _ => Err(malformed()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_forms() {
        assert_eq!(parse_number(".34").unwrap(), 0.34);
        assert_eq!(parse_number("5%").unwrap(), 0.05);
        assert_eq!(parse_number("4/5").unwrap(), 0.8);
        assert!((parse_number("1.2^3").unwrap() - 1.728).abs() < 1e-12);
        assert_eq!(parse_number("1..2").unwrap(), 1.0);
        assert_eq!(parse_number("0").unwrap(), 0.0);
        assert_eq!(parse_number("-2.3").unwrap(), -2.3);
        assert_eq!(parse_number(".05.").unwrap(), 0.05);
        assert_eq!(parse_number("1.2e-3").unwrap(), 0.0012);
        assert_eq!(parse_number("2.3ms").unwrap(), 2.3);
    }

    #[test]
    fn malformed_tokens() {
        for t in ["n3", ".n3", ".", "-", "", "abc"] {
            assert!(parse_number(t).is_err(), "{t:?} should be malformed");
        }
    }

    #[test]
    fn decimals_as_written() {
        let d = |s| parse_number_detailed(s).unwrap().decimals;
        assert_eq!(d(".05"), 2);
        assert_eq!(d("0.050"), 3);
        assert_eq!(d("1."), 0);
        assert_eq!(d("3"), 0);
        assert_eq!(d("5%"), 2);
        assert_eq!(d("12.5%"), 3);
        assert_eq!(d("4/5"), 1);
        assert_eq!(d("1e-4"), 4);
    }

    #[test]
    fn percent_is_correctly_rounded() {
        assert_eq!(parse_number("3.3%").unwrap(), 0.033);
        assert_eq!(parse_number("0.1%").unwrap(), 0.001);
    }

    #[test]
    fn df_groups() {
        let df = |g, k| parse_df(g, k).unwrap();
        assert_eq!(df("(12)", StatKind::T), DegreesOfFreedom { df1: 12.0, df2: None });
        assert_eq!(df("(1,234)", StatKind::T).df1, 1234.0);
        assert_eq!(
            df("(1,23)", StatKind::F),
            DegreesOfFreedom { df1: 1.0, df2: Some(23.0) }
        );
        assert_eq!(df("(1, 23)", StatKind::F).df2, Some(23.0));
        assert_eq!(df("(1,234)", StatKind::F).df2, Some(234.0));
        assert_eq!(df("(12.5)", StatKind::T).df1, 12.5);
        assert_eq!(df("(2, N = 40)", StatKind::Chi2).df1, 2.0);
        assert_eq!(df("(df = 34)", StatKind::T).df1, 34.0);
        assert_eq!(df("34", StatKind::T).df1, 34.0);
    }

    #[test]
    fn df_errors() {
        for (g, k) in [
            ("()", StatKind::T),
            ("(1,23)", StatKind::T),
            ("(1, 234)", StatKind::T),
            ("(a)", StatKind::T),
            ("(1,2,3)", StatKind::F),
            ("(-3)", StatKind::T),
        ] {
            assert!(parse_df(g, k).is_err(), "{g} for {k:?}");
        }
    }
}
