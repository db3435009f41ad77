//! Output schemas and their CSV/JSON encodings.
//!
//! Long rows follow the column order
//! `source, raw, test_type, df1, df2, test_comp, test_value, p_comp,
//! reported_p, computed_p, error, decision_error, one_tailed_in_txt`.
//! For t and r the single df goes in `df2`; for the chi-square family it
//! goes in `df1`.
//!
//! Wide rows carry one operator/value column pair per statistic family
//! plus `df1, df2, beta, SEbeta, Zest, p_op, p, recalculatedP`.

use std::io::Write;

use serde::{Deserialize, Serialize};
use statex::extract::{Comparator, StatKind};
use statex::pipeline::CheckedResult;
use statex::stats::z_estimate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRow {
    pub source: String,
    pub raw: String,
    pub test_type: String,
    pub df1: Option<f64>,
    pub df2: Option<f64>,
    pub test_comp: Option<String>,
    pub test_value: Option<f64>,
    pub p_comp: Option<String>,
    pub reported_p: Option<f64>,
    pub computed_p: Option<f64>,
    pub error: Option<bool>,
    pub decision_error: Option<bool>,
    pub one_tailed_in_txt: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WideRow {
    pub source: String,
    pub result: String,
    #[serde(rename = "Z_op")]
    pub z_op: Option<String>,
    #[serde(rename = "Z")]
    pub z: Option<f64>,
    #[serde(rename = "F_op")]
    pub f_op: Option<String>,
    #[serde(rename = "F")]
    pub f: Option<f64>,
    pub t_op: Option<String>,
    pub t: Option<f64>,
    pub d: Option<f64>,
    pub r_op: Option<String>,
    pub r: Option<f64>,
    #[serde(rename = "R2_op")]
    pub r2_op: Option<String>,
    #[serde(rename = "R2")]
    pub r2: Option<f64>,
    #[serde(rename = "U_op")]
    pub u_op: Option<String>,
    #[serde(rename = "U")]
    pub u: Option<f64>,
    #[serde(rename = "H_op")]
    pub h_op: Option<String>,
    #[serde(rename = "H")]
    pub h: Option<f64>,
    #[serde(rename = "G2_op")]
    pub g2_op: Option<String>,
    #[serde(rename = "G2")]
    pub g2: Option<f64>,
    #[serde(rename = "Chi2_op")]
    pub chi2_op: Option<String>,
    #[serde(rename = "Chi2")]
    pub chi2: Option<f64>,
    #[serde(rename = "Q_op")]
    pub q_op: Option<String>,
    #[serde(rename = "Q")]
    pub q: Option<f64>,
    pub df1: Option<f64>,
    pub df2: Option<f64>,
    pub beta: Option<f64>,
    #[serde(rename = "SEbeta")]
    pub se_beta: Option<f64>,
    #[serde(rename = "Zest")]
    pub z_est: Option<f64>,
    pub p_op: Option<String>,
    pub p: Option<f64>,
    #[serde(rename = "recalculatedP")]
    pub recalculated_p: Option<f64>,
}

fn comp_symbol(c: Option<Comparator>) -> Option<String> {
    c.map(|c| c.symbol().to_string())
}

impl OutputRow {
    pub fn new(source: &str, raw: &str, checked: &CheckedResult, one_tailed_in_txt: bool) -> Self {
        let r = &checked.result;
        let (df1, df2) = match r.kind {
            StatKind::T | StatKind::R => (None, r.df1),
            _ => (r.df1, r.df2),
        };
        OutputRow {
            source: source.to_string(),
            raw: raw.to_string(),
            test_type: r.kind.name().to_string(),
            df1,
            df2,
            test_comp: comp_symbol(r.stat_comp),
            test_value: r.stat_value,
            p_comp: comp_symbol(r.p_comp),
            reported_p: r.reported_p,
            computed_p: checked.verdict.recomputed.map(|p| p.value),
            error: checked.verdict.error,
            decision_error: checked.verdict.decision_error,
            one_tailed_in_txt,
        }
    }
}

impl WideRow {
    pub fn new(source: &str, raw: &str, checked: &CheckedResult) -> Self {
        let r = &checked.result;
        let op = comp_symbol(r.stat_comp);
        let v = r.stat_value;
        let mut row = WideRow {
            source: source.to_string(),
            result: raw.to_string(),
            d: r.d,
            r2: r.r_squared,
            df1: r.df1,
            df2: r.df2,
            beta: r.beta,
            se_beta: r.se_beta,
            z_est: z_estimate(r),
            p_op: comp_symbol(r.p_comp),
            p: r.reported_p,
            recalculated_p: checked.recomputed.map(|p| p.value),
            ..WideRow::default()
        };
        match r.kind {
            StatKind::Z => (row.z_op, row.z) = (op, v),
            StatKind::F => (row.f_op, row.f) = (op, v),
            StatKind::T => (row.t_op, row.t) = (op, v),
            StatKind::R => (row.r_op, row.r) = (op, v),
            StatKind::R2 => (row.r2_op, row.r2) = (op, v),
            StatKind::U => (row.u_op, row.u) = (op, v),
            StatKind::H => (row.h_op, row.h) = (op, v),
            StatKind::G2 => (row.g2_op, row.g2) = (op, v),
            StatKind::Chi2 => (row.chi2_op, row.chi2) = (op, v),
            StatKind::Q => (row.q_op, row.q) = (op, v),
            StatKind::BetaSE | StatKind::POnly | StatKind::Unknown => {}
        }
        row
    }
}

/// Column names, in order, for the row types above.
pub trait Columns {
    const COLUMNS: &'static [&'static str];
}

impl Columns for OutputRow {
    const COLUMNS: &'static [&'static str] = &[
        "source",
        "raw",
        "test_type",
        "df1",
        "df2",
        "test_comp",
        "test_value",
        "p_comp",
        "reported_p",
        "computed_p",
        "error",
        "decision_error",
        "one_tailed_in_txt",
    ];
}

impl Columns for WideRow {
    const COLUMNS: &'static [&'static str] = &[
        "source",
        "result",
        "Z_op",
        "Z",
        "F_op",
        "F",
        "t_op",
        "t",
        "d",
        "r_op",
        "r",
        "R2_op",
        "R2",
        "U_op",
        "U",
        "H_op",
        "H",
        "G2_op",
        "G2",
        "Chi2_op",
        "Chi2",
        "Q_op",
        "Q",
        "df1",
        "df2",
        "beta",
        "SEbeta",
        "Zest",
        "p_op",
        "p",
        "recalculatedP",
    ];
}

pub fn emit_long(rows: &[OutputRow], format: Format, out: &mut dyn Write) -> anyhow::Result<()> {
    emit_with_header(rows, OutputRow::COLUMNS, format, out)
}

pub fn emit_wide(rows: &[WideRow], format: Format, out: &mut dyn Write) -> anyhow::Result<()> {
    emit_with_header(rows, WideRow::COLUMNS, format, out)
}

/// CSV always has a header line, even with no rows. JSON is an array of
/// objects with nulls for empty cells.
fn emit_with_header<T: Serialize>(
    rows: &[T],
    header: &[&str],
    format: Format,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(header)?;
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Reads long rows back from CSV.
pub fn parse_long_csv(data: &[u8]) -> anyhow::Result<Vec<OutputRow>> {
    let mut r = csv::Reader::from_reader(data);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// Reads wide rows back from CSV.
pub fn parse_wide_csv(data: &[u8]) -> anyhow::Result<Vec<WideRow>> {
    let mut r = csv::Reader::from_reader(data);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
