//! Command-line front end: batch checking of documents, the conformance
//! suite and corpus export.

pub mod html;
pub mod rows;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use statex::check::CheckOptions;
use statex::corpus::{load_corpus, run_conformance, CorpusCase};
use statex::pipeline::{Pipeline, PipelineOptions};
use walkdir::WalkDir;

use crate::rows::{emit_long, emit_wide, Format, OutputRow, WideRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_DECISION_ERROR: i32 = 2;

/// Extensions picked up when walking a directory.
const DOCUMENT_EXTENSIONS: &[&str] = &["txt", "text", "md", "html", "htm", "xhtml"];

#[derive(Debug, Parser)]
#[command(name = "statex", version, about = "Check reported statistics against recomputed p-values")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract and check results in files, directories or standard input.
    Check {
        /// Files or directories; `-` or nothing reads standard input.
        paths: Vec<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        checking: CheckArgs,
        /// Fail when a value token cannot be read as a number.
        #[arg(long)]
        strict_numbers: bool,
    },
    /// Run the embedded conformance corpus.
    Conformance,
    /// Work with the embedded corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// Write the corpus inputs and expected fields as CSV.
    Export,
    /// Check every corpus input as its own document.
    Run {
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        checking: CheckArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// One column pair per statistic family instead of the long layout.
    #[arg(long)]
    pub wide: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Accept halved p-values when the document mentions one-sided tests.
    #[arg(long)]
    pub one_tailed_txt: bool,
    /// Treat every t, r, Z and beta/SE test as one-tailed.
    #[arg(long)]
    pub assume_one_tailed: bool,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("alpha must lie in (0, 1), got {s}"))
    }
}

impl CheckArgs {
    fn pipeline(&self) -> Pipeline {
        Pipeline::new(PipelineOptions {
            check: CheckOptions {
                alpha: self.alpha,
                one_tailed_txt: self.one_tailed_txt,
                assume_one_tailed: self.assume_one_tailed,
            },
            ..PipelineOptions::default()
        })
    }
}

/// A document ready for checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub source: String,
    pub text: String,
}

impl Document {
    /// Wraps raw file content, stripping markup when it looks like HTML.
    pub fn from_content(source: String, content: &str) -> Self {
        let name = (source != "stdin").then_some(source.as_str());
        let text = if html::looks_like_html(name, content) {
            html::strip_tags(content)
        } else {
            content.to_string()
        };
        Document { source, text }
    }
}

/// Uses `STATEX_THREADS` to size the global worker pool.
pub fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("STATEX_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .with_context(|| format!("STATEX_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            anyhow::bail!("STATEX_THREADS must be a positive integer, got 0");
        }
        // A pool may already exist when called twice in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs a parsed command line. Diagnostics go to `err`, data to `out`.
pub fn run(cli: Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, stdin, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cli: Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match cli.command {
        Command::Check {
            paths,
            output,
            checking,
            strict_numbers,
        } => {
            let (docs, failed) = read_documents(&paths, stdin, err)?;
            if docs.is_empty() && failed > 0 {
                writeln!(err, "error: no input could be read")?;
                return Ok(EXIT_FAILURE);
            }
            check_documents(&docs, &output, &checking, strict_numbers, out, err)
        }
        Command::Conformance => {
            let cases = load_corpus()?;
            let report = run_conformance(&cases, &Pipeline::default());
            for f in &report.failures {
                let tag = if f.lenient { " (lenient)" } else { "" };
                writeln!(err, "case {}{tag}: {:?}: {}", f.id, f.input, f.mismatches.join("; "))?;
            }
            writeln!(out, "{}", report.summary())?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Corpus {
            action: CorpusAction::Export,
        } => {
            export_corpus(&load_corpus()?, out)?;
            Ok(EXIT_OK)
        }
        Command::Corpus {
            action: CorpusAction::Run { output, checking },
        } => {
            let docs: Vec<Document> = load_corpus()?
                .into_iter()
                .map(|c| Document {
                    source: format!("corpus/{:03}", c.id),
                    text: c.input,
                })
                .collect();
            check_documents(&docs, &output, &checking, false, out, err)
        }
    }
}

/// Reads inputs in argument order. Returns the documents and the number of
/// inputs that could not be read.
pub fn read_documents(
    paths: &[PathBuf],
    stdin: &mut dyn Read,
    err: &mut dyn Write,
) -> anyhow::Result<(Vec<Document>, usize)> {
    let mut docs = Vec::new();
    let mut failed = 0;
    if paths.is_empty() || paths.iter().any(|p| p.as_os_str() == "-") {
        let mut buf = Vec::new();
        stdin.read_to_end(&mut buf).context("reading standard input")?;
        docs.push(Document::from_content(
            "stdin".into(),
            &String::from_utf8_lossy(&buf),
        ));
    }
    for path in paths.iter().filter(|p| p.as_os_str() != "-") {
        let files = if path.is_dir() {
            let mut files = Vec::new();
            for entry in WalkDir::new(path).sort_by_file_name() {
                match entry {
                    Ok(e) if e.file_type().is_file() && is_document(e.path()) => {
                        files.push(e.into_path())
                    }
                    Ok(_) => {}
                    Err(e) => {
                        writeln!(err, "warning: {e}")?;
                        failed += 1;
                    }
                }
            }
            files
        } else {
            vec![path.clone()]
        };
        for file in files {
            match std::fs::read(&file) {
                Ok(bytes) => docs.push(Document::from_content(
                    source_name(&file),
                    &String::from_utf8_lossy(&bytes),
                )),
                Err(e) => {
                    writeln!(err, "warning: {}: {e}", file.display())?;
                    failed += 1;
                }
            }
        }
    }
    Ok((docs, failed))
}

fn is_document(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| DOCUMENT_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

fn source_name(path: &Path) -> String {
    let p = path.strip_prefix(".").unwrap_or(path);
    p.to_string_lossy().replace('\\', "/")
}

struct DocumentRows {
    long: Vec<(usize, OutputRow)>,
    wide: Vec<(usize, WideRow)>,
    decision_errors: usize,
    malformed: Vec<String>,
}

fn analyze_document(doc: &Document, pipeline: &Pipeline) -> DocumentRows {
    let analysis = pipeline.analyze(&doc.text);
    let mut rows = DocumentRows {
        long: Vec::with_capacity(analysis.results.len()),
        wide: Vec::with_capacity(analysis.results.len()),
        decision_errors: 0,
        malformed: Vec::new(),
    };
    for checked in &analysis.results {
        let span = checked.result.span;
        let raw = &doc.text[span.raw_start..span.raw_end];
        rows.long.push((
            span.raw_start,
            OutputRow::new(&doc.source, raw, checked, analysis.one_tailed_in_txt),
        ));
        rows.wide.push((span.raw_start, WideRow::new(&doc.source, raw, checked)));
        if checked.verdict.decision_error == Some(true) {
            rows.decision_errors += 1;
        }
        rows.malformed
            .extend(checked.result.malformed.iter().map(|m| m.token.clone()));
    }
    rows
}

/// Checks documents in parallel and emits rows ordered by source, then
/// position in the source.
pub fn check_documents(
    docs: &[Document],
    output: &OutputArgs,
    checking: &CheckArgs,
    strict_numbers: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    let pipeline = checking.pipeline();
    let per_doc: Vec<DocumentRows> = docs.par_iter().map(|d| analyze_document(d, &pipeline)).collect();

    let mut order: Vec<usize> = (0..docs.len()).collect();
    order.sort_by(|&a, &b| docs[a].source.cmp(&docs[b].source));

    let mut long = Vec::new();
    let mut wide = Vec::new();
    let mut decision_errors = 0;
    let mut malformed = false;
    for i in order {
        let doc = &docs[i];
        let d = &per_doc[i];
        if d.long.len() > 1 {
            writeln!(
                err,
                "note: {}: {} results checked individually; multiple-testing corrections are not inferred",
                doc.source,
                d.long.len()
            )?;
        }
        if strict_numbers && !d.malformed.is_empty() {
            for token in &d.malformed {
                writeln!(err, "error: {}: malformed number {token:?}", doc.source)?;
            }
            malformed = true;
            continue;
        }
        decision_errors += d.decision_errors;
        let mut l: Vec<&(usize, OutputRow)> = d.long.iter().collect();
        l.sort_by_key(|(start, _)| *start);
        long.extend(l.into_iter().map(|(_, r)| r.clone()));
        let mut w: Vec<&(usize, WideRow)> = d.wide.iter().collect();
        w.sort_by_key(|(start, _)| *start);
        wide.extend(w.into_iter().map(|(_, r)| r.clone()));
    }

    let format = match output.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    if output.wide {
        emit_wide(&wide, format, out)?;
    } else {
        emit_long(&long, format, out)?;
    }
    out.flush()?;

    Ok(if malformed {
        EXIT_FAILURE
    } else if decision_errors > 0 {
        EXIT_DECISION_ERROR
    } else {
        EXIT_OK
    })
}

/// Writes the corpus as CSV: input plus the expected fields.
pub fn export_corpus(cases: &[CorpusCase], out: &mut dyn Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "id", "input", "kind", "stat_op", "stat", "d", "R2", "df1", "df2", "beta", "SEbeta", "Zest",
        "p_op", "p", "recalculatedP", "lenient",
    ])?;
    let num = |v: Option<f64>| v.map(|v| format!("{v:.2}")).unwrap_or_default();
    for c in cases {
        let e = &c.expected;
        w.write_record([
            c.id.to_string(),
            c.input.clone(),
            e.kind.map(|k| k.name().to_string()).unwrap_or_default(),
            e.stat_comp.map(|c| c.symbol().to_string()).unwrap_or_default(),
            num(e.stat_value),
            num(e.d),
            num(e.r_squared),
            e.df1.map(|v| v.to_string()).unwrap_or_default(),
            e.df2.map(|v| v.to_string()).unwrap_or_default(),
            num(e.beta),
            num(e.se_beta),
            num(e.z_estimate),
            e.p_comp.map(|c| c.symbol().to_string()).unwrap_or_default(),
            num(e.reported_p),
            num(e.recomputed_p),
            c.lenient.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
