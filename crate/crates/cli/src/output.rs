//! Rendering of results as text, JSON, CSV or DOT.

use clap::ValueEnum;
use conic_floors::Int;
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

/// Result of one command.
pub struct Outcome {
    /// Canonical form of the query.
    pub query: String,
    pub value: Int,
    /// Labelled summands; their sum is `value`.
    pub terms: Option<Vec<(String, Int)>>,
    /// DOT drawings (diagrams command only).
    pub dots: Vec<String>,
}

#[derive(Serialize)]
pub struct Stats {
    pub diagrams: u64,
    pub markings: u64,
    pub cache_hits: u64,
}

#[derive(Serialize)]
struct JsonTerm<'a> {
    label: &'a str,
    value: Int,
}

#[derive(Serialize)]
struct JsonOutcome<'a> {
    query: &'a str,
    value: Int,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<JsonTerm<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<&'a Stats>,
}

pub fn render(outcome: &Outcome, format: Format, stats: Option<&Stats>) -> String {
    match format {
        Format::Text => text(outcome, stats),
        Format::Json => json(outcome, stats),
        Format::Csv => csv(outcome, stats),
        Format::Dot => outcome.dots.iter().map(|d| format!("{d}\n")).collect(),
    }
}

fn text(outcome: &Outcome, stats: Option<&Stats>) -> String {
    let mut out = format!("{}\n", outcome.value);
    for (label, value) in outcome.terms.iter().flatten() {
        out.push_str(&format!("  {value}\t{label}\n"));
    }
    if let Some(s) = stats {
        out.push_str(&format!("stats: diagrams={} markings={} cache_hits={}\n", s.diagrams, s.markings, s.cache_hits));
    }
    out
}

fn json(outcome: &Outcome, stats: Option<&Stats>) -> String {
    let doc = JsonOutcome {
        query: &outcome.query,
        value: outcome.value,
        terms: outcome
            .terms
            .as_ref()
            .map(|t| t.iter().map(|(label, value)| JsonTerm { label, value: *value }).collect()),
        stats,
    };
    let mut s = serde_json::to_string(&doc).expect("serializable");
    s.push('\n');
    s
}

/// Rows `kind,label,value` with kinds `total`, `term` and `stat`.
fn csv(outcome: &Outcome, stats: Option<&Stats>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |kind: &str, label: &str, value: String| {
        w.write_record([kind, label, value.as_str()]).expect("in-memory write");
    };
    row("kind", "label", "value".into());
    row("total", &outcome.query, outcome.value.to_string());
    for (label, value) in outcome.terms.iter().flatten() {
        row("term", label, value.to_string());
    }
    if let Some(s) = stats {
        row("stat", "diagrams", s.diagrams.to_string());
        row("stat", "markings", s.markings.to_string());
        row("stat", "cache_hits", s.cache_hits.to_string());
    }
    String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
}
