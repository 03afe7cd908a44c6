//! The JSON analysis report.

use std::sync::OnceLock;

use serde::Serialize;

use crate::content::{CategoryCorrelation, CategorySummary, DegreeBin};
use crate::graph::GraphMetrics;
use crate::markets::ClusterReport;
use crate::pipeline::ExportFile;

pub const REPORT_SCHEMA: &str = include_str!("../../../docs/report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunInfo {
    pub tool: String,
    pub version: String,
    pub seed_url: String,
    pub mode: String,
    pub config_hash: String,
    pub started_at: String,
    pub finished_at: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrawlSummary {
    pub max_depth: u32,
    pub include_external: bool,
    /// Nodes of kind `page`, whatever their fetch status.
    pub pages: usize,
    pub pages_with_content: usize,
    pub failed_pages: usize,
    pub frontier_stubs: usize,
    pub external_stubs: usize,
    /// Distinct directed links, external ones included.
    pub edges: usize,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedPage {
    pub url: String,
    pub pagerank: f64,
    pub normalized_pagerank: f64,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PageRankSummary {
    pub damping: f64,
    pub tolerance: f64,
    pub iterations: usize,
    pub residual: f64,
    pub top: Vec<RankedPage>,
}

/// Field order here is the key order of the rendered JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub run: RunInfo,
    pub crawl: CrawlSummary,
    pub graph: GraphMetrics,
    pub pagerank: PageRankSummary,
    pub categories: Vec<CategorySummary>,
    pub degree_sentiment_bins: Vec<DegreeBin>,
    pub correlations: Vec<CategoryCorrelation>,
    pub markets: Option<ClusterReport>,
    pub exports: Vec<ExportFile>,
    pub warnings: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("report does not serialize: {0}")]
    Serialize(#[from] serde_json::Error),
    #[error("report violates its schema (internal error): {0}")]
    Schema(String),
}

fn schema() -> &'static jsonschema::JSONSchema {
    static SCHEMA: OnceLock<jsonschema::JSONSchema> = OnceLock::new();
    SCHEMA.get_or_init(|| {
        let value: serde_json::Value = serde_json::from_str(REPORT_SCHEMA).expect("bundled schema is JSON");
        jsonschema::JSONSchema::compile(&value).expect("bundled schema compiles")
    })
}

/// Schema violations as `path: message` lines; empty when valid.
pub fn schema_errors(document: &serde_json::Value) -> Vec<String> {
    match schema().validate(document) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{}: {}", e.instance_path, e)).collect(),
    }
}

/// Pretty JSON in field order, checked against the bundled schema.
pub fn render_report(report: &AnalysisReport) -> Result<String, ReportError> {
    let json = serde_json::to_string_pretty(report)?;
    let errors = schema_errors(&serde_json::from_str(&json)?);
    if !errors.is_empty() {
        return Err(ReportError::Schema(errors.join("; ")));
    }
    Ok(json + "\n")
}

/// The report with run timestamps blanked, for comparing runs.
pub fn without_timestamps(report: &AnalysisReport) -> AnalysisReport {
    let mut r = report.clone();
    r.run.started_at.clear();
    r.run.finished_at.clear();
    r
}
