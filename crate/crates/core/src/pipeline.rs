//! Crawl, extraction, graph analysis, annotation, markets and exports as
//! one run.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::content::{
    annotate, category_centrality_stats, category_correlations, degree_sentiment_bins, CategoryCorrelation,
    CategorySummary, DegreeBin, PageAnnotation, SentimentLexicon, TopicTaxonomy,
};
use crate::extractor::{extract_links, extract_text, ExtractionRules};
use crate::fetcher::{
    crawl, load_corpus, write_edges, write_pages, CrawlError, CrawlMode, CrawlOutput, Edge, FetchStatus, Fetcher,
    HttpFetcher, NodeKind, PageRecord, EDGES_FILE, PAGES_FILE,
};
use crate::graph::{
    build_graph, compute_metrics, degree_distribution_csv, pagerank, to_dot, to_edge_csv, to_graphml, CentralityScores,
    GraphMetrics, NodeAttributes, PageRankOptions, SiteGraph,
};
use crate::markets::{
    country_of_url, domain_page_counts, join_page_counts, load_sales, market_cluster_report, ClusterReport,
};
use crate::report::{render_report, AnalysisReport, CrawlSummary, PageRankSummary, RankedPage, RunInfo};

pub const REPORT_FILE: &str = "report.json";
pub const ANNOTATIONS_FILE: &str = "annotations.csv";
pub const DEGREE_DISTRIBUTION_FILE: &str = "degree_distribution.csv";
const TOP_PAGES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Crawl,
    Load,
    Graph,
    Annotate,
    Markets,
    Export,
    Report,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Config => "config",
            Self::Crawl => "crawl",
            Self::Load => "load",
            Self::Graph => "graph",
            Self::Annotate => "annotate",
            Self::Markets => "markets",
            Self::Export => "export",
            Self::Report => "report",
        })
    }
}

/// Failure classes with stable process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureClass {
    /// Unreadable or invalid configuration: exit 2.
    Config,
    /// Nothing to crawl (seed not retrievable, empty corpus): exit 3.
    SeedUnreachable,
    /// Any later stage failing: exit 4.
    Stage,
}

#[derive(Debug)]
pub struct PipelineError {
    pub stage: Stage,
    pub class: FailureClass,
    pub message: String,
}

impl PipelineError {
    pub fn new(stage: Stage, class: FailureClass, message: impl fmt::Display) -> Self {
        Self {
            stage,
            class,
            message: message.to_string(),
        }
    }

    fn stage(stage: Stage, message: impl fmt::Display) -> Self {
        Self::new(stage, FailureClass::Stage, message)
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            FailureClass::Config => 2,
            FailureClass::SeedUnreachable => 3,
            FailureClass::Stage => 4,
        }
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage failed: {}", self.stage, self.message)
    }
}

impl std::error::Error for PipelineError {}

pub fn load_config(path: &Path) -> Result<RunConfig, PipelineError> {
    RunConfig::load(path).map_err(|e| PipelineError::new(Stage::Config, FailureClass::Config, e))
}

/// Files written by a run; removed on drop unless the run commits.
#[derive(Debug, Default)]
pub struct OutputGuard {
    written: Vec<PathBuf>,
    committed: bool,
}

impl OutputGuard {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> std::io::Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        self.written.push(path.to_path_buf());
        std::fs::write(path, bytes)
    }

    pub fn track(&mut self, path: PathBuf) {
        self.written.push(path);
    }

    pub fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.written)
    }
}

impl Drop for OutputGuard {
    fn drop(&mut self) {
        if !self.committed {
            for path in &self.written {
                if std::fs::remove_file(path).is_ok() {
                    log::warn!("removed partial output {}", path.display());
                }
            }
        }
    }
}

/// Persistable crawl result: one record per node plus the distinct edges.
#[derive(Debug, Clone, PartialEq)]
pub struct CrawlResult {
    pub records: Vec<PageRecord>,
    pub edges: Vec<Edge>,
    pub truncated: bool,
}

/// Turns crawl output into records, extracting visible text from every
/// HTML page.
pub fn to_records(output: CrawlOutput, rules: &ExtractionRules) -> CrawlResult {
    let mut records: Vec<PageRecord> = output
        .pages
        .par_iter()
        .map(|page| {
            let html = page.status.is_success()
                && page
                    .content_type
                    .as_deref()
                    .is_some_and(crate::fetcher::is_html_content_type);
            PageRecord {
                url: page.url.clone(),
                depth: page.depth,
                kind: NodeKind::Page,
                status: page.status.clone(),
                content_type: page.content_type.clone(),
                text: if html {
                    extract_text(&page.html, rules)
                } else {
                    String::new()
                },
            }
        })
        .collect();
    records.extend(output.stubs.into_iter().map(|stub| PageRecord {
        url: stub.url,
        depth: stub.depth,
        kind: stub.kind.into(),
        status: FetchStatus::NotFetched,
        content_type: None,
        text: String::new(),
    }));
    records.sort_by(|a, b| a.url.cmp(&b.url));
    CrawlResult {
        records,
        edges: output.edges,
        truncated: output.truncated,
    }
}

/// Runs the crawl described by `cfg` against the corpus or the web.
pub fn crawl_stage(cfg: &RunConfig) -> Result<CrawlResult, PipelineError> {
    let fetcher: Box<dyn Fetcher> = match cfg.crawl.mode {
        CrawlMode::Corpus => {
            let dir = cfg.crawl.corpus_path.as_deref().expect("validated corpus config");
            let corpus = load_corpus(dir).map_err(|e| PipelineError::stage(Stage::Crawl, e))?;
            if corpus.is_empty() {
                return Err(PipelineError::new(
                    Stage::Crawl,
                    FailureClass::SeedUnreachable,
                    format!("corpus {} has no pages", dir.display()),
                ));
            }
            Box::new(corpus)
        }
        CrawlMode::Live => Box::new(HttpFetcher::new(&cfg.crawl).map_err(|e| PipelineError::stage(Stage::Crawl, e))?),
    };
    let output = crawl(&cfg.crawl, fetcher.as_ref(), extract_links).map_err(|e| match e {
        CrawlError::SeedUnreachable { .. } => PipelineError::new(Stage::Crawl, FailureClass::SeedUnreachable, e),
        other => PipelineError::stage(Stage::Crawl, other),
    })?;
    if output.truncated {
        log::warn!("crawl stopped at max_pages = {}", cfg.crawl.max_pages);
    }
    Ok(to_records(output, &ExtractionRules::default()))
}

/// Writes `pages.jsonl` and `edges.csv` into `dir`.
pub fn save_crawl(
    dir: &Path,
    result: &CrawlResult,
    guard: &mut OutputGuard,
) -> Result<(PathBuf, PathBuf), PipelineError> {
    let err = |e: &dyn fmt::Display| PipelineError::stage(Stage::Crawl, e);
    std::fs::create_dir_all(dir).map_err(|e| err(&format!("{}: {e}", dir.display())))?;
    let pages = dir.join(PAGES_FILE);
    let edges = dir.join(EDGES_FILE);
    guard.track(pages.clone());
    write_pages(&pages, &result.records).map_err(|e| err(&e))?;
    guard.track(edges.clone());
    write_edges(&edges, &result.edges).map_err(|e| err(&e))?;
    Ok((pages, edges))
}

/// Reads a crawl saved by [`save_crawl`].
pub fn load_crawl(pages: &Path, edges: &Path) -> Result<(Vec<PageRecord>, Vec<Edge>), PipelineError> {
    crate::fetcher::read_crawl(pages, edges).map_err(|e| PipelineError::stage(Stage::Load, e))
}

/// Everything computed from one crawl.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub graph: SiteGraph,
    pub metrics: GraphMetrics,
    pub scores: CentralityScores,
    pub taxonomy: TopicTaxonomy,
    /// Per node; `None` for nodes without retrieved HTML.
    pub annotations: Vec<Option<PageAnnotation>>,
    pub categories: Vec<CategorySummary>,
    pub degree_bins: Vec<DegreeBin>,
    pub correlations: Vec<CategoryCorrelation>,
    pub markets: Option<ClusterReport>,
    pub crawl: CrawlSummary,
    pub warnings: Vec<String>,
}

impl Analysis {
    pub fn node_attributes(&self, cfg: &RunConfig) -> Vec<NodeAttributes> {
        self.graph
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, node)| {
                let ann = self.annotations[id].as_ref();
                NodeAttributes {
                    dominant_topic: ann
                        .and_then(|a| a.dominant_topic)
                        .map(|t| self.taxonomy.name(t).to_string()),
                    sentiment: ann.map(|a| a.sentiment),
                    pagerank: Some(self.scores.pagerank[id]),
                    country: country_of_url(&node.url, &cfg.country_overrides),
                }
            })
            .collect()
    }
}

fn crawl_summary(records: &[PageRecord], edges: &[Edge], cfg: &RunConfig) -> CrawlSummary {
    let count = |f: &dyn Fn(&PageRecord) -> bool| records.iter().filter(|r| f(r)).count();
    let max_depth = cfg.crawl.max_depth;
    CrawlSummary {
        max_depth,
        include_external: cfg.include_external,
        pages: count(&|r| r.kind == NodeKind::Page),
        pages_with_content: count(&|r| r.has_content()),
        failed_pages: count(&|r| r.kind == NodeKind::Page && !r.status.is_success()),
        frontier_stubs: count(&|r| r.kind == NodeKind::Frontier),
        external_stubs: count(&|r| r.kind == NodeKind::External),
        edges: edges.len(),
        truncated: records
            .iter()
            .any(|r| r.kind == NodeKind::Frontier && r.depth <= max_depth),
    }
}

/// Graph metrics, centrality, annotation and market analysis of a stored
/// crawl.
pub fn analyze(cfg: &RunConfig, records: &[PageRecord], edges: &[Edge]) -> Result<Analysis, PipelineError> {
    let mut warnings = Vec::new();
    let graph = build_graph(records, edges, cfg.include_external).map_err(|e| PipelineError::stage(Stage::Graph, e))?;
    if graph.dropped_self_loops() > 0 {
        warnings.push(format!("{} self-link(s) ignored", graph.dropped_self_loops()));
    }
    let crawl = crawl_summary(records, edges, cfg);
    if crawl.truncated {
        warnings.push(format!("crawl truncated at max_pages = {}", cfg.crawl.max_pages));
    }
    let metrics = compute_metrics(&graph);
    let scores = pagerank(
        &graph,
        PageRankOptions {
            damping: cfg.damping,
            ..PageRankOptions::default()
        },
    )
    .map_err(|e| PipelineError::stage(Stage::Graph, e))?;

    let annotate_err = |e: &dyn fmt::Display| PipelineError::stage(Stage::Annotate, e);
    let taxonomy = match &cfg.taxonomy_path {
        Some(p) => TopicTaxonomy::load(p).map_err(|e| annotate_err(&e))?,
        None => TopicTaxonomy::default(),
    };
    let lexicon = match &cfg.lexicon_path {
        Some(p) => SentimentLexicon::load(p).map_err(|e| annotate_err(&e))?,
        None => SentimentLexicon::bundled(),
    };
    let by_url: HashMap<_, _> = records.iter().map(|r| (&r.url, r)).collect();
    let annotations: Vec<Option<PageAnnotation>> = graph
        .nodes()
        .par_iter()
        .map(|node| {
            let record = by_url[&node.url];
            record
                .has_content()
                .then(|| annotate(&record.text, &taxonomy, &lexicon))
        })
        .collect();
    let categories = category_centrality_stats(&scores, &annotations, &taxonomy).map_err(|e| annotate_err(&e))?;
    let degree_bins = degree_sentiment_bins(&graph, &annotations, cfg.degree_bins).map_err(|e| annotate_err(&e))?;
    let correlations = category_correlations(&scores, &annotations, &taxonomy).map_err(|e| annotate_err(&e))?;

    let markets = match (&cfg.sales_path, &cfg.home_market) {
        (Some(sales_path), Some(home)) => {
            let markets_err = |e: &dyn fmt::Display| PipelineError::stage(Stage::Markets, e);
            let sales = load_sales(sales_path).map_err(|e| markets_err(&e))?;
            let counts = domain_page_counts(&graph, &cfg.country_overrides);
            let (market_records, unassigned) = join_page_counts(&sales, &counts);
            let report = market_cluster_report(&market_records, unassigned, home).map_err(|e| markets_err(&e))?;
            warnings.extend(report.warnings.iter().cloned());
            Some(report)
        }
        _ => None,
    };

    Ok(Analysis {
        graph,
        metrics,
        scores,
        taxonomy,
        annotations,
        categories,
        degree_bins,
        correlations,
        markets,
        crawl,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    GraphMl,
    Dot,
    /// Directed edge list `from,to,multiplicity`.
    Csv,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "graphml" => Ok(Self::GraphMl),
            "dot" => Ok(Self::Dot),
            "csv" | "csv-edges" => Ok(Self::Csv),
            other => Err(format!("unknown export format {other:?} (expected graphml|dot|csv)")),
        }
    }
}

impl ExportFormat {
    pub fn name(self) -> &'static str {
        match self {
            Self::GraphMl => "graphml",
            Self::Dot => "dot",
            Self::Csv => "csv",
        }
    }

    pub fn default_file_name(self) -> &'static str {
        match self {
            Self::GraphMl => "graph.graphml",
            Self::Dot => "graph.dot",
            Self::Csv => "graph_edges.csv",
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot write {path}: {source}")]
pub struct ExportError {
    pub path: PathBuf,
    #[source]
    pub source: std::io::Error,
}

/// An output file as listed in the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExportFile {
    pub kind: String,
    /// Relative to the output directory.
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

pub fn render_graph(g: &SiteGraph, attrs: &[NodeAttributes], format: ExportFormat) -> String {
    match format {
        ExportFormat::GraphMl => to_graphml(g, attrs),
        ExportFormat::Dot => to_dot(g, attrs),
        ExportFormat::Csv => to_edge_csv(g),
    }
}

/// Writes one serialization of the graph to `path`.
pub fn export_graph(
    g: &SiteGraph,
    attrs: &[NodeAttributes],
    format: ExportFormat,
    path: &Path,
) -> Result<ExportFile, ExportError> {
    let body = render_graph(g, attrs, format);
    std::fs::write(path, &body).map_err(|source| ExportError {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(manifest_entry(format.name(), path, body.as_bytes()))
}

fn manifest_entry(kind: &str, path: &Path, body: &[u8]) -> ExportFile {
    ExportFile {
        kind: kind.to_string(),
        path: path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        bytes: body.len(),
        sha256: hex::encode(Sha256::digest(body)),
    }
}

fn csv_float(x: f64) -> String {
    format!("{x:?}")
}

/// `url,depth,<category counts>,dominant_topic,sentiment,pagerank,
/// normalized_pagerank,degree`, one row per node. Content fields are empty
/// for nodes without retrieved HTML.
pub fn annotations_csv(analysis: &Analysis) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["url".to_string(), "depth".to_string()];
    header.extend(analysis.taxonomy.categories().iter().map(|c| c.name.clone()));
    header.extend(
        [
            "dominant_topic",
            "sentiment",
            "pagerank",
            "normalized_pagerank",
            "degree",
        ]
        .map(String::from),
    );
    writer.write_record(&header).expect("in-memory write");
    for (id, node) in analysis.graph.nodes().iter().enumerate() {
        let ann = analysis.annotations[id].as_ref();
        let mut row = vec![node.url.as_str().to_string(), node.depth.to_string()];
        match ann {
            Some(a) => row.extend(a.keyword_counts.iter().map(|c| c.to_string())),
            None => row.extend(std::iter::repeat_n(String::new(), analysis.taxonomy.len())),
        }
        row.push(
            ann.and_then(|a| a.dominant_topic)
                .map(|t| analysis.taxonomy.name(t).to_string())
                .unwrap_or_default(),
        );
        row.push(ann.map(|a| csv_float(a.sentiment)).unwrap_or_default());
        row.push(csv_float(analysis.scores.pagerank[id]));
        row.push(csv_float(analysis.scores.normalized[id]));
        row.push(analysis.graph.degree(id).to_string());
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

/// Writes the exports enabled in `cfg` into its output directory.
pub fn write_exports(
    cfg: &RunConfig,
    analysis: &Analysis,
    guard: &mut OutputGuard,
) -> Result<Vec<ExportFile>, PipelineError> {
    let dir = &cfg.output_dir;
    let attrs = analysis.node_attributes(cfg);
    let mut files: Vec<(&str, &str, String)> = Vec::new();
    for (enabled, format) in [
        (cfg.exports.graphml, ExportFormat::GraphMl),
        (cfg.exports.dot, ExportFormat::Dot),
        (cfg.exports.csv, ExportFormat::Csv),
    ] {
        if enabled {
            files.push((
                format.name(),
                format.default_file_name(),
                render_graph(&analysis.graph, &attrs, format),
            ));
        }
    }
    if cfg.exports.csv {
        files.push((
            "degree-distribution",
            DEGREE_DISTRIBUTION_FILE,
            degree_distribution_csv(&analysis.metrics.degree_distribution),
        ));
    }
    if cfg.exports.annotations {
        files.push(("annotations", ANNOTATIONS_FILE, annotations_csv(analysis)));
    }
    let mut manifest = Vec::new();
    for (kind, name, body) in files {
        let path = dir.join(name);
        guard.write(&path, body.as_bytes()).map_err(|source| {
            PipelineError::stage(
                Stage::Export,
                ExportError {
                    path: path.clone(),
                    source,
                },
            )
        })?;
        manifest.push(manifest_entry(kind, &path, body.as_bytes()));
    }
    Ok(manifest)
}

fn top_pages(analysis: &Analysis) -> Vec<RankedPage> {
    let mut order: Vec<usize> = (0..analysis.graph.node_count()).collect();
    order.sort_by(|&a, &b| {
        analysis.scores.pagerank[b]
            .total_cmp(&analysis.scores.pagerank[a])
            .then(a.cmp(&b))
    });
    order
        .into_iter()
        .take(TOP_PAGES)
        .map(|id| RankedPage {
            url: analysis.graph.node(id).url.as_str().to_string(),
            pagerank: analysis.scores.pagerank[id],
            normalized_pagerank: analysis.scores.normalized[id],
            degree: analysis.graph.degree(id),
        })
        .collect()
}

pub fn build_report(
    cfg: &RunConfig,
    analysis: &Analysis,
    exports: Vec<ExportFile>,
    started_at: String,
) -> AnalysisReport {
    AnalysisReport {
        run: RunInfo {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed_url: cfg.crawl.seed_url.as_str().to_string(),
            mode: cfg.crawl.mode.to_string(),
            config_hash: cfg.hash(),
            started_at,
            finished_at: now(),
        },
        crawl: analysis.crawl.clone(),
        graph: analysis.metrics.clone(),
        pagerank: PageRankSummary {
            damping: cfg.damping,
            tolerance: PageRankOptions::default().tol,
            iterations: analysis.scores.iterations,
            residual: analysis.scores.residual,
            top: top_pages(analysis),
        },
        categories: analysis.categories.clone(),
        degree_sentiment_bins: analysis.degree_bins.clone(),
        correlations: analysis.correlations.clone(),
        markets: analysis.markets.clone(),
        exports,
        warnings: analysis.warnings.clone(),
    }
}

/// UTC timestamp in RFC 3339 form.
pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Analysis, exports and `report.json` for a stored crawl. Returns the
/// report and its path.
pub fn analyze_and_report(
    cfg: &RunConfig,
    records: &[PageRecord],
    edges: &[Edge],
    report_path: Option<&Path>,
    started_at: String,
    mut guard: OutputGuard,
) -> Result<(AnalysisReport, PathBuf), PipelineError> {
    let analysis = analyze(cfg, records, edges)?;
    let exports = write_exports(cfg, &analysis, &mut guard)?;
    let report = build_report(cfg, &analysis, exports, started_at);
    let json = render_report(&report).map_err(|e| PipelineError::stage(Stage::Report, e))?;
    let path = report_path
        .map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.output_dir.join(REPORT_FILE));
    guard
        .write(&path, json.as_bytes())
        .map_err(|e| PipelineError::stage(Stage::Report, format!("cannot write {}: {e}", path.display())))?;
    guard.commit();
    Ok((report, path))
}

/// Every stage for the config at `config_path`. On failure no partial
/// output is left behind.
pub fn run_pipeline(config_path: &Path) -> Result<AnalysisReport, PipelineError> {
    let cfg = load_config(config_path)?;
    run_with_config(&cfg, None).map(|(report, _)| report)
}

pub fn run_with_config(
    cfg: &RunConfig,
    report_path: Option<&Path>,
) -> Result<(AnalysisReport, PathBuf), PipelineError> {
    let started_at = now();
    let mut guard = OutputGuard::new();
    let result = crawl_stage(cfg)?;
    save_crawl(&cfg.output_dir, &result, &mut guard)?;
    analyze_and_report(cfg, &result.records, &result.edges, report_path, started_at, guard)
}
