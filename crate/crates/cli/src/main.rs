use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sitemine::config::RunConfig;
use sitemine::fetcher::{CrawlMode, EDGES_FILE, PAGES_FILE};
use sitemine::pipeline::{self, ExportFormat, OutputGuard, PipelineError};

/// Crawl a website, analyse its hyperlink graph and content, and report.
#[derive(Debug, Parser)]
#[command(name = "mine", version)]
struct Cli {
    /// Fetch from the web or from a local corpus (overrides the config).
    #[arg(long, global = true)]
    mode: Option<CrawlMode>,
    /// Fetch worker threads per crawl level (overrides the config).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Crawl and write pages.jsonl and edges.csv to the output directory.
    Crawl {
        #[arg(long)]
        config: PathBuf,
    },
    /// Analyse a stored crawl; writes exports and report.json.
    Analyze {
        #[arg(long)]
        pages: PathBuf,
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Report path (default: <output_dir>/report.json).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write one graph serialization of a stored crawl.
    Export {
        #[arg(long)]
        format: ExportFormat,
        #[arg(long)]
        config: PathBuf,
        /// Default: pages.jsonl in the output directory.
        #[arg(long)]
        pages: Option<PathBuf>,
        /// Default: edges.csv in the output directory.
        #[arg(long)]
        edges: Option<PathBuf>,
        /// Default: graph.<format> in the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every stage and write the report to --out.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(cli: &Cli, path: &Path) -> Result<RunConfig, PipelineError> {
    pipeline::load_config(path)?
        .with_overrides(cli.mode, cli.workers)
        .map_err(|e| PipelineError::new(pipeline::Stage::Config, pipeline::FailureClass::Config, e))
}

fn stored_crawl(cfg: &RunConfig, pages: Option<&Path>, edges: Option<&Path>) -> (PathBuf, PathBuf) {
    (
        pages
            .map(Path::to_path_buf)
            .unwrap_or_else(|| cfg.output_dir.join(PAGES_FILE)),
        edges
            .map(Path::to_path_buf)
            .unwrap_or_else(|| cfg.output_dir.join(EDGES_FILE)),
    )
}

fn run(cli: &Cli) -> Result<(), PipelineError> {
    match &cli.command {
        Command::Crawl { config } => {
            let cfg = load(cli, config)?;
            let result = pipeline::crawl_stage(&cfg)?;
            let mut guard = OutputGuard::new();
            let (pages, edges) = pipeline::save_crawl(&cfg.output_dir, &result, &mut guard)?;
            guard.commit();
            println!("{}", pages.display());
            println!("{}", edges.display());
        }
        Command::Analyze {
            pages,
            edges,
            config,
            report,
        } => {
            let started_at = pipeline::now();
            let cfg = load(cli, config)?;
            let (records, edge_list) = pipeline::load_crawl(pages, edges)?;
            let (_, path) = pipeline::analyze_and_report(
                &cfg,
                &records,
                &edge_list,
                report.as_deref(),
                started_at,
                OutputGuard::new(),
            )?;
            println!("{}", path.display());
        }
        Command::Export {
            format,
            config,
            pages,
            edges,
            out,
        } => {
            let cfg = load(cli, config)?;
            let (pages, edges) = stored_crawl(&cfg, pages.as_deref(), edges.as_deref());
            let (records, edge_list) = pipeline::load_crawl(&pages, &edges)?;
            let analysis = pipeline::analyze(&cfg, &records, &edge_list)?;
            let path = out
                .clone()
                .unwrap_or_else(|| cfg.output_dir.join(format.default_file_name()));
            pipeline::export_graph(&analysis.graph, &analysis.node_attributes(&cfg), *format, &path)
                .map_err(|e| PipelineError::new(pipeline::Stage::Export, pipeline::FailureClass::Stage, e))?;
            println!("{}", path.display());
        }
        Command::Report { config, out } => {
            let cfg = load(cli, config)?;
            let (_, path) = pipeline::run_with_config(&cfg, out.as_deref())?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mine: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
