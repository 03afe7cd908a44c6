//! `pages.jsonl` + `edges.csv` persistence of a crawl.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CanonicalUrl, Edge, FetchStatus, StubKind};

pub const PAGES_FILE: &str = "pages.jsonl";
pub const EDGES_FILE: &str = "edges.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Page,
    Frontier,
    External,
}

impl From<StubKind> for NodeKind {
    fn from(kind: StubKind) -> Self {
        match kind {
            StubKind::Frontier => Self::Frontier,
            StubKind::External => Self::External,
        }
    }
}

/// One node of the crawl as persisted: fetched pages carry their extracted
/// text, stubs carry an empty one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageRecord {
    pub url: CanonicalUrl,
    pub depth: u32,
    pub kind: NodeKind,
    pub status: FetchStatus,
    #[serde(default)]
    pub content_type: Option<String>,
    #[serde(default)]
    pub text: String,
}

impl PageRecord {
    /// True for pages whose content was retrieved and parsed.
    pub fn has_content(&self) -> bool {
        self.kind == NodeKind::Page
            && self.status.is_success()
            && self.content_type.as_deref().is_some_and(super::is_html_content_type)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeRow {
    from: String,
    to: String,
    multiplicity: u32,
}

pub fn write_pages(path: &Path, records: &[PageRecord]) -> Result<(), StoreError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record).expect("page record serializes");
        writeln!(out, "{line}").map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))
}

pub fn write_edges(path: &Path, edges: &[Edge]) -> Result<(), StoreError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    for edge in edges {
        writer
            .serialize(EdgeRow {
                from: edge.from.to_string(),
                to: edge.to.to_string(),
                multiplicity: edge.multiplicity,
            })
            .map_err(|e| csv_err(path, e))?;
    }
    writer.flush().map_err(io_err(path))
}

fn csv_err(path: &Path, e: csv::Error) -> StoreError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => StoreError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => StoreError::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("{other:?}"),
        },
    }
}

/// Writes `pages.jsonl` and `edges.csv` into `dir`; returns their paths.
pub fn write_crawl(dir: &Path, records: &[PageRecord], edges: &[Edge]) -> Result<(PathBuf, PathBuf), StoreError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let pages = dir.join(PAGES_FILE);
    let edge_path = dir.join(EDGES_FILE);
    write_pages(&pages, records)?;
    write_edges(&edge_path, edges)?;
    Ok((pages, edge_path))
}

pub fn read_pages(path: &Path) -> Result<Vec<PageRecord>, StoreError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| StoreError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

pub fn read_edges(path: &Path) -> Result<Vec<Edge>, StoreError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut edges = Vec::new();
    for row in reader.deserialize::<EdgeRow>() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let parse = |s: &str| {
            CanonicalUrl::parse(s).ok_or_else(|| StoreError::Parse {
                path: path.to_path_buf(),
                line: edges.len() + 2,
                message: format!("invalid URL {s:?}"),
            })
        };
        edges.push(Edge {
            from: parse(&row.from)?,
            to: parse(&row.to)?,
            multiplicity: row.multiplicity,
        });
    }
    Ok(edges)
}

pub fn read_crawl(pages: &Path, edges: &Path) -> Result<(Vec<PageRecord>, Vec<Edge>), StoreError> {
    Ok((read_pages(pages)?, read_edges(edges)?))
}
