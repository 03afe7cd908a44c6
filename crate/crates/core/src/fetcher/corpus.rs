use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{CanonicalUrl, FetchResponse, FetchStatus, Fetcher};

pub const INDEX_FILE: &str = "index.tsv";

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read corpus index {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

/// Offline page store: canonical URL -> file on disk, loaded up front.
#[derive(Debug, Default)]
pub struct Corpus {
    entries: BTreeMap<CanonicalUrl, CorpusEntry>,
}

#[derive(Debug)]
struct CorpusEntry {
    body: Vec<u8>,
    content_type: &'static str,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, url: &CanonicalUrl) -> bool {
        self.entries.contains_key(url)
    }

    pub fn urls(&self) -> impl Iterator<Item = &CanonicalUrl> {
        self.entries.keys()
    }
}

impl Fetcher for Corpus {
    fn fetch(&self, url: &CanonicalUrl) -> FetchResponse {
        match self.entries.get(url) {
            Some(entry) => FetchResponse {
                status: FetchStatus::CorpusOk,
                content_type: Some(entry.content_type.to_string()),
                body: entry.body.clone(),
            },
            None => FetchResponse::failed(FetchStatus::Http(404)),
        }
    }
}

fn content_type_for(path: &Path) -> &'static str {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match ext.as_deref() {
        None | Some("html" | "htm" | "xhtml") => "text/html; charset=utf-8",
        Some("pdf") => "application/pdf",
        Some("txt") => "text/plain",
        Some("png") => "image/png",
        Some("jpg" | "jpeg") => "image/jpeg",
        _ => "application/octet-stream",
    }
}

/// Reads `<dir>/index.tsv` (`canonical-url<TAB>relative-file-path` per line)
/// and every file it references. Blank lines and lines starting with `#` are
/// skipped.
pub fn load_corpus(dir: &Path) -> Result<Corpus, CorpusError> {
    let index_path = dir.join(INDEX_FILE);
    let text = fs::read_to_string(&index_path).map_err(|source| CorpusError::Io {
        path: index_path.clone(),
        source,
    })?;
    let malformed = |line: usize, message: String| CorpusError::Malformed {
        path: index_path.clone(),
        line,
        message,
    };

    let mut entries = BTreeMap::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(raw_url), Some(rel), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(malformed(line_no, "expected exactly two tab-separated fields".into()));
        };
        let url = CanonicalUrl::parse(raw_url).ok_or_else(|| malformed(line_no, format!("invalid URL {raw_url:?}")))?;
        if url.as_str() != raw_url.trim() {
            log::debug!("corpus URL {raw_url} canonicalized to {url}");
        }
        let rel = rel.trim();
        if rel.is_empty() {
            return Err(malformed(line_no, "empty file path".into()));
        }
        let file = dir.join(rel);
        let body = fs::read(&file).map_err(|e| malformed(line_no, format!("cannot read {}: {e}", file.display())))?;
        let entry = CorpusEntry {
            body,
            content_type: content_type_for(&file),
        };
        if entries.insert(url.clone(), entry).is_some() {
            return Err(malformed(line_no, format!("duplicate URL {url}")));
        }
    }
    Ok(Corpus { entries })
}
