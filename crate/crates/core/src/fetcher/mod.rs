//! Breadth-first retrieval of a site, either live over HTTP or from an
//! offline fixture corpus.

mod corpus;
mod crawl;
mod http;
mod robots;
mod store;
mod url;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use self::corpus::{load_corpus, Corpus, CorpusError};
pub use self::crawl::{crawl, CrawlError, CrawlOutput, Edge, RawPage, Stub, StubKind};
pub use self::http::{HttpFetcher, RateLimiter, RequestLog};
pub use self::robots::RobotsRules;
pub use self::store::{
    read_crawl, read_edges, read_pages, write_crawl, write_edges, write_pages, NodeKind, PageRecord, StoreError,
    EDGES_FILE, PAGES_FILE,
};
pub use self::url::{normalize_url, CanonicalUrl, InvalidUrl};

pub const DEFAULT_MAX_DEPTH: u32 = 6;
pub const DEFAULT_RATE_LIMIT: f64 = 2.0;
pub const DEFAULT_USER_AGENT: &str = "sitemine/0.1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrawlMode {
    Live,
    Corpus,
}

impl FromStr for CrawlMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "live" => Ok(Self::Live),
            "corpus" => Ok(Self::Corpus),
            other => Err(format!("unknown crawl mode {other:?} (expected live|corpus)")),
        }
    }
}

impl fmt::Display for CrawlMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Live => "live",
            Self::Corpus => "corpus",
        })
    }
}

/// Host allowlist: a host is in scope if it equals one of the domains or is
/// a subdomain of one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    domains: Vec<String>,
}

impl Scope {
    /// The seed's registrable domain (public-suffix aware; IP hosts stand
    /// for themselves) plus `extra`.
    pub fn for_seed(seed: &CanonicalUrl, extra: &[String]) -> Self {
        let host = seed.host();
        let registrable = match seed.as_url().host() {
            Some(::url::Host::Domain(_)) => psl::domain_str(host).unwrap_or(host).to_string(),
            _ => host.to_string(),
        };
        let mut domains = vec![registrable];
        for entry in extra {
            let entry = entry.trim().trim_start_matches('.').to_ascii_lowercase();
            if !entry.is_empty() && !domains.contains(&entry) {
                domains.push(entry);
            }
        }
        Self { domains }
    }

    pub fn domains(&self) -> &[String] {
        &self.domains
    }

    pub fn contains(&self, url: &CanonicalUrl) -> bool {
        let host = url.host();
        self.domains.iter().any(|d| {
            host == d
                || (host.len() > d.len()
                    && host.ends_with(d.as_str())
                    && host.as_bytes()[host.len() - d.len() - 1] == b'.')
        })
    }
}

#[derive(Debug, Clone)]
pub struct CrawlConfig {
    pub seed_url: CanonicalUrl,
    pub max_depth: u32,
    pub scope: Scope,
    pub max_pages: usize,
    /// Requests per second per host (live mode).
    pub rate_limit: f64,
    pub honor_robots: bool,
    pub mode: CrawlMode,
    pub corpus_path: Option<PathBuf>,
    /// Fetch worker threads per depth level.
    pub workers: usize,
    pub user_agent: String,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("max_pages must be at least 1")]
    MaxPages,
    #[error("rate_limit must be positive, got {0}")]
    RateLimit(f64),
    #[error("workers must be at least 1")]
    Workers,
    #[error("corpus mode requires corpus_path")]
    MissingCorpusPath,
    #[error("corpus_path {0} does not exist")]
    CorpusPathMissingOnDisk(PathBuf),
    #[error("live mode does not accept corpus_path")]
    CorpusPathInLiveMode,
}

impl CrawlConfig {
    pub fn new(seed_url: CanonicalUrl, mode: CrawlMode) -> Self {
        let scope = Scope::for_seed(&seed_url, &[]);
        Self {
            seed_url,
            max_depth: DEFAULT_MAX_DEPTH,
            scope,
            max_pages: 100_000,
            rate_limit: DEFAULT_RATE_LIMIT,
            honor_robots: true,
            mode,
            corpus_path: None,
            workers: 4,
            user_agent: DEFAULT_USER_AGENT.to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_pages < 1 {
            return Err(ConfigError::MaxPages);
        }
        if !(self.rate_limit > 0.0 && self.rate_limit.is_finite()) {
            return Err(ConfigError::RateLimit(self.rate_limit));
        }
        if self.workers < 1 {
            return Err(ConfigError::Workers);
        }
        match (self.mode, &self.corpus_path) {
            (CrawlMode::Corpus, None) => Err(ConfigError::MissingCorpusPath),
            (CrawlMode::Corpus, Some(p)) if !p.exists() => Err(ConfigError::CorpusPathMissingOnDisk(p.clone())),
            (CrawlMode::Live, Some(_)) => Err(ConfigError::CorpusPathInLiveMode),
            _ => Ok(()),
        }
    }

    pub fn in_scope(&self, url: &CanonicalUrl) -> bool {
        in_scope(url, self)
    }
}

pub fn in_scope(url: &CanonicalUrl, config: &CrawlConfig) -> bool {
    config.scope.contains(url)
}

/// Outcome of a single retrieval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FetchStatus {
    Http(u16),
    CorpusOk,
    RobotsDisallowed,
    Failed(String),
    /// Stub node that was never requested.
    NotFetched,
}

impl FetchStatus {
    pub fn is_success(&self) -> bool {
        match self {
            Self::Http(code) => (200..300).contains(code),
            Self::CorpusOk => true,
            _ => false,
        }
    }
}

impl fmt::Display for FetchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Http(code) => write!(f, "{code}"),
            Self::CorpusOk => f.write_str("corpus-ok"),
            Self::RobotsDisallowed => f.write_str("robots-disallowed"),
            Self::Failed(msg) => write!(f, "error: {msg}"),
            Self::NotFetched => f.write_str("not-fetched"),
        }
    }
}

impl FromStr for FetchStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "corpus-ok" => Self::CorpusOk,
            "robots-disallowed" => Self::RobotsDisallowed,
            "not-fetched" => Self::NotFetched,
            _ => {
                if let Some(msg) = s.strip_prefix("error: ") {
                    Self::Failed(msg.to_string())
                } else {
                    Self::Http(s.parse().map_err(|_| format!("bad fetch status {s:?}"))?)
                }
            }
        })
    }
}

impl Serialize for FetchStatus {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FetchStatus {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone)]
pub struct FetchResponse {
    pub status: FetchStatus,
    pub content_type: Option<String>,
    pub body: Vec<u8>,
}

impl FetchResponse {
    pub fn failed(status: FetchStatus) -> Self {
        Self {
            status,
            content_type: None,
            body: Vec::new(),
        }
    }

    pub fn is_html(&self) -> bool {
        self.content_type.as_deref().is_some_and(is_html_content_type)
    }
}

pub(crate) fn is_html_content_type(ct: &str) -> bool {
    let mime = ct.split(';').next().unwrap_or_default().trim();
    mime.eq_ignore_ascii_case("text/html") || mime.eq_ignore_ascii_case("application/xhtml+xml")
}

/// A source of pages. Implementations must be usable from several worker
/// threads at once.
pub trait Fetcher: Sync {
    fn fetch(&self, url: &CanonicalUrl) -> FetchResponse;
}
