//! Flat TOML run configuration.
//!
//! ```toml
//! seed_url = "https://www.autoco.com/"
//! mode = "corpus"
//! corpus_path = "corpus"
//! max_depth = 6
//! allow_hosts = ["autoco.de", "autoco.fr"]
//! sales_path = "sales.csv"
//! home_market = "jp"
//! country_overrides = [["/de-de/", "de"]]
//! output_dir = "out"
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::fetcher::{self, CanonicalUrl, CrawlConfig, CrawlMode, Scope};
use crate::markets::CountryOverride;

#[derive(Debug, thiserror::Error)]
pub enum ConfigFileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: missing required key `{field}`")]
    Missing { path: PathBuf, field: &'static str },
    #[error("{path}: invalid value for `{field}`: {message}")]
    Invalid {
        path: PathBuf,
        field: &'static str,
        message: String,
    },
}

/// Keys exactly as written in the file, with defaults applied. This is the
/// form that is hashed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub seed_url: Option<String>,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default)]
    pub corpus_path: Option<String>,
    #[serde(default = "default_max_depth")]
    pub max_depth: u32,
    #[serde(default = "default_max_pages")]
    pub max_pages: usize,
    #[serde(default = "default_rate_limit")]
    pub rate_limit: f64,
    #[serde(default = "default_true")]
    pub honor_robots: bool,
    /// Not part of the hash: results do not depend on it.
    #[serde(default = "default_workers", skip_serializing)]
    pub workers: usize,
    #[serde(default = "default_user_agent")]
    pub user_agent: String,
    #[serde(default)]
    pub allow_hosts: Vec<String>,
    #[serde(default)]
    pub include_external: bool,
    #[serde(default)]
    pub taxonomy_path: Option<String>,
    #[serde(default)]
    pub lexicon_path: Option<String>,
    #[serde(default)]
    pub sales_path: Option<String>,
    #[serde(default)]
    pub home_market: Option<String>,
    #[serde(default)]
    pub country_overrides: Vec<(String, String)>,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default = "default_true")]
    pub export_graphml: bool,
    #[serde(default = "default_true")]
    pub export_dot: bool,
    #[serde(default = "default_true")]
    pub export_csv: bool,
    #[serde(default = "default_true")]
    pub export_annotations: bool,
    #[serde(default = "default_damping")]
    pub damping: f64,
    #[serde(default = "default_degree_bins")]
    pub degree_bins: usize,
}

fn default_mode() -> String {
    "live".into()
}
fn default_max_depth() -> u32 {
    fetcher::DEFAULT_MAX_DEPTH
}
fn default_max_pages() -> usize {
    100_000
}
fn default_rate_limit() -> f64 {
    fetcher::DEFAULT_RATE_LIMIT
}
fn default_true() -> bool {
    true
}
fn default_workers() -> usize {
    4
}
fn default_user_agent() -> String {
    fetcher::DEFAULT_USER_AGENT.into()
}
fn default_output_dir() -> String {
    "out".into()
}
fn default_damping() -> f64 {
    0.85
}
fn default_degree_bins() -> usize {
    10
}

/// Which exports a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExportToggles {
    pub graphml: bool,
    pub dot: bool,
    pub csv: bool,
    pub annotations: bool,
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: PathBuf,
    pub settings: Settings,
    pub crawl: CrawlConfig,
    pub include_external: bool,
    pub taxonomy_path: Option<PathBuf>,
    pub lexicon_path: Option<PathBuf>,
    pub sales_path: Option<PathBuf>,
    pub home_market: Option<String>,
    pub country_overrides: Vec<CountryOverride>,
    pub output_dir: PathBuf,
    pub exports: ExportToggles,
    pub damping: f64,
    pub degree_bins: usize,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigFileError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    /// `path` names the file the text came from; its directory anchors
    /// relative paths.
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigFileError> {
        let settings: Settings = toml::from_str(text).map_err(|e| ConfigFileError::Parse {
            path: path.to_path_buf(),
            message: e.message().to_string(),
        })?;
        Self::from_settings(settings, path)
    }

    pub fn from_settings(settings: Settings, path: &Path) -> Result<Self, ConfigFileError> {
        let invalid = |field: &'static str, message: String| ConfigFileError::Invalid {
            path: path.to_path_buf(),
            field,
            message,
        };
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &str| base.join(p);

        let raw_seed = settings.seed_url.as_deref().ok_or(ConfigFileError::Missing {
            path: path.to_path_buf(),
            field: "seed_url",
        })?;
        let seed = CanonicalUrl::parse(raw_seed)
            .ok_or_else(|| invalid("seed_url", format!("{raw_seed:?} is not an http(s) URL")))?;
        let mode: CrawlMode = settings.mode.parse().map_err(|e: String| invalid("mode", e))?;

        let mut crawl = CrawlConfig::new(seed.clone(), mode);
        crawl.max_depth = settings.max_depth;
        crawl.max_pages = settings.max_pages;
        crawl.rate_limit = settings.rate_limit;
        crawl.honor_robots = settings.honor_robots;
        crawl.workers = settings.workers;
        crawl.user_agent = settings.user_agent.clone();
        crawl.scope = Scope::for_seed(&seed, &settings.allow_hosts);
        crawl.corpus_path = settings.corpus_path.as_deref().map(resolve);
        crawl.validate().map_err(|e| {
            let field = match e {
                fetcher::ConfigError::MaxPages => "max_pages",
                fetcher::ConfigError::RateLimit(_) => "rate_limit",
                fetcher::ConfigError::Workers => "workers",
                _ => "corpus_path",
            };
            invalid(field, e.to_string())
        })?;

        if !(settings.damping > 0.0 && settings.damping < 1.0) {
            return Err(invalid("damping", format!("{} is outside (0, 1)", settings.damping)));
        }
        if settings.degree_bins < 2 {
            return Err(invalid("degree_bins", "at least 2 bins are required".into()));
        }
        let home_market = settings.home_market.as_deref().map(str::to_ascii_lowercase);
        if home_market.is_some() != settings.sales_path.is_some() {
            return Err(invalid(
                if home_market.is_some() {
                    "sales_path"
                } else {
                    "home_market"
                },
                "sales_path and home_market must be given together".into(),
            ));
        }
        let country_overrides = settings
            .country_overrides
            .iter()
            .map(|(pattern, country)| {
                if pattern.is_empty() {
                    Err(invalid("country_overrides", "empty pattern".into()))
                } else {
                    Ok(CountryOverride::new(pattern.clone(), country.clone()))
                }
            })
            .collect::<Result<_, _>>()?;

        Ok(Self {
            source: path.to_path_buf(),
            crawl,
            include_external: settings.include_external,
            taxonomy_path: settings.taxonomy_path.as_deref().map(resolve),
            lexicon_path: settings.lexicon_path.as_deref().map(resolve),
            sales_path: settings.sales_path.as_deref().map(resolve),
            home_market,
            country_overrides,
            output_dir: resolve(&settings.output_dir),
            exports: ExportToggles {
                graphml: settings.export_graphml,
                dot: settings.export_dot,
                csv: settings.export_csv,
                annotations: settings.export_annotations,
            },
            damping: settings.damping,
            degree_bins: settings.degree_bins,
            settings,
        })
    }

    /// Re-resolves with `mode`/`workers` replaced, as given on the command
    /// line.
    pub fn with_overrides(self, mode: Option<CrawlMode>, workers: Option<usize>) -> Result<Self, ConfigFileError> {
        if mode.is_none() && workers.is_none() {
            return Ok(self);
        }
        let mut settings = self.settings;
        if let Some(mode) = mode {
            settings.mode = mode.to_string();
        }
        if let Some(workers) = workers {
            settings.workers = workers;
        }
        Self::from_settings(settings, &self.source)
    }

    /// SHA-256 over the canonical JSON form of the settings (defaults
    /// applied, paths as written, worker count left out).
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(&self.settings).expect("settings serialize");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
