//! Country attribution of pages, clustering of national markets by sales,
//! and the share of a site's pages that targets each market group.

mod kmeans;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::fetcher::{CanonicalUrl, NodeKind};
use crate::graph::SiteGraph;

pub use self::kmeans::{kmeans_1d, Cluster, KMeansError, KMeansResult};

/// Key under which pages without a resolvable country are counted.
pub const UNASSIGNED: &str = "unassigned";
pub const MARKET_CLUSTERS: usize = 3;

/// Forces a country for every URL containing `pattern`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountryOverride {
    pub pattern: String,
    pub country: String,
}

impl CountryOverride {
    pub fn new(pattern: impl Into<String>, country: impl Into<String>) -> Self {
        Self {
            pattern: pattern.into(),
            country: country.into().to_ascii_lowercase(),
        }
    }
}

/// First matching override wins; otherwise a two-letter top-level domain is
/// taken as the country code. Generic TLDs and IP hosts give `None`.
pub fn country_of_url(url: &CanonicalUrl, overrides: &[CountryOverride]) -> Option<String> {
    if let Some(o) = overrides.iter().find(|o| url.as_str().contains(&o.pattern)) {
        return Some(o.country.clone());
    }
    if !matches!(url.as_url().host(), Some(url::Host::Domain(_))) {
        return None;
    }
    let tld = url.host().trim_end_matches('.').rsplit('.').next()?;
    (tld.len() == 2 && tld.bytes().all(|b| b.is_ascii_lowercase())).then(|| tld.to_string())
}

/// Pages per country over the graph's non-external nodes; pages without a
/// country are counted under [`UNASSIGNED`].
pub fn domain_page_counts(g: &SiteGraph, overrides: &[CountryOverride]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for node in g.nodes().iter().filter(|n| n.kind != NodeKind::External) {
        let key = country_of_url(&node.url, overrides).unwrap_or_else(|| UNASSIGNED.to_string());
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketRecord {
    pub country_code: String,
    pub country_name: String,
    /// Passenger cars sold or registered; `None` when the sales table has no
    /// entry for a country that has pages.
    pub sales: Option<u64>,
    pub page_count: usize,
    pub cluster: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum MarketError {
    #[error("{path}:{line}: {message}")]
    Sales { path: String, line: usize, message: String },
    #[error("home market {0:?} is not among the market records")]
    MissingHome(String),
    #[error("duplicate country code {0:?}")]
    DuplicateCountry(String),
    #[error(transparent)]
    KMeans(#[from] KMeansError),
}

#[derive(Debug, Deserialize)]
struct SalesRow {
    country_code: String,
    country_name: String,
    sales: String,
}

/// Reads `country_code,country_name,sales` (header row required) into
/// records with zero pages.
pub fn load_sales(path: &Path) -> Result<Vec<MarketRecord>, MarketError> {
    let display = path.display().to_string();
    let err = |line: usize, message: String| MarketError::Sales {
        path: display.clone(),
        line,
        message,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| err(0, e.to_string()))?;
    let mut records: Vec<MarketRecord> = Vec::new();
    for (i, row) in reader.deserialize::<SalesRow>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| err(line, e.to_string()))?;
        let code = row.country_code.trim().to_ascii_lowercase();
        if code.len() != 2 || !code.bytes().all(|b| b.is_ascii_lowercase()) {
            return Err(err(
                line,
                format!("country code {:?} is not two letters", row.country_code),
            ));
        }
        let sales: u64 = row
            .sales
            .trim()
            .replace('_', "")
            .parse()
            .map_err(|_| err(line, format!("sales {:?} is not a positive integer", row.sales)))?;
        if sales == 0 {
            return Err(err(line, "sales must be positive".into()));
        }
        if records.iter().any(|r| r.country_code == code) {
            return Err(MarketError::DuplicateCountry(code));
        }
        records.push(MarketRecord {
            country_code: code,
            country_name: row.country_name.trim().to_string(),
            sales: Some(sales),
            page_count: 0,
            cluster: None,
        });
    }
    Ok(records)
}

/// Joins the sales table with per-country page counts. Countries with pages
/// but no sales row become records without sales; the `unassigned` count is
/// returned separately.
pub fn join_page_counts(sales: &[MarketRecord], counts: &BTreeMap<String, usize>) -> (Vec<MarketRecord>, usize) {
    let mut records: Vec<MarketRecord> = sales
        .iter()
        .map(|r| MarketRecord {
            page_count: counts.get(&r.country_code).copied().unwrap_or(0),
            ..r.clone()
        })
        .collect();
    for (code, &pages) in counts {
        if code != UNASSIGNED && !records.iter().any(|r| &r.country_code == code) {
            records.push(MarketRecord {
                country_code: code.clone(),
                country_name: String::new(),
                sales: None,
                page_count: pages,
                cluster: None,
            });
        }
    }
    records.sort_by(|a, b| a.country_code.cmp(&b.country_code));
    (records, counts.get(UNASSIGNED).copied().unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarketCluster {
    pub label: String,
    /// Country codes, ascending by sales.
    pub members: Vec<String>,
    pub sales_min: u64,
    pub sales_max: u64,
    pub mean_log10_sales: f64,
    pub page_count: usize,
    /// Percent of all pages.
    pub page_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterReport {
    /// Ordered by ascending mean log sales.
    pub clusters: Vec<MarketCluster>,
    pub total_pages: usize,
    /// Pages with no country plus pages of countries left out of clustering.
    pub unassigned_pages: usize,
    pub unassigned_share: f64,
    pub home_market_code: String,
    pub home_market_pages: usize,
    pub home_market_share: f64,
    pub records: Vec<MarketRecord>,
    pub warnings: Vec<String>,
}

fn labels(k: usize) -> Vec<String> {
    match k {
        1 => vec!["all".into()],
        2 => vec!["small".into(), "large".into()],
        3 => vec!["small".into(), "medium".into(), "large".into()],
        _ => (0..k).map(|i| format!("cluster-{i}")).collect(),
    }
}

fn percent(part: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * part as f64 / total as f64
    }
}

/// Clusters markets into (up to) three groups by `log10(sales)` and reports
/// the share of pages per group and for the home market.
pub fn market_cluster_report(
    records: &[MarketRecord],
    unassigned_pages: usize,
    home: &str,
) -> Result<ClusterReport, MarketError> {
    let home = home.to_ascii_lowercase();
    let home_record = records
        .iter()
        .find(|r| r.country_code == home)
        .ok_or_else(|| MarketError::MissingHome(home.clone()))?;
    let mut seen = std::collections::BTreeSet::new();
    for r in records {
        if !seen.insert(&r.country_code) {
            return Err(MarketError::DuplicateCountry(r.country_code.clone()));
        }
    }

    let mut warnings = Vec::new();
    let mut out_records: Vec<MarketRecord> = records.to_vec();
    out_records.sort_by(|a, b| a.country_code.cmp(&b.country_code));
    let mut unassigned = unassigned_pages;
    let clusterable: Vec<usize> = (0..out_records.len())
        .filter(|&i| match out_records[i].sales {
            Some(s) if s > 0 => true,
            _ => {
                let r = &out_records[i];
                warnings.push(format!(
                    "{}: no sales figure; {} page(s) left out of clustering",
                    r.country_code, r.page_count
                ));
                unassigned += r.page_count;
                false
            }
        })
        .collect();

    let total_pages = unassigned + clusterable.iter().map(|&i| out_records[i].page_count).sum::<usize>();
    if total_pages == 0 {
        warnings.push("no pages to attribute; all shares are 0".into());
    }

    let mut clusters = Vec::new();
    if !clusterable.is_empty() {
        let k = MARKET_CLUSTERS.min(clusterable.len());
        let log_sales: Vec<f64> = clusterable
            .iter()
            .map(|&i| (out_records[i].sales.unwrap_or(1) as f64).log10())
            .collect();
        let result = kmeans_1d(&log_sales, k)?;
        for (&i, &c) in clusterable.iter().zip(&result.assignment) {
            out_records[i].cluster = Some(c);
        }
        for (c, (label, stats)) in labels(k).into_iter().zip(&result.clusters).enumerate() {
            let mut members: Vec<&MarketRecord> = out_records.iter().filter(|r| r.cluster == Some(c)).collect();
            members.sort_by(|a, b| a.sales.cmp(&b.sales).then(a.country_code.cmp(&b.country_code)));
            let page_count = members.iter().map(|r| r.page_count).sum();
            clusters.push(MarketCluster {
                label,
                members: members.iter().map(|r| r.country_code.clone()).collect(),
                sales_min: members.iter().filter_map(|r| r.sales).min().unwrap_or(0),
                sales_max: members.iter().filter_map(|r| r.sales).max().unwrap_or(0),
                mean_log10_sales: stats.centroid,
                page_count,
                page_share: percent(page_count, total_pages),
            });
        }
    }

    Ok(ClusterReport {
        clusters,
        total_pages,
        unassigned_pages: unassigned,
        unassigned_share: percent(unassigned, total_pages),
        home_market_code: home,
        home_market_pages: home_record.page_count,
        home_market_share: percent(home_record.page_count, total_pages),
        records: out_records,
        warnings,
    })
}
