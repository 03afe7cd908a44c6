use std::cmp::Ordering;

use serde::Serialize;

use super::{PageAnnotation, TopicTaxonomy, OTHER_CATEGORY};
use crate::graph::{CentralityScores, SiteGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("{what}: expected {expected} entries, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("need at least 2 bins, got {0}")]
    TooFewBins(usize),
    #[error("rank correlation needs at least 3 pairs, got {0}")]
    TooFewPairs(usize),
}

/// Linear-interpolation quantile of sorted data (the common "type 7"
/// definition: position `(n - 1) p`).
pub fn quantile(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    /// `None` for empty input. Values are sorted first so the result does not
    /// depend on input order.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Self {
            mean: v.iter().sum::<f64>() / v.len() as f64,
            median: quantile(&v, 0.5)?,
            q1: quantile(&v, 0.25)?,
            q3: quantile(&v, 0.75)?,
            min: v[0],
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategorySummary {
    pub category: String,
    pub count: usize,
    pub normalized_pagerank: Option<Summary>,
    pub sentiment: Option<Summary>,
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<(), StatsError> {
    if expected == got {
        Ok(())
    } else {
        Err(StatsError::LengthMismatch { what, expected, got })
    }
}

/// Pages grouped by dominant topic (taxonomy order, then `other`). Nodes
/// whose annotation is `None` (no retrieved content) are skipped.
fn group_by_topic<'a>(
    annotations: &'a [Option<PageAnnotation>],
    taxonomy: &TopicTaxonomy,
) -> Vec<(String, Vec<(usize, &'a PageAnnotation)>)> {
    let mut groups: Vec<(String, Vec<(usize, &PageAnnotation)>)> = taxonomy
        .categories()
        .iter()
        .map(|c| (c.name.clone(), Vec::new()))
        .chain(std::iter::once((OTHER_CATEGORY.to_string(), Vec::new())))
        .collect();
    let other = groups.len() - 1;
    for (id, ann) in annotations.iter().enumerate() {
        if let Some(ann) = ann {
            groups[ann.dominant_topic.unwrap_or(other)].1.push((id, ann));
        }
    }
    groups
}

/// One row per taxonomy category plus `other`, with the distribution of
/// normalized PageRank and sentiment over its pages. Empty categories have
/// count 0 and no statistics.
pub fn category_centrality_stats(
    scores: &CentralityScores,
    annotations: &[Option<PageAnnotation>],
    taxonomy: &TopicTaxonomy,
) -> Result<Vec<CategorySummary>, StatsError> {
    check_len("annotations", scores.normalized.len(), annotations.len())?;
    Ok(group_by_topic(annotations, taxonomy)
        .into_iter()
        .map(|(category, members)| {
            let pr: Vec<f64> = members.iter().map(|(id, _)| scores.normalized[*id]).collect();
            let sent: Vec<f64> = members.iter().map(|(_, a)| a.sentiment).collect();
            CategorySummary {
                category,
                count: members.len(),
                normalized_pagerank: Summary::of(&pr),
                sentiment: Summary::of(&sent),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeBin {
    /// Bounds on `log10(degree + 1)`; the last bin is closed on the right.
    pub log_lo: f64,
    pub log_hi: f64,
    /// The same bounds expressed as degrees.
    pub degree_lo: f64,
    pub degree_hi: f64,
    pub count: usize,
    pub mean_sentiment: Option<f64>,
}

/// Mean sentiment of annotated pages in `n_bins` equal-width bins over
/// `log10(degree + 1)`. Returns no bins when no page is annotated.
pub fn degree_sentiment_bins(
    g: &SiteGraph,
    annotations: &[Option<PageAnnotation>],
    n_bins: usize,
) -> Result<Vec<DegreeBin>, StatsError> {
    if n_bins < 2 {
        return Err(StatsError::TooFewBins(n_bins));
    }
    check_len("annotations", g.node_count(), annotations.len())?;
    let points: Vec<(f64, f64)> = annotations
        .iter()
        .enumerate()
        .filter_map(|(id, a)| a.as_ref().map(|a| (((g.degree(id) + 1) as f64).log10(), a.sentiment)))
        .collect();
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / n_bins as f64;

    // Inner edges, shared by assignment and the reported bounds.
    let edges: Vec<f64> = (1..n_bins).map(|i| lo + width * i as f64).collect();
    let mut members: Vec<Vec<f64>> = vec![Vec::new(); n_bins];
    for (x, s) in points {
        let bin = if width > 0.0 {
            edges.partition_point(|&e| e <= x)
        } else {
            0
        };
        members[bin].push(s);
    }
    Ok(members
        .into_iter()
        .enumerate()
        .map(|(i, mut values)| {
            let log_lo = if i == 0 { lo } else { edges[i - 1] };
            let log_hi = if i + 1 == n_bins { hi } else { edges[i] };
            values.sort_by(f64::total_cmp);
            DegreeBin {
                log_lo,
                log_hi,
                degree_lo: 10f64.powf(log_lo) - 1.0,
                degree_hi: 10f64.powf(log_hi) - 1.0,
                count: values.len(),
                mean_sentiment: (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64),
            }
        })
        .collect())
}

/// 1-based ranks with ties sharing their average rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]].total_cmp(&values[order[i]]) == Ordering::Equal {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rho with average ranks for ties. `Ok(None)` when either
/// variable has no variance.
pub fn rank_correlation(x: &[f64], y: &[f64]) -> Result<Option<f64>, StatsError> {
    check_len("y", x.len(), y.len())?;
    if x.len() < 3 {
        return Err(StatsError::TooFewPairs(x.len()));
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryCorrelation {
    pub category: String,
    pub pairs: usize,
    /// Spearman rho between normalized PageRank and sentiment.
    pub rho: Option<f64>,
    pub note: Option<String>,
}

/// Rank correlation of normalized PageRank against sentiment, over all
/// annotated pages (`all`) and within each category.
pub fn category_correlations(
    scores: &CentralityScores,
    annotations: &[Option<PageAnnotation>],
    taxonomy: &TopicTaxonomy,
) -> Result<Vec<CategoryCorrelation>, StatsError> {
    check_len("annotations", scores.normalized.len(), annotations.len())?;
    let all: Vec<(usize, &PageAnnotation)> = annotations
        .iter()
        .enumerate()
        .filter_map(|(id, a)| a.as_ref().map(|a| (id, a)))
        .collect();
    let groups = std::iter::once(("all".to_string(), all)).chain(group_by_topic(annotations, taxonomy));
    Ok(groups
        .map(|(category, members)| {
            let x: Vec<f64> = members.iter().map(|(id, _)| scores.normalized[*id]).collect();
            let y: Vec<f64> = members.iter().map(|(_, a)| a.sentiment).collect();
            let (rho, note) = match rank_correlation(&x, &y) {
                Ok(Some(r)) => (Some(r), None),
                Ok(None) => (None, Some("zero variance".to_string())),
                Err(e) => (None, Some(e.to_string())),
            };
            CategoryCorrelation {
                category,
                pairs: members.len(),
                rho,
                note,
            }
        })
        .collect())
}
