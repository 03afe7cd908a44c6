use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use super::{CanonicalUrl, CrawlConfig, FetchStatus, Fetcher};

/// A fetched document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPage {
    pub url: CanonicalUrl,
    /// Link distance from the seed (seed = 0).
    pub depth: u32,
    pub html: Vec<u8>,
    pub status: FetchStatus,
    pub content_type: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StubKind {
    /// In scope but not fetched: discovered on the last level, or cut by
    /// `max_pages`.
    Frontier,
    /// Out of scope; never fetched.
    External,
}

/// A link target that is part of the network but was never fetched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stub {
    pub url: CanonicalUrl,
    pub depth: u32,
    pub kind: StubKind,
}

/// A distinct directed hyperlink with the number of anchors that produced it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub from: CanonicalUrl,
    pub to: CanonicalUrl,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrawlOutput {
    /// Sorted by (depth, url).
    pub pages: Vec<RawPage>,
    /// Sorted by url.
    pub stubs: Vec<Stub>,
    /// Sorted by (from, to).
    pub edges: Vec<Edge>,
    /// Set when `max_pages` cut the crawl short.
    pub truncated: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CrawlError {
    #[error("seed {url} could not be fetched ({status})")]
    SeedUnreachable { url: CanonicalUrl, status: FetchStatus },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

/// Level-synchronous breadth-first crawl.
///
/// Every frontier is sorted and fetched by a pool of `config.workers`
/// threads; links are processed in (url, document) order only after the
/// whole level has been fetched, so the result does not depend on the
/// worker count. Links found at `max_depth` become edges to frontier stubs.
pub fn crawl<F, X>(config: &CrawlConfig, fetcher: &F, extract_links: X) -> Result<CrawlOutput, CrawlError>
where
    F: Fetcher + ?Sized,
    X: Fn(&[u8], &CanonicalUrl) -> Vec<CanonicalUrl> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| CrawlError::Pool(e.to_string()))?;

    let mut seen: HashSet<CanonicalUrl> = HashSet::from([config.seed_url.clone()]);
    let mut frontier = vec![config.seed_url.clone()];
    let mut pages: Vec<RawPage> = Vec::new();
    let mut stubs: BTreeMap<CanonicalUrl, Stub> = BTreeMap::new();
    let mut edges: BTreeMap<(CanonicalUrl, CanonicalUrl), u32> = BTreeMap::new();
    let mut truncated = false;
    let mut depth = 0u32;

    while !frontier.is_empty() {
        let budget = config.max_pages.saturating_sub(pages.len());
        if frontier.len() > budget {
            truncated = true;
            for url in frontier.split_off(budget) {
                stubs.insert(
                    url.clone(),
                    Stub {
                        url,
                        depth,
                        kind: StubKind::Frontier,
                    },
                );
            }
        }

        let fetched: Vec<(CanonicalUrl, super::FetchResponse, Vec<CanonicalUrl>)> = pool.install(|| {
            frontier
                .par_iter()
                .map(|url| {
                    let resp = fetcher.fetch(url);
                    let links = if resp.status.is_success() && resp.is_html() {
                        extract_links(&resp.body, url)
                    } else {
                        Vec::new()
                    };
                    (url.clone(), resp, links)
                })
                .collect()
        });

        if depth == 0 {
            if let Some((url, resp, _)) = fetched.first() {
                if !resp.status.is_success() {
                    return Err(CrawlError::SeedUnreachable {
                        url: url.clone(),
                        status: resp.status.clone(),
                    });
                }
            }
        }

        let mut next: BTreeSet<CanonicalUrl> = BTreeSet::new();
        for (url, resp, links) in fetched {
            if !resp.status.is_success() {
                log::warn!("fetch of {url} failed: {}", resp.status);
            }
            for target in links {
                *edges.entry((url.clone(), target.clone())).or_insert(0) += 1;
                if !seen.insert(target.clone()) {
                    continue;
                }
                if !config.in_scope(&target) {
                    stubs.insert(
                        target.clone(),
                        Stub {
                            url: target,
                            depth: depth + 1,
                            kind: StubKind::External,
                        },
                    );
                } else if depth >= config.max_depth {
                    stubs.insert(
                        target.clone(),
                        Stub {
                            url: target,
                            depth: depth + 1,
                            kind: StubKind::Frontier,
                        },
                    );
                } else {
                    next.insert(target);
                }
            }
            pages.push(RawPage {
                url,
                depth,
                html: resp.body,
                status: resp.status,
                content_type: resp.content_type,
            });
        }

        frontier = next.into_iter().collect();
        depth += 1;
    }

    if truncated {
        log::warn!("crawl truncated at max_pages = {}", config.max_pages);
    }

    Ok(CrawlOutput {
        pages,
        stubs: stubs.into_values().collect(),
        edges: edges
            .into_iter()
            .map(|((from, to), multiplicity)| Edge { from, to, multiplicity })
            .collect(),
        truncated,
    })
}
