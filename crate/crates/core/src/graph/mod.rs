//! The hyperlink graph and its structural metrics.
//!
//! Nodes are indexed `0..n` in ascending canonical-URL order. The directed
//! view (used by PageRank) keeps link direction and multiplicity; the
//! undirected view (degree, density, diameter, rich club) merges `u -> v`
//! and `v -> u` into one simple edge. Self-links are dropped at build time.

mod export;
mod metrics;
mod pagerank;

use std::collections::{BTreeMap, HashMap};

use crate::fetcher::{CanonicalUrl, Edge, NodeKind, PageRecord};

pub use self::export::{degree_distribution_csv, to_dot, to_edge_csv, to_graphml, NodeAttributes};
pub use self::metrics::{
    average_degree, average_rich_club, compute_metrics, degree_distribution, density, diameter, rich_club,
    DiameterReport, GraphMetrics, MetricError, RichClubSummary,
};
pub use self::pagerank::{pagerank, CentralityScores, PageRankError, PageRankOptions};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeInfo {
    pub url: CanonicalUrl,
    pub depth: u32,
    pub kind: NodeKind,
}

#[derive(Debug, Clone)]
pub struct SiteGraph {
    nodes: Vec<NodeInfo>,
    index: HashMap<CanonicalUrl, NodeId>,
    /// Sorted targets with multiplicity.
    out: Vec<Vec<(NodeId, u32)>>,
    /// Sorted neighbours in the undirected view.
    undirected: Vec<Vec<NodeId>>,
    undirected_edges: usize,
    dropped_self_loops: usize,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge endpoint {0} has no node record")]
    DanglingEndpoint(CanonicalUrl),
    #[error("node {0} recorded twice")]
    DuplicateNode(CanonicalUrl),
}

impl SiteGraph {
    fn assemble(nodes: Vec<NodeInfo>, directed: BTreeMap<(NodeId, NodeId), u32>, dropped_self_loops: usize) -> Self {
        let n = nodes.len();
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, node)| (node.url.clone(), i))
            .collect();
        let mut out = vec![Vec::new(); n];
        let mut undirected = vec![Vec::new(); n];
        for (&(u, v), &m) in &directed {
            out[u].push((v, m));
            undirected[u].push(v);
            undirected[v].push(u);
        }
        let mut twice = 0;
        for adj in &mut undirected {
            adj.sort_unstable();
            adj.dedup();
            twice += adj.len();
        }
        Self {
            nodes,
            index,
            out,
            undirected,
            undirected_edges: twice / 2,
            dropped_self_loops,
        }
    }

    /// Synthetic graph over `n` nodes named `https://graph.invalid/nXXXXXXX`
    /// (so URL order equals index order). Self-loops are dropped and repeated
    /// pairs add to the multiplicity.
    pub fn from_index_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let nodes = (0..n)
            .map(|i| NodeInfo {
                url: CanonicalUrl::parse(&format!("https://graph.invalid/n{i:07}")).expect("valid synthetic url"),
                depth: 0,
                kind: NodeKind::Page,
            })
            .collect();
        let mut directed = BTreeMap::new();
        let mut dropped = 0;
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u == v {
                dropped += 1;
                continue;
            }
            *directed.entry((u, v)).or_insert(0) += 1;
        }
        Self::assemble(nodes, directed, dropped)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of edges in the undirected view.
    pub fn edge_count(&self) -> usize {
        self.undirected_edges
    }

    /// Number of distinct directed hyperlinks.
    pub fn directed_edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    pub fn node(&self, id: NodeId) -> &NodeInfo {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[NodeInfo] {
        &self.nodes
    }

    pub fn id_of(&self, url: &CanonicalUrl) -> Option<NodeId> {
        self.index.get(url).copied()
    }

    pub fn out_links(&self, id: NodeId) -> &[(NodeId, u32)] {
        &self.out[id]
    }

    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.undirected[id]
    }

    /// Degree in the undirected view.
    pub fn degree(&self, id: NodeId) -> usize {
        self.undirected[id].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.undirected.iter().map(Vec::len).collect()
    }

    /// Undirected edges `(u, v)` with `u < v`, sorted.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.undirected
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Directed edges `(from, to, multiplicity)` sorted by `(from, to)`.
    pub fn directed_edges(&self) -> impl Iterator<Item = (NodeId, NodeId, u32)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().map(move |&(v, m)| (u, v, m)))
    }
}

/// Builds the graph from persisted crawl output. External stubs (and the
/// edges touching them) are left out unless `include_external` is set.
pub fn build_graph(records: &[PageRecord], edges: &[Edge], include_external: bool) -> Result<SiteGraph, GraphError> {
    let mut by_url: BTreeMap<&CanonicalUrl, &PageRecord> = BTreeMap::new();
    for record in records {
        if by_url.insert(&record.url, record).is_some() {
            return Err(GraphError::DuplicateNode(record.url.clone()));
        }
    }
    let kept = |r: &PageRecord| include_external || r.kind != NodeKind::External;

    let nodes: Vec<NodeInfo> = by_url
        .values()
        .filter(|r| kept(r))
        .map(|r| NodeInfo {
            url: r.url.clone(),
            depth: r.depth,
            kind: r.kind,
        })
        .collect();
    let ids: HashMap<&CanonicalUrl, NodeId> = nodes.iter().enumerate().map(|(i, n)| (&n.url, i)).collect();

    let mut directed = BTreeMap::new();
    let mut dropped = 0;
    for edge in edges {
        let from = by_url
            .get(&edge.from)
            .ok_or_else(|| GraphError::DanglingEndpoint(edge.from.clone()))?;
        let to = by_url
            .get(&edge.to)
            .ok_or_else(|| GraphError::DanglingEndpoint(edge.to.clone()))?;
        if !kept(from) || !kept(to) {
            continue;
        }
        if edge.from == edge.to {
            log::debug!("dropping self-link on {}", edge.from);
            dropped += 1;
            continue;
        }
        let key = (ids[&edge.from], ids[&edge.to]);
        *directed.entry(key).or_insert(0) += edge.multiplicity.max(1);
    }
    if dropped > 0 {
        log::info!("dropped {dropped} self-link(s)");
    }
    Ok(SiteGraph::assemble(nodes, directed, dropped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fetcher::FetchStatus;

    fn url(s: &str) -> CanonicalUrl {
        CanonicalUrl::parse(s).unwrap()
    }

    fn record(u: &str, kind: NodeKind) -> PageRecord {
        PageRecord {
            url: url(u),
            depth: 0,
            kind,
            status: FetchStatus::CorpusOk,
            content_type: Some("text/html".into()),
            text: String::new(),
        }
    }

    fn edge(a: &str, b: &str) -> Edge {
        Edge {
            from: url(a),
            to: url(b),
            multiplicity: 1,
        }
    }

    #[test]
    fn directions_collapse_in_undirected_view() {
        let recs = ["https://s.com/a", "https://s.com/b", "https://s.com/c"].map(|u| record(u, NodeKind::Page));
        let edges = [
            edge("https://s.com/a", "https://s.com/b"),
            edge("https://s.com/b", "https://s.com/a"),
            edge("https://s.com/b", "https://s.com/c"),
        ];
        let g = build_graph(&recs, &edges, false).unwrap();
        assert_eq!(g.directed_edge_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.undirected_edges().collect::<Vec<_>>(), [(0, 1), (1, 2)]);
    }

    #[test]
    fn self_links_dropped() {
        let recs = [record("https://s.com/a", NodeKind::Page)];
        let g = build_graph(&recs, &[edge("https://s.com/a", "https://s.com/a")], false).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.directed_edge_count(), 0);
        assert_eq!(g.dropped_self_loops(), 1);
    }

    #[test]
    fn dangling_endpoint_is_an_error() {
        let recs = [record("https://s.com/a", NodeKind::Page)];
        let err = build_graph(&recs, &[edge("https://s.com/a", "https://s.com/zz")], false).unwrap_err();
        assert_eq!(err, GraphError::DanglingEndpoint(url("https://s.com/zz")));
    }

    #[test]
    fn external_stubs_optional() {
        let recs = [
            record("https://s.com/a", NodeKind::Page),
            record("https://fb.com/", NodeKind::External),
            record("https://s.com/f", NodeKind::Frontier),
        ];
        let edges = [
            edge("https://s.com/a", "https://fb.com/"),
            edge("https://s.com/a", "https://s.com/f"),
        ];
        let g = build_graph(&recs, &edges, false).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        let g = build_graph(&recs, &edges, true).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn synthetic_graph_urls_sort_by_index() {
        let g = SiteGraph::from_index_edges(12, [(0, 11), (11, 0), (3, 3)]);
        assert!(g.nodes().windows(2).all(|w| w[0].url < w[1].url));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.dropped_self_loops(), 1);
    }
}
