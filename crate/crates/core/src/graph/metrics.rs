use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::{NodeId, SiteGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("density needs at least 2 nodes, graph has {0}")]
    TooFewNodes(usize),
    #[error("rich-club coefficient is undefined for every degree threshold")]
    NoDefinedRichClub,
}

pub fn degree_distribution(g: &SiteGraph) -> BTreeMap<usize, usize> {
    let mut dist = BTreeMap::new();
    for d in g.degrees() {
        *dist.entry(d).or_insert(0) += 1;
    }
    dist
}

/// `2E / N` over the undirected view.
pub fn average_degree(g: &SiteGraph) -> Result<f64, MetricError> {
    let n = g.node_count();
    if n == 0 {
        return Err(MetricError::EmptyGraph);
    }
    Ok(2.0 * g.edge_count() as f64 / n as f64)
}

/// `2E / (N (N - 1))` over the undirected view.
pub fn density(g: &SiteGraph) -> Result<f64, MetricError> {
    let n = g.node_count();
    if n < 2 {
        return Err(MetricError::TooFewNodes(n));
    }
    Ok(2.0 * g.edge_count() as f64 / (n as f64 * (n as f64 - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiameterReport {
    pub diameter: usize,
    pub component_size: usize,
    /// Smallest node (by URL) of the component the diameter was taken over.
    pub component_root: NodeId,
}

fn bfs_distances(g: &SiteGraph, source: NodeId, dist: &mut [usize]) -> usize {
    dist.fill(usize::MAX);
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    let mut farthest = 0;
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        farthest = farthest.max(du);
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
    farthest
}

/// Members of the largest connected component of the undirected view; ties
/// go to the component containing the smallest URL.
pub fn largest_component(g: &SiteGraph) -> Vec<NodeId> {
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let mut best: Vec<NodeId> = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut members = vec![start];
        label[start] = start;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            i += 1;
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = start;
                    members.push(v);
                }
            }
        }
        // Components are discovered in order of their smallest member, so a
        // strict comparison keeps the earliest on ties.
        if members.len() > best.len() {
            best = members;
        }
    }
    best.sort_unstable();
    best
}

/// Exact diameter of the largest connected component: BFS from every
/// member, maximum eccentricity.
pub fn diameter(g: &SiteGraph) -> Result<DiameterReport, MetricError> {
    if g.is_empty() {
        return Err(MetricError::EmptyGraph);
    }
    let component = largest_component(g);
    let diameter = component
        .par_iter()
        .map_init(
            || vec![usize::MAX; g.node_count()],
            |dist, &s| bfs_distances(g, s, dist),
        )
        .max()
        .unwrap_or(0);
    let report = DiameterReport {
        diameter,
        component_size: component.len(),
        component_root: component[0],
    };
    log::info!(
        "diameter {} over component of {} node(s) rooted at {}",
        report.diameter,
        report.component_size,
        g.node(report.component_root).url
    );
    Ok(report)
}

/// Rich-club coefficient: edge density among nodes of degree `> k`;
/// `None` when fewer than two such nodes exist.
pub fn rich_club(g: &SiteGraph, k: usize) -> Option<f64> {
    let degrees = g.degrees();
    let rich = degrees.iter().filter(|&&d| d > k).count();
    if rich < 2 {
        return None;
    }
    let edges = g
        .undirected_edges()
        .filter(|&(u, v)| degrees[u] > k && degrees[v] > k)
        .count();
    Some(2.0 * edges as f64 / (rich as f64 * (rich as f64 - 1.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RichClubSummary {
    pub mean: f64,
    /// Degree thresholds whose coefficient was defined and averaged.
    pub ks: Vec<usize>,
}

/// Mean of the rich-club coefficient over every `k` in `0..max_degree` for
/// which it is defined.
pub fn average_rich_club(g: &SiteGraph) -> Result<RichClubSummary, MetricError> {
    if g.node_count() < 2 {
        return Err(MetricError::TooFewNodes(g.node_count()));
    }
    let degrees = g.degrees();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);

    // Counting by threshold: a node is rich for k < degree, an edge is rich
    // for k < min endpoint degree.
    let mut nodes_with_degree = vec![0usize; max_degree + 1];
    for &d in &degrees {
        nodes_with_degree[d] += 1;
    }
    let mut edges_with_min_degree = vec![0usize; max_degree + 1];
    for (u, v) in g.undirected_edges() {
        edges_with_min_degree[degrees[u].min(degrees[v])] += 1;
    }

    let mut ks = Vec::new();
    let mut values = Vec::new();
    let (mut rich_nodes, mut rich_edges) = (0usize, 0usize);
    for k in (0..max_degree).rev() {
        rich_nodes += nodes_with_degree[k + 1];
        rich_edges += edges_with_min_degree[k + 1];
        if rich_nodes >= 2 {
            ks.push(k);
            values.push(2.0 * rich_edges as f64 / (rich_nodes as f64 * (rich_nodes as f64 - 1.0)));
        }
    }
    if ks.is_empty() {
        return Err(MetricError::NoDefinedRichClub);
    }
    ks.reverse();
    values.reverse();
    Ok(RichClubSummary {
        mean: values.iter().sum::<f64>() / values.len() as f64,
        ks,
    })
}

/// All structural metrics of the undirected view. Metrics that are
/// undefined for the graph are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphMetrics {
    pub node_count: usize,
    pub edge_count: usize,
    pub directed_edge_count: usize,
    pub average_degree: Option<f64>,
    pub density: Option<f64>,
    pub diameter: Option<DiameterReport>,
    pub average_rich_club: Option<RichClubSummary>,
    pub degree_distribution: BTreeMap<usize, usize>,
}

pub fn compute_metrics(g: &SiteGraph) -> GraphMetrics {
    GraphMetrics {
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        directed_edge_count: g.directed_edge_count(),
        average_degree: average_degree(g).ok(),
        density: density(g).ok(),
        diameter: diameter(g).ok(),
        average_rich_club: average_rich_club(g).ok(),
        degree_distribution: degree_distribution(g),
    }
}
