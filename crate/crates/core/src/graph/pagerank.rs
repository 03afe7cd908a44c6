use super::SiteGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankOptions {
    pub damping: f64,
    /// Convergence threshold on the L1 change between iterates.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankOptions {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tol: 1e-9,
            max_iter: 200,
        }
    }
}

/// Per-node PageRank, indexed by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    /// Sums to 1.
    pub pagerank: Vec<f64>,
    /// `pagerank / max(pagerank)`; the top node scores exactly 1.
    pub normalized: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PageRankError {
    #[error("PageRank of an empty graph")]
    EmptyGraph,
    #[error("damping must lie in (0, 1), got {0}")]
    InvalidDamping(f64),
    #[error("PageRank did not converge in {iterations} iterations (L1 residual {residual:e})")]
    NotConverged {
        last: Vec<f64>,
        residual: f64,
        iterations: usize,
    },
}

/// Power iteration on the directed graph with uniform teleportation; the
/// rank held by dangling nodes is spread uniformly over all nodes. Link
/// multiplicities are ignored.
pub fn pagerank(g: &SiteGraph, options: PageRankOptions) -> Result<CentralityScores, PageRankError> {
    let n = g.node_count();
    if n == 0 {
        return Err(PageRankError::EmptyGraph);
    }
    let d = options.damping;
    if !(d > 0.0 && d < 1.0) {
        return Err(PageRankError::InvalidDamping(d));
    }

    let uniform = 1.0 / n as f64;
    let mut rank = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;

    while iterations < options.max_iter {
        iterations += 1;
        let dangling: f64 = (0..n).filter(|&u| g.out_links(u).is_empty()).map(|u| rank[u]).sum();
        next.fill((1.0 - d) * uniform + d * dangling * uniform);
        for (u, &r) in rank.iter().enumerate() {
            let links = g.out_links(u);
            if links.is_empty() {
                continue;
            }
            let share = d * r / links.len() as f64;
            for &(v, _) in links {
                next[v] += share;
            }
        }
        residual = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if residual < options.tol {
            break;
        }
    }

    let total: f64 = rank.iter().sum();
    rank.iter_mut().for_each(|r| *r /= total);
    if residual >= options.tol {
        return Err(PageRankError::NotConverged {
            last: rank,
            residual,
            iterations,
        });
    }

    let max = rank.iter().copied().fold(f64::MIN, f64::max);
    let normalized = rank.iter().map(|r| r / max).collect();
    Ok(CentralityScores {
        pagerank: rank,
        normalized,
        iterations,
        residual,
    })
}
