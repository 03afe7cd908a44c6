//! Brute-force reference implementations used by the property suites.
//! Everything here works on plain index lists and dense matrices and shares
//! no code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

/// Deterministic generator for random directed graphs.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Directed edge list: each ordered pair is present with probability `p`,
/// plus a few repeated links and self-links, which graph building must
/// collapse and drop.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = SplitMix(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.unit() < p {
                edges.push((u, v));
            }
        }
    }
    if n > 0 {
        for _ in 0..(n / 10) {
            let u = rng.below(n);
            edges.push((u, u));
            if let Some(&e) = edges.get(rng.below(edges.len())) {
                edges.push(e);
            }
        }
    }
    edges
}

/// Symmetric 0/1 adjacency without self-loops.
pub fn undirected_matrix(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for &(u, v) in edges {
        if u != v {
            m[u][v] = true;
            m[v][u] = true;
        }
    }
    m
}

pub fn degrees(m: &[Vec<bool>]) -> Vec<usize> {
    m.iter().map(|row| row.iter().filter(|&&x| x).count()).collect()
}

pub fn edge_count(m: &[Vec<bool>]) -> usize {
    degrees(m).iter().sum::<usize>() / 2
}

pub fn density(m: &[Vec<bool>]) -> Option<f64> {
    let n = m.len() as f64;
    (m.len() >= 2).then(|| edge_count(m) as f64 / (n * (n - 1.0) / 2.0))
}

pub fn average_degree(m: &[Vec<bool>]) -> Option<f64> {
    (!m.is_empty()).then(|| degrees(m).iter().sum::<usize>() as f64 / m.len() as f64)
}

pub fn degree_distribution(m: &[Vec<bool>]) -> BTreeMap<usize, usize> {
    let mut dist = BTreeMap::new();
    for d in degrees(m) {
        *dist.entry(d).or_insert(0) += 1;
    }
    dist
}

/// All-pairs BFS distances (`None` = unreachable).
pub fn all_pairs(m: &[Vec<bool>]) -> Vec<Vec<Option<usize>>> {
    let n = m.len();
    (0..n)
        .map(|s| {
            let mut dist = vec![None; n];
            dist[s] = Some(0);
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for v in 0..n {
                    if m[u][v] && dist[v].is_none() {
                        dist[v] = Some(dist[u].unwrap() + 1);
                        q.push_back(v);
                    }
                }
            }
            dist
        })
        .collect()
}

/// Diameter and size of the largest component; among equally large
/// components the one holding the smallest index.
pub fn diameter(m: &[Vec<bool>]) -> Option<(usize, usize)> {
    let n = m.len();
    if n == 0 {
        return None;
    }
    let d = all_pairs(m);
    let mut best: Option<(usize, usize)> = None; // (size, root)
    for s in 0..n {
        if (0..s).any(|t| d[s][t].is_some()) {
            continue; // not the smallest member of its component
        }
        let size = d[s].iter().filter(|x| x.is_some()).count();
        if best.map_or(true, |(b, _)| size > b) {
            best = Some((size, s));
        }
    }
    let (size, root) = best?;
    let members: Vec<usize> = (0..n).filter(|&v| d[root][v].is_some()).collect();
    let diam = members
        .iter()
        .flat_map(|&a| members.iter().map(move |&b| (a, b)))
        .map(|(a, b)| d[a][b].unwrap())
        .max()
        .unwrap_or(0);
    Some((diam, size))
}

/// Density of the subgraph induced by nodes of degree greater than `k`.
pub fn rich_club(m: &[Vec<bool>], k: usize) -> Option<f64> {
    let deg = degrees(m);
    let rich: Vec<usize> = (0..m.len()).filter(|&v| deg[v] > k).collect();
    if rich.len() < 2 {
        return None;
    }
    let mut e = 0;
    for (i, &a) in rich.iter().enumerate() {
        for &b in &rich[i + 1..] {
            if m[a][b] {
                e += 1;
            }
        }
    }
    let r = rich.len() as f64;
    Some(e as f64 / (r * (r - 1.0) / 2.0))
}

/// Stationary vector of the damped walk, from the dense linear system
/// `(I - d M) x = (1 - d)/n`, where column `j` of `M` spreads node `j`'s
/// rank over its distinct out-links (over all nodes if it has none).
pub fn pagerank_dense(n: usize, edges: &[(usize, usize)], damping: f64) -> Vec<f64> {
    use nalgebra::{DMatrix, DVector};
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        if u != v {
            adj[u][v] = true;
        }
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let out: Vec<usize> = (0..n).filter(|&i| adj[j][i]).collect();
        if out.is_empty() {
            for i in 0..n {
                m[(i, j)] = 1.0 / n as f64;
            }
        } else {
            for &i in &out {
                m[(i, j)] = 1.0 / out.len() as f64;
            }
        }
    }
    let a = DMatrix::<f64>::identity(n, n) - m * damping;
    let b = DVector::<f64>::from_element(n, (1.0 - damping) / n as f64);
    let x = a.lu().solve(&b).expect("I - dM is nonsingular");
    let s = x.sum();
    x.iter().map(|v| v / s).collect()
}

fn sse(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - mean).powi(2)).sum()
}

/// Minimum within-cluster sum of squares over every split of the sorted
/// values into `k` contiguous non-empty groups.
pub fn kmeans_exhaustive(values: &[f64], k: usize) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    fn go(v: &[f64], k: usize) -> f64 {
        if k == 1 {
            return sse(v);
        }
        (1..=v.len() - (k - 1))
            .map(|cut| sse(&v[..cut]) + go(&v[cut..], k - 1))
            .fold(f64::INFINITY, f64::min)
    }
    go(&sorted, k)
}

/// Average ranks (1-based) with ties sharing their mean rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut ranks = vec![0.0; x.len()];
    for i in 0..x.len() {
        let less = x.iter().filter(|&&v| v < x[i]).count();
        let equal = x.iter().filter(|&&v| v == x[i]).count();
        ranks[i] = less as f64 + (equal as f64 + 1.0) / 2.0;
    }
    ranks
}

/// Pearson correlation of the average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    (vx > 0.0 && vy > 0.0).then(|| cov / (vx * vy).sqrt())
}
