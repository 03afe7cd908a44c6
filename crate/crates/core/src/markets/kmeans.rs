use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KMeansError {
    #[error("k must be at least 1")]
    ZeroClusters,
    #[error("{n} value(s) cannot form {k} clusters")]
    TooFewValues { n: usize, k: usize },
    #[error("values must be finite")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub size: usize,
    pub min: f64,
    pub max: f64,
    pub centroid: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansResult {
    /// Cluster index per input value; clusters are numbered by ascending value.
    pub assignment: Vec<usize>,
    pub clusters: Vec<Cluster>,
    /// Start positions (in sorted order) of clusters `1..k`.
    pub boundaries: Vec<usize>,
    /// Within-cluster sum of squared deviations.
    pub cost: f64,
}

/// Sum of squared deviations of contiguous sorted runs in O(1) per query.
struct RunCost {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl RunCost {
    fn new(sorted: &[f64]) -> Self {
        // Centering keeps the prefix sums well conditioned.
        let shift = sorted[sorted.len() / 2];
        let mut sum = vec![0.0; sorted.len() + 1];
        let mut sum_sq = vec![0.0; sorted.len() + 1];
        for (i, &v) in sorted.iter().enumerate() {
            let x = v - shift;
            sum[i + 1] = sum[i] + x;
            sum_sq[i + 1] = sum_sq[i] + x * x;
        }
        Self { sum, sum_sq }
    }

    /// Cost of `sorted[i..j]`, `i < j`.
    fn cost(&self, i: usize, j: usize) -> f64 {
        let n = (j - i) as f64;
        let s = self.sum[j] - self.sum[i];
        (self.sum_sq[j] - self.sum_sq[i] - s * s / n).max(0.0)
    }
}

/// Globally optimal 1-D k-means. In one dimension optimal clusters are
/// contiguous runs of the sorted values, so a dynamic program over split
/// points finds the exact minimum. Among equal-cost solutions the
/// lexicographically smallest boundary list is returned.
pub fn kmeans_1d(values: &[f64], k: usize) -> Result<KMeansResult, KMeansError> {
    if k == 0 {
        return Err(KMeansError::ZeroClusters);
    }
    let n = values.len();
    if n < k {
        return Err(KMeansError::TooFewValues { n, k });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(KMeansError::NonFinite);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let runs = RunCost::new(&sorted);

    // best[m][i]: optimal cost of splitting sorted[i..] into m + 1 clusters.
    let mut best = vec![vec![f64::INFINITY; n + 1]; k];
    for (i, b) in best[0].iter_mut().enumerate().take(n) {
        *b = runs.cost(i, n);
    }
    for m in 1..k {
        for i in 0..n {
            // Need at least m values after the first cluster.
            let last_end = n.saturating_sub(m);
            for j in i + 1..=last_end {
                let c = runs.cost(i, j) + best[m - 1][j];
                if c < best[m][i] {
                    best[m][i] = c;
                }
            }
        }
    }

    let mut boundaries = Vec::with_capacity(k - 1);
    let mut start = 0;
    for m in (1..k).rev() {
        let target = best[m][start];
        let end = (start + 1..=n - m)
            .find(|&j| runs.cost(start, j) + best[m - 1][j] == target)
            .expect("optimal split exists");
        boundaries.push(end);
        start = end;
    }

    let mut edges = vec![0];
    edges.extend(&boundaries);
    edges.push(n);
    let mut assignment = vec![0; n];
    let mut clusters = Vec::with_capacity(k);
    let mut cost = 0.0;
    for (c, w) in edges.windows(2).enumerate() {
        let run = &sorted[w[0]..w[1]];
        let centroid = run.iter().sum::<f64>() / run.len() as f64;
        cost += run.iter().map(|v| (v - centroid) * (v - centroid)).sum::<f64>();
        for &idx in &order[w[0]..w[1]] {
            assignment[idx] = c;
        }
        clusters.push(Cluster {
            size: run.len(),
            min: run[0],
            max: run[run.len() - 1],
            centroid,
        });
    }
    Ok(KMeansResult {
        assignment,
        clusters,
        boundaries,
        cost,
    })
}
