mod support;

use proptest::prelude::*;
use sitemine::graph::{
    average_degree, average_rich_club, degree_distribution, density, diameter, pagerank, rich_club, PageRankOptions,
    SiteGraph,
};
use support::oracles;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn largest_component_is_unique(n: usize, edges: &[(usize, usize)]) -> bool {
    let d = oracles::all_pairs(&oracles::undirected_matrix(n, edges));
    let sizes: Vec<usize> = (0..n)
        .filter(|&s| !(0..s).any(|t| d[s][t].is_some()))
        .map(|s| d[s].iter().filter(|x| x.is_some()).count())
        .collect();
    let max = sizes.iter().copied().max().unwrap_or(0);
    sizes.iter().filter(|&&s| s == max).count() == 1
}

fn graph_params() -> impl Strategy<Value = (usize, f64, u64)> {
    (1usize..=200, prop_oneof![0.0..0.02, 0.02..0.1, 0.1..0.4], any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 120, ..ProptestConfig::default() })]

    #[test]
    fn structural_metrics_match_brute_force((n, p, seed) in graph_params()) {
        let edges = oracles::random_digraph(n, p, seed);
        let g = SiteGraph::from_index_edges(n, edges.iter().copied());
        let m = oracles::undirected_matrix(n, &edges);

        prop_assert_eq!(g.edge_count(), oracles::edge_count(&m));
        prop_assert_eq!(degree_distribution(&g), oracles::degree_distribution(&m));
        match (density(&g).ok(), oracles::density(&m)) {
            (Some(a), Some(b)) => prop_assert!(close(a, b, 1e-12)),
            (a, b) => prop_assert_eq!(a, b),
        }
        prop_assert!(close(average_degree(&g).unwrap(), oracles::average_degree(&m).unwrap(), 1e-12));
        let d = diameter(&g).unwrap();
        prop_assert_eq!(Some((d.diameter, d.component_size)), oracles::diameter(&m));

        let max_degree = oracles::degrees(&m).into_iter().max().unwrap_or(0);
        for k in 0..=max_degree + 1 {
            match (rich_club(&g, k), oracles::rich_club(&m, k)) {
                (Some(a), Some(b)) => prop_assert!(close(a, b, 1e-12), "k={} {} vs {}", k, a, b),
                (a, b) => prop_assert_eq!(a, b, "k={}", k),
            }
        }
        if let Ok(avg) = average_rich_club(&g) {
            let defined: Vec<f64> = avg.ks.iter().map(|&k| oracles::rich_club(&m, k).unwrap()).collect();
            prop_assert!(close(avg.mean, defined.iter().sum::<f64>() / defined.len() as f64, 1e-12));
        }
    }

    #[test]
    fn pagerank_matches_dense_solve((n, p, seed) in graph_params()) {
        let edges = oracles::random_digraph(n, p, seed);
        let g = SiteGraph::from_index_edges(n, edges.iter().copied());
        let scores = pagerank(&g, PageRankOptions::default()).unwrap();
        let expected = oracles::pagerank_dense(n, &edges, 0.85);
        for (a, b) in scores.pagerank.iter().zip(&expected) {
            prop_assert!((a - b).abs() < 1e-8, "{} vs {}", a, b);
        }
        prop_assert!((scores.pagerank.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(scores.pagerank.iter().all(|&x| x > 0.0));
        let max = scores.normalized.iter().cloned().fold(f64::MIN, f64::max);
        prop_assert_eq!(max, 1.0);
        let argmax = |v: &[f64]| v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        prop_assert_eq!(argmax(&scores.pagerank), argmax(&scores.normalized));
    }

    #[test]
    fn relabeling_permutes_scores((n, p, seed) in graph_params(), perm_seed in any::<u64>()) {
        let edges = oracles::random_digraph(n, p, seed);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = oracles::SplitMix(perm_seed);
        for i in (1..n).rev() {
            perm.swap(i, rng.below(i + 1));
        }
        let g = SiteGraph::from_index_edges(n, edges.iter().copied());
        let h = SiteGraph::from_index_edges(n, edges.iter().map(|&(u, v)| (perm[u], perm[v])));

        prop_assert_eq!(g.edge_count(), h.edge_count());
        prop_assert_eq!(degree_distribution(&g), degree_distribution(&h));
        prop_assert_eq!(density(&g).ok(), density(&h).ok());
        let (dg, dh) = (diameter(&g).unwrap(), diameter(&h).unwrap());
        prop_assert_eq!(dg.component_size, dh.component_size);
        // With several largest components of equal size the chosen one may
        // change under relabeling.
        if largest_component_is_unique(n, &edges) {
            prop_assert_eq!(dg.diameter, dh.diameter);
        }
        for k in 0..8 {
            prop_assert_eq!(rich_club(&g, k), rich_club(&h, k));
        }
        let (sg, sh) = (pagerank(&g, PageRankOptions::default()).unwrap(), pagerank(&h, PageRankOptions::default()).unwrap());
        for v in 0..n {
            prop_assert!((sg.pagerank[v] - sh.pagerank[perm[v]]).abs() < 1e-9);
        }
    }

    #[test]
    fn rich_club_node_sets_shrink((n, p, seed) in graph_params()) {
        let edges = oracles::random_digraph(n, p, seed);
        let g = SiteGraph::from_index_edges(n, edges.iter().copied());
        let degrees = g.degrees();
        let mut previous = usize::MAX;
        for k in 0..=degrees.iter().copied().max().unwrap_or(0) {
            let rich = degrees.iter().filter(|&&d| d > k).count();
            prop_assert!(rich <= previous);
            previous = rich;
            if let Some(phi) = rich_club(&g, k) {
                prop_assert!((0.0..=1.0).contains(&phi));
            }
        }
        if let Ok(d) = density(&g) {
            prop_assert!((0.0..=1.0).contains(&d));
        }
    }
}

#[test]
fn star_pagerank_matches_dense_oracle() {
    let edges: Vec<(usize, usize)> = (1..5).map(|i| (i, 0)).collect();
    let g = SiteGraph::from_index_edges(5, edges.iter().copied());
    let got = pagerank(&g, PageRankOptions::default()).unwrap();
    let want = oracles::pagerank_dense(5, &edges, 0.85);
    for (a, b) in got.pagerank.iter().zip(&want) {
        assert!((a - b).abs() < 1e-8);
    }
}
