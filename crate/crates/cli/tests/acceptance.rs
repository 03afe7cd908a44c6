//! Acceptance gate: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the summary prints in a fixed order.

#[path = "../../core/tests/support/oracles.rs"]
mod oracles;
#[path = "../../core/tests/support/planted.rs"]
mod planted;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;
use sitemine::content::{sentiment, SentimentLexicon};
use sitemine::graph::{
    average_degree, average_rich_club, degree_distribution, density, diameter, pagerank, rich_club, PageRankOptions,
    SiteGraph,
};
use sitemine::markets::kmeans_1d;
use sitemine::pipeline::{analyze, crawl_stage, load_config};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

fn fixture(name: &str) -> PathBuf {
    root().join("fixtures").join(name)
}

fn mine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mine"))
        .args(args)
        .output()
        .expect("run mine")
}

fn mine_ok(args: &[&str]) {
    let out = mine(args);
    assert!(
        out.status.success(),
        "mine {args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Copies a fixture's run.toml into `dir` with absolute input paths and the
/// output directory set to `dir/out`. `edit` may change any key.
fn temp_config(name: &str, dir: &Path, edit: impl FnOnce(&mut toml::Table)) -> PathBuf {
    let base = fixture(name);
    let mut table: toml::Table = std::fs::read_to_string(base.join("run.toml")).unwrap().parse().unwrap();
    for key in ["corpus_path", "sales_path", "taxonomy_path", "lexicon_path"] {
        if let Some(toml::Value::String(rel)) = table.get(key) {
            let abs = base.join(rel).to_str().unwrap().to_string();
            table.insert(key.into(), toml::Value::String(abs));
        }
    }
    table.insert("output_dir".into(), toml::Value::String("out".into()));
    edit(&mut table);
    let path = dir.join("run.toml");
    std::fs::write(&path, toml::to_string(&table).unwrap()).unwrap();
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

/// `annotations.csv` rows keyed by URL.
fn annotation_rows(path: &Path) -> BTreeMap<String, BTreeMap<String, String>> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let headers = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            let row: BTreeMap<String, String> = headers
                .iter()
                .zip(r.iter())
                .map(|(h, v)| (h.into(), v.into()))
                .collect();
            (row["url"].clone(), row)
        })
        .collect()
}

fn strip_timestamps(mut report: Value) -> Value {
    let run = report["run"].as_object_mut().unwrap();
    run.remove("started_at");
    run.remove("finished_at");
    report
}

fn random_graphs() -> impl Iterator<Item = (usize, Vec<(usize, usize)>)> {
    let mut rng = oracles::SplitMix(0x5EED);
    (0..120).map(move |i| {
        let n = 1 + rng.below(200);
        let p = [0.005, 0.03, 0.1, 0.3][i % 4] * rng.unit() * 2.0;
        (n, oracles::random_digraph(n, p, rng.next_u64()))
    })
}

fn criterion_1_fixture_reproducibility() {
    let golden = read_json(&fixture("autoco/golden.json"));
    let mut runs: Vec<(BTreeMap<String, Vec<u8>>, Value)> = Vec::new();
    for workers in ["1", "4", "16"] {
        let tmp = tempfile::tempdir().unwrap();
        let config = temp_config("autoco", tmp.path(), |_| {});
        let out = tmp.path().join("out");
        let t = Instant::now();
        mine_ok(&["--workers", workers, "crawl", "--config", s(&config)]);
        mine_ok(&[
            "--workers",
            workers,
            "analyze",
            "--config",
            s(&config),
            "--pages",
            s(&out.join("pages.jsonl")),
            "--edges",
            s(&out.join("edges.csv")),
        ]);
        let elapsed = t.elapsed();
        assert!(elapsed < Duration::from_secs(10), "workers {workers}: {elapsed:?}");

        let report = read_json(&out.join("report.json"));
        let crawl = &report["crawl"];
        for key in [
            "pages",
            "pages_with_content",
            "failed_pages",
            "frontier_stubs",
            "external_stubs",
            "edges",
        ] {
            assert_eq!(crawl[key], golden["crawl"][key], "crawl.{key}");
        }
        let (g, want) = (&report["graph"], &golden["graph"]);
        for key in ["node_count", "edge_count", "directed_edge_count"] {
            assert_eq!(g[key], want[key], "graph.{key}");
        }
        assert!(close(f(&g["average_degree"]), f(&want["average_degree"]), 1e-12));
        assert!(close(f(&g["density"]), f(&want["density"]), 1e-12));
        assert_eq!(g["diameter"]["diameter"], want["diameter"]);
        assert_eq!(g["diameter"]["component_size"], want["component_size"]);
        assert!(close(
            f(&g["average_rich_club"]["mean"]),
            f(&want["average_rich_club"]),
            1e-12
        ));
        assert_eq!(g["average_rich_club"]["ks"], want["rich_club_ks"]);
        assert_eq!(g["degree_distribution"], want["degree_distribution"]);

        let rows = annotation_rows(&out.join("annotations.csv"));
        let pr = golden["pagerank"].as_object().unwrap();
        assert_eq!(rows.len(), pr.len());
        for (url, want) in pr {
            let got: f64 = rows[url]["pagerank"].parse().unwrap();
            assert!(close(got, f(want), 1e-8), "pagerank {url}: {got} vs {want}");
        }
        for (url, want) in golden["annotations"].as_object().unwrap() {
            let row = &rows[url];
            let counts: Vec<u64> = [
                "e-mobility & environment",
                "connectivity & shared mobility",
                "autonomous driving & artificial intelligence",
            ]
            .iter()
            .map(|c| row[*c].parse().unwrap())
            .collect();
            let want_counts: Vec<u64> = want["counts"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_u64().unwrap())
                .collect();
            assert_eq!(counts, want_counts, "{url}");
            assert_eq!(
                row["dominant_topic"],
                want["dominant_topic"].as_str().unwrap_or(""),
                "{url}"
            );
            let sent: f64 = row["sentiment"].parse().unwrap();
            assert!(close(sent, f(&want["sentiment"]), 1e-12), "{url}");
        }

        for (got, want) in report["categories"]
            .as_array()
            .unwrap()
            .iter()
            .zip(golden["categories"].as_array().unwrap())
        {
            assert_eq!(got["category"], want["category"]);
            assert_eq!(got["count"], want["count"]);
            match (
                got["normalized_pagerank"].get("mean"),
                want["mean_normalized_pagerank"].as_f64(),
            ) {
                (Some(a), Some(b)) => assert!(close(f(a), b, 1e-8)),
                (None, None) => {}
                other => panic!("{other:?}"),
            }
        }

        let (m, want) = (&report["markets"], &golden["markets"]);
        for key in ["total_pages", "unassigned_pages", "home_market_pages"] {
            assert_eq!(m[key], want[key], "markets.{key}");
        }
        assert!(close(f(&m["unassigned_share"]), f(&want["unassigned_share"]), 1e-12));
        assert!(close(f(&m["home_market_share"]), f(&want["home_market_share"]), 1e-12));
        let clusters = m["clusters"].as_array().unwrap();
        assert_eq!(clusters.len(), want["clusters"].as_array().unwrap().len());
        for (got, want) in clusters.iter().zip(want["clusters"].as_array().unwrap()) {
            for key in ["label", "members", "page_count"] {
                assert_eq!(got[key], want[key], "cluster {key}");
            }
            assert!(close(f(&got["page_share"]), f(&want["page_share"]), 1e-12));
        }

        let files = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.file_name().unwrap() != "report.json")
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read(&p).unwrap(),
                )
            })
            .collect();
        runs.push((files, strip_timestamps(report)));
    }
    let names: Vec<&String> = runs[0].0.keys().collect();
    for expected in [
        "graph.graphml",
        "graph.dot",
        "graph_edges.csv",
        "annotations.csv",
        "pages.jsonl",
        "edges.csv",
    ] {
        assert!(runs[0].0.contains_key(expected), "{expected} missing from {names:?}");
    }
    for run in &runs[1..] {
        assert_eq!(run.0, runs[0].0, "exports differ between worker counts");
        assert_eq!(run.1, runs[0].1, "reports differ between worker counts");
    }
}

fn criterion_2_metric_oracles() {
    let t = Instant::now();
    let mut graphs = 0;
    for (n, edges) in random_graphs() {
        let g = SiteGraph::from_index_edges(n, edges.iter().copied());
        let m = oracles::undirected_matrix(n, &edges);
        assert_eq!(degree_distribution(&g), oracles::degree_distribution(&m));
        assert_eq!(density(&g).ok().is_some(), oracles::density(&m).is_some());
        if let (Ok(a), Some(b)) = (density(&g), oracles::density(&m)) {
            assert!(close(a, b, 1e-12));
        }
        assert!(close(
            average_degree(&g).unwrap(),
            oracles::average_degree(&m).unwrap(),
            1e-12
        ));
        let d = diameter(&g).unwrap();
        assert_eq!(Some((d.diameter, d.component_size)), oracles::diameter(&m), "n={n}");
        let max_degree = oracles::degrees(&m).into_iter().max().unwrap_or(0);
        for k in 0..=max_degree + 1 {
            match (rich_club(&g, k), oracles::rich_club(&m, k)) {
                (Some(a), Some(b)) => assert!(close(a, b, 1e-12), "rich_club({k})"),
                (a, b) => assert_eq!(a, b, "rich_club({k})"),
            }
        }
        if let Ok(avg) = average_rich_club(&g) {
            let mean = avg.ks.iter().map(|&k| oracles::rich_club(&m, k).unwrap()).sum::<f64>() / avg.ks.len() as f64;
            assert!(close(avg.mean, mean, 1e-12));
        }
        let scores = pagerank(&g, PageRankOptions::default()).unwrap();
        for (a, b) in scores.pagerank.iter().zip(oracles::pagerank_dense(n, &edges, 0.85)) {
            assert!(close(*a, b, 1e-8), "pagerank {a} vs {b}");
        }
        graphs += 1;
    }
    assert!(graphs >= 100);
    assert!(t.elapsed() < Duration::from_secs(60), "{:?}", t.elapsed());
}

fn criterion_3_pagerank_contract() {
    let mut cases: Vec<(usize, Vec<(usize, usize)>)> = random_graphs().collect();
    cases.push((5, vec![]));
    cases.push((4, vec![(0, 1), (1, 2)]));
    cases.push((1, vec![]));
    let mut with_dangling = 0;
    for (n, edges) in &cases {
        let g = SiteGraph::from_index_edges(*n, edges.iter().copied());
        let scores = pagerank(&g, PageRankOptions::default()).unwrap();
        if (0..*n).any(|v| g.out_links(v).iter().all(|&(w, _)| w == v)) {
            with_dangling += 1;
        }
        assert!(close(scores.pagerank.iter().sum::<f64>(), 1.0, 1e-9));
        assert_eq!(scores.normalized.iter().cloned().fold(f64::MIN, f64::max), 1.0);
    }
    assert!(with_dangling > 10);
    let cycle = SiteGraph::from_index_edges(3, [(0, 1), (1, 2), (2, 0)]);
    let scores = pagerank(&cycle, PageRankOptions::default()).unwrap();
    assert!(scores.pagerank.iter().all(|&x| close(x, 1.0 / 3.0, 1e-9)));
    assert!(scores.normalized.iter().all(|&x| x == 1.0));
}

fn criterion_4_kmeans() {
    let mut rng = oracles::SplitMix(0xC1u64);
    for i in 0..200 {
        let n = 3 + rng.below(10);
        let values: Vec<f64> = (0..n)
            .map(|_| {
                if i % 3 == 0 {
                    rng.below(4) as f64
                } else {
                    2.0 + 5.0 * rng.unit()
                }
            })
            .collect();
        let r = kmeans_1d(&values, 3).unwrap();
        let best = oracles::kmeans_exhaustive(&values, 3);
        assert!(
            close(r.cost, best, 1e-9 * (1.0 + best)),
            "{values:?}: {} vs {best}",
            r.cost
        );
        for _ in 0..3 {
            let mut shuffled = values.clone();
            for j in (1..n).rev() {
                shuffled.swap(j, rng.below(j + 1));
            }
            let p = kmeans_1d(&shuffled, 3).unwrap();
            assert_eq!(p.clusters, r.clusters);
            assert_eq!(p.boundaries, r.boundaries);
            assert_eq!(p.cost, r.cost);
        }
    }
}

fn criterion_5_topics_and_sentiment() {
    let cfg = load_config(&fixture("planted/run.toml")).unwrap();
    let crawl = crawl_stage(&cfg).unwrap();
    let analysis = analyze(&cfg, &crawl.records, &crawl.edges).unwrap();
    let expected = planted::expectations(&root());
    assert_eq!(analysis.annotations.iter().flatten().count(), expected.len());
    for row in &expected {
        let id = analysis
            .graph
            .nodes()
            .iter()
            .position(|n| n.url.as_str() == row.url)
            .unwrap();
        let ann = analysis.annotations[id].as_ref().unwrap();
        assert_eq!(ann.keyword_counts, row.counts, "{}", row.url);
        assert_eq!(
            ann.dominant_topic.map(|t| analysis.taxonomy.name(t).to_string()),
            row.dominant,
            "{}",
            row.url
        );
        assert!(
            close(ann.sentiment, row.sentiment, 1e-12),
            "{}: {} vs {}",
            row.url,
            ann.sentiment,
            row.sentiment
        );
    }
    // Random lexicon-heavy texts stay within bounds.
    let lexicon = SentimentLexicon::bundled();
    let terms: Vec<String> = planted::lexicon_polarities(&root()).into_keys().collect();
    let mut rng = oracles::SplitMix(7);
    for _ in 0..500 {
        let words: Vec<&str> = (0..1 + rng.below(30))
            .map(|_| match rng.below(4) {
                0 => "not",
                1 => "the",
                _ => terms[rng.below(terms.len())].as_str(),
            })
            .collect();
        let score = sentiment(&words.join(" "), &lexicon);
        assert!((-1.0..=1.0).contains(&score), "{score}");
    }
}

fn criterion_6_e_mobility_centrality() {
    let tmp = tempfile::tempdir().unwrap();
    let config = temp_config("autoco", tmp.path(), |_| {});
    mine_ok(&["report", "--config", s(&config)]);
    let report = read_json(&tmp.path().join("out/report.json"));
    let mean = |name: &str| {
        let c = report["categories"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["category"] == name)
            .unwrap();
        f(&c["normalized_pagerank"]["mean"])
    };
    let (emob, other) = (mean("e-mobility & environment"), mean("other"));
    assert!(emob > other, "e-mobility {emob} vs other {other}");
}

fn exit_code(args: &[&str]) -> (Option<i32>, String) {
    let out = mine(args);
    (out.status.code(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn criterion_7_schema_and_exit_codes() {
    let schema_doc: Value = read_json(&root().join("docs/report.schema.json"));
    let schema = jsonschema::JSONSchema::compile(&schema_doc).unwrap();
    for name in ["autoco", "planted", "tree"] {
        let tmp = tempfile::tempdir().unwrap();
        let config = temp_config(name, tmp.path(), |_| {});
        mine_ok(&["report", "--config", s(&config)]);
        let report = read_json(&tmp.path().join("out/report.json"));
        if let Err(errors) = schema.validate(&report) {
            let msgs: Vec<String> = errors.map(|e| format!("{}: {e}", e.instance_path)).collect();
            panic!("{name}: {msgs:?}");
        };
    }

    // 2: configuration errors.
    let tmp = tempfile::tempdir().unwrap();
    let config = temp_config("tree", tmp.path(), |t| {
        t.remove("seed_url");
    });
    let (code, stderr) = exit_code(&["report", "--config", s(&config)]);
    assert_eq!(code, Some(2), "{stderr}");
    assert!(stderr.contains("seed_url"), "{stderr}");
    let config = temp_config("tree", tmp.path(), |t| {
        t.insert("max_dept".into(), toml::Value::Integer(2));
    });
    assert_eq!(exit_code(&["crawl", "--config", s(&config)]).0, Some(2));
    assert_eq!(
        exit_code(&["report", "--config", s(&tmp.path().join("absent.toml"))]).0,
        Some(2)
    );

    // 3: empty corpus, unreachable seed.
    let empty = tmp.path().join("empty");
    std::fs::create_dir_all(&empty).unwrap();
    std::fs::write(empty.join("index.tsv"), "# nothing\n").unwrap();
    let config = temp_config("tree", tmp.path(), |t| {
        t.insert("corpus_path".into(), toml::Value::String(s(&empty).into()));
    });
    assert_eq!(exit_code(&["report", "--config", s(&config)]).0, Some(3));
    assert!(!tmp.path().join("out").join("pages.jsonl").exists());
    let port = std::net::TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let config = temp_config("tree", tmp.path(), |t| {
        t.remove("corpus_path");
        t.insert("mode".into(), toml::Value::String("live".into()));
        t.insert(
            "seed_url".into(),
            toml::Value::String(format!("http://127.0.0.1:{port}/")),
        );
    });
    let (code, stderr) = exit_code(&["crawl", "--config", s(&config)]);
    assert_eq!(code, Some(3), "{stderr}");

    // 4: a stage fails; nothing partial is left behind.
    let tmp = tempfile::tempdir().unwrap();
    let bad_sales = tmp.path().join("sales.csv");
    std::fs::write(&bad_sales, "country_code,country_name,sales\njp,Japan,-5\n").unwrap();
    let config = temp_config("autoco", tmp.path(), |t| {
        t.insert("sales_path".into(), toml::Value::String(s(&bad_sales).into()));
    });
    let (code, stderr) = exit_code(&["report", "--config", s(&config)]);
    assert_eq!(code, Some(4), "{stderr}");
    assert!(stderr.contains("markets stage failed"), "{stderr}");
    let out = tmp.path().join("out");
    let left: Vec<_> = std::fs::read_dir(&out)
        .map(|d| d.map(|e| e.unwrap().file_name()).collect())
        .unwrap_or_default();
    assert!(left.is_empty(), "left behind: {left:?}");

    // Report path is a directory: exports were written, then removed.
    let config = temp_config("autoco", tmp.path(), |_| {});
    mine_ok(&["crawl", "--config", s(&config)]);
    let blocker = tmp.path().join("blocker");
    std::fs::create_dir_all(&blocker).unwrap();
    let (code, stderr) = exit_code(&[
        "analyze",
        "--config",
        s(&config),
        "--pages",
        s(&out.join("pages.jsonl")),
        "--edges",
        s(&out.join("edges.csv")),
        "--report",
        s(&blocker),
    ]);
    assert_eq!(code, Some(4), "{stderr}");
    let mut left: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    left.sort();
    assert_eq!(left, ["edges.csv", "pages.jsonl"]);

    // A truncated crawl file fails at load.
    std::fs::write(out.join("pages.jsonl"), "{\"url\": \n").unwrap();
    let (code, stderr) = exit_code(&[
        "analyze",
        "--config",
        s(&config),
        "--pages",
        s(&out.join("pages.jsonl")),
        "--edges",
        s(&out.join("edges.csv")),
    ]);
    assert_eq!(code, Some(4), "{stderr}");
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<String>()
        .cloned()
        .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panicked".into())
}

fn main() {
    let criteria: [(&str, fn()); 7] = [
        ("1 fixture reproducibility", criterion_1_fixture_reproducibility),
        ("2 metric oracle equivalence", criterion_2_metric_oracles),
        ("3 pagerank contract", criterion_3_pagerank_contract),
        ("4 kmeans_1d optimality", criterion_4_kmeans),
        ("5 topic and sentiment correctness", criterion_5_topics_and_sentiment),
        ("6 e-mobility centrality above other", criterion_6_e_mobility_centrality),
        ("7 report schema and exit codes", criterion_7_schema_and_exit_codes),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        match catch_unwind(AssertUnwindSafe(check)) {
            Ok(()) => println!("PASS  criterion {name} ({:.2?})", t.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL  criterion {name} ({:.2?}): {}", t.elapsed(), panic_message(e));
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
