#!/usr/bin/env python3
"""Computes golden.json for the AutoCo fixture from the corpus files alone.

Independent of the Rust code: links and text come from html.parser, URLs
from urllib, metrics and PageRank from networkx, market clusters from an
exhaustive search over contiguous partitions.
"""

import csv
import itertools
import json
import math
import os
import re
import sys
from collections import deque
from html.parser import HTMLParser
from urllib.parse import urljoin, urldefrag, urlsplit

import networkx as nx

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.abspath(os.path.join(HERE, "..", ".."))

try:
    import tomllib
except ImportError:  # Python < 3.11
    tomllib = None

SEED = "https://www.autoco.com/"
MAX_DEPTH = 3
SCOPE = ["autoco.com", "autoco.jp", "autoco.de", "autoco.fr", "autoco.co.uk", "autoco.ca", "autoco.nl", "autoco.ie", "autoco.ch"]
OVERRIDES = [("/it-it/", "it")]
HOME = "jp"
EXCLUDED = {"script", "style", "head", "[document]"}

CATEGORIES = [
    ("e-mobility & environment", ["e-mobility", "battery", "environment", "biological", "eco", "ecological", "electric", "hybrid", "environmental-friendly"]),
    ("connectivity & shared mobility", ["connectivity", "shared", "mobility", "sharing", "interconnectedness", "cloud", "cloud computing", "wifi", "5g"]),
    ("autonomous driving & artificial intelligence", ["autonomous", "self-driving", "ai", "machine learning", "artificial intelligence", "intelligent", "neural network", "algorithm"]),
]


class Page(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.stack = []
        self.hrefs = []
        self.texts = []

    def handle_starttag(self, tag, attrs):
        if tag == "a":
            for k, v in attrs:
                if k == "href" and v is not None:
                    self.hrefs.append(v)
        self.stack.append(tag)

    def handle_endtag(self, tag):
        while self.stack:
            if self.stack.pop() == tag:
                break

    def handle_data(self, data):
        parent = self.stack[-1] if self.stack else "[document]"
        if parent not in EXCLUDED:
            self.texts.append(data)


def canonical(href, base):
    url, _ = urldefrag(urljoin(base, href.strip()))
    parts = urlsplit(url)
    if parts.scheme not in ("http", "https") or not parts.netloc:
        return None
    return url


def in_scope(url):
    host = urlsplit(url).hostname
    return any(host == d or host.endswith("." + d) for d in SCOPE)


def tokenize(text):
    return re.findall(r"[a-z0-9]+(?:['-][a-z0-9]+)*", text.lower())


def greedy(tokens, table):
    """Greedy longest-first non-overlapping matches of tuple phrases."""
    longest = max((len(p) for p in table), default=0)
    i, out = 0, []
    while i < len(tokens):
        for n in range(min(longest, len(tokens) - i), 0, -1):
            key = tuple(tokens[i : i + n])
            if key in table:
                out.append((i, table[key]))
                i += n
                break
        else:
            i += 1
    return out


def load_lexicon():
    table = {}
    with open(os.path.join(ROOT, "crates/core/assets/lexicon.tsv"), encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            term, polarity = line.split("\t")
            table[tuple(tokenize(term))] = float(polarity)
    return table


def crawl(index):
    pages, stubs, edges = {}, {}, {}
    seen = {SEED}
    frontier = [SEED]
    depth = 0
    while frontier:
        nxt = set()
        for url in sorted(frontier):
            links = []
            if url in index and index[url].endswith(".html"):
                with open(os.path.join(HERE, "corpus", index[url]), encoding="utf-8") as f:
                    p = Page()
                    p.feed(f.read())
                links = [c for c in (canonical(h, url) for h in p.hrefs) if c]
                text = " ".join(p.texts)
                pages[url] = {"depth": depth, "status": "corpus-ok", "html": True, "text": " ".join(text.split())}
            elif url in index:
                pages[url] = {"depth": depth, "status": "corpus-ok", "html": False, "text": ""}
            else:
                pages[url] = {"depth": depth, "status": "404", "html": False, "text": ""}
            for t in links:
                edges[(url, t)] = edges.get((url, t), 0) + 1
                if t in seen:
                    continue
                seen.add(t)
                if not in_scope(t):
                    stubs[t] = (depth + 1, "external")
                elif depth >= MAX_DEPTH:
                    stubs[t] = (depth + 1, "frontier")
                else:
                    nxt.add(t)
        frontier = sorted(nxt)
        depth += 1
    return pages, stubs, edges


def country_of(url):
    for pattern, cc in OVERRIDES:
        if pattern in url:
            return cc
    tld = urlsplit(url).hostname.rsplit(".", 1)[-1]
    return tld if len(tld) == 2 and tld.isalpha() else None


def best_partition(values, k):
    """Exhaustive search over contiguous partitions of sorted values."""
    n = len(values)
    best = None
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0,) + cuts + (n,)
        cost = 0.0
        for a, b in zip(bounds, bounds[1:]):
            seg = values[a:b]
            m = sum(seg) / len(seg)
            cost += sum((x - m) ** 2 for x in seg)
        if best is None or cost < best[0] - 1e-12:
            best = (cost, bounds)
    return best


def main():
    index = {}
    with open(os.path.join(HERE, "corpus", "index.tsv"), encoding="utf-8") as f:
        for line in f:
            if line.strip() and not line.startswith("#"):
                url, name = line.rstrip("\n").split("\t")
                index[url] = name

    pages, stubs, edges = crawl(index)
    kind = {u: "page" for u in pages}
    kind.update({u: k for u, (_, k) in stubs.items()})
    nodes = sorted(u for u in kind if kind[u] != "external")

    und = nx.Graph()
    und.add_nodes_from(nodes)
    di = nx.DiGraph()
    di.add_nodes_from(nodes)
    for (a, b) in edges:
        if a in und and b in und and a != b:
            und.add_edge(a, b)
            di.add_edge(a, b)
    n, e = und.number_of_nodes(), und.number_of_edges()
    comps = sorted(nx.connected_components(und), key=lambda c: (-len(c), min(c)))
    lcc = und.subgraph(comps[0])
    rc = nx.rich_club_coefficient(und, normalized=False)
    degrees = dict(und.degree())
    dist = {}
    for d in degrees.values():
        dist[str(d)] = dist.get(str(d), 0) + 1

    pr = nx.pagerank(di, alpha=0.85, tol=1e-15, max_iter=10000)
    top = max(pr.values())
    norm = {u: pr[u] / top for u in pr}

    lexicon = load_lexicon()
    negations = {"not", "no", "never", "n't"}
    tables = [{tuple(tokenize(k)): name for k in kws} for name, kws in CATEGORIES]
    annotations = {}
    for u in nodes:
        p = pages.get(u)
        if not p or not p["html"]:
            continue
        tokens = tokenize(p["text"])
        counts = [len(greedy(tokens, t)) for t in tables]
        dominant = None if max(counts) == 0 else CATEGORIES[counts.index(max(counts))][0]
        pol = [(-v if i > 0 and tokens[i - 1] in negations else v) for i, v in greedy(tokens, lexicon)]
        sent = sum(pol) / len(pol) if pol else 0.0
        annotations[u] = {"counts": counts, "dominant_topic": dominant, "sentiment": max(-1.0, min(1.0, sent))}

    categories = []
    for name in [c[0] for c in CATEGORIES] + ["other"]:
        members = [u for u, a in annotations.items() if (a["dominant_topic"] or "other") == name]
        categories.append({
            "category": name,
            "count": len(members),
            "mean_normalized_pagerank": sum(norm[u] for u in members) / len(members) if members else None,
            "mean_sentiment": sum(annotations[u]["sentiment"] for u in members) / len(members) if members else None,
        })

    counts = {}
    for u in nodes:
        cc = country_of(u) or "unassigned"
        counts[cc] = counts.get(cc, 0) + 1
    with open(os.path.join(HERE, "sales.csv"), encoding="utf-8") as f:
        sales = {r["country_code"]: int(r["sales"]) for r in csv.DictReader(f)}
    unassigned = counts.get("unassigned", 0) + sum(c for cc, c in counts.items() if cc != "unassigned" and cc not in sales)
    ordered = sorted(sales, key=lambda cc: (sales[cc], cc))
    logs = [math.log10(sales[cc]) for cc in ordered]
    _, bounds = best_partition(logs, 3)
    total = len(nodes)
    clusters = []
    for label, a, b in zip(["small", "medium", "large"], bounds, bounds[1:]):
        members = ordered[a:b]
        pages_in = sum(counts.get(cc, 0) for cc in members)
        clusters.append({"label": label, "members": members, "page_count": pages_in, "page_share": 100.0 * pages_in / total})

    golden = {
        "crawl": {
            "pages": len(pages),
            "pages_with_content": sum(1 for p in pages.values() if p["html"]),
            "failed_pages": sum(1 for p in pages.values() if p["status"] != "corpus-ok"),
            "frontier_stubs": sum(1 for _, k in stubs.values() if k == "frontier"),
            "external_stubs": sum(1 for _, k in stubs.values() if k == "external"),
            "edges": len(edges),
            "self_links": sum(1 for (a, b) in edges if a == b),
        },
        "graph": {
            "node_count": n,
            "edge_count": e,
            "directed_edge_count": di.number_of_edges(),
            "average_degree": 2 * e / n,
            "density": nx.density(und),
            "diameter": nx.diameter(lcc),
            "component_size": lcc.number_of_nodes(),
            "average_rich_club": sum(rc.values()) / len(rc),
            "rich_club_ks": sorted(rc),
            "degree_distribution": dict(sorted(dist.items(), key=lambda kv: int(kv[0]))),
        },
        "pagerank": {u: pr[u] for u in nodes},
        "annotations": annotations,
        "categories": categories,
        "markets": {
            "clusters": clusters,
            "total_pages": total,
            "unassigned_pages": unassigned,
            "unassigned_share": 100.0 * unassigned / total,
            "home_market_pages": counts.get(HOME, 0),
            "home_market_share": 100.0 * counts.get(HOME, 0) / total,
            "page_counts": dict(sorted(counts.items())),
        },
    }
    out = os.path.join(HERE, "golden.json")
    with open(out, "w", encoding="utf-8") as f:
        json.dump(golden, f, indent=2, sort_keys=False)
        f.write("\n")
    json.dump({k: golden[k] for k in ("crawl", "graph", "categories", "markets")}, sys.stdout, indent=1)


if __name__ == "__main__":
    main()
