//! GraphML, DOT and CSV serializations. Output is a pure function of the
//! inputs: nodes in URL order as `n0..`, edges sorted by endpoints, floats in
//! shortest round-trip form.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{NodeId, SiteGraph};

/// Optional per-node attributes carried into GraphML/DOT.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodeAttributes {
    pub dominant_topic: Option<String>,
    pub sentiment: Option<f64>,
    pub pagerank: Option<f64>,
    pub country: Option<String>,
}

fn attrs_of(attrs: &[NodeAttributes], id: NodeId) -> NodeAttributes {
    attrs.get(id).cloned().unwrap_or_default()
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn kind_name(g: &SiteGraph, id: NodeId) -> &'static str {
    match g.node(id).kind {
        crate::fetcher::NodeKind::Page => "page",
        crate::fetcher::NodeKind::Frontier => "frontier",
        crate::fetcher::NodeKind::External => "external",
    }
}

/// Directed GraphML with node keys `url, kind, depth, dominant_topic,
/// sentiment, pagerank, country` and edge key `multiplicity`.
pub fn to_graphml(g: &SiteGraph, attrs: &[NodeAttributes]) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    for (id, ty) in [
        ("url", "string"),
        ("kind", "string"),
        ("depth", "int"),
        ("dominant_topic", "string"),
        ("sentiment", "double"),
        ("pagerank", "double"),
        ("country", "string"),
    ] {
        let _ = writeln!(
            out,
            "  <key id=\"{id}\" for=\"node\" attr.name=\"{id}\" attr.type=\"{ty}\"/>"
        );
    }
    out.push_str("  <key id=\"multiplicity\" for=\"edge\" attr.name=\"multiplicity\" attr.type=\"int\"/>\n");
    out.push_str("  <graph id=\"site\" edgedefault=\"directed\">\n");
    for (id, node) in g.nodes().iter().enumerate() {
        let a = attrs_of(attrs, id);
        let _ = writeln!(out, "    <node id=\"n{id}\">");
        let _ = writeln!(out, "      <data key=\"url\">{}</data>", xml_escape(node.url.as_str()));
        let _ = writeln!(out, "      <data key=\"kind\">{}</data>", kind_name(g, id));
        let _ = writeln!(out, "      <data key=\"depth\">{}</data>", node.depth);
        if let Some(t) = &a.dominant_topic {
            let _ = writeln!(out, "      <data key=\"dominant_topic\">{}</data>", xml_escape(t));
        }
        if let Some(s) = a.sentiment {
            let _ = writeln!(out, "      <data key=\"sentiment\">{s:?}</data>");
        }
        if let Some(p) = a.pagerank {
            let _ = writeln!(out, "      <data key=\"pagerank\">{p:?}</data>");
        }
        if let Some(c) = &a.country {
            let _ = writeln!(out, "      <data key=\"country\">{}</data>", xml_escape(c));
        }
        out.push_str("    </node>\n");
    }
    for (u, v, m) in g.directed_edges() {
        let _ = writeln!(
            out,
            "    <edge source=\"n{u}\" target=\"n{v}\"><data key=\"multiplicity\">{m}</data></edge>"
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

pub fn to_dot(g: &SiteGraph, attrs: &[NodeAttributes]) -> String {
    let mut out = String::from("digraph site {\n");
    for (id, node) in g.nodes().iter().enumerate() {
        let a = attrs_of(attrs, id);
        let mut fields = vec![
            format!("url=\"{}\"", dot_escape(node.url.as_str())),
            format!("kind=\"{}\"", kind_name(g, id)),
            format!("depth={}", node.depth),
        ];
        if let Some(t) = &a.dominant_topic {
            fields.push(format!("dominant_topic=\"{}\"", dot_escape(t)));
        }
        if let Some(s) = a.sentiment {
            fields.push(format!("sentiment={s:?}"));
        }
        if let Some(p) = a.pagerank {
            fields.push(format!("pagerank={p:?}"));
        }
        if let Some(c) = &a.country {
            fields.push(format!("country=\"{}\"", dot_escape(c)));
        }
        let _ = writeln!(out, "  n{id} [{}];", fields.join(", "));
    }
    for (u, v, m) in g.directed_edges() {
        let _ = writeln!(out, "  n{u} -> n{v} [multiplicity={m}];");
    }
    out.push_str("}\n");
    out
}

/// `from,to,multiplicity` over the graph's directed edges.
pub fn to_edge_csv(g: &SiteGraph) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["from", "to", "multiplicity"])
        .expect("in-memory write");
    for (u, v, m) in g.directed_edges() {
        writer
            .write_record([g.node(u).url.as_str(), g.node(v).url.as_str(), &m.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

/// `degree,count` rows in ascending degree.
pub fn degree_distribution_csv(dist: &BTreeMap<usize, usize>) -> String {
    let mut out = String::from("degree,count\n");
    for (d, c) in dist {
        let _ = writeln!(out, "{d},{c}");
    }
    out
}
