//! Hyperlinks and user-visible text from (possibly malformed) HTML.

use std::collections::BTreeSet;

use scraper::{Html, Node, Selector};

use crate::fetcher::{normalize_url, CanonicalUrl};

/// Name used for text whose parent is the document itself rather than an
/// element.
pub const DOCUMENT_PSEUDO_TAG: &str = "[document]";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionRules {
    /// A text node is dropped when its immediate parent has one of these names.
    pub excluded_tags: BTreeSet<String>,
}

impl Default for ExtractionRules {
    fn default() -> Self {
        Self {
            excluded_tags: ["script", "style", "head", DOCUMENT_PSEUDO_TAG]
                .into_iter()
                .map(String::from)
                .collect(),
        }
    }
}

fn decode(html: &[u8]) -> std::borrow::Cow<'_, str> {
    let text = String::from_utf8_lossy(html);
    if let std::borrow::Cow::Owned(_) = text {
        log::warn!("document is not valid UTF-8; decoded lossily");
    }
    text
}

/// Canonical targets of every `<a href>` in document order, duplicates kept.
pub fn extract_links(html: &[u8], base: &CanonicalUrl) -> Vec<CanonicalUrl> {
    let doc = Html::parse_document(&decode(html));
    let anchors = Selector::parse("a[href]").expect("static selector");
    doc.select(&anchors)
        .filter_map(|a| a.value().attr("href"))
        .filter_map(|href| normalize_url(href, base))
        .collect()
}

/// Visible text: every text node whose parent is not excluded, joined with
/// single spaces, with each whitespace run collapsed to one space and the
/// ends trimmed.
pub fn extract_text(html: &[u8], rules: &ExtractionRules) -> String {
    let doc = Html::parse_document(&decode(html));
    let mut out = String::new();
    for node in doc.tree.root().descendants() {
        let Node::Text(text) = node.value() else { continue };
        let parent_name = match node.parent().map(|p| p.value()) {
            Some(Node::Element(el)) => el.name(),
            _ => DOCUMENT_PSEUDO_TAG,
        };
        if rules.excluded_tags.contains(parent_name) {
            continue;
        }
        for word in text.split_whitespace() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(word);
        }
    }
    out
}

/// Convenience: the `<title>` text, if any.
pub fn extract_title(html: &[u8]) -> Option<String> {
    let doc = Html::parse_document(&decode(html));
    let title = Selector::parse("title").expect("static selector");
    doc.select(&title)
        .next()
        .map(|t| t.text().flat_map(str::split_whitespace).collect::<Vec<_>>().join(" "))
}
