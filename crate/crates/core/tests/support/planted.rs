//! Hand-counted expectations for the planted-keyword fixture.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::Path;

pub struct Expected {
    pub url: String,
    pub counts: Vec<usize>,
    pub dominant: Option<String>,
    pub sentiment: f64,
}

/// Term polarities straight from the bundled lexicon file.
pub fn lexicon_polarities(root: &Path) -> HashMap<String, f64> {
    let text = std::fs::read_to_string(root.join("crates/core/assets/lexicon.tsv")).unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (term, polarity) = l.split_once('\t').unwrap();
            (term.to_string(), polarity.parse().unwrap())
        })
        .collect()
}

/// Rows of `expected.tsv`; sentiment is the mean of the listed lexicon
/// polarities, negated where marked with `!`, clamped to [-1, 1].
pub fn expectations(root: &Path) -> Vec<Expected> {
    let lexicon = lexicon_polarities(root);
    let text = std::fs::read_to_string(root.join("fixtures/planted/expected.tsv")).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("url\t"))
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            let terms: Vec<f64> = cols[5]
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| match t.strip_prefix('!') {
                    Some(t) => -lexicon[t],
                    None => lexicon[t],
                })
                .collect();
            let sentiment = if terms.is_empty() {
                0.0
            } else {
                terms.iter().sum::<f64>() / terms.len() as f64
            };
            Expected {
                url: cols[0].to_string(),
                counts: cols[1..4].iter().map(|c| c.parse().unwrap()).collect(),
                dominant: (!cols[4].is_empty()).then(|| cols[4].to_string()),
                sentiment: sentiment.clamp(-1.0, 1.0),
            }
        })
        .collect()
}
