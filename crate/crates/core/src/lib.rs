//! Website mining: breadth-first crawling, hyperlink-graph structure and
//! centrality, topic tagging, lexicon sentiment and country-market analysis.

pub mod config;
pub mod content;
pub mod extractor;
pub mod fetcher;
pub mod graph;
pub mod markets;
pub mod pipeline;
pub mod report;
