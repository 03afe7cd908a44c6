//! Topic tagging, lexicon sentiment, and how both relate to centrality.

mod phrases;
mod sentiment;
mod stats;
mod taxonomy;
mod tokenize;

use serde::Serialize;

pub use self::sentiment::{sentiment, LexiconError, SentimentLexicon, DEFAULT_NEGATIONS};
pub use self::stats::{
    category_centrality_stats, category_correlations, degree_sentiment_bins, quantile, rank_correlation,
    CategoryCorrelation, CategorySummary, DegreeBin, StatsError, Summary,
};
pub use self::taxonomy::{Category, TaxonomyError, TopicTaxonomy, DEFAULT_CATEGORIES, OTHER_CATEGORY};
pub use self::tokenize::tokenize;

/// Keyword hits per category, aligned with the taxonomy's category order.
pub type KeywordCounts = Vec<usize>;

/// Case-insensitive, word-boundary keyword counts per category. Phrases
/// match longest-first and a token is used by at most one match per
/// category.
pub fn count_keywords(text: &str, taxonomy: &TopicTaxonomy) -> KeywordCounts {
    taxonomy.count_tokens(&tokenize(text))
}

/// Index of the category with the most hits; ties go to the earlier
/// category, all-zero counts give `None`.
pub fn dominant_topic(counts: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (i, &c) in counts.iter().enumerate() {
        if c > 0 && best.is_none_or(|(_, b)| c > b) {
            best = Some((i, c));
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PageAnnotation {
    pub keyword_counts: KeywordCounts,
    pub dominant_topic: Option<usize>,
    /// Clamped to `[-1, 1]`.
    pub sentiment: f64,
}

pub fn annotate(text: &str, taxonomy: &TopicTaxonomy, lexicon: &SentimentLexicon) -> PageAnnotation {
    let tokens = tokenize(text);
    let keyword_counts = taxonomy.count_tokens(&tokens);
    PageAnnotation {
        dominant_topic: dominant_topic(&keyword_counts),
        sentiment: sentiment::score_tokens(&tokens, lexicon),
        keyword_counts,
    }
}
