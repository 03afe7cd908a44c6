use std::path::Path;

use super::phrases::PhraseTable;
use super::tokenize::tokenize;

/// Default trend categories and their keyword lists.
pub const DEFAULT_CATEGORIES: [(&str, &[&str]); 3] = [
    (
        "e-mobility & environment",
        &[
            "e-mobility",
            "battery",
            "environment",
            "biological",
            "eco",
            "ecological",
            "electric",
            "hybrid",
            "environment",
            "environmental-friendly",
        ],
    ),
    (
        "connectivity & shared mobility",
        &[
            "connectivity",
            "shared",
            "mobility",
            "sharing",
            "interconnectedness",
            "cloud",
            "cloud computing",
            "wifi",
            "5g",
        ],
    ),
    (
        "autonomous driving & artificial intelligence",
        &[
            "autonomous",
            "self-driving",
            "ai",
            "machine learning",
            "artificial intelligence",
            "intelligent",
            "neural network",
            "algorithm",
        ],
    ),
];

/// Name used for pages without any keyword hit.
pub const OTHER_CATEGORY: &str = "other";

#[derive(Debug, Clone)]
pub struct Category {
    pub name: String,
    pub keywords: Vec<String>,
    table: PhraseTable<()>,
}

/// Ordered topic categories. Order breaks ties in [`super::dominant_topic`].
#[derive(Debug, Clone)]
pub struct TopicTaxonomy {
    categories: Vec<Category>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("taxonomy has no categories")]
    Empty,
    #[error("duplicate category {0:?}")]
    DuplicateCategory(String),
    #[error("category {0:?} has no keywords")]
    NoKeywords(String),
    #[error("keyword {0:?} must be non-empty and lowercase")]
    BadKeyword(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("cannot read taxonomy file: {0}")]
    Io(String),
}

impl TopicTaxonomy {
    /// Builds a taxonomy; repeated keywords inside a category are collapsed.
    pub fn new<N, K>(categories: impl IntoIterator<Item = (N, Vec<K>)>) -> Result<Self, TaxonomyError>
    where
        N: Into<String>,
        K: Into<String>,
    {
        let mut built: Vec<Category> = Vec::new();
        for (name, keywords) in categories {
            let name = name.into();
            if name == OTHER_CATEGORY || built.iter().any(|c| c.name == name) {
                return Err(TaxonomyError::DuplicateCategory(name));
            }
            let mut kept = Vec::new();
            let mut table = PhraseTable::default();
            for kw in keywords {
                let kw: String = kw.into();
                let tokens = tokenize(&kw);
                if tokens.is_empty() || kw != kw.to_lowercase() {
                    return Err(TaxonomyError::BadKeyword(kw));
                }
                if table.insert(tokens, ()).is_none() {
                    kept.push(kw);
                }
            }
            if kept.is_empty() {
                return Err(TaxonomyError::NoKeywords(name));
            }
            built.push(Category {
                name,
                keywords: kept,
                table,
            });
        }
        if built.is_empty() {
            return Err(TaxonomyError::Empty);
        }
        Ok(Self { categories: built })
    }

    /// `[category]` headers each followed by one keyword per line. Blank
    /// lines and `#` comments are ignored; keywords are lowercased.
    pub fn parse(text: &str) -> Result<Self, TaxonomyError> {
        let mut sections: Vec<(String, Vec<String>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                sections.push((name.trim().to_string(), Vec::new()));
            } else if let Some((_, kws)) = sections.last_mut() {
                kws.push(line.to_lowercase());
            } else {
                return Err(TaxonomyError::Syntax {
                    line: i + 1,
                    message: "keyword before the first [category] header".into(),
                });
            }
        }
        Self::new(sections)
    }

    pub fn load(path: &Path) -> Result<Self, TaxonomyError> {
        let text = std::fs::read_to_string(path).map_err(|e| TaxonomyError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.categories[index].name
    }

    pub(crate) fn count_tokens(&self, tokens: &[String]) -> Vec<usize> {
        self.categories
            .iter()
            .map(|c| c.table.matches(tokens).count())
            .collect()
    }
}

impl Default for TopicTaxonomy {
    fn default() -> Self {
        Self::new(DEFAULT_CATEGORIES.iter().map(|(n, kws)| (*n, kws.to_vec()))).expect("built-in taxonomy is valid")
    }
}
