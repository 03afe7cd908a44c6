use std::collections::BTreeSet;
use std::path::Path;

use super::phrases::PhraseTable;
use super::tokenize::{tokenize, NEGATION_SUFFIX};

const BUNDLED_LEXICON: &str = include_str!("../../assets/lexicon.tsv");

pub const DEFAULT_NEGATIONS: [&str; 4] = ["not", "no", "never", NEGATION_SUFFIX];

/// Term (1 to 3 tokens) -> polarity in `[-1, 1]`, plus negation tokens.
#[derive(Debug, Clone)]
pub struct SentimentLexicon {
    terms: PhraseTable<f64>,
    negations: BTreeSet<String>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("term {term:?}: polarity {polarity} outside [-1, 1]")]
    Polarity { term: String, polarity: f64 },
    #[error("term {0:?} must be a lowercase phrase of 1 to 3 tokens")]
    BadTerm(String),
    #[error("cannot read lexicon file: {0}")]
    Io(String),
}

impl SentimentLexicon {
    pub fn new<T: Into<String>>(entries: impl IntoIterator<Item = (T, f64)>) -> Result<Self, LexiconError> {
        let mut terms = PhraseTable::default();
        for (term, polarity) in entries {
            let term: String = term.into();
            let tokens = tokenize(&term);
            if tokens.is_empty() || tokens.len() > 3 || term != term.to_lowercase() {
                return Err(LexiconError::BadTerm(term));
            }
            if !(-1.0..=1.0).contains(&polarity) {
                return Err(LexiconError::Polarity { term, polarity });
            }
            terms.insert(tokens, polarity);
        }
        Ok(Self {
            terms,
            negations: DEFAULT_NEGATIONS.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn with_negations<T: Into<String>>(mut self, negations: impl IntoIterator<Item = T>) -> Self {
        self.negations = negations.into_iter().map(Into::into).collect();
        self
    }

    /// UTF-8 TSV, `term<TAB>polarity` per line; `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |message: &str| LexiconError::Syntax {
                line: i + 1,
                message: message.to_string(),
            };
            let (term, value) = line
                .split_once('\t')
                .ok_or_else(|| syntax("expected term<TAB>polarity"))?;
            let polarity: f64 = value.trim().parse().map_err(|_| syntax("polarity is not a number"))?;
            entries.push((term.trim().to_string(), polarity));
        }
        Self::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|e| LexiconError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The English lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.len() == 0
    }

    /// Polarities of matched terms, sign-flipped when the token right before
    /// a match is a negation.
    pub(crate) fn matched_polarities(&self, tokens: &[String]) -> Vec<f64> {
        self.terms
            .matches(tokens)
            .map(|(start, _, &polarity)| {
                let negated = start > 0 && self.negations.contains(&tokens[start - 1]);
                if negated {
                    -polarity
                } else {
                    polarity
                }
            })
            .collect()
    }
}

pub(crate) fn score_tokens(tokens: &[String], lexicon: &SentimentLexicon) -> f64 {
    let matched = lexicon.matched_polarities(tokens);
    if matched.is_empty() {
        return 0.0;
    }
    let mean = matched.iter().sum::<f64>() / matched.len() as f64;
    mean.clamp(-1.0, 1.0)
}

/// Mean polarity of the lexicon terms found in `text`; 0 when none match.
pub fn sentiment(text: &str, lexicon: &SentimentLexicon) -> f64 {
    score_tokens(&tokenize(text), lexicon)
}
