use std::collections::HashMap;

/// Token-sequence dictionary matched greedily, longest phrase first.
#[derive(Debug, Clone, Default)]
pub(crate) struct PhraseTable<V> {
    entries: HashMap<Vec<String>, V>,
    max_len: usize,
}

impl<V> PhraseTable<V> {
    pub fn insert(&mut self, phrase: Vec<String>, value: V) -> Option<V> {
        self.max_len = self.max_len.max(phrase.len());
        self.entries.insert(phrase, value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Non-overlapping matches scanning left to right: `(start, len, value)`.
    pub fn matches<'a>(&'a self, tokens: &'a [String]) -> impl Iterator<Item = (usize, usize, &'a V)> + 'a {
        let mut i = 0;
        std::iter::from_fn(move || {
            while i < tokens.len() {
                let longest = self.max_len.min(tokens.len() - i);
                let hit = (1..=longest)
                    .rev()
                    .find_map(|len| self.entries.get(&tokens[i..i + len]).map(|v| (len, v)));
                match hit {
                    Some((len, v)) => {
                        let start = i;
                        i += len;
                        return Some((start, len, v));
                    }
                    None => i += 1,
                }
            }
            None
        })
    }
}
