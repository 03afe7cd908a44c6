/// Negation suffix produced when splitting contractions ("don't" -> "do", "n't").
pub const NEGATION_SUFFIX: &str = "n't";

/// Lowercased word tokens. A token is a run of alphanumerics that may be
/// joined by single inner hyphens or apostrophes ("e-mobility", "toyota's");
/// everything else separates tokens. Contractions ending in "n't" are split
/// off as their own token.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut pending_joiner: Option<char> = None;

    let flush = |current: &mut String, tokens: &mut Vec<String>| {
        if current.is_empty() {
            return;
        }
        let word = std::mem::take(current);
        match word.strip_suffix(NEGATION_SUFFIX) {
            Some(stem) if !stem.is_empty() && !stem.ends_with(['-', '\'']) => {
                tokens.push(stem.to_string());
                tokens.push(NEGATION_SUFFIX.to_string());
            }
            _ => tokens.push(word),
        }
    };

    for c in text.chars() {
        let c = if c == '\u{2019}' { '\'' } else { c };
        if c.is_alphanumeric() {
            if let Some(j) = pending_joiner.take() {
                current.push(j);
            }
            current.extend(c.to_lowercase());
        } else if (c == '-' || c == '\'') && !current.is_empty() && pending_joiner.is_none() {
            pending_joiner = Some(c);
        } else {
            pending_joiner = None;
            flush(&mut current, &mut tokens);
        }
    }
    flush(&mut current, &mut tokens);
    tokens
}
