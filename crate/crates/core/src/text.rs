//! Text normalization shared by the index, autocomplete and keyword extraction.

use unicode_normalization::UnicodeNormalization;

/// NFC-composes, lowercases and splits on every non-alphanumeric character.
pub fn tokenize(text: &str) -> Vec<String> {
    let composed: String = text.nfc().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in composed.chars() {
        if ch.is_alphanumeric() {
            current.extend(ch.to_lowercase());
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Tokens joined by single spaces; the key used for phrases.
pub fn normalize_phrase(text: &str) -> String {
    tokenize(text).join(" ")
}

/// Case-folded form used to decide whether two cells hold the same value.
pub fn fold_case(text: &str) -> String {
    text.nfc().flat_map(char::to_lowercase).collect()
}

/// Maximum edit distance tolerated for a token of `len` characters.
pub fn fuzzy_threshold(len: usize) -> usize {
    match len {
        0..=3 => 0,
        4..=6 => 1,
        _ => 2,
    }
}

/// Padded character trigrams (`^^ab`, ..., `b$$`). Two markers on each side
/// guarantee that a string within the fuzzy threshold of a token still shares
/// at least one trigram with it.
pub fn trigrams(token: &str) -> Vec<String> {
    let chars: Vec<char> = ['^', '^']
        .into_iter()
        .chain(token.chars())
        .chain(['$', '$'])
        .collect();
    let mut grams: Vec<String> = chars.windows(3).map(|w| w.iter().collect()).collect();
    grams.sort();
    grams.dedup();
    grams
}

/// Optimal-string-alignment Damerau-Levenshtein distance, abandoned early once
/// it must exceed `limit`. Returns `None` when the distance is above `limit`.
pub fn bounded_damerau_levenshtein(a: &[char], b: &[char], limit: usize) -> Option<usize> {
    let (n, m) = (a.len(), b.len());
    if n.abs_diff(m) > limit {
        return None;
    }
    if n == 0 || m == 0 {
        return Some(n.max(m));
    }
    let big = limit + 1;
    let mut prev2 = vec![big; m + 1];
    let mut prev: Vec<usize> = (0..=m).collect();
    let mut cur = vec![big; m + 1];
    for i in 1..=n {
        cur[0] = i;
        let mut row_min = cur[0];
        for j in 1..=m {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut d = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                d = d.min(prev2[j - 2] + 1);
            }
            cur[j] = d.min(big);
            row_min = row_min.min(cur[j]);
        }
        if row_min > limit {
            return None;
        }
        std::mem::swap(&mut prev2, &mut prev);
        std::mem::swap(&mut prev, &mut cur);
    }
    Some(prev[m]).filter(|d| *d <= limit)
}
