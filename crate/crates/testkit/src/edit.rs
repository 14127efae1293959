use rand::seq::SliceRandom;
use rand::Rng;

/// Full-matrix optimal string alignment distance (adjacent transpositions
/// count once).
pub fn osa_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut best = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                best = best.min(d[i - 2][j - 2] + 1);
            }
            d[i][j] = best;
        }
    }
    d[a.len()][b.len()]
}

/// Same threshold rule as the index, restated.
pub fn allowed_edits(len: usize) -> usize {
    if len <= 3 {
        0
    } else if len <= 6 {
        1
    } else {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    Substitute,
    Insert,
    Delete,
    Transpose,
}

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

/// One random single-character edit inside an alphanumeric run of `value`.
/// The result differs from `value` ignoring case and never introduces or
/// removes a word boundary.
pub fn corrupt(rng: &mut impl Rng, value: &str) -> Option<(String, Corruption)> {
    let chars: Vec<char> = value.chars().collect();
    let alnum: Vec<usize> = (0..chars.len()).filter(|&i| chars[i].is_alphanumeric()).collect();
    if alnum.is_empty() {
        return None;
    }
    for _ in 0..50 {
        let kind = *[
            Corruption::Substitute,
            Corruption::Insert,
            Corruption::Delete,
            Corruption::Transpose,
        ]
        .choose(rng)
        .unwrap();
        let i = *alnum.choose(rng).unwrap();
        let letter = LETTERS[rng.gen_range(0..LETTERS.len())] as char;
        let mut out = chars.clone();
        match kind {
            Corruption::Substitute => out[i] = letter,
            Corruption::Insert => out.insert(i, letter),
            Corruption::Delete => {
                // deleting the only character of a word would drop the word
                let left = i > 0 && out[i - 1].is_alphanumeric();
                let right = i + 1 < out.len() && out[i + 1].is_alphanumeric();
                if !left && !right {
                    continue;
                }
                out.remove(i);
            }
            Corruption::Transpose => {
                if i + 1 >= out.len() || !out[i + 1].is_alphanumeric() {
                    continue;
                }
                out.swap(i, i + 1);
            }
        }
        let s: String = out.into_iter().collect();
        if s.to_lowercase() != value.to_lowercase() {
            return Some((s, kind));
        }
    }
    None
}
