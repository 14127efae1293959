//! Ranked completions for a partially typed question.
//!
//! The completion target is the run of up to three tokens ending at the
//! cursor (or everything after an unclosed `'`). Each tail length is looked
//! up by prefix, widest first; fuzzy matches are appended only when prefix
//! matching leaves fewer than `k` candidates.
//!
//! Hits from a wider tail rank above hits from a narrower one, and prefix
//! hits above fuzzy ones: each later group is scaled by the lowest score
//! already collected.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::Bound;

use serde::{Deserialize, Serialize};

use crate::text::normalize_phrase;
use crate::vocab::{Posting, PostingKind, VocabIndex};

const FUZZY_PENALTY: f64 = 0.5;
const MAX_TAIL_TOKENS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SuggestionKind {
    Attribute,
    Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suggestion {
    pub display_text: String,
    pub kind: SuggestionKind,
    pub attribute_name: String,
    pub score: f64,
    /// Character offsets `[start, end)` of the input text this replaces.
    pub replace_span: (usize, usize),
}

/// A candidate completion target: normalized text and where it starts.
#[derive(Debug)]
struct Target {
    norm: String,
    start: usize,
    multi: bool,
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric()
}

/// Tail targets ending at `cursor`, shortest first. Empty when the cursor
/// does not touch a word (cold start).
fn targets(chars: &[char], cursor: usize) -> Vec<Target> {
    let before = &chars[..cursor];
    let quotes = before.iter().filter(|&&c| c == '\'').count();
    if quotes % 2 == 1 {
        let open = before.iter().rposition(|&c| c == '\'').unwrap() + 1;
        let raw: String = before[open..].iter().collect();
        let norm = normalize_phrase(&raw);
        if norm.is_empty() {
            return Vec::new();
        }
        let multi = norm.contains(' ');
        return vec![Target {
            norm,
            start: open,
            multi,
        }];
    }
    if cursor == 0 || !is_word(before[cursor - 1]) {
        return Vec::new();
    }
    // word runs ending at or before the cursor, nearest first
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut end = cursor;
    while runs.len() < MAX_TAIL_TOKENS && end > 0 {
        let mut start = end;
        while start > 0 && is_word(before[start - 1]) {
            start -= 1;
        }
        if start == end {
            break;
        }
        runs.push((start, end));
        let mut next = start;
        while next > 0 && !is_word(before[next - 1]) {
            if before[next - 1] == '\'' {
                next = 0;
                break;
            }
            next -= 1;
        }
        end = next;
    }
    (1..=runs.len())
        .map(|n| {
            let start = runs[n - 1].0;
            let raw: String = before[start..cursor].iter().collect();
            Target {
                norm: normalize_phrase(&raw),
                start,
                multi: n > 1,
            }
        })
        .filter(|t| !t.norm.is_empty())
        .collect()
}

fn kind_of(p: &Posting) -> SuggestionKind {
    if p.kind == PostingKind::Value {
        SuggestionKind::Value
    } else {
        SuggestionKind::Attribute
    }
}

struct Ranker<'a> {
    index: &'a VocabIndex,
    log_max: f64,
    cursor: usize,
    scale: f64,
    best: HashMap<(SuggestionKind, usize, Option<usize>), (f64, usize)>,
}

impl<'a> Ranker<'a> {
    fn new(index: &'a VocabIndex, cursor: usize) -> Self {
        Self {
            index,
            log_max: (1.0 + index.max_value_frequency() as f64).ln(),
            cursor,
            scale: 1.0,
            best: HashMap::new(),
        }
    }

    fn damping(&self, p: &Posting) -> f64 {
        match p.value_id {
            Some(v) => (1.0 + self.index.value(v).frequency as f64).ln() / self.log_max,
            None => 1.0,
        }
    }

    fn weight(kind: SuggestionKind, multi: bool) -> f64 {
        match (kind, multi) {
            (SuggestionKind::Attribute, false) | (SuggestionKind::Value, true) => 1.0,
            _ => 0.9,
        }
    }

    fn offer(&mut self, p: &Posting, match_score: f64, target: &Target) {
        let kind = kind_of(p);
        let score = self.scale * Self::weight(kind, target.multi) * match_score * self.damping(p);
        let key = (kind, p.attribute_id, p.value_id);
        let entry = self.best.entry(key).or_insert((score, target.start));
        // wider spans win ties so a phrase completion replaces the whole phrase
        if score > entry.0 || (score == entry.0 && target.start < entry.1) {
            *entry = (score, target.start);
        }
    }

    /// Caps everything offered from now on at the current lowest score.
    fn close_group(&mut self) {
        if let Some(min) = self.best.values().map(|&(s, _)| s).min_by(f64::total_cmp) {
            self.scale = min;
        }
    }

    fn prefix(&mut self, target: &Target) {
        let index = self.index;
        let map = if target.norm.contains(' ') {
            index.phrase_map()
        } else {
            index.token_map()
        };
        let len = target.norm.chars().count() as f64;
        let range = map.range::<str, _>((Bound::Included(target.norm.as_str()), Bound::Unbounded));
        for (term, postings) in range.take_while(|(k, _)| k.starts_with(&target.norm)) {
            let s = len / term.chars().count() as f64;
            for p in postings {
                self.offer(p, s, target);
            }
        }
    }

    fn fuzzy(&mut self, target: &Target) {
        let index = self.index;
        for (term, d) in index.fuzzy_terms(&target.norm) {
            let s = FUZZY_PENALTY * (1.0 - d as f64 / term.chars().count() as f64);
            let map = if term.contains(' ') {
                index.phrase_map()
            } else {
                index.token_map()
            };
            for p in map.get(term).into_iter().flatten() {
                self.offer(p, s, target);
            }
        }
    }

    fn finish(self, k: usize) -> Vec<Suggestion> {
        let index = self.index;
        let mut scores: Vec<f64> = self.best.values().map(|&(s, _)| s).collect();
        let floor = if scores.len() > k {
            // everything tied with the k-th best survives to the full sort
            *scores.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a)).1
        } else {
            f64::NEG_INFINITY
        };
        let mut out: Vec<Suggestion> = self
            .best
            .into_iter()
            .filter(|(_, (score, _))| *score >= floor)
            .map(|((kind, attr, value_id), (score, start))| {
                let posting = Posting {
                    kind: if kind == SuggestionKind::Value {
                        PostingKind::Value
                    } else {
                        PostingKind::AttributeName
                    },
                    attribute_id: attr,
                    value_id,
                };
                Suggestion {
                    display_text: index.display_text(&posting).to_string(),
                    kind,
                    attribute_name: index.profile(attr).name.clone(),
                    score,
                    replace_span: (start, self.cursor),
                }
            })
            .collect();
        out.sort_by(rank_order);
        out.truncate(k);
        out
    }
}

fn rank_order(a: &Suggestion, b: &Suggestion) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.display_text.cmp(&b.display_text))
        .then_with(|| a.kind.cmp(&b.kind))
        .then_with(|| a.attribute_name.cmp(&b.attribute_name))
}

/// Attribute names first, then the most frequent values.
fn cold_start(index: &VocabIndex, cursor: usize, k: usize) -> Vec<Suggestion> {
    let mut attrs: Vec<Suggestion> = index
        .profiles()
        .iter()
        .map(|p| Suggestion {
            display_text: p.name.clone(),
            kind: SuggestionKind::Attribute,
            attribute_name: p.name.clone(),
            score: 1.0,
            replace_span: (cursor, cursor),
        })
        .collect();
    attrs.sort_by(rank_order);
    attrs.truncate(k);
    if attrs.len() < k {
        let ranker = Ranker::new(index, cursor);
        let mut values: Vec<(usize, &crate::vocab::ValueEntry)> =
            index.values().iter().enumerate().collect();
        values.sort_by(|(_, a), (_, b)| {
            b.frequency
                .cmp(&a.frequency)
                .then_with(|| a.canonical_text.cmp(&b.canonical_text))
        });
        let room = k - attrs.len();
        attrs.extend(values.into_iter().take(room).map(|(id, v)| {
            let posting = Posting {
                kind: PostingKind::Value,
                attribute_id: v.attribute_id,
                value_id: Some(id),
            };
            Suggestion {
                display_text: v.canonical_text.clone(),
                kind: SuggestionKind::Value,
                attribute_name: index.profile(v.attribute_id).name.clone(),
                score: 0.9 * ranker.damping(&posting),
                replace_span: (cursor, cursor),
            }
        }));
    }
    attrs
}

/// Up to `k` suggestions for the text before `cursor` (a character offset,
/// clamped to the input length). Pure in all arguments.
pub fn suggest(index: &VocabIndex, input: &str, cursor: usize, k: usize) -> Vec<Suggestion> {
    if k == 0 {
        return Vec::new();
    }
    let chars: Vec<char> = input.chars().collect();
    let cursor = cursor.min(chars.len());
    let targets = targets(&chars, cursor);
    if targets.is_empty() {
        return cold_start(index, cursor, k);
    }
    let mut ranker = Ranker::new(index, cursor);
    for t in targets.iter().rev() {
        ranker.prefix(t);
        ranker.close_group();
    }
    if ranker.best.len() < k {
        for t in &targets {
            ranker.fuzzy(t);
        }
    }
    ranker.finish(k)
}
