//! Brute-force views of what an index over a table ought to contain.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use roundtable_core::table::{Cell, DataType, Table};
use roundtable_core::vocab::{LookupMode, PostingKind, VocabIndex};

use crate::edit::{allowed_edits, osa_distance};

/// Lowercase, split on anything that is not alphanumeric.
pub fn words(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

fn cell_text(c: &Cell) -> Option<String> {
    match c {
        Cell::Null => None,
        Cell::Text(s) => Some(s.clone()),
        Cell::Boolean(b) => Some(b.to_string()),
        _ => None,
    }
}

/// Columns whose values should be indexed under the default policy: any
/// boolean column, and text columns with few enough distinct cells that are
/// not all unique.
pub fn categorical_columns(table: &Table) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, col) in table.columns().iter().enumerate() {
        let present: Vec<&Cell> = col.values.iter().filter(|c| !c.is_null()).collect();
        let distinct: HashSet<&Cell> = present.iter().copied().collect();
        let keep = match col.dtype {
            DataType::Boolean => true,
            DataType::Text => {
                let n = present.len();
                let cap = 10_000.min(50.max(n / 2));
                !distinct.is_empty() && !(n > 1 && distinct.len() == n) && distinct.len() <= cap
            }
            _ => false,
        };
        if keep {
            out.push(i);
        }
    }
    out
}

/// `(attribute, lowercased value)` pairs the index must hold.
pub fn expected_values(table: &Table) -> BTreeSet<(usize, String)> {
    let mut out = BTreeSet::new();
    for a in categorical_columns(table) {
        for c in &table.column(a).values {
            if let Some(t) = cell_text(c) {
                out.insert((a, t.to_lowercase()));
            }
        }
    }
    out
}

/// Every token of every expected value must find that value by exact lookup,
/// and the index must hold nothing else. Returns the number of
/// `(value, token)` pairs checked.
pub fn check_index(table: &Table, index: &VocabIndex) -> Result<usize, String> {
    let expected = expected_values(table);
    let mut checked = 0;
    for (attr, value) in &expected {
        let mut probes = words(value);
        if probes.len() > 1 {
            probes.push(probes.join(" "));
        }
        for probe in probes {
            let found = index.lookup(&probe, LookupMode::Exact).iter().any(|h| {
                h.posting.kind == PostingKind::Value
                    && h.posting.attribute_id == *attr
                    && index.display_text(&h.posting).to_lowercase() == *value
            });
            if !found {
                return Err(format!("{probe:?} does not reach {value:?} in column {attr}"));
            }
            checked += 1;
        }
    }
    let mut held = BTreeSet::new();
    for v in index.values() {
        let key = (v.attribute_id, v.canonical_text.to_lowercase());
        if !expected.contains(&key) {
            return Err(format!("index holds unexpected value {key:?}"));
        }
        if !held.insert(key.clone()) {
            return Err(format!("index holds {key:?} twice"));
        }
    }
    if held.len() != expected.len() {
        return Err(format!("index holds {} values, expected {}", held.len(), expected.len()));
    }
    Ok(checked)
}

/// All index terms within the edit allowance of `norm`, by exhaustive scan.
pub fn fuzzy_scan(index: &VocabIndex, norm: &str) -> BTreeMap<String, usize> {
    index
        .token_map()
        .keys()
        .chain(index.phrase_map().keys())
        .filter_map(|term| {
            let d = osa_distance(norm, term);
            (d <= allowed_edits(term.chars().count())).then(|| (term.clone(), d))
        })
        .collect()
}

/// Compares the index's fuzzy candidate set for `norm` with the exhaustive
/// scan.
pub fn check_fuzzy(index: &VocabIndex, norm: &str) -> Result<(), String> {
    let fast: BTreeMap<String, usize> = index
        .fuzzy_terms(norm)
        .into_iter()
        .map(|(t, d)| (t.to_string(), d))
        .collect();
    let slow = fuzzy_scan(index, norm);
    if fast != slow {
        return Err(format!("fuzzy terms for {norm:?}: index {fast:?}, scan {slow:?}"));
    }
    Ok(())
}
