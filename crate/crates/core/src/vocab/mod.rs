//! Inverted index over a table's vocabulary: attribute names, attribute
//! synonyms and the distinct values of categorical columns.
//!
//! Every indexed string is tokenized; single tokens live in the token map and
//! multi-token strings additionally live in the phrase map under their
//! space-joined form. Both kinds of term are registered in a padded-trigram
//! map that gates fuzzy candidates before any edit distance is computed.

mod persist;
mod synonyms;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::table::{AttributeProfile, CategoricalPolicy, DataType, Table};
use crate::text::{
    bounded_damerau_levenshtein, fold_case, fuzzy_threshold, normalize_phrase, tokenize, trigrams,
};

pub use persist::{export_text, load_index, persist_index, FORMAT_VERSION};
pub use synonyms::{
    generate_synonyms, LlmSynonymProvider, NoSynonyms, SynonymDictionary, SynonymProvider,
};

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("attribute {0} is not categorical")]
    NotCategorical(String),
    #[error("synonym provider unavailable: {0}")]
    ProviderUnavailable(String),
    #[error("unsupported index format version {0}")]
    UnsupportedVersion(u32),
    #[error("corrupt index: {0}")]
    CorruptIndex(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PostingKind {
    AttributeName,
    AttributeSynonym,
    Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Posting {
    pub kind: PostingKind,
    pub attribute_id: usize,
    /// Present iff `kind == Value`.
    pub value_id: Option<usize>,
}

impl Posting {
    fn attribute(kind: PostingKind, attribute_id: usize) -> Self {
        Posting {
            kind,
            attribute_id,
            value_id: None,
        }
    }

    fn value(attribute_id: usize, value_id: usize) -> Self {
        Posting {
            kind: PostingKind::Value,
            attribute_id,
            value_id: Some(value_id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueEntry {
    pub canonical_text: String,
    pub normalized_text: String,
    pub attribute_id: usize,
    pub frequency: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynonymSource {
    Builtin,
    Llm,
    User,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynonymEntry {
    pub attribute_id: usize,
    pub synonym_text: String,
    pub source: SynonymSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LookupMode {
    Exact,
    Prefix,
    Fuzzy,
}

/// One lookup result. `distance` is zero for exact and prefix hits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LookupHit {
    pub posting: Posting,
    pub matched: String,
    pub distance: usize,
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct VocabIndex {
    table_name: String,
    row_count: usize,
    profiles: Vec<AttributeProfile>,
    values: Vec<ValueEntry>,
    synonyms: Vec<SynonymEntry>,
    token_map: BTreeMap<String, Vec<Posting>>,
    phrase_map: BTreeMap<String, Vec<Posting>>,
    terms: Vec<String>,
    /// Character length of each term.
    term_lens: Vec<u32>,
    /// Term ids per trigram, ordered by term length then id.
    trigram_map: HashMap<String, Vec<u32>>,
    short_terms: HashMap<String, u32>,
}

/// Ids of the attributes the policy accepts, in column order.
pub fn filter_categorical_attributes(
    profiles: &[AttributeProfile],
    policy: &CategoricalPolicy,
) -> Vec<usize> {
    profiles
        .iter()
        .filter(|p| {
            policy.is_categorical(p.dtype, p.distinct_count, p.row_count - p.null_count)
        })
        .map(|p| p.attribute_id)
        .collect()
}

/// Distinct non-null cell texts of a categorical column. Distinctness is
/// case-folded; the canonical text is the first occurrence.
pub fn extract_unique_values(
    table: &Table,
    attribute_id: usize,
    policy: &CategoricalPolicy,
) -> Result<Vec<ValueEntry>, VocabError> {
    let profile = table.attribute_profile(attribute_id, policy);
    if !profile.is_categorical {
        return Err(VocabError::NotCategorical(profile.name.clone()));
    }
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut out: Vec<ValueEntry> = Vec::new();
    for cell in &table.column(attribute_id).values {
        if cell.is_null() {
            continue;
        }
        let text = cell.render();
        match seen.get(&fold_case(&text)) {
            Some(&i) => out[i].frequency += 1,
            None => {
                seen.insert(fold_case(&text), out.len());
                out.push(ValueEntry {
                    normalized_text: normalize_phrase(&text),
                    canonical_text: text,
                    attribute_id,
                    frequency: 1,
                });
            }
        }
    }
    Ok(out)
}

/// Runs the whole index-creation pass over a table.
pub fn create_index(
    table: &Table,
    policy: &CategoricalPolicy,
    provider: &dyn SynonymProvider,
) -> Result<VocabIndex, VocabError> {
    let profiles = table.attribute_profiles(policy);
    let categorical = filter_categorical_attributes(&profiles, policy);
    let value_sets = categorical
        .iter()
        .map(|&a| extract_unique_values(table, a, policy))
        .collect::<Result<Vec<_>, _>>()?;
    let names: Vec<&str> = profiles.iter().map(|p| p.normalized_name.as_str()).collect();
    let synonyms = generate_synonyms(&names, provider)?;
    Ok(build_inverse_index(
        &table.name,
        table.row_count(),
        profiles,
        synonyms,
        value_sets.into_iter().flatten().collect(),
    ))
}

/// Assembles the token, phrase and trigram maps. Value ids are positions in
/// `values`.
pub fn build_inverse_index(
    table_name: &str,
    row_count: usize,
    profiles: Vec<AttributeProfile>,
    synonyms: Vec<SynonymEntry>,
    values: Vec<ValueEntry>,
) -> VocabIndex {
    let mut token_map: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
    let mut phrase_map: BTreeMap<String, Vec<Posting>> = BTreeMap::new();

    let mut add = |text: &str, posting: Posting| {
        let tokens = tokenize(text);
        for t in &tokens {
            token_map.entry(t.clone()).or_default().push(posting);
        }
        if tokens.len() > 1 {
            phrase_map.entry(tokens.join(" ")).or_default().push(posting);
        }
    };
    for p in &profiles {
        add(
            &p.normalized_name,
            Posting::attribute(PostingKind::AttributeName, p.attribute_id),
        );
    }
    for s in &synonyms {
        add(
            &s.synonym_text,
            Posting::attribute(PostingKind::AttributeSynonym, s.attribute_id),
        );
    }
    for (id, v) in values.iter().enumerate() {
        add(&v.canonical_text, Posting::value(v.attribute_id, id));
    }
    for postings in token_map.values_mut().chain(phrase_map.values_mut()) {
        postings.sort();
        postings.dedup();
    }

    let terms: Vec<String> = token_map.keys().chain(phrase_map.keys()).cloned().collect();
    let term_lens: Vec<u32> = terms.iter().map(|t| t.chars().count() as u32).collect();
    let mut trigram_map: HashMap<String, Vec<u32>> = HashMap::new();
    let mut short_terms = HashMap::new();
    for (id, term) in terms.iter().enumerate() {
        let id = id as u32;
        if term_lens[id as usize] < 3 {
            short_terms.insert(term.clone(), id);
        } else {
            for g in trigrams(term) {
                trigram_map.entry(g).or_default().push(id);
            }
        }
    }
    for ids in trigram_map.values_mut() {
        ids.sort_by_key(|&id| (term_lens[id as usize], id));
    }

    VocabIndex {
        table_name: table_name.to_string(),
        row_count,
        profiles,
        values,
        synonyms,
        token_map,
        phrase_map,
        terms,
        term_lens,
        trigram_map,
        short_terms,
    }
}

impl VocabIndex {
    pub fn table_name(&self) -> &str {
        &self.table_name
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn profiles(&self) -> &[AttributeProfile] {
        &self.profiles
    }

    pub fn profile(&self, attribute_id: usize) -> &AttributeProfile {
        &self.profiles[attribute_id]
    }

    pub fn values(&self) -> &[ValueEntry] {
        &self.values
    }

    pub fn value(&self, value_id: usize) -> &ValueEntry {
        &self.values[value_id]
    }

    pub fn synonyms(&self) -> &[SynonymEntry] {
        &self.synonyms
    }

    pub fn token_map(&self) -> &BTreeMap<String, Vec<Posting>> {
        &self.token_map
    }

    pub fn phrase_map(&self) -> &BTreeMap<String, Vec<Posting>> {
        &self.phrase_map
    }

    /// Terms registered under a trigram (or, for terms shorter than three
    /// characters, under the term itself).
    pub fn trigram_terms(&self, gram: &str) -> Vec<&str> {
        let ids = self
            .trigram_map
            .get(gram)
            .cloned()
            .or_else(|| self.short_terms.get(gram).map(|&i| vec![i]))
            .unwrap_or_default();
        ids.into_iter().map(|i| self.terms[i as usize].as_str()).collect()
    }

    pub fn attribute_id(&self, name: &str) -> Option<usize> {
        let wanted = crate::table::normalize_identifier(name)?;
        self.profiles.iter().position(|p| p.normalized_name == wanted)
    }

    pub fn dtype(&self, attribute_id: usize) -> DataType {
        self.profiles[attribute_id].dtype
    }

    /// Values indexed for an attribute, in value-id order.
    pub fn attribute_values(&self, attribute_id: usize) -> impl Iterator<Item = (usize, &ValueEntry)> {
        self.values
            .iter()
            .enumerate()
            .filter(move |(_, v)| v.attribute_id == attribute_id)
    }

    pub fn is_indexed_attribute(&self, attribute_id: usize) -> bool {
        self.values.iter().any(|v| v.attribute_id == attribute_id)
    }

    /// How common the thing a posting points at is; used for tie-breaks and
    /// ranking.
    pub fn posting_frequency(&self, posting: &Posting) -> usize {
        match posting.value_id {
            Some(v) => self.values[v].frequency,
            None => self.row_count,
        }
    }

    pub fn max_value_frequency(&self) -> usize {
        self.values.iter().map(|v| v.frequency).max().unwrap_or(1)
    }

    /// Text a posting stands for: the attribute's name or the value's
    /// canonical text.
    pub fn display_text(&self, posting: &Posting) -> &str {
        match posting.value_id {
            Some(v) => &self.values[v].canonical_text,
            None => &self.profiles[posting.attribute_id].name,
        }
    }

    fn postings_for(&self, term: &str) -> &[Posting] {
        let map = if term.contains(' ') {
            &self.phrase_map
        } else {
            &self.token_map
        };
        map.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn lookup(&self, term: &str, mode: LookupMode) -> Vec<LookupHit> {
        let norm = normalize_phrase(term);
        if norm.is_empty() {
            return Vec::new();
        }
        let mut hits = match mode {
            LookupMode::Exact => self.exact_hits(&norm),
            LookupMode::Prefix => self.prefix_hits(&norm),
            LookupMode::Fuzzy => self.fuzzy_hits(&norm),
        };
        self.sort_hits(&mut hits);
        hits
    }

    fn exact_hits(&self, norm: &str) -> Vec<LookupHit> {
        self.postings_for(norm)
            .iter()
            .map(|&posting| LookupHit {
                posting,
                matched: norm.to_string(),
                distance: 0,
                score: 1.0,
            })
            .collect()
    }

    fn prefix_hits(&self, norm: &str) -> Vec<LookupHit> {
        let map = if norm.contains(' ') {
            &self.phrase_map
        } else {
            &self.token_map
        };
        let len = norm.chars().count() as f64;
        map.range::<str, _>((std::ops::Bound::Included(norm), std::ops::Bound::Unbounded))
            .take_while(|(k, _)| k.starts_with(norm))
            .flat_map(|(k, postings)| {
                let score = len / k.chars().count() as f64;
                postings.iter().map(move |&posting| LookupHit {
                    posting,
                    matched: k.clone(),
                    distance: 0,
                    score,
                })
            })
            .collect()
    }

    /// Terms within the fuzzy threshold of `norm`, with their distances.
    pub fn fuzzy_terms(&self, norm: &str) -> Vec<(&str, usize)> {
        let query: Vec<char> = norm.chars().collect();
        if query.len() < 3 {
            return self
                .short_terms
                .get(norm)
                .map(|&i| vec![(self.terms[i as usize].as_str(), 0)])
                .unwrap_or_default();
        }
        let grams = trigrams(norm);
        // no candidate more than two characters longer or shorter can qualify
        let (lo, hi) = (query.len().saturating_sub(2) as u32, query.len() as u32 + 2);
        let mut shared = vec![0u16; self.terms.len()];
        let mut touched: Vec<u32> = Vec::new();
        for g in &grams {
            let Some(ids) = self.trigram_map.get(g) else {
                continue;
            };
            let start = ids.partition_point(|&id| self.term_lens[id as usize] < lo);
            let end = ids.partition_point(|&id| self.term_lens[id as usize] <= hi);
            for &id in &ids[start..end] {
                let c = &mut shared[id as usize];
                if *c == 0 {
                    touched.push(id);
                }
                *c += 1;
            }
        }
        touched.sort_unstable();
        let mut out = Vec::new();
        for id in touched {
            let count = shared[id as usize] as usize;
            let term = self.terms[id as usize].as_str();
            let len = self.term_lens[id as usize] as usize;
            let limit = fuzzy_threshold(len);
            // one edit touches at most four padded trigrams
            if len.abs_diff(query.len()) > limit || count + 4 * limit < grams.len() {
                continue;
            }
            let cand: Vec<char> = term.chars().collect();
            if let Some(d) = bounded_damerau_levenshtein(&query, &cand, limit) {
                out.push((term, d));
            }
        }
        out
    }

    fn fuzzy_hits(&self, norm: &str) -> Vec<LookupHit> {
        self.fuzzy_terms(norm)
            .into_iter()
            .flat_map(|(term, d)| {
                let score = 1.0 - d as f64 / term.chars().count() as f64;
                self.postings_for(term).iter().map(move |&posting| LookupHit {
                    posting,
                    matched: term.to_string(),
                    distance: d,
                    score,
                })
            })
            .collect()
    }

    fn sort_hits(&self, hits: &mut [LookupHit]) {
        hits.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| {
                    self.posting_frequency(&b.posting)
                        .cmp(&self.posting_frequency(&a.posting))
                })
                .then_with(|| a.matched.cmp(&b.matched))
                .then_with(|| self.display_text(&a.posting).cmp(self.display_text(&b.posting)))
                .then_with(|| a.posting.cmp(&b.posting))
        });
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::table::{load_table, CsvOptions};

    pub(crate) fn sales_table() -> Table {
        let csv = "product,customer,subregion,sales,profit\n\
                   OneView,Allianz,ANZ,100,10.0\n\
                   OneView,Allianz,ANZ,200,20.0\n\
                   Data Smasher,Costco,EMEA,50,5.0\n";
        load_table("sales", csv.as_bytes(), &CsvOptions::default()).unwrap()
    }

    pub(crate) fn sales_index() -> VocabIndex {
        let dict = SynonymDictionary::parse("profit: earnings, margin\nsales: revenue, turnover\n")
            .unwrap();
        create_index(&sales_table(), &CategoricalPolicy::default(), &dict).unwrap()
    }

    fn posting_values<'a>(index: &'a VocabIndex, hits: &[LookupHit]) -> Vec<(PostingKind, &'a str, &'a str)> {
        hits.iter()
            .map(|h| {
                (
                    h.posting.kind,
                    index.profile(h.posting.attribute_id).name.as_str(),
                    index.display_text(&h.posting),
                )
            })
            .collect()
    }

    #[test]
    fn categorical_filter() {
        let t = sales_table();
        let profiles = t.attribute_profiles(&CategoricalPolicy::default());
        assert_eq!(
            filter_categorical_attributes(&profiles, &CategoricalPolicy::default()),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn numeric_table_has_no_categorical_attributes() {
        let t = load_table("n", b"a,b\n1,2.5\n3,4.5\n", &CsvOptions::default()).unwrap();
        let profiles = t.attribute_profiles(&CategoricalPolicy::default());
        assert!(filter_categorical_attributes(&profiles, &CategoricalPolicy::default()).is_empty());
    }

    #[test]
    fn ten_distinct_of_ten_excluded() {
        let csv: String = std::iter::once("code".to_string())
            .chain((0..10).map(|i| format!("c{i}")))
            .collect::<Vec<_>>()
            .join("\n");
        let t = load_table("t", csv.as_bytes(), &CsvOptions::default()).unwrap();
        let profiles = t.attribute_profiles(&CategoricalPolicy::default());
        assert!(filter_categorical_attributes(&profiles, &CategoricalPolicy::default()).is_empty());
    }

    #[test]
    fn unique_values_counting() {
        let t = sales_table();
        let vals = extract_unique_values(&t, 1, &CategoricalPolicy::default()).unwrap();
        let got: Vec<_> = vals.iter().map(|v| (v.canonical_text.as_str(), v.frequency)).collect();
        assert_eq!(got, vec![("Allianz", 2), ("Costco", 1)]);
    }

    #[test]
    fn unique_values_case_folded() {
        let t = load_table(
            "t",
            b"customer,n\nallianz,1\nAllianz,2\n,3\nCostco,4\nCostco,5\n",
            &CsvOptions::default(),
        )
        .unwrap();
        let vals = extract_unique_values(&t, 0, &CategoricalPolicy::default()).unwrap();
        assert_eq!(vals[0].canonical_text, "allianz");
        assert_eq!(vals[0].frequency, 2);
        assert_eq!(vals.len(), 2);
    }

    #[test]
    fn all_null_column_has_no_values() {
        let t = load_table("t", b"customer,n\n,1\nNA,2\n", &CsvOptions::default()).unwrap();
        let policy = CategoricalPolicy::default();
        // an all-null text column has no distinct values, so it is not categorical
        assert!(matches!(
            extract_unique_values(&t, 0, &policy),
            Err(VocabError::NotCategorical(_))
        ));
    }

    #[test]
    fn not_categorical_is_an_error() {
        let t = sales_table();
        assert!(matches!(
            extract_unique_values(&t, 3, &CategoricalPolicy::default()),
            Err(VocabError::NotCategorical(name)) if name == "sales"
        ));
    }

    #[test]
    fn value_postings() {
        let index = sales_index();
        let hits = index.lookup("oneview", LookupMode::Exact);
        assert_eq!(
            posting_values(&index, &hits),
            vec![(PostingKind::Value, "product", "OneView")]
        );
        let smasher = index.lookup("smasher", LookupMode::Exact);
        let phrase = index.lookup("data smasher", LookupMode::Exact);
        assert_eq!(smasher.len(), 1);
        assert_eq!(smasher[0].posting, phrase[0].posting);
        assert_eq!(index.display_text(&phrase[0].posting), "Data Smasher");
    }

    #[test]
    fn exact_lookups() {
        let index = sales_index();
        assert_eq!(
            posting_values(&index, &index.lookup("ANZ", LookupMode::Exact)),
            vec![(PostingKind::Value, "subregion", "ANZ")]
        );
        assert!(index.lookup("zzz", LookupMode::Exact).is_empty());
        assert!(index.lookup("  ", LookupMode::Exact).is_empty());
        assert_eq!(
            posting_values(&index, &index.lookup("earnings", LookupMode::Exact)),
            vec![(PostingKind::AttributeSynonym, "profit", "profit")]
        );
    }

    #[test]
    fn fuzzy_alianz() {
        let index = sales_index();
        let hits = index.lookup("alianz", LookupMode::Fuzzy);
        assert_eq!(hits.len(), 1);
        assert_eq!(index.display_text(&hits[0].posting), "Allianz");
        assert_eq!(hits[0].distance, 1);
        assert!((hits[0].score - (1.0 - 1.0 / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn fuzzy_matches_merged_phrase() {
        let index = sales_index();
        let hits = index.lookup("datasmasher", LookupMode::Fuzzy);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].matched, "data smasher");
    }

    #[test]
    fn short_terms_only_match_exactly() {
        let index = sales_index();
        assert!(index.lookup("an", LookupMode::Fuzzy).is_empty());
        assert!(index.lookup("anx", LookupMode::Fuzzy).is_empty());
        assert_eq!(index.lookup("anz", LookupMode::Fuzzy).len(), 1);
    }

    #[test]
    fn prefix_lookup() {
        let index = sales_index();
        let hits = index.lookup("subreg", LookupMode::Prefix);
        assert_eq!(
            posting_values(&index, &hits),
            vec![(PostingKind::AttributeName, "subregion", "subregion")]
        );
        assert!((hits[0].score - 6.0 / 9.0).abs() < 1e-12);
        let phrase = index.lookup("data sm", LookupMode::Prefix);
        assert_eq!(phrase[0].matched, "data smasher");
    }

    #[test]
    fn no_values_means_only_attribute_postings() {
        let t = load_table("n", b"a,b\n1,2.5\n3,4.5\n", &CsvOptions::default()).unwrap();
        let index = create_index(&t, &CategoricalPolicy::default(), &NoSynonyms).unwrap();
        assert!(index.values().is_empty());
        assert!(index
            .token_map()
            .values()
            .flatten()
            .all(|p| p.kind == PostingKind::AttributeName));
    }

    #[test]
    fn trigram_map_covers_every_token() {
        let index = sales_index();
        for token in index.token_map().keys() {
            let grams = if token.chars().count() < 3 {
                vec![token.clone()]
            } else {
                trigrams(token)
            };
            for g in grams {
                assert!(index.trigram_terms(&g).contains(&token.as_str()), "{token} / {g}");
            }
        }
    }
}
