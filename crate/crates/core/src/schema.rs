//! Question-specific schema pruning and prompt formulation.
//!
//! A question is split into keywords (longest index hit first, then loose
//! non-stopword unigrams), each keyword is searched in the vocabulary index,
//! and the hits are folded into a [`DynamicSchema`] listing only the
//! attributes the question touches, with the canonical values it mentions.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::table::{DataType, Table};
use crate::text::{normalize_phrase, tokenize};
use crate::vocab::{LookupMode, PostingKind, VocabIndex};

pub const MAX_RENDERED_VALUES: usize = 20;
pub const PREVIEW_ROWS: usize = 5;
pub const DEFAULT_DIALECT: &str = "sql-subset";

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SchemaError {
    #[error("question is empty")]
    EmptyQuery,
    #[error("bad prompt template: {0}")]
    BadTemplate(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserQuery {
    pub raw_text: String,
    pub normalized_tokens: Vec<String>,
}

impl UserQuery {
    pub fn new(raw: &str) -> Result<Self, SchemaError> {
        if raw.trim().is_empty() {
            return Err(SchemaError::EmptyQuery);
        }
        Ok(Self {
            raw_text: raw.to_string(),
            normalized_tokens: tokenize(raw),
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn builtin() -> Self {
        Self::parse(include_str!("../data/stopwords.txt"))
    }

    /// One word per line; `#` starts a comment.
    pub fn parse(text: &str) -> Self {
        Self(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty())
                .map(normalize_phrase)
                .collect(),
        )
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Keyword {
    pub text: String,
    /// Token range `[start, end)` in the normalized question.
    pub token_span: (usize, usize),
    pub ngram: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordSet {
    pub keywords: Vec<Keyword>,
    /// Token positions dropped as stopwords.
    pub dropped: Vec<usize>,
}

/// Longest-match-first keyword extraction. Trigrams and bigrams are kept only
/// when they are an exact index term; leftover tokens become unigram
/// keywords unless they are stopwords.
pub fn extract_keywords(query: &UserQuery, stopwords: &Stopwords, index: &VocabIndex) -> KeywordSet {
    let tokens = &query.normalized_tokens;
    let mut taken = vec![false; tokens.len()];
    let mut keywords = Vec::new();
    for n in [3usize, 2] {
        if tokens.len() < n {
            continue;
        }
        for start in 0..=tokens.len() - n {
            if taken[start..start + n].iter().any(|&t| t) {
                continue;
            }
            let phrase = tokens[start..start + n].join(" ");
            if index.phrase_map().contains_key(&phrase) {
                taken[start..start + n].iter_mut().for_each(|t| *t = true);
                keywords.push(Keyword {
                    text: phrase,
                    token_span: (start, start + n),
                    ngram: n,
                });
            }
        }
    }
    let mut dropped = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        if taken[i] {
            continue;
        }
        if stopwords.contains(tok) {
            dropped.push(i);
        } else {
            keywords.push(Keyword {
                text: tok.clone(),
                token_span: (i, i + 1),
                ngram: 1,
            });
        }
    }
    keywords.sort_by_key(|k| k.token_span.0);
    KeywordSet { keywords, dropped }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectMatch {
    pub attribute_id: usize,
    pub keyword: String,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndirectMatch {
    pub attribute_id: usize,
    pub value_id: usize,
    pub keyword: String,
    pub distance: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub direct: Vec<DirectMatch>,
    pub indirect: Vec<IndirectMatch>,
    pub unmatched: Vec<String>,
}

/// Exact lookup per keyword, falling back to fuzzy lookup (closest distance
/// only) when the exact lookup finds nothing.
pub fn search_index(keywords: &KeywordSet, index: &VocabIndex) -> SearchResult {
    let mut out = SearchResult::default();
    for kw in &keywords.keywords {
        let mut hits = index.lookup(&kw.text, LookupMode::Exact);
        if hits.is_empty() {
            hits = index.lookup(&kw.text, LookupMode::Fuzzy);
            if let Some(best) = hits.iter().map(|h| h.distance).min() {
                hits.retain(|h| h.distance == best);
            }
        }
        if hits.is_empty() {
            out.unmatched.push(kw.text.clone());
            continue;
        }
        for h in hits {
            match (h.posting.kind, h.posting.value_id) {
                (PostingKind::Value, Some(value_id)) => out.indirect.push(IndirectMatch {
                    attribute_id: h.posting.attribute_id,
                    value_id,
                    keyword: kw.text.clone(),
                    distance: h.distance,
                }),
                _ => out.direct.push(DirectMatch {
                    attribute_id: h.posting.attribute_id,
                    keyword: kw.text.clone(),
                    distance: h.distance,
                }),
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedValue {
    pub text: String,
    pub triggers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaAttribute {
    pub attribute_id: usize,
    pub name: String,
    pub dtype: DataType,
    pub triggers: Vec<String>,
    pub values: Vec<MatchedValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicSchema {
    pub table_name: String,
    pub row_count: usize,
    pub direct_attributes: Vec<SchemaAttribute>,
    pub indirect_attributes: Vec<SchemaAttribute>,
    pub unmatched_keywords: Vec<String>,
    /// Set when nothing matched and every column is listed instead.
    pub fallback: bool,
}

impl DynamicSchema {
    /// Attributes in rendering order: direct first, then indirect.
    pub fn attributes(&self) -> impl Iterator<Item = &SchemaAttribute> {
        self.direct_attributes.iter().chain(&self.indirect_attributes)
    }

    /// Canonical value bound to an attribute, if any.
    pub fn binds(&self, attribute: &str, value: &str) -> bool {
        self.attributes()
            .any(|a| a.name == attribute && a.values.iter().any(|v| v.text == value))
    }
}

#[derive(Default)]
struct Merge {
    triggers: BTreeSet<String>,
    values: BTreeMap<String, BTreeSet<String>>,
    direct: bool,
}

/// Folds search hits into per-attribute entries in column order. An
/// attribute hit both by name and by value is listed once, as direct, with
/// its values attached.
pub fn create_dynamic_schema(search: &SearchResult, index: &VocabIndex) -> DynamicSchema {
    let mut merged: BTreeMap<usize, Merge> = BTreeMap::new();
    for d in &search.direct {
        let m = merged.entry(d.attribute_id).or_default();
        m.direct = true;
        m.triggers.insert(d.keyword.clone());
    }
    for i in &search.indirect {
        let m = merged.entry(i.attribute_id).or_default();
        m.triggers.insert(i.keyword.clone());
        m.values
            .entry(index.value(i.value_id).canonical_text.clone())
            .or_default()
            .insert(i.keyword.clone());
    }
    let attribute = |id: usize, m: Merge| {
        let p = index.profile(id);
        SchemaAttribute {
            attribute_id: id,
            name: p.normalized_name.clone(),
            dtype: p.dtype,
            triggers: m.triggers.into_iter().collect(),
            values: m
                .values
                .into_iter()
                .map(|(text, t)| MatchedValue {
                    text,
                    triggers: t.into_iter().collect(),
                })
                .collect(),
        }
    };
    let mut schema = DynamicSchema {
        table_name: index.table_name().to_string(),
        row_count: index.row_count(),
        direct_attributes: Vec::new(),
        indirect_attributes: Vec::new(),
        unmatched_keywords: search.unmatched.clone(),
        fallback: merged.is_empty(),
    };
    if schema.fallback {
        schema.direct_attributes = (0..index.profiles().len())
            .map(|id| attribute(id, Merge::default()))
            .collect();
        return schema;
    }
    for (id, m) in merged {
        if m.direct {
            schema.direct_attributes.push(attribute(id, m));
        } else {
            schema.indirect_attributes.push(attribute(id, m));
        }
    }
    schema
}

fn quote(v: &str) -> String {
    format!("'{}'", v.replace('\'', "''"))
}

/// The schema block inserted into prompts.
pub fn render_schema(schema: &DynamicSchema) -> String {
    let mut out = format!("TABLE {} ({} rows)\n", schema.table_name, schema.row_count);
    for a in schema.attributes() {
        out.push_str(&format!("- {} ({})", a.name, a.dtype));
        if !a.values.is_empty() {
            let shown: Vec<String> = a
                .values
                .iter()
                .take(MAX_RENDERED_VALUES)
                .map(|v| quote(&v.text))
                .collect();
            out.push_str(" values: ");
            out.push_str(&shown.join(", "));
            if a.values.len() > MAX_RENDERED_VALUES {
                out.push_str(&format!(", …and {} more", a.values.len() - MAX_RENDERED_VALUES));
            }
        }
        out.push('\n');
    }
    out
}

/// Full column list plus the first rows of the table, as used without the
/// vocabulary index.
pub fn render_preview(table: &Table) -> String {
    let mut out = format!("TABLE {} ({} rows)\n", table.name, table.row_count());
    for c in table.columns() {
        out.push_str(&format!("- {} ({})\n", c.normalized_name, c.dtype));
    }
    let n = table.row_count().min(PREVIEW_ROWS);
    out.push_str(&format!("First {n} rows:\n"));
    let header: Vec<&str> = table.columns().iter().map(|c| c.normalized_name.as_str()).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for r in 0..n {
        let row: Vec<String> = table.row(r).iter().map(|c| c.render()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub text: String,
    pub dialect: String,
}

impl PromptTemplate {
    /// Requires `{schema}`, `{question}` and `{dialect}` exactly once each.
    pub fn new(text: &str, dialect: &str) -> Result<Self, SchemaError> {
        for p in ["{schema}", "{question}", "{dialect}"] {
            match text.matches(p).count() {
                1 => {}
                0 => return Err(SchemaError::BadTemplate(format!("missing {p}"))),
                n => return Err(SchemaError::BadTemplate(format!("{p} appears {n} times"))),
            }
        }
        Ok(Self {
            text: text.to_string(),
            dialect: dialect.to_string(),
        })
    }

    pub fn builtin() -> Self {
        Self::new(include_str!("../prompts/default.txt"), DEFAULT_DIALECT)
            .expect("bundled template is valid")
    }

    fn fill(&self, schema_block: &str, question: &str) -> String {
        // single pass so placeholder-like text inside the inputs is left alone
        let mut out = String::with_capacity(self.text.len() + schema_block.len() + question.len());
        let mut rest = self.text.as_str();
        while let Some(open) = rest.find('{') {
            out.push_str(&rest[..open]);
            let tail = &rest[open..];
            let (piece, len) = if tail.starts_with("{schema}") {
                (schema_block.trim_end(), "{schema}".len())
            } else if tail.starts_with("{question}") {
                (question, "{question}".len())
            } else if tail.starts_with("{dialect}") {
                (self.dialect.as_str(), "{dialect}".len())
            } else {
                ("{", 1)
            };
            out.push_str(piece);
            rest = &tail[len..];
        }
        out.push_str(rest);
        out
    }
}

pub fn formulate_prompt(schema: &DynamicSchema, template: &PromptTemplate, query: &UserQuery) -> String {
    template.fill(&render_schema(schema), query.raw_text.trim())
}

/// Prompt with the fixed five-row preview in place of the dynamic schema.
pub fn preview_prompt(table: &Table, template: &PromptTemplate, query: &UserQuery) -> String {
    template.fill(&render_preview(table), query.raw_text.trim())
}

/// Everything the schema stage produces for one question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaOutcome {
    pub keywords: KeywordSet,
    pub search: SearchResult,
    pub schema: DynamicSchema,
}

pub fn dynamic_schema_for(
    question: &UserQuery,
    stopwords: &Stopwords,
    index: &VocabIndex,
) -> SchemaOutcome {
    let keywords = extract_keywords(question, stopwords, index);
    let search = search_index(&keywords, index);
    let schema = create_dynamic_schema(&search, index);
    SchemaOutcome {
        keywords,
        search,
        schema,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{load_table, CategoricalPolicy, CsvOptions};
    use crate::vocab::tests::{sales_index, sales_table};
    use crate::vocab::{create_index, NoSynonyms};

    const EXAMPLE_QUESTION: &str = "What would be the average profit from selling OneView to Allianz in ANZ";

    fn texts(k: &KeywordSet) -> Vec<&str> {
        k.keywords.iter().map(|k| k.text.as_str()).collect()
    }

    fn schema_for(q: &str) -> DynamicSchema {
        dynamic_schema_for(&UserQuery::new(q).unwrap(), &Stopwords::builtin(), &sales_index()).schema
    }

    #[test]
    fn stopword_list_keeps_meaningful_words() {
        let s = Stopwords::builtin();
        assert!((100..=140).contains(&s.len()));
        for w in ["total", "average", "selling", "revenue", "anz", "sum", "count"] {
            assert!(!s.contains(w), "{w}");
        }
    }

    #[test]
    fn keywords_of_example_questions() {
        let idx = sales_index();
        let sw = Stopwords::builtin();
        let k = extract_keywords(
            &UserQuery::new("What was the total revenue from Dave of Costco?").unwrap(),
            &sw,
            &idx,
        );
        assert_eq!(texts(&k), vec!["total", "revenue", "dave", "costco"]);
        let k = extract_keywords(&UserQuery::new(EXAMPLE_QUESTION).unwrap(), &sw, &idx);
        assert_eq!(
            texts(&k),
            vec!["average", "profit", "selling", "oneview", "allianz", "anz"]
        );
        let k = extract_keywords(&UserQuery::new("what is the").unwrap(), &sw, &idx);
        assert!(k.keywords.is_empty());
        assert_eq!(k.dropped, vec![0, 1, 2]);
    }

    #[test]
    fn phrases_win_over_unigrams() {
        let k = extract_keywords(
            &UserQuery::new("sales trend of the Data Smasher").unwrap(),
            &Stopwords::builtin(),
            &sales_index(),
        );
        assert_eq!(texts(&k), vec!["sales", "trend", "data smasher"]);
        assert_eq!(k.keywords[2].token_span, (4, 6));
    }

    #[test]
    fn empty_question() {
        assert_eq!(UserQuery::new("  "), Err(SchemaError::EmptyQuery));
    }

    #[test]
    fn example_question_binds_values() {
        let s = schema_for(EXAMPLE_QUESTION);
        assert!(!s.fallback);
        let direct: Vec<&str> = s.direct_attributes.iter().map(|a| a.name.as_str()).collect();
        let indirect: Vec<&str> = s.indirect_attributes.iter().map(|a| a.name.as_str()).collect();
        assert_eq!(direct, vec!["profit"]);
        assert_eq!(indirect, vec!["product", "customer", "subregion"]);
        assert!(s.binds("product", "OneView"));
        assert!(s.binds("customer", "Allianz"));
        assert!(s.binds("subregion", "ANZ"));
    }

    #[test]
    fn misspelled_value_resolves() {
        let s = schema_for("average profit for alianz");
        assert!(s.binds("customer", "Allianz"));
        let s = schema_for("how did datasmasher do");
        assert!(s.binds("product", "Data Smasher"));
    }

    #[test]
    fn no_match_falls_back_to_full_schema() {
        let s = schema_for("zzz qqq");
        assert!(s.fallback);
        assert_eq!(s.direct_attributes.len(), 5);
        assert_eq!(s.unmatched_keywords, vec!["zzz", "qqq"]);
        let block = render_schema(&s);
        assert!(!block.contains("values:"));
    }

    #[test]
    fn value_shared_by_two_columns() {
        let t = load_table(
            "t",
            b"subregion,region,n\nANZ,ANZ,1\nEMEA,APJ,2\nANZ,APJ,3\nEMEA,ANZ,4\n",
            &CsvOptions::default(),
        )
        .unwrap();
        let idx = create_index(&t, &CategoricalPolicy::default(), &NoSynonyms).unwrap();
        let s = dynamic_schema_for(&UserQuery::new("sales in anz").unwrap(), &Stopwords::builtin(), &idx).schema;
        assert!(s.binds("subregion", "ANZ"));
        assert!(s.binds("region", "ANZ"));
    }

    #[test]
    fn render_grammar() {
        let s = schema_for(EXAMPLE_QUESTION);
        let block = render_schema(&s);
        assert_eq!(
            block,
            "TABLE sales (3 rows)\n\
             - profit (Float)\n\
             - product (Text) values: 'OneView'\n\
             - customer (Text) values: 'Allianz'\n\
             - subregion (Text) values: 'ANZ'\n"
        );
        let prompt = formulate_prompt(&s, &PromptTemplate::builtin(), &UserQuery::new(EXAMPLE_QUESTION).unwrap());
        assert!(prompt.contains("- customer (Text) values: 'Allianz'"));
        assert!(prompt.contains(&format!("Question: {EXAMPLE_QUESTION}")));
        assert!(prompt.contains(DEFAULT_DIALECT));
    }

    #[test]
    fn value_overflow_and_quoting() {
        let mut csv = String::from("name,n\n");
        for i in 0..30 {
            csv.push_str(&format!("O'Brien {i:02},1\nO'Brien {i:02},2\n"));
        }
        let t = load_table("t", csv.as_bytes(), &CsvOptions::default()).unwrap();
        let idx = create_index(&t, &CategoricalPolicy::default(), &NoSynonyms).unwrap();
        let s = dynamic_schema_for(&UserQuery::new("brien").unwrap(), &Stopwords::builtin(), &idx).schema;
        let block = render_schema(&s);
        assert!(block.contains("'O''Brien 00'"));
        assert!(block.contains(", …and 10 more\n"));
    }

    #[test]
    fn templates() {
        assert!(matches!(
            PromptTemplate::new("{question} {dialect}", "x"),
            Err(SchemaError::BadTemplate(_))
        ));
        assert!(matches!(
            PromptTemplate::new("{schema}{schema}{question}{dialect}", "x"),
            Err(SchemaError::BadTemplate(_))
        ));
        let t = PromptTemplate::new("[{dialect}] {schema} | {question}", "d").unwrap();
        let s = schema_for("zzz");
        let p = formulate_prompt(&s, &t, &UserQuery::new("what {schema}").unwrap());
        assert!(p.starts_with("[d] TABLE sales"));
        assert!(p.ends_with("| what {schema}"));
    }

    #[test]
    fn preview_has_five_rows() {
        let t = sales_table();
        let p = render_preview(&t);
        assert!(p.contains("First 3 rows:\nproduct,customer,subregion,sales,profit\nOneView,Allianz,ANZ,100,10.0\n"));
    }
}
