//! Labeled question sets, seeded augmentation, with/without-framework
//! evaluation runs and gain tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pipeline::{Mode, Pipeline, Stage};
use crate::sql::{execute, parse_sql, results_equivalent};
use crate::text::normalize_phrase;
use crate::vocab::VocabIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Difficulty {
    Easy,
    Medium,
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Generic,
    ValueBased,
}

impl Difficulty {
    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Hard => "hard",
        }
    }
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Generic => "generic",
            Category::ValueBased => "value_based",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalRecord {
    pub id: String,
    pub question: String,
    pub gold_sql: String,
    pub difficulty: Difficulty,
    pub category: Category,
    pub dataset: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("line {line}: {reason}")]
    BadRecord { line: usize, reason: String },
    #[error("augmentation not applicable: {0}")]
    NotApplicable(String),
    #[error("reports cover different question sets")]
    MismatchedSets,
    #[error("{0}")]
    Io(String),
}

/// Parses line-JSON question records. Blank lines are skipped; line numbers
/// in errors are 1-based.
pub fn load_question_set(text: &str) -> Result<Vec<EvalRecord>, BenchError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| BenchError::BadRecord {
            line: line_no,
            reason,
        };
        let record: EvalRecord = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        if record.id.trim().is_empty() {
            return Err(bad("empty id".into()));
        }
        if record.question.trim().is_empty() {
            return Err(bad("empty question".into()));
        }
        if !seen.insert(record.id.clone()) {
            return Err(bad(format!("duplicate id {}", record.id)));
        }
        parse_sql(&record.gold_sql).map_err(|e| bad(format!("gold_sql: {e}")))?;
        out.push(record);
    }
    Ok(out)
}

pub fn read_question_set(path: &std::path::Path) -> Result<Vec<EvalRecord>, BenchError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| BenchError::Io(format!("{}: {e}", path.display())))?;
    load_question_set(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technique {
    SynonymReplacement,
    WordDeletion,
    PositionSwap,
    SentenceShuffle,
}

impl Technique {
    pub const ALL: [Technique; 4] = [
        Technique::SynonymReplacement,
        Technique::WordDeletion,
        Technique::PositionSwap,
        Technique::SentenceShuffle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Technique::SynonymReplacement => "synonym_replacement",
            Technique::WordDeletion => "word_deletion",
            Technique::PositionSwap => "position_swap",
            Technique::SentenceShuffle => "sentence_shuffle",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Technique {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Technique::ALL
            .into_iter()
            .find(|t| t.as_str() == s.replace('-', "_"))
            .ok_or_else(|| format!("unknown technique {s:?}"))
    }
}

/// Connective words and their stand-ins.
const REPLACEMENTS: &[(&str, &str)] = &[
    ("of", "in"),
    ("in", "within"),
    ("for", "of"),
    ("from", "by"),
    ("by", "from"),
    ("is", "was"),
    ("was", "is"),
    ("what", "which"),
    ("which", "what"),
    ("the", "a"),
    ("to", "for"),
    ("made", "generated"),
    ("give", "show"),
    ("show", "list"),
    ("each", "every"),
    ("many", "much"),
    ("would", "will"),
];

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}

struct Word {
    text: String,
    protected: bool,
}

fn split_words(question: &str, index: &VocabIndex) -> Vec<Word> {
    question
        .split_whitespace()
        .map(|w| {
            let norm = normalize_phrase(w);
            let protected = !norm.is_empty()
                && norm.split(' ').any(|t| index.token_map().contains_key(t));
            Word {
                text: w.to_string(),
                protected,
            }
        })
        .collect()
}

/// Splits `word` into leading punctuation, core, trailing punctuation.
fn core_parts(word: &str) -> (&str, &str, &str) {
    let start = word.find(|c: char| c.is_alphanumeric()).unwrap_or(word.len());
    let end = word
        .rfind(|c: char| c.is_alphanumeric())
        .map(|i| i + word[i..].chars().next().unwrap().len_utf8())
        .unwrap_or(start);
    (&word[..start], &word[start..end], &word[end..])
}

fn replace_word(word: &str) -> Option<String> {
    let (lead, core, trail) = core_parts(word);
    let lower = core.to_lowercase();
    let (_, to) = REPLACEMENTS.iter().find(|(from, _)| *from == lower)?;
    let mut replaced = to.to_string();
    if core.chars().next().is_some_and(char::is_uppercase) {
        let mut chars = replaced.chars();
        let first = chars.next().unwrap().to_uppercase().collect::<String>();
        replaced = first + chars.as_str();
    }
    Some(format!("{lead}{replaced}{trail}"))
}

fn clauses(question: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    for c in question.chars() {
        current.push(c);
        if matches!(c, '.' | '?' | '!' | ',' | ';') {
            let piece = current.trim().to_string();
            if !piece.is_empty() {
                out.push(piece);
            }
            current.clear();
        }
    }
    if !current.trim().is_empty() {
        out.push(current.trim().to_string());
    }
    out
}

/// Perturbs the question text with one technique. Words that occur in the
/// index are never deleted or replaced. Identical (record, technique, seed)
/// always give the same variant.
pub fn augment_question(
    record: &EvalRecord,
    technique: Technique,
    seed: u64,
    index: &VocabIndex,
) -> Result<EvalRecord, BenchError> {
    let key = format!("{}/{}", record.id, technique);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(key.as_bytes()));
    let mut words = split_words(&record.question, index);
    let na = |why: &str| Err(BenchError::NotApplicable(format!("{technique} on {}: {why}", record.id)));
    let free: Vec<usize> = (0..words.len()).filter(|&i| !words[i].protected).collect();

    let question = match technique {
        Technique::SynonymReplacement => {
            let candidates: Vec<usize> = free
                .iter()
                .copied()
                .filter(|&i| replace_word(&words[i].text).is_some())
                .collect();
            let Some(&pick) = candidates.choose(&mut rng) else {
                return na("no replaceable connective word");
            };
            words[pick].text = replace_word(&words[pick].text).unwrap();
            join(&words)
        }
        Technique::WordDeletion => {
            if words.len() < 3 {
                return na("fewer than 3 words");
            }
            let Some(&pick) = free.choose(&mut rng) else {
                return na("every word is protected");
            };
            let removed = words.remove(pick);
            // keep sentence-final punctuation on the new last word
            let (_, _, trail) = core_parts(&removed.text);
            if pick == words.len() && !trail.is_empty() {
                words.last_mut().unwrap().text.push_str(trail);
            }
            join(&words)
        }
        Technique::PositionSwap => {
            if words.len() < 2 {
                return na("fewer than 2 words");
            }
            if free.len() < 2 {
                return na("fewer than 2 unprotected words");
            }
            let a = rng.gen_range(0..free.len());
            let mut b = rng.gen_range(0..free.len() - 1);
            if b >= a {
                b += 1;
            }
            let (i, j) = (free[a], free[b]);
            let (li, ci, ti) = core_parts(&words[i].text);
            let (lj, cj, tj) = core_parts(&words[j].text);
            let (wi, wj) = (format!("{li}{cj}{ti}"), format!("{lj}{ci}{tj}"));
            words[i].text = wi;
            words[j].text = wj;
            join(&words)
        }
        Technique::SentenceShuffle => {
            if words.len() < 2 {
                return na("fewer than 2 words");
            }
            let mut parts = clauses(&record.question);
            if parts.len() < 2 {
                return na("only one clause");
            }
            let original = parts.clone();
            parts.shuffle(&mut rng);
            if parts == original {
                parts.rotate_left(1);
            }
            parts.join(" ")
        }
    };
    Ok(EvalRecord {
        id: format!("{}+{}", record.id, technique),
        question,
        ..record.clone()
    })
}

fn join(words: &[Word]) -> String {
    words.iter().map(|w| w.text.as_str()).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureClass {
    NoQuery,
    ParseError,
    WrongResult,
    Correct,
}

impl FailureClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureClass::NoQuery => "no-query",
            FailureClass::ParseError => "parse-error",
            FailureClass::WrongResult => "wrong-result",
            FailureClass::Correct => "correct",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: String,
    pub dataset: String,
    pub category: Category,
    pub difficulty: Difficulty,
    pub generated_sql: Option<String>,
    pub class: FailureClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
}

impl Tally {
    fn add(&mut self, correct: bool) {
        self.total += 1;
        self.correct += correct as usize;
        self.accuracy = self.correct as f64 / self.total as f64;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub dataset: String,
    pub category: Category,
    pub difficulty: Difficulty,
    #[serde(flatten)]
    pub tally: Tally,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub mode: Mode,
    pub cells: Vec<ReportCell>,
    pub overall: Tally,
    /// Sorted by question id.
    pub outcomes: Vec<Outcome>,
}

fn score(record: &EvalRecord, pipeline: &Pipeline<'_>, mode: Mode) -> Outcome {
    let mut outcome = Outcome {
        id: record.id.clone(),
        dataset: record.dataset.clone(),
        category: record.category,
        difficulty: record.difficulty,
        generated_sql: None,
        class: FailureClass::WrongResult,
        detail: None,
    };
    let resp = match pipeline.ask(&record.question, true, mode) {
        Ok(r) => r,
        Err(e) => {
            outcome.class = FailureClass::NoQuery;
            outcome.detail = Some(e.to_string());
            return outcome;
        }
    };
    outcome.generated_sql = resp.generated_query.as_ref().map(|g| g.sql_text.clone());
    if let Some(err) = &resp.error {
        outcome.class = match err.stage {
            Stage::Schema | Stage::Generate => FailureClass::NoQuery,
            Stage::Parse => FailureClass::ParseError,
            Stage::Validate | Stage::Execute => FailureClass::WrongResult,
        };
        outcome.detail = Some(format!("{}: {}", err.kind, err.message));
        return outcome;
    }
    let gold = parse_sql(&record.gold_sql)
        .map_err(|e| e.to_string())
        .and_then(|q| execute(&q, pipeline.table).map_err(|e| e.to_string()));
    match (gold, resp.answer) {
        (Ok(gold), Some(answer)) if results_equivalent(&gold, &answer) => {
            outcome.class = FailureClass::Correct;
        }
        (Ok(_), _) => outcome.detail = Some("result differs from gold".into()),
        (Err(e), _) => outcome.detail = Some(format!("gold query failed: {e}")),
    }
    outcome
}

/// Runs every record through the pipeline. Questions are scored in
/// parallel; per-question failures are classified, never raised.
pub fn run_eval(records: &[EvalRecord], pipeline: &Pipeline<'_>, mode: Mode) -> EvalReport {
    let mut outcomes: Vec<Outcome> = records.par_iter().map(|r| score(r, pipeline, mode)).collect();
    outcomes.sort_by(|a, b| a.id.cmp(&b.id));
    let mut cells: BTreeMap<(String, Category, Difficulty), Tally> = BTreeMap::new();
    let mut overall = Tally::default();
    for o in &outcomes {
        let ok = o.class == FailureClass::Correct;
        cells
            .entry((o.dataset.clone(), o.category, o.difficulty))
            .or_default()
            .add(ok);
        overall.add(ok);
    }
    EvalReport {
        mode,
        cells: cells
            .into_iter()
            .map(|((dataset, category, difficulty), tally)| ReportCell {
                dataset,
                category,
                difficulty,
                tally,
            })
            .collect(),
        overall,
        outcomes,
    }
}

impl EvalReport {
    /// Accuracy per (dataset, category), difficulties merged.
    pub fn by_category(&self) -> BTreeMap<(String, Category), Tally> {
        let mut out: BTreeMap<(String, Category), Tally> = BTreeMap::new();
        for o in &self.outcomes {
            out.entry((o.dataset.clone(), o.category))
                .or_default()
                .add(o.class == FailureClass::Correct);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "mode: {}", self.mode).unwrap();
        writeln!(
            s,
            "{:<14} {:<12} {:<10} {:>5} {:>7} {:>8}",
            "dataset", "category", "difficulty", "total", "correct", "accuracy"
        )
        .unwrap();
        for c in &self.cells {
            writeln!(
                s,
                "{:<14} {:<12} {:<10} {:>5} {:>7} {:>8.4}",
                c.dataset,
                c.category.as_str(),
                c.difficulty.as_str(),
                c.tally.total,
                c.tally.correct,
                c.tally.accuracy
            )
            .unwrap();
        }
        writeln!(
            s,
            "{:<14} {:<12} {:<10} {:>5} {:>7} {:>8.4}",
            "overall", "", "", self.overall.total, self.overall.correct, self.overall.accuracy
        )
        .unwrap();
        for o in &self.outcomes {
            write!(s, "  {:<24} {:<12}", o.id, o.class.as_str()).unwrap();
            if let Some(sql) = &o.generated_sql {
                write!(s, " {sql}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainRow {
    pub dataset: String,
    /// `None` on the overall row of a dataset.
    pub category: Option<Category>,
    pub with_accuracy: f64,
    pub without_accuracy: f64,
    /// Percentage points.
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainTable {
    pub rows: Vec<GainRow>,
    pub overall: GainRow,
}

fn gain_row(dataset: &str, category: Option<Category>, with: f64, without: f64) -> GainRow {
    GainRow {
        dataset: dataset.to_string(),
        category,
        with_accuracy: with,
        without_accuracy: without,
        delta: (with - without) * 100.0,
    }
}

pub fn compare_reports(with: &EvalReport, without: &EvalReport) -> Result<GainTable, BenchError> {
    let ids = |r: &EvalReport| r.outcomes.iter().map(|o| o.id.clone()).collect::<BTreeSet<_>>();
    if ids(with) != ids(without) {
        return Err(BenchError::MismatchedSets);
    }
    let (a, b) = (with.by_category(), without.by_category());
    let mut rows: Vec<GainRow> = a
        .iter()
        .map(|((dataset, cat), t)| gain_row(dataset, Some(*cat), t.accuracy, b[&(dataset.clone(), *cat)].accuracy))
        .collect();
    let mut per_dataset: BTreeMap<&str, (Tally, Tally)> = BTreeMap::new();
    for (o, p) in with.outcomes.iter().zip(&without.outcomes) {
        let e = per_dataset.entry(&o.dataset).or_default();
        e.0.add(o.class == FailureClass::Correct);
        e.1.add(p.class == FailureClass::Correct);
    }
    if per_dataset.len() > 1 {
        rows.extend(
            per_dataset
                .iter()
                .map(|(d, (x, y))| gain_row(d, None, x.accuracy, y.accuracy)),
        );
    }
    Ok(GainTable {
        rows,
        overall: gain_row("overall", None, with.overall.accuracy, without.overall.accuracy),
    })
}

impl GainTable {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "{:<14} {:<12} {:>8} {:>8} {:>9}",
            "dataset", "category", "with", "without", "gain(pp)"
        )
        .unwrap();
        for r in self.rows.iter().chain(std::iter::once(&self.overall)) {
            writeln!(
                s,
                "{:<14} {:<12} {:>8.4} {:>8.4} {:>+9.2}",
                r.dataset,
                r.category.map_or("all", Category::as_str),
                r.with_accuracy,
                r.without_accuracy,
                r.delta
            )
            .unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::MockProvider;
    use crate::schema::{PromptTemplate, Stopwords};
    use crate::vocab::tests::{sales_index, sales_table};

    fn record(id: &str, question: &str, category: Category) -> EvalRecord {
        EvalRecord {
            id: id.into(),
            question: question.into(),
            gold_sql: "SELECT COUNT(*) FROM sales".into(),
            difficulty: Difficulty::Easy,
            category,
            dataset: "sales".into(),
        }
    }

    #[test]
    fn loads_records_and_rejects_bad_ones() {
        let good = r#"{"id":"v02","question":"What is the total sales made by APJ-2023-127341?","gold_sql":"SELECT SUM(sales) FROM b2b_sales WHERE order_id = 'APJ-2023-127341'","difficulty":"easy","category":"value_based","dataset":"b2b_sales"}"#;
        let set = load_question_set(&format!("{good}\n\n")).unwrap();
        assert_eq!(set[0].category, Category::ValueBased);

        let extreme = good.replace("\"easy\"", "\"extreme\"");
        assert!(matches!(
            load_question_set(&extreme),
            Err(BenchError::BadRecord { line: 1, .. })
        ));
        let join = good.replace("FROM b2b_sales", "FROM b2b_sales JOIN other ON a = b");
        let err = load_question_set(&format!("{good}\n{}", join.replace("v02", "v03"))).unwrap_err();
        match err {
            BenchError::BadRecord { line, reason } => {
                assert_eq!(line, 2);
                assert!(reason.contains("join"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
        assert!(load_question_set(&format!("{good}\n{good}")).is_err());
    }

    #[test]
    fn synonym_replacement_of_to_in() {
        let idx = sales_index();
        let r = record("q", "What is the standard deviation of the profit", Category::Generic);
        let outs: BTreeSet<String> = (0..40)
            .map(|seed| augment_question(&r, Technique::SynonymReplacement, seed, &idx).unwrap().question)
            .collect();
        assert!(outs.contains("What is the standard deviation in the profit"));
        assert!(outs.iter().all(|q| q.ends_with("profit")));
    }

    #[test]
    fn word_deletion_keeps_values() {
        let idx = sales_index();
        let r = record(
            "q",
            "What is the average profit from selling OneView to Allianz",
            Category::ValueBased,
        );
        assert_eq!(r.question.split_whitespace().count(), 10);
        let v = augment_question(&r, Technique::WordDeletion, 7, &idx).unwrap();
        assert_eq!(v.question.split_whitespace().count(), 9);
        for w in ["OneView", "Allianz", "profit"] {
            assert!(v.question.contains(w));
        }
        assert_eq!(v.gold_sql, r.gold_sql);
        assert_eq!(v, augment_question(&r, Technique::WordDeletion, 7, &idx).unwrap());
    }

    #[test]
    fn guards() {
        let idx = sales_index();
        let one = record("q", "profit", Category::Generic);
        for t in Technique::ALL {
            assert!(matches!(
                augment_question(&one, t, 1, &idx),
                Err(BenchError::NotApplicable(_))
            ));
        }
    }

    #[test]
    fn shuffle_and_swap() {
        let idx = sales_index();
        let r = record("q", "For OneView, what is the profit?", Category::ValueBased);
        let v = augment_question(&r, Technique::SentenceShuffle, 3, &idx).unwrap();
        assert_eq!(v.question, "what is the profit? For OneView,");
        let s = augment_question(&r, Technique::PositionSwap, 3, &idx).unwrap();
        assert_ne!(s.question, r.question);
        assert!(s.question.contains("OneView,") && s.question.contains("profit?"));
    }

    fn pipeline_run(records: &[EvalRecord], provider: &MockProvider, mode: Mode) -> EvalReport {
        let (table, index) = (sales_table(), sales_index());
        let (stopwords, template) = (Stopwords::builtin(), PromptTemplate::builtin());
        let p = Pipeline {
            table: &table,
            index: &index,
            stopwords: &stopwords,
            template: &template,
            provider,
        };
        run_eval(records, &p, mode)
    }

    #[test]
    fn classifies_outcomes() {
        use crate::llm::MockRule;
        let provider = MockProvider::new(vec![
            MockRule::new("a", vec!["Question: count rows".into()], "SELECT COUNT(*) FROM sales"),
            MockRule::new("b", vec!["Question: count wrong".into()], "SELECT SUM(sales) FROM sales"),
            MockRule::new("c", vec!["Question: broken".into()], "SELECT FROM sales"),
            MockRule::new("d", vec!["Question: prose".into()], "no idea"),
        ]);
        let records = vec![
            record("1", "count rows", Category::Generic),
            record("2", "count wrong", Category::Generic),
            record("3", "broken", Category::ValueBased),
            record("4", "prose", Category::ValueBased),
        ];
        let report = pipeline_run(&records, &provider, Mode::WithFramework);
        let classes: Vec<FailureClass> = report.outcomes.iter().map(|o| o.class).collect();
        assert_eq!(
            classes,
            [
                FailureClass::Correct,
                FailureClass::WrongResult,
                FailureClass::ParseError,
                FailureClass::NoQuery
            ]
        );
        assert_eq!(report.overall.total, 4);
        assert_eq!(report.overall.correct, 1);
        assert_eq!(report.overall.accuracy, 0.25);
    }

    #[test]
    fn empty_run_and_comparisons() {
        let provider = MockProvider::new(vec![]);
        let empty = pipeline_run(&[], &provider, Mode::WithFramework);
        assert_eq!(empty.overall, Tally::default());
        assert!(empty.cells.is_empty());

        let records = vec![record("1", "count rows", Category::ValueBased)];
        let same = pipeline_run(&records, &provider, Mode::WithFramework);
        let gain = compare_reports(&same, &same).unwrap();
        assert!(gain.rows.iter().all(|r| r.delta == 0.0));
        assert_eq!(compare_reports(&same, &empty), Err(BenchError::MismatchedSets));
    }

    #[test]
    fn gain_in_points() {
        let mk = |correct: usize| EvalReport {
            mode: Mode::WithFramework,
            cells: vec![],
            overall: Tally {
                total: 5,
                correct,
                accuracy: correct as f64 / 5.0,
            },
            outcomes: (0..5)
                .map(|i| Outcome {
                    id: i.to_string(),
                    dataset: "d".into(),
                    category: Category::ValueBased,
                    difficulty: Difficulty::Easy,
                    generated_sql: None,
                    class: if i < correct {
                        FailureClass::Correct
                    } else {
                        FailureClass::WrongResult
                    },
                    detail: None,
                })
                .collect(),
        };
        let g = compare_reports(&mk(4), &mk(3)).unwrap();
        assert!((g.rows[0].delta - 20.0).abs() < 1e-9);
        assert!((g.overall.delta - 20.0).abs() < 1e-9);
    }
}
