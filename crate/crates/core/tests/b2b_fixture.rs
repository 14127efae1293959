use roundtable_core::bench::{compare_reports, load_question_set, run_eval, Category, FailureClass};
use roundtable_core::llm::MockProvider;
use roundtable_core::pipeline::{Mode, Pipeline};
use roundtable_core::schema::{PromptTemplate, Stopwords};
use roundtable_core::table::{load_table, CategoricalPolicy, CsvOptions};
use roundtable_core::vocab::{create_index, SynonymDictionary};

const CSV: &[u8] = include_bytes!("../../../fixtures/b2b_sales.csv");
const QUESTIONS: &str = include_str!("../../../fixtures/b2b_questions.jsonl");

#[test]
fn fixture_bench_directions() {
    let table = load_table("b2b_sales", CSV, &CsvOptions::default()).unwrap();
    let index = create_index(&table, &CategoricalPolicy::default(), &SynonymDictionary::builtin()).unwrap();
    let (stopwords, template) = (Stopwords::builtin(), PromptTemplate::builtin());
    let provider = MockProvider::builtin();
    let p = Pipeline {
        table: &table,
        index: &index,
        stopwords: &stopwords,
        template: &template,
        provider: &provider,
    };
    let records = load_question_set(QUESTIONS).unwrap();
    assert_eq!(records.len(), 30);
    let with = run_eval(&records, &p, Mode::WithFramework);
    let without = run_eval(&records, &p, Mode::WithoutFramework);
    for o in with.outcomes.iter().filter(|o| o.class != FailureClass::Correct) {
        eprintln!("with: {} {:?} {:?} {:?}", o.id, o.class, o.generated_sql, o.detail);
    }
    assert_eq!(with.overall.correct, 30);
    let gain = compare_reports(&with, &without).unwrap();
    let value = gain.rows.iter().find(|r| r.category == Some(Category::ValueBased)).unwrap();
    assert!(value.delta > 0.0);
    let generic = gain.rows.iter().find(|r| r.category == Some(Category::Generic)).unwrap();
    assert_eq!(generic.delta, 0.0);
    print!("{}", gain.render_text());
}
