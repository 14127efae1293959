//! End-to-end question answering: schema pruning, prompting, generation,
//! validation and execution, with every intermediate artifact kept.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::llm::{generate_db_query, CompletionProvider, GeneratedQuery, LlmError};
use crate::schema::{
    dynamic_schema_for, formulate_prompt, preview_prompt, render_preview, render_schema,
    DynamicSchema, KeywordSet, PromptTemplate, SchemaError, Stopwords, UserQuery,
};
use crate::sql::{execute, parse_sql, validate, ParseError, ResultTable, ValidationReport};
use crate::table::Table;
use crate::vocab::VocabIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    WithFramework,
    WithoutFramework,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::WithFramework => "with_framework",
            Mode::WithoutFramework => "without_framework",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "with" | "with_framework" => Ok(Mode::WithFramework),
            "without" | "without_framework" => Ok(Mode::WithoutFramework),
            other => Err(format!("unknown mode {other:?} (expected with or without)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Schema,
    Generate,
    Parse,
    Validate,
    Execute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageError {
    pub stage: Stage,
    /// Short machine-readable class, e.g. `no-query`, `timeout`, `parse-error`.
    pub kind: String,
    pub message: String,
}

impl StageError {
    fn new(stage: Stage, kind: &str, message: impl Into<String>) -> Self {
        Self {
            stage,
            kind: kind.into(),
            message: message.into(),
        }
    }

    fn from_llm(e: &LlmError) -> Self {
        let kind = match e {
            LlmError::Timeout => "timeout",
            LlmError::HttpError { .. } => "http-error",
            LlmError::Transport(_) => "transport-error",
            LlmError::BadResponse(_) => "bad-response",
            LlmError::EmptyCompletion => "empty-completion",
            LlmError::NoQueryFound { .. } => "no-query",
            LlmError::Config(_) => "config-error",
        };
        Self::new(Stage::Generate, kind, e.to_string())
    }

    fn from_parse(e: &ParseError) -> Self {
        let kind = match e {
            ParseError::UnsupportedFeature(_) => "unsupported-feature",
            _ => "parse-error",
        };
        Self::new(Stage::Parse, kind, e.to_string())
    }
}

/// Wall-clock milliseconds per stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub schema_ms: f64,
    pub generate_ms: f64,
    pub parse_ms: f64,
    pub validate_ms: f64,
    pub execute_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AskResponse {
    pub question: String,
    pub mode: Mode,
    pub keywords: Option<KeywordSet>,
    pub dynamic_schema: Option<DynamicSchema>,
    /// Schema text as placed in the prompt.
    pub schema_block: String,
    pub prompt_used: String,
    pub generated_query: Option<GeneratedQuery>,
    /// The parsed query printed back in canonical form.
    pub canonical_sql: Option<String>,
    pub validation: Option<ValidationReport>,
    pub answer: Option<ResultTable>,
    pub error: Option<StageError>,
    pub timings: Timings,
}

impl AskResponse {
    /// JSON with timings zeroed; identical inputs give identical bytes.
    pub fn deterministic_json(&self) -> String {
        let mut copy = self.clone();
        copy.timings = Timings::default();
        serde_json::to_string(&copy).expect("response serializes")
    }
}

/// Everything an ask needs, borrowed.
#[derive(Clone, Copy)]
pub struct Pipeline<'a> {
    pub table: &'a Table,
    pub index: &'a VocabIndex,
    pub stopwords: &'a Stopwords,
    pub template: &'a PromptTemplate,
    pub provider: &'a dyn CompletionProvider,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

impl Pipeline<'_> {
    pub fn ask(&self, question: &str, execute_query: bool, mode: Mode) -> Result<AskResponse, SchemaError> {
        let started = Instant::now();
        let query = UserQuery::new(question)?;
        let mut timings = Timings::default();

        let t = Instant::now();
        let (keywords, dynamic_schema, schema_block, prompt) = match mode {
            Mode::WithFramework => {
                let outcome = dynamic_schema_for(&query, self.stopwords, self.index);
                let block = render_schema(&outcome.schema);
                let prompt = formulate_prompt(&outcome.schema, self.template, &query);
                (Some(outcome.keywords), Some(outcome.schema), block, prompt)
            }
            Mode::WithoutFramework => (
                None,
                None,
                render_preview(self.table),
                preview_prompt(self.table, self.template, &query),
            ),
        };
        timings.schema_ms = ms(t);

        let mut resp = AskResponse {
            question: question.to_string(),
            mode,
            keywords,
            dynamic_schema,
            schema_block,
            prompt_used: prompt,
            generated_query: None,
            canonical_sql: None,
            validation: None,
            answer: None,
            error: None,
            timings,
        };

        let t = Instant::now();
        let generated = generate_db_query(&resp.prompt_used, self.provider);
        resp.timings.generate_ms = ms(t);
        let generated = match generated {
            Ok(g) => g,
            Err(e) => {
                resp.error = Some(StageError::from_llm(&e));
                resp.timings.total_ms = ms(started);
                return Ok(resp);
            }
        };
        let sql_text = generated.sql_text.clone();
        resp.generated_query = Some(generated);

        let t = Instant::now();
        let parsed = parse_sql(&sql_text);
        resp.timings.parse_ms = ms(t);
        let ast = match parsed {
            Ok(ast) => ast,
            Err(e) => {
                resp.error = Some(StageError::from_parse(&e));
                resp.timings.total_ms = ms(started);
                return Ok(resp);
            }
        };
        resp.canonical_sql = Some(ast.to_string());

        let t = Instant::now();
        let report = validate(&ast, self.table, self.index);
        resp.timings.validate_ms = ms(t);
        let passed = report.passed();
        resp.validation = Some(report);
        if !passed {
            resp.error = Some(StageError::new(
                Stage::Validate,
                "validation-failed",
                "query references unknown columns or breaks the supported subset",
            ));
        } else if execute_query {
            let t = Instant::now();
            match execute(&ast, self.table) {
                Ok(result) => resp.answer = Some(result),
                Err(e) => {
                    resp.error = Some(StageError::new(Stage::Execute, "execution-error", e.to_string()))
                }
            }
            resp.timings.execute_ms = ms(t);
        }
        resp.timings.total_ms = ms(started);
        Ok(resp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::MockProvider;
    use crate::table::Cell;
    use crate::vocab::tests::{sales_index, sales_table};

    const Q: &str = "What would be the average profit from selling OneView to Allianz in ANZ";

    fn ask(provider: &dyn CompletionProvider, execute: bool, mode: Mode) -> AskResponse {
        let (table, index) = (sales_table(), sales_index());
        let (stopwords, template) = (Stopwords::builtin(), PromptTemplate::builtin());
        Pipeline {
            table: &table,
            index: &index,
            stopwords: &stopwords,
            template: &template,
            provider,
        }
        .ask(Q, execute, mode)
        .unwrap()
    }

    #[test]
    fn example_question_end_to_end() {
        let r = ask(&MockProvider::builtin(), true, Mode::WithFramework);
        assert_eq!(r.error, None);
        assert_eq!(r.answer.as_ref().unwrap().scalar(), Some(&Cell::Float(15.0)));
        let schema = r.dynamic_schema.as_ref().unwrap();
        assert!(schema.binds("product", "OneView"));
        assert!(schema.binds("customer", "Allianz"));
        assert!(schema.binds("subregion", "ANZ"));
        assert!(r.validation.as_ref().unwrap().is_clean());
    }

    #[test]
    fn no_answer_without_execute_flag() {
        let r = ask(&MockProvider::builtin(), false, Mode::WithFramework);
        assert!(r.answer.is_none());
        assert!(r.error.is_none());
    }

    #[test]
    fn prose_reply_is_a_no_query_stage_error() {
        let r = ask(&MockProvider::with_default("I am not sure."), true, Mode::WithFramework);
        let e = r.error.unwrap();
        assert_eq!((e.stage, e.kind.as_str()), (Stage::Generate, "no-query"));
        assert!(r.answer.is_none());
    }

    #[test]
    fn without_framework_uses_preview() {
        let r = ask(&MockProvider::with_default("SELECT COUNT(*) FROM sales"), true, Mode::WithoutFramework);
        assert!(r.prompt_used.contains("First 3 rows:"));
        assert!(r.dynamic_schema.is_none());
        assert_eq!(r.answer.unwrap().scalar(), Some(&Cell::Integer(3)));
    }

    #[test]
    fn deterministic_apart_from_timings() {
        let p = MockProvider::builtin();
        let a = ask(&p, true, Mode::WithFramework);
        let b = ask(&p, true, Mode::WithFramework);
        assert_eq!(a.deterministic_json(), b.deterministic_json());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("with".parse::<Mode>(), Ok(Mode::WithFramework));
        assert_eq!("without_framework".parse::<Mode>(), Ok(Mode::WithoutFramework));
        assert!("both".parse::<Mode>().is_err());
    }
}
