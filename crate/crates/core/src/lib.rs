//! Vocabulary-indexed natural-language querying over a single table.
//!
//! The pieces: typed CSV tables ([`table`]), an inverted index over the
//! table's vocabulary ([`vocab`]), autocomplete, question-specific schema
//! pruning and prompt building ([`schema`]), an LLM gateway ([`llm`]), a
//! SQL subset engine ([`sql`]), the end-to-end ask pipeline and a benchmark
//! harness.

pub mod autocomplete;
pub mod bench;
pub mod llm;
pub mod pipeline;
pub mod schema;
pub mod sql;
pub mod table;
pub mod text;
pub mod vocab;
