//! Single-table SQL subset: parser, canonical printer, validator and an
//! in-memory evaluator.

pub mod ast;
mod exec;
mod parser;
mod result;
mod validate;

use thiserror::Error;

pub use ast::{AggFunc, BinaryOp, Expr, Literal, OrderItem, Query, SelectItem, UnaryOp};
pub use exec::{compare_cells, execute, like_match};
pub use parser::parse_sql;
pub use result::{cells_close, results_equivalent, ResultTable};
pub use validate::{validate, UnseenValue, ValidationReport};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),
    #[error("invalid query: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExecError {
    #[error("unknown column: {0}")]
    UnknownColumn(String),
    #[error("unknown table: {0}")]
    UnknownTable(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("invalid query: {0}")]
    Invalid(String),
}
