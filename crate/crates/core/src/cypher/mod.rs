//! Lexer, parser and interpreter for the small graph query language used to
//! build and search the product graph:
//!
//! ```text
//! MERGE (p:Product {name: 'Huawei TaiShan Server'})
//! MERGE (b:Brand {name: 'Huawei'})
//! MERGE (p)-[:HAS_BRAND]->(b)
//!
//! MATCH (n) WHERE n.name CONTAINS $keyword
//! MATCH (n)-[r]-(m)
//! RETURN n, r, m LIMIT $limit
//! ```
//!
//! Results are ordered by the ids of the returned columns, left to right,
//! before LIMIT applies.

mod ast;
mod exec;
mod lexer;
mod parser;

use thiserror::Error;

use crate::graph::GraphError;

pub use ast::{Clause, Direction, Literal, NodePattern, Operand, Pattern, Query, RelPattern};
pub use exec::{execute, execute_read, Params, ResultTable, Value};
pub use lexer::{quote, tokenize, Keyword, Token, TokenKind};
pub use parser::{parse, parse_script};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("lex error at offset {offset}: {message}")]
    Lex { offset: usize, message: String },
    #[error("parse error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
    Parse {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("bind error at offset {offset}: {message}")]
    Bind { offset: usize, message: String },
    #[error("missing parameter `${0}`")]
    MissingParam(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("query writes to the graph but was run read-only")]
    NotReadOnly,
    #[error(transparent)]
    Graph(#[from] GraphError),
}
