//! The bundled product catalogue: 963 nodes and 1110 relationships across
//! Category, Product, Brand, Model and Price.

use crate::cypher::{parse_script, Query, QueryError};
use crate::graph::GraphStore;

/// The catalogue as a MERGE script, one statement per product.
pub const SCRIPT: &str = include_str!("../fixtures/products.cypher");

/// The catalogue as a snapshot document.
pub const SNAPSHOT: &str = include_str!("../fixtures/products.snapshot.json");

pub fn store() -> GraphStore {
    GraphStore::from_snapshot_str(SNAPSHOT).expect("bundled snapshot is valid")
}

pub fn statements() -> Result<Vec<Query>, QueryError> {
    parse_script(SCRIPT)
}

/// Directory of the thirty-page mock web corpus.
pub fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus")
}

/// The query the corpus was written for.
pub fn corpus_query() -> crate::ingest::ProductQuery {
    crate::ingest::ProductQuery {
        name: "computing server".into(),
        spec_params: [("cpu", "Kunpeng 920"), ("ram", "256GB"), ("storage", "4TB")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
    }
}
