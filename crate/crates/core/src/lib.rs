//! Product knowledge graph toolkit: an embedded property graph with a small
//! query language, an agent pipeline that turns product pages into graph
//! records, and a graph-grounded product analysis agent.

pub mod analysis;
pub mod cypher;
pub mod explore;
pub mod fixture;
pub mod graph;
pub mod ingest;
pub mod schema;
