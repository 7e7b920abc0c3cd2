//! HTTP service and command-line front end for the product knowledge graph.

pub mod api;
pub mod cli;
pub mod config;
pub mod live;
