//! JSON snapshot format. Nodes and relationships are written one per line,
//! sorted by id, so snapshots diff cleanly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{GraphStore, Node, NodeId, Properties, PropertyValue, RelId, Relationship};

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed snapshot at line {line}, column {column}: {message}")]
    Format {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("inconsistent snapshot: {0}")]
    Invalid(String),
}

/// The snapshot document as written on disk, before label and type names
/// are checked.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSnapshot {
    pub nodes: Vec<RawNode>,
    pub relationships: Vec<RawRelationship>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNode {
    pub id: u64,
    pub label: String,
    pub properties: Properties,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRelationship {
    pub id: u64,
    #[serde(rename = "type")]
    pub rel_type: String,
    pub source: u64,
    pub target: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub properties: Properties,
}

impl RawSnapshot {
    pub fn parse(text: &str) -> Result<Self, SnapshotError> {
        serde_json::from_str(text).map_err(|e| SnapshotError::Format {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

impl From<&GraphStore> for RawSnapshot {
    fn from(store: &GraphStore) -> Self {
        RawSnapshot {
            nodes: store
                .nodes()
                .map(|n| RawNode {
                    id: n.id.0,
                    label: n.label.to_string(),
                    properties: n.properties.clone(),
                })
                .collect(),
            relationships: store
                .relationships()
                .map(|r| RawRelationship {
                    id: r.id.0,
                    rel_type: r.rel_type.to_string(),
                    source: r.source.0,
                    target: r.target.0,
                    properties: r.properties.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<RawSnapshot> for GraphStore {
    type Error = SnapshotError;

    fn try_from(raw: RawSnapshot) -> Result<Self, Self::Error> {
        let invalid = |msg: String| SnapshotError::Invalid(msg);
        let mut store = GraphStore::new();
        let mut keys = BTreeSet::new();

        for n in raw.nodes {
            let label = n
                .label
                .parse()
                .map_err(|e| invalid(format!("node {}: {e}", n.id)))?;
            let id = NodeId(n.id);
            if store.node(id).is_some() {
                return Err(invalid(format!("duplicate node id {}", n.id)));
            }
            let name = match n.properties.get("name") {
                Some(PropertyValue::Text(s)) if !s.is_empty() => s.clone(),
                _ => return Err(invalid(format!("node {} has no non-empty name", n.id))),
            };
            if !keys.insert((label, name.clone())) {
                return Err(invalid(format!("duplicate node {label}/{name}")));
            }
            store.insert_node_unchecked(Node {
                id,
                label,
                properties: n.properties,
            });
        }

        let mut triples = BTreeSet::new();
        for r in raw.relationships {
            let rel_type = r
                .rel_type
                .parse()
                .map_err(|e| invalid(format!("relationship {}: {e}", r.id)))?;
            let id = RelId(r.id);
            if store.relationship(id).is_some() {
                return Err(invalid(format!("duplicate relationship id {}", r.id)));
            }
            for end in [r.source, r.target] {
                if store.node(NodeId(end)).is_none() {
                    return Err(invalid(format!(
                        "relationship {} references missing node {end}",
                        r.id
                    )));
                }
            }
            if !triples.insert((rel_type, r.source, r.target)) {
                return Err(invalid(format!("duplicate relationship {}", r.id)));
            }
            store.insert_relationship_unchecked(Relationship {
                id,
                rel_type,
                source: NodeId(r.source),
                target: NodeId(r.target),
                properties: r.properties,
            });
        }
        Ok(store)
    }
}

impl GraphStore {
    /// Serializes the store in snapshot layout.
    pub fn to_snapshot_string(&self) -> String {
        let raw = RawSnapshot::from(self);
        let mut out = String::from("{\"nodes\":[");
        write_lines(&mut out, &raw.nodes);
        out.push_str("],\"relationships\":[");
        write_lines(&mut out, &raw.relationships);
        out.push_str("]}\n");
        out
    }

    pub fn from_snapshot_str(text: &str) -> Result<Self, SnapshotError> {
        GraphStore::try_from(RawSnapshot::parse(text)?)
    }

    pub fn snapshot(&self, path: impl AsRef<Path>) -> Result<(), SnapshotError> {
        std::fs::write(path, self.to_snapshot_string())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SnapshotError> {
        Self::from_snapshot_str(&std::fs::read_to_string(path)?)
    }
}

fn write_lines<T: Serialize>(out: &mut String, items: &[T]) {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let json = serde_json::to_string(item).expect("snapshot entries serialize");
        let _ = write!(out, "\n{json}");
    }
    if !items.is_empty() {
        out.push('\n');
    }
}
