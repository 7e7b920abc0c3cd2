//! Embedded property graph: typed nodes and relationships with
//! merge-or-match writes, undirected neighborhood traversal, statistics
//! and JSON snapshots.

mod shared;
mod snapshot;
mod store;
mod view;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use shared::SharedStore;
pub use snapshot::{RawNode, RawRelationship, RawSnapshot, SnapshotError};
pub use store::{GraphStore, Stats};
pub use view::{GraphView, ViewLink, ViewNode};

/// Internal node identifier. Dense, assigned sequentially, never reused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RelId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for RelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Category,
    Product,
    Brand,
    Model,
    Price,
}

impl Label {
    pub const ALL: [Label; 5] = [
        Label::Category,
        Label::Product,
        Label::Brand,
        Label::Model,
        Label::Price,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Category => "Category",
            Label::Product => "Product",
            Label::Brand => "Brand",
            Label::Model => "Model",
            Label::Price => "Price",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| GraphError::UnknownLabel(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum RelType {
    #[serde(rename = "BELONGS_TO")]
    BelongsTo,
    #[serde(rename = "HAS_BRAND")]
    HasBrand,
    #[serde(rename = "HAS_MODEL")]
    HasModel,
    #[serde(rename = "HAS_PRICE")]
    HasPrice,
}

impl RelType {
    pub const ALL: [RelType; 4] = [
        RelType::BelongsTo,
        RelType::HasBrand,
        RelType::HasModel,
        RelType::HasPrice,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelType::BelongsTo => "BELONGS_TO",
            RelType::HasBrand => "HAS_BRAND",
            RelType::HasModel => "HAS_MODEL",
            RelType::HasPrice => "HAS_PRICE",
        }
    }
}

impl fmt::Display for RelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelType {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| GraphError::UnknownRelType(s.to_string()))
    }
}

/// A property value. Numbers are always finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyValue {
    Flag(bool),
    Number(f64),
    Text(String),
}

impl PropertyValue {
    pub fn text(s: impl Into<String>) -> Self {
        PropertyValue::Text(s.into())
    }

    /// `None` for NaN and infinities.
    pub fn number(n: f64) -> Option<Self> {
        n.is_finite().then_some(PropertyValue::Number(n))
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            PropertyValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            PropertyValue::Number(n) => Some(*n),
            _ => None,
        }
    }

    pub(crate) fn is_valid(&self) -> bool {
        !matches!(self, PropertyValue::Number(n) if !n.is_finite())
    }
}

impl From<&str> for PropertyValue {
    fn from(s: &str) -> Self {
        PropertyValue::Text(s.to_string())
    }
}

impl From<String> for PropertyValue {
    fn from(s: String) -> Self {
        PropertyValue::Text(s)
    }
}

impl From<bool> for PropertyValue {
    fn from(b: bool) -> Self {
        PropertyValue::Flag(b)
    }
}

pub type Properties = BTreeMap<String, PropertyValue>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Node {
    pub id: NodeId,
    pub label: Label,
    pub properties: Properties,
}

impl Node {
    pub fn name(&self) -> &str {
        self.properties
            .get("name")
            .and_then(PropertyValue::as_text)
            .unwrap_or("")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Relationship {
    pub id: RelId,
    #[serde(rename = "type")]
    pub rel_type: RelType,
    pub source: NodeId,
    pub target: NodeId,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub properties: Properties,
}

impl Relationship {
    /// The endpoint opposite `node`, or `None` if `node` is not an endpoint.
    pub fn other(&self, node: NodeId) -> Option<NodeId> {
        if self.source == node {
            Some(self.target)
        } else if self.target == node {
            Some(self.source)
        } else {
            None
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("node name must be non-empty text")]
    InvalidName,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unknown relationship type `{0}`")]
    UnknownRelType(String),
    #[error("node {0} not found")]
    NodeNotFound(NodeId),
    #[error("search keyword must be non-empty")]
    InvalidKeyword,
    #[error("property `{0}` is not a finite number")]
    NonFiniteNumber(String),
}
