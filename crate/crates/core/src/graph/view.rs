use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Label, Node, NodeId, Properties, RelId, RelType, Relationship};

/// The `nodes` + `links` shape exchanged with the explorer.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphView {
    pub nodes: Vec<ViewNode>,
    pub links: Vec<ViewLink>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViewNode {
    pub id: NodeId,
    pub label: Label,
    pub properties: Properties,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewLink {
    pub id: RelId,
    pub rel_type: RelType,
    pub source: NodeId,
    pub target: NodeId,
}

impl From<&Node> for ViewNode {
    fn from(n: &Node) -> Self {
        ViewNode {
            id: n.id,
            label: n.label,
            properties: n.properties.clone(),
        }
    }
}

impl From<&Relationship> for ViewLink {
    fn from(r: &Relationship) -> Self {
        ViewLink {
            id: r.id,
            rel_type: r.rel_type,
            source: r.source,
            target: r.target,
        }
    }
}

impl GraphView {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.links.is_empty()
    }

    pub fn node_ids(&self) -> BTreeSet<NodeId> {
        self.nodes.iter().map(|n| n.id).collect()
    }

    pub fn link_ids(&self) -> BTreeSet<RelId> {
        self.links.iter().map(|l| l.id).collect()
    }

    /// Every link endpoint is one of `nodes`.
    pub fn is_endpoint_closed(&self) -> bool {
        self.is_endpoint_closed_over(&BTreeSet::new())
    }

    /// Every link endpoint is one of `nodes` or in `extra`.
    pub fn is_endpoint_closed_over(&self, extra: &BTreeSet<NodeId>) -> bool {
        let ids = self.node_ids();
        self.links.iter().all(|l| {
            [l.source, l.target]
                .iter()
                .all(|e| ids.contains(e) || extra.contains(e))
        })
    }

    pub fn is_duplicate_free(&self) -> bool {
        self.node_ids().len() == self.nodes.len() && self.link_ids().len() == self.links.len()
    }
}
