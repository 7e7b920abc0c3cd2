//! Read-side operations behind the explorer: keyword search with node and
//! link caps, client-informed neighbor expansion, and node detail.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    GraphError, GraphStore, GraphView, Label, NodeId, Properties, RelId, ViewLink, ViewNode,
};

pub const DEFAULT_LIMIT: usize = 25;
pub const DEFAULT_MAX_LIMIT: usize = 500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExploreError {
    #[error("keyword must be non-empty")]
    EmptyKeyword,
    #[error("{name} must be between 1 and {max}, got {value}")]
    LimitOutOfRange {
        name: &'static str,
        value: usize,
        max: usize,
    },
    #[error("node {0} is not among the visible nodes")]
    NotVisible(NodeId),
    #[error("node {0} not found")]
    NodeNotFound(NodeId),
}

impl From<GraphError> for ExploreError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::NodeNotFound(id) => ExploreError::NodeNotFound(id),
            GraphError::InvalidKeyword => ExploreError::EmptyKeyword,
            other => unreachable!("read path raised {other:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRequest {
    pub keyword: String,
    #[serde(default = "default_limit")]
    pub node_limit: usize,
    #[serde(default = "default_limit")]
    pub rel_limit: usize,
}

fn default_limit() -> usize {
    DEFAULT_LIMIT
}

impl SearchRequest {
    pub fn validate(&self, max_limit: usize) -> Result<(), ExploreError> {
        if self.keyword.is_empty() {
            return Err(ExploreError::EmptyKeyword);
        }
        for (name, value) in [
            ("node_limit", self.node_limit),
            ("rel_limit", self.rel_limit),
        ] {
            if value == 0 || value > max_limit {
                return Err(ExploreError::LimitOutOfRange {
                    name,
                    value,
                    max: max_limit,
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpandRequest {
    pub node_id: NodeId,
    pub visible_ids: BTreeSet<NodeId>,
    /// Links the client already draws. Optional; omitted links are resent.
    #[serde(default)]
    pub visible_link_ids: BTreeSet<RelId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeDetail {
    pub id: NodeId,
    pub label: Label,
    pub properties: Properties,
    pub degree: usize,
}

/// Nodes whose name contains the keyword, then their first-order neighbors,
/// capped at `node_limit`; then every relationship with both endpoints in
/// that set, capped at `rel_limit`. Matches are kept ahead of neighbors when
/// the node cap cuts.
pub fn search(
    store: &GraphStore,
    req: &SearchRequest,
    max_limit: usize,
) -> Result<GraphView, ExploreError> {
    req.validate(max_limit)?;
    let matches: Vec<NodeId> = store
        .find_nodes_containing(&req.keyword)?
        .into_iter()
        .map(|n| n.id)
        .collect();
    let matched: BTreeSet<NodeId> = matches.iter().copied().collect();
    let neighbors: BTreeSet<NodeId> = matches
        .iter()
        .flat_map(|&id| store.neighbor_ids(id))
        .filter(|id| !matched.contains(id))
        .collect();

    let ids: Vec<NodeId> = matches
        .into_iter()
        .chain(neighbors)
        .take(req.node_limit)
        .collect();
    let kept: BTreeSet<NodeId> = ids.iter().copied().collect();

    let links = store
        .relationships()
        .filter(|r| kept.contains(&r.source) && kept.contains(&r.target))
        .take(req.rel_limit)
        .map(ViewLink::from)
        .collect();
    let nodes = ids
        .iter()
        .map(|id| ViewNode::from(store.node(*id).expect("listed node exists")))
        .collect();
    Ok(GraphView { nodes, links })
}

/// Neighbors of `node_id` the client is not showing yet, plus every link from
/// `node_id` to a node that will be visible afterwards and is not already
/// drawn.
pub fn expand(store: &GraphStore, req: &ExpandRequest) -> Result<GraphView, ExploreError> {
    if store.node(req.node_id).is_none() {
        return Err(ExploreError::NodeNotFound(req.node_id));
    }
    if !req.visible_ids.contains(&req.node_id) {
        return Err(ExploreError::NotVisible(req.node_id));
    }
    let hood = store.neighborhood(req.node_id, &req.visible_ids)?;
    let nodes: Vec<ViewNode> = hood
        .nodes
        .into_iter()
        .filter(|n| !req.visible_ids.contains(&n.id))
        .collect();
    let after: BTreeSet<NodeId> = req
        .visible_ids
        .iter()
        .copied()
        .chain(nodes.iter().map(|n| n.id))
        .collect();
    let links = store
        .incident(req.node_id)
        .filter(|r| !req.visible_link_ids.contains(&r.id))
        .filter(|r| r.other(req.node_id).is_some_and(|m| after.contains(&m)))
        .map(ViewLink::from)
        .collect();
    Ok(GraphView { nodes, links })
}

pub fn node_detail(store: &GraphStore, id: NodeId) -> Result<NodeDetail, ExploreError> {
    let node = store.node(id).ok_or(ExploreError::NodeNotFound(id))?;
    Ok(NodeDetail {
        id,
        label: node.label,
        properties: node.properties.clone(),
        degree: store.degree(id),
    })
}
