use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::{
    GraphError, GraphView, Label, Node, NodeId, Properties, PropertyValue, RelId, RelType,
    Relationship, ViewLink, ViewNode,
};

/// In-memory property graph keyed by `(label, name)` for nodes and
/// `(type, source, target)` for relationships.
#[derive(Clone, Debug, Default)]
pub struct GraphStore {
    nodes: BTreeMap<NodeId, Node>,
    relationships: BTreeMap<RelId, Relationship>,
    // Incident relationship ids per node, ascending. A self-loop appears once.
    adjacency: BTreeMap<NodeId, Vec<RelId>>,
    node_keys: HashMap<(Label, String), NodeId>,
    rel_keys: HashMap<(RelType, NodeId, NodeId), RelId>,
    next_node: u64,
    next_rel: u64,
}

/// Node and relationship counts. Every label and type is always present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub labels: BTreeMap<Label, usize>,
    pub rel_types: BTreeMap<RelType, usize>,
    pub nodes: usize,
    pub relationships: usize,
}

impl Stats {
    pub fn label(&self, label: Label) -> usize {
        self.labels.get(&label).copied().unwrap_or(0)
    }

    pub fn rel_type(&self, rel_type: RelType) -> usize {
        self.rel_types.get(&rel_type).copied().unwrap_or(0)
    }
}

impl GraphStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Create-or-match the node keyed by `(label, name)`. Extra properties are
    /// upserted onto the node in either case; a `name` entry among them is
    /// ignored.
    pub fn merge_node(
        &mut self,
        label: Label,
        name: &str,
        extra_properties: Properties,
    ) -> Result<NodeId, GraphError> {
        if name.is_empty() {
            return Err(GraphError::InvalidName);
        }
        if let Some((key, _)) = extra_properties.iter().find(|(_, v)| !v.is_valid()) {
            return Err(GraphError::NonFiniteNumber(key.clone()));
        }

        let key = (label, name.to_string());
        let id = match self.node_keys.get(&key) {
            Some(&id) => id,
            None => {
                let id = NodeId(self.next_node);
                self.next_node += 1;
                let mut properties = Properties::new();
                properties.insert("name".into(), PropertyValue::text(name));
                self.nodes.insert(
                    id,
                    Node {
                        id,
                        label,
                        properties,
                    },
                );
                self.adjacency.insert(id, Vec::new());
                self.node_keys.insert(key, id);
                id
            }
        };

        let node = self.nodes.get_mut(&id).expect("indexed node exists");
        for (k, v) in extra_properties {
            if k != "name" {
                node.properties.insert(k, v);
            }
        }
        Ok(id)
    }

    /// Create-or-match the directed relationship `(source)-[rel_type]->(target)`.
    pub fn merge_relationship(
        &mut self,
        source: NodeId,
        rel_type: RelType,
        target: NodeId,
    ) -> Result<RelId, GraphError> {
        for id in [source, target] {
            if !self.nodes.contains_key(&id) {
                return Err(GraphError::NodeNotFound(id));
            }
        }
        let key = (rel_type, source, target);
        if let Some(&id) = self.rel_keys.get(&key) {
            return Ok(id);
        }
        let id = RelId(self.next_rel);
        self.next_rel += 1;
        self.insert_relationship_unchecked(Relationship {
            id,
            rel_type,
            source,
            target,
            properties: Properties::new(),
        });
        Ok(id)
    }

    pub(super) fn insert_node_unchecked(&mut self, node: Node) {
        self.next_node = self.next_node.max(node.id.0 + 1);
        self.node_keys
            .insert((node.label, node.name().to_string()), node.id);
        self.adjacency.entry(node.id).or_default();
        self.nodes.insert(node.id, node);
    }

    pub(super) fn insert_relationship_unchecked(&mut self, rel: Relationship) {
        self.next_rel = self.next_rel.max(rel.id.0 + 1);
        self.rel_keys
            .insert((rel.rel_type, rel.source, rel.target), rel.id);
        insert_sorted(self.adjacency.entry(rel.source).or_default(), rel.id);
        if rel.target != rel.source {
            insert_sorted(self.adjacency.entry(rel.target).or_default(), rel.id);
        }
        self.relationships.insert(rel.id, rel);
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    pub fn relationship(&self, id: RelId) -> Option<&Relationship> {
        self.relationships.get(&id)
    }

    pub fn node_by_name(&self, label: Label, name: &str) -> Option<&Node> {
        self.node_keys
            .get(&(label, name.to_string()))
            .and_then(|id| self.nodes.get(id))
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    /// Relationships in ascending id order.
    pub fn relationships(&self) -> impl Iterator<Item = &Relationship> {
        self.relationships.values()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn relationship_count(&self) -> usize {
        self.relationships.len()
    }

    /// Relationships incident to `node` in ascending id order, ignoring
    /// direction.
    pub fn incident(&self, node: NodeId) -> impl Iterator<Item = &Relationship> {
        self.adjacency
            .get(&node)
            .into_iter()
            .flatten()
            .map(|id| &self.relationships[id])
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency.get(&node).map_or(0, Vec::len)
    }

    /// Distinct first-order neighbors of `node`, ascending.
    pub fn neighbor_ids(&self, node: NodeId) -> BTreeSet<NodeId> {
        self.incident(node)
            .filter_map(|r| r.other(node))
            .filter(|&m| m != node)
            .collect()
    }

    /// All nodes whose name contains `keyword` (case-sensitive), by id.
    pub fn find_nodes_containing(&self, keyword: &str) -> Result<Vec<&Node>, GraphError> {
        if keyword.is_empty() {
            return Err(GraphError::InvalidKeyword);
        }
        Ok(self
            .nodes
            .values()
            .filter(|n| n.name().contains(keyword))
            .collect())
    }

    /// `node` plus its first-order neighbors outside `exclude`, with every
    /// incident relationship whose far endpoint is in that set.
    pub fn neighborhood(
        &self,
        node: NodeId,
        exclude: &BTreeSet<NodeId>,
    ) -> Result<GraphView, GraphError> {
        let center = self.node(node).ok_or(GraphError::NodeNotFound(node))?;

        let mut ids: BTreeSet<NodeId> = self
            .neighbor_ids(node)
            .into_iter()
            .filter(|m| !exclude.contains(m))
            .collect();
        ids.insert(center.id);

        let links = self
            .incident(node)
            .filter(|r| r.other(node).is_some_and(|m| ids.contains(&m)))
            .map(ViewLink::from)
            .collect();
        let nodes = ids
            .iter()
            .map(|id| ViewNode::from(&self.nodes[id]))
            .collect();
        Ok(GraphView { nodes, links })
    }

    pub fn stats(&self) -> Stats {
        let mut labels: BTreeMap<Label, usize> = Label::ALL.iter().map(|&l| (l, 0)).collect();
        let mut rel_types: BTreeMap<RelType, usize> =
            RelType::ALL.iter().map(|&t| (t, 0)).collect();
        for n in self.nodes.values() {
            *labels.entry(n.label).or_default() += 1;
        }
        for r in self.relationships.values() {
            *rel_types.entry(r.rel_type).or_default() += 1;
        }
        Stats {
            labels,
            rel_types,
            nodes: self.nodes.len(),
            relationships: self.relationships.len(),
        }
    }

    /// Rebuilds adjacency from the relationship set and compares it with the
    /// maintained lists. Used by tests.
    pub fn adjacency_consistent(&self) -> bool {
        let mut rebuilt: BTreeMap<NodeId, Vec<RelId>> =
            self.nodes.keys().map(|&id| (id, Vec::new())).collect();
        for r in self.relationships.values() {
            rebuilt.entry(r.source).or_default().push(r.id);
            if r.target != r.source {
                rebuilt.entry(r.target).or_default().push(r.id);
            }
        }
        rebuilt == self.adjacency
            && self.node_keys.len() == self.nodes.len()
            && self.rel_keys.len() == self.relationships.len()
    }
}

fn insert_sorted(list: &mut Vec<RelId>, id: RelId) {
    if let Err(pos) = list.binary_search(&id) {
        list.insert(pos, id);
    }
}
