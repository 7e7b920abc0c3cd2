//! Brute-force reference implementations and random-graph strategies shared
//! by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use kgatlas_core::cypher::{
    Clause, Direction, Literal, NodePattern, Operand, Pattern, Query, RelPattern,
};
use kgatlas_core::graph::{GraphStore, Label, NodeId, Properties, PropertyValue, RelId, RelType};
use kgatlas_core::ingest::mock::MockEmbedder;
use kgatlas_core::ingest::providers::Embedder;
use proptest::prelude::*;

/// Short names drawn from a tiny alphabet so substring hits are common.
pub const NAMES: [&str; 12] = [
    "ab",
    "ba",
    "abc",
    "cab",
    "a",
    "b",
    "c",
    "bca",
    "server",
    "serve",
    "computing server",
    "é",
];

#[derive(Clone, Debug)]
pub struct GraphSpec {
    pub nodes: Vec<(Label, String)>,
    pub edges: Vec<(usize, RelType, usize)>,
}

pub fn label() -> impl Strategy<Value = Label> {
    prop::sample::select(Label::ALL.to_vec())
}

pub fn rel_type() -> impl Strategy<Value = RelType> {
    prop::sample::select(RelType::ALL.to_vec())
}

pub fn name() -> impl Strategy<Value = String> {
    (prop::sample::select(NAMES.to_vec()), 0..4usize).prop_map(|(n, i)| format!("{n}{i}"))
}

/// Random graphs of at most `max_nodes` merged nodes, any label on any
/// edge end, self-loops and parallel edges of distinct types allowed.
pub fn graph_spec(max_nodes: usize) -> impl Strategy<Value = GraphSpec> {
    prop::collection::vec((label(), name()), 0..=max_nodes).prop_flat_map(|nodes| {
        let n = nodes.len().max(1);
        let edges = prop::collection::vec((0..n, rel_type(), 0..n), 0..=n * 3);
        (Just(nodes), edges).prop_map(|(nodes, edges)| GraphSpec {
            edges: if nodes.is_empty() { vec![] } else { edges },
            nodes,
        })
    })
}

pub fn build(spec: &GraphSpec) -> GraphStore {
    let mut g = GraphStore::new();
    let ids: Vec<NodeId> = spec
        .nodes
        .iter()
        .map(|(l, n)| g.merge_node(*l, n, Properties::new()).unwrap())
        .collect();
    for &(s, t, d) in &spec.edges {
        g.merge_relationship(ids[s], t, ids[d]).unwrap();
    }
    g
}

/// Dense adjacency matrix built from the relationship list alone.
pub fn dense_adjacency(g: &GraphStore) -> (Vec<NodeId>, Vec<Vec<bool>>) {
    let ids: Vec<NodeId> = g.nodes().map(|n| n.id).collect();
    let pos: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let mut m = vec![vec![false; ids.len()]; ids.len()];
    for r in g.relationships() {
        let (a, b) = (pos[&r.source], pos[&r.target]);
        m[a][b] = true;
        m[b][a] = true;
    }
    (ids, m)
}

/// Expected (node ids, link ids) of `neighborhood(center, exclude)`.
pub fn neighborhood_oracle(
    g: &GraphStore,
    center: NodeId,
    exclude: &BTreeSet<NodeId>,
) -> (BTreeSet<NodeId>, BTreeSet<RelId>) {
    let (ids, adj) = dense_adjacency(g);
    let c = ids.iter().position(|&i| i == center).unwrap();
    let mut nodes: BTreeSet<NodeId> = (0..ids.len())
        .filter(|&j| adj[c][j] && !exclude.contains(&ids[j]))
        .map(|j| ids[j])
        .collect();
    nodes.insert(center);
    let links = g
        .relationships()
        .filter(|r| {
            (r.source == center && nodes.contains(&r.target))
                || (r.target == center && nodes.contains(&r.source))
        })
        .map(|r| r.id)
        .collect();
    (nodes, links)
}

/// Linear scan for names containing `keyword`.
pub fn contains_oracle(g: &GraphStore, keyword: &str) -> Vec<NodeId> {
    let mut out = Vec::new();
    for n in g.nodes() {
        let name = match n.properties.get("name") {
            Some(PropertyValue::Text(s)) => s.as_str(),
            _ => "",
        };
        if name.contains(keyword) {
            out.push(n.id);
        }
    }
    out
}

/// Label and relationship-type counts recomputed from scratch.
pub fn recount(g: &GraphStore) -> (BTreeMap<Label, usize>, BTreeMap<RelType, usize>) {
    let mut labels = BTreeMap::new();
    let mut types = BTreeMap::new();
    for l in Label::ALL {
        labels.insert(l, g.nodes().filter(|n| n.label == l).count());
    }
    for t in RelType::ALL {
        types.insert(t, g.relationships().filter(|r| r.rel_type == t).count());
    }
    (labels, types)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    Node(NodeId),
    Rel(RelId),
}

type Binding = BTreeMap<String, Bound>;

fn node_table(g: &GraphStore, pat: &NodePattern) -> Vec<Binding> {
    g.nodes()
        .filter(|n| pat.label.is_none_or(|l| l == n.label))
        .map(|n| Binding::from([(pat.var.clone(), Bound::Node(n.id))]))
        .collect()
}

fn path_table(
    g: &GraphStore,
    left: &NodePattern,
    rel: &RelPattern,
    direction: Direction,
    right: &NodePattern,
) -> Vec<Binding> {
    let label_of = |id: NodeId| g.node(id).unwrap().label;
    let mut out = Vec::new();
    for r in g.relationships() {
        if rel.rel_type.is_some_and(|t| t != r.rel_type) {
            continue;
        }
        let mut orientations = Vec::new();
        match direction {
            Direction::Outgoing => orientations.push((r.source, r.target)),
            Direction::Incoming => orientations.push((r.target, r.source)),
            Direction::Either => {
                orientations.push((r.source, r.target));
                if r.source != r.target {
                    orientations.push((r.target, r.source));
                }
            }
        }
        for (a, b) in orientations {
            if left.label.is_some_and(|l| l != label_of(a))
                || right.label.is_some_and(|l| l != label_of(b))
            {
                continue;
            }
            if left.var == right.var && a != b {
                continue;
            }
            let mut row = Binding::new();
            row.insert(left.var.clone(), Bound::Node(a));
            row.insert(right.var.clone(), Bound::Node(b));
            if let Some(v) = &rel.var {
                row.insert(v.clone(), Bound::Rel(r.id));
            }
            out.push(row);
        }
    }
    out
}

fn join(left: Vec<Binding>, right: Vec<Binding>) -> Vec<Binding> {
    let mut out = Vec::new();
    for l in &left {
        for r in &right {
            if r.iter().all(|(k, v)| l.get(k).is_none_or(|x| x == v)) {
                let mut row = l.clone();
                row.extend(r.iter().map(|(k, v)| (k.clone(), *v)));
                out.push(row);
            }
        }
    }
    out
}

fn literal(op: &Operand, params: &BTreeMap<String, PropertyValue>) -> PropertyValue {
    match op {
        Operand::Literal(Literal::Text(s)) => PropertyValue::Text(s.clone()),
        Operand::Literal(Literal::Number(n)) => PropertyValue::Number(*n),
        Operand::Param(p) => params[p].clone(),
    }
}

/// Evaluates a read-only query relationally: each MATCH becomes a full table
/// scan, tables are natural-joined, rows are sorted by returned ids.
pub fn execute_oracle(
    g: &GraphStore,
    q: &Query,
    params: &BTreeMap<String, PropertyValue>,
) -> Vec<Vec<Bound>> {
    let mut rows = vec![Binding::new()];
    let mut items = Vec::new();
    let mut limit = None;
    for c in &q.clauses {
        match c {
            Clause::Match(Pattern::Node(p)) => rows = join(rows, node_table(g, p)),
            Clause::Match(Pattern::Path {
                left,
                rel,
                direction,
                right,
            }) => rows = join(rows, path_table(g, left, rel, *direction, right)),
            Clause::Where {
                var,
                property,
                operand,
            } => {
                let PropertyValue::Text(needle) = literal(operand, params) else {
                    panic!("oracle expects text")
                };
                rows.retain(|row| match row.get(var) {
                    Some(Bound::Node(id)) => match g.node(*id).unwrap().properties.get(property) {
                        Some(PropertyValue::Text(s)) => s.contains(needle.as_str()),
                        _ => false,
                    },
                    _ => false,
                });
            }
            Clause::Return { items: i } => items = i.clone(),
            Clause::Limit(op) => {
                let PropertyValue::Number(n) = literal(op, params) else {
                    panic!("oracle expects a number")
                };
                limit = Some(n as usize);
            }
            Clause::MergeNode { .. } | Clause::MergeRel { .. } => panic!("read-only oracle"),
        }
    }
    let mut out: Vec<Vec<Bound>> = rows
        .iter()
        .map(|row| items.iter().map(|v| row[v]).collect())
        .collect();
    out.sort();
    if let Some(k) = limit {
        out.truncate(k);
    }
    out
}

/// Flattens an executed table to ids for comparison with the oracle.
pub fn table_ids(t: &kgatlas_core::cypher::ResultTable) -> Vec<Vec<Bound>> {
    use kgatlas_core::cypher::Value;
    t.rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| match v {
                    Value::Node(n) => Bound::Node(n.id),
                    Value::Relationship(r) => Bound::Rel(r.id),
                })
                .collect()
        })
        .collect()
}

const NODE_VARS: [&str; 3] = ["a", "b", "c"];

fn node_pattern(var: &'static str) -> impl Strategy<Value = NodePattern> {
    prop::option::weighted(0.4, label()).prop_map(move |label| NodePattern {
        var: var.to_string(),
        label,
    })
}

fn direction() -> impl Strategy<Value = Direction> {
    prop::sample::select(vec![
        Direction::Outgoing,
        Direction::Incoming,
        Direction::Either,
    ])
}

/// One MATCH clause over variables `a`, `b`, `c`; `rel_var` names its
/// relationship when present.
fn match_clause(rel_var: &'static str) -> impl Strategy<Value = Pattern> {
    let node = (0..3usize)
        .prop_flat_map(|i| node_pattern(NODE_VARS[i]))
        .prop_map(Pattern::Node);
    let path = (
        (0..3usize).prop_flat_map(|i| node_pattern(NODE_VARS[i])),
        prop::option::of(rel_type()),
        any::<bool>(),
        direction(),
        (0..3usize).prop_flat_map(|i| node_pattern(NODE_VARS[i])),
    )
        .prop_map(
            move |(left, rel_type, named, direction, right)| Pattern::Path {
                left,
                rel: RelPattern {
                    var: named.then(|| rel_var.to_string()),
                    rel_type,
                },
                direction,
                right,
            },
        );
    prop_oneof![1 => node, 3 => path]
}

fn pattern_vars(p: &Pattern) -> Vec<String> {
    match p {
        Pattern::Node(n) => vec![n.var.clone()],
        Pattern::Path {
            left, rel, right, ..
        } => {
            let mut v = vec![left.var.clone(), right.var.clone()];
            v.extend(rel.var.clone());
            v
        }
    }
}

/// Random valid read-only queries: one or two MATCH clauses, optional
/// WHERE after each, a RETURN over bound variables, optional LIMIT.
pub fn read_query() -> impl Strategy<Value = Query> {
    (
        match_clause("r"),
        prop::option::of(match_clause("s")),
        prop::option::of((0..3usize, name())),
        prop::option::of((0..3usize, name())),
        prop::collection::vec(0..5usize, 1..4),
        prop::option::of(prop_oneof![
            (0..20u32).prop_map(|n| Operand::Literal(Literal::Number(n as f64))),
            Just(Operand::Param("limit".into())),
        ]),
        any::<bool>(),
    )
        .prop_map(|(m1, m2, w1, w2, ret, limit, param_where)| {
            let mut clauses = Vec::new();
            let mut bound: Vec<String> = Vec::new();
            let mut add = |m: Pattern, w: Option<(usize, String)>, clauses: &mut Vec<Clause>| {
                let vars = pattern_vars(&m);
                clauses.push(Clause::Match(m));
                for v in vars {
                    if !bound.contains(&v) {
                        bound.push(v);
                    }
                }
                if let Some((i, needle)) = w {
                    let nodes: Vec<&String> = bound
                        .iter()
                        .filter(|v| NODE_VARS.contains(&v.as_str()))
                        .collect();
                    let var = nodes[i % nodes.len()].clone();
                    let operand = if param_where {
                        Operand::Param("keyword".into())
                    } else {
                        Operand::Literal(Literal::Text(needle.chars().take(1).collect()))
                    };
                    clauses.push(Clause::Where {
                        var,
                        property: "name".into(),
                        operand,
                    });
                }
            };
            add(m1, w1, &mut clauses);
            if let Some(m2) = m2 {
                add(m2, w2, &mut clauses);
            }
            let mut items: Vec<String> = Vec::new();
            for i in ret {
                let v = bound[i % bound.len()].clone();
                if !items.contains(&v) {
                    items.push(v);
                }
            }
            clauses.push(Clause::Return { items });
            if let Some(l) = limit {
                clauses.push(Clause::Limit(l));
            }
            Query { clauses }
        })
}

fn operand() -> impl Strategy<Value = Operand> {
    prop_oneof![
        any::<String>().prop_map(|s| Operand::Literal(Literal::Text(s))),
        (0u32..1_000_000, 0u32..4)
            .prop_map(|(n, d)| Operand::Literal(Literal::Number(n as f64 / 10f64.powi(d as i32)))),
        prop::sample::select(vec!["p", "keyword", "limit", "x_1"])
            .prop_map(|p| Operand::Param(p.to_string())),
    ]
}

/// Random MERGE scripts: nodes `v0..vn`, then relationships between them.
pub fn merge_query() -> impl Strategy<Value = Query> {
    (
        prop::collection::vec(
            (label(), operand(), prop::collection::vec(operand(), 0..3)),
            1..5,
        ),
        prop::collection::vec((0..5usize, rel_type(), 0..5usize, any::<bool>()), 0..4),
    )
        .prop_map(|(nodes, rels)| {
            let n = nodes.len();
            let mut clauses: Vec<Clause> = nodes
                .into_iter()
                .enumerate()
                .map(|(i, (label, name, extra))| {
                    let mut properties = vec![("name".to_string(), name)];
                    properties.extend(
                        extra
                            .into_iter()
                            .enumerate()
                            .map(|(j, o)| (format!("k{j}"), o)),
                    );
                    Clause::MergeNode {
                        var: format!("v{i}"),
                        label,
                        properties,
                    }
                })
                .collect();
            clauses.extend(rels.into_iter().map(|(s, t, d, out)| Clause::MergeRel {
                source: format!("v{}", s % n),
                rel_type: t,
                target: format!("v{}", d % n),
                direction: if out {
                    Direction::Outgoing
                } else {
                    Direction::Incoming
                },
            }));
            Query { clauses }
        })
}

/// A random merge operation for idempotence checks.
#[derive(Clone, Debug)]
pub enum MergeOp {
    Node(Label, String, Vec<(String, String)>),
    Rel(usize, RelType, usize),
}

pub fn merge_ops() -> impl Strategy<Value = Vec<MergeOp>> {
    prop::collection::vec(
        prop_oneof![
            (
                label(),
                name(),
                prop::collection::vec(
                    (prop::sample::select(vec!["k", "description"]), name()),
                    0..2
                )
            )
                .prop_map(|(l, n, p)| MergeOp::Node(
                    l,
                    n,
                    p.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
                )),
            (0..64usize, rel_type(), 0..64usize).prop_map(|(a, t, b)| MergeOp::Rel(a, t, b)),
        ],
        0..40,
    )
}

/// Applies `ops`; relationship ops address the nodes merged so far by
/// position and are skipped while none exist.
pub fn apply(g: &mut GraphStore, ops: &[MergeOp]) {
    let mut ids = Vec::new();
    for op in ops {
        match op {
            MergeOp::Node(l, n, props) => {
                let props: Properties = props
                    .iter()
                    .map(|(k, v)| (k.clone(), PropertyValue::text(v)))
                    .collect();
                ids.push(g.merge_node(*l, n, props).unwrap());
            }
            MergeOp::Rel(a, t, b) if !ids.is_empty() => {
                g.merge_relationship(ids[a % ids.len()], *t, ids[b % ids.len()])
                    .unwrap();
            }
            MergeOp::Rel(..) => {}
        }
    }
}

/// Expected search view: matches by id, then their neighbors by id, capped;
/// links with both ends kept, by id, capped.
pub fn search_oracle(
    g: &GraphStore,
    keyword: &str,
    node_limit: usize,
    rel_limit: usize,
) -> (Vec<NodeId>, Vec<RelId>) {
    let (ids, adj) = dense_adjacency(g);
    let matched: Vec<usize> = (0..ids.len())
        .filter(|&i| g.node(ids[i]).unwrap().name().contains(keyword))
        .collect();
    let mut nodes: Vec<NodeId> = matched.iter().map(|&i| ids[i]).collect();
    for j in 0..ids.len() {
        if !matched.contains(&j) && matched.iter().any(|&i| adj[i][j]) {
            nodes.push(ids[j]);
        }
    }
    nodes.truncate(node_limit);
    let kept: BTreeSet<NodeId> = nodes.iter().copied().collect();
    let mut links: Vec<RelId> = g
        .relationships()
        .filter(|r| kept.contains(&r.source) && kept.contains(&r.target))
        .map(|r| r.id)
        .collect();
    links.truncate(rel_limit);
    (nodes, links)
}

const CORE_KEYS: [&str; 7] = [
    "cpu",
    "ram",
    "storage",
    "ports",
    "resolution",
    "power",
    "capacity",
];

/// Independent similarity: allowlist filter, explicit loops, no shared code.
pub fn similarity_oracle(user: &BTreeMap<String, String>, cand: &BTreeMap<String, String>) -> f64 {
    let emb = MockEmbedder::default();
    let core = |m: &BTreeMap<String, String>| -> Vec<Vec<f64>> {
        m.iter()
            .filter(|(k, _)| CORE_KEYS.contains(&k.to_lowercase().as_str()))
            .map(|(k, v)| emb.embed(&format!("{k}: {v}")).unwrap())
            .collect()
    };
    let (u, c) = (core(user), core(cand));
    if c.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    for a in &u {
        let mut best = 0.0f64;
        for b in &c {
            let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
            for i in 0..a.len() {
                dot += a[i] * b[i];
                na += a[i] * a[i];
                nb += b[i] * b[i];
            }
            let cos = if na == 0.0 || nb == 0.0 {
                0.0
            } else {
                dot / (na.sqrt() * nb.sqrt())
            };
            best = best.max(cos.clamp(0.0, 1.0));
        }
        sum += best;
    }
    sum / u.len() as f64
}
