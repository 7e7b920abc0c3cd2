use std::collections::BTreeMap;

use serde::Serialize;

use super::ast::{Clause, Direction, Literal, NodePattern, Operand, Pattern, Query, RelPattern};
use super::QueryError;
use crate::graph::{
    GraphError, GraphStore, Node, NodeId, Properties, PropertyValue, RelId, Relationship,
};

pub type Params = BTreeMap<String, PropertyValue>;

/// A value bound in a result row.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Node(Node),
    Relationship(Relationship),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl ResultTable {
    /// Rows as `{column: value}` objects.
    pub fn to_json_rows(&self) -> Vec<serde_json::Value> {
        self.rows
            .iter()
            .map(|row| {
                let obj = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| {
                        (
                            c.clone(),
                            serde_json::to_value(v).expect("value serializes"),
                        )
                    })
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Bound {
    Node(NodeId),
    Rel(RelId),
}

type Row = BTreeMap<String, Bound>;

/// Executes any query, taking the writer role for MERGE clauses.
pub fn execute(
    query: &Query,
    params: &Params,
    store: &mut GraphStore,
) -> Result<ResultTable, QueryError> {
    let resolved = Resolved::new(query, params)?;
    let mut rows = vec![Row::new()];
    for (i, clause) in query.clauses.iter().enumerate() {
        rows = match clause {
            Clause::MergeNode { .. } | Clause::MergeRel { .. } => {
                merge(store, clause, &resolved.merge_props[i], rows)?
            }
            _ => read_clause(store, clause, resolved.contains[i].as_deref(), rows),
        };
    }
    Ok(finish(store, query, &resolved, rows))
}

/// Executes a read-only query. Queries containing MERGE are rejected before
/// anything runs.
pub fn execute_read(
    query: &Query,
    params: &Params,
    store: &GraphStore,
) -> Result<ResultTable, QueryError> {
    if !query.is_read_only() {
        return Err(QueryError::NotReadOnly);
    }
    let resolved = Resolved::new(query, params)?;
    let mut rows = vec![Row::new()];
    for (i, clause) in query.clauses.iter().enumerate() {
        rows = read_clause(store, clause, resolved.contains[i].as_deref(), rows);
    }
    Ok(finish(store, query, &resolved, rows))
}

/// Operands resolved against parameters and type-checked up front, so a
/// failing query never partially applies its merges.
struct Resolved {
    merge_props: Vec<Option<(String, Properties)>>,
    contains: Vec<Option<String>>,
    limit: Option<usize>,
}

impl Resolved {
    fn new(query: &Query, params: &Params) -> Result<Self, QueryError> {
        let value = |op: &Operand| -> Result<PropertyValue, QueryError> {
            match op {
                Operand::Literal(Literal::Text(s)) => Ok(PropertyValue::Text(s.clone())),
                Operand::Literal(Literal::Number(n)) => Ok(PropertyValue::Number(*n)),
                Operand::Param(p) => params
                    .get(p)
                    .cloned()
                    .ok_or_else(|| QueryError::MissingParam(p.clone())),
            }
        };
        let mut merge_props = Vec::new();
        let mut contains = Vec::new();
        let mut limit = None;

        for clause in &query.clauses {
            let mut m = None;
            let mut c = None;
            match clause {
                Clause::MergeNode {
                    properties, var, ..
                } => {
                    let mut props = Properties::new();
                    for (k, op) in properties {
                        let v = value(op)?;
                        if !v.is_valid() {
                            return Err(QueryError::Type(format!("property `{k}` is not finite")));
                        }
                        props.insert(k.clone(), v);
                    }
                    let name = match props.remove("name") {
                        Some(PropertyValue::Text(s)) => s,
                        Some(_) => {
                            return Err(QueryError::Type(format!("name of `{var}` must be text")))
                        }
                        None => String::new(),
                    };
                    if name.is_empty() {
                        return Err(GraphError::InvalidName.into());
                    }
                    m = Some((name, props));
                }
                Clause::Where { operand, .. } => match value(operand)? {
                    PropertyValue::Text(s) => c = Some(s),
                    other => {
                        return Err(QueryError::Type(format!(
                            "CONTAINS operand must be text, got {other:?}"
                        )))
                    }
                },
                Clause::Limit(op) => {
                    let v = value(op)?;
                    match v.as_number() {
                        Some(n) if n >= 0.0 && n.fract() == 0.0 => limit = Some(n as usize),
                        _ => {
                            return Err(QueryError::Type(format!(
                                "LIMIT must be a nonnegative integer, got {v:?}"
                            )))
                        }
                    }
                }
                _ => {}
            }
            merge_props.push(m);
            contains.push(c);
        }
        Ok(Resolved {
            merge_props,
            contains,
            limit,
        })
    }
}

fn merge(
    store: &mut GraphStore,
    clause: &Clause,
    props: &Option<(String, Properties)>,
    rows: Vec<Row>,
) -> Result<Vec<Row>, QueryError> {
    let mut out = Vec::with_capacity(rows.len());
    for mut row in rows {
        match clause {
            Clause::MergeNode { var, label, .. } => {
                let (name, extra) = props.as_ref().expect("resolved merge");
                let id = store.merge_node(*label, name, extra.clone())?;
                row.insert(var.clone(), Bound::Node(id));
            }
            Clause::MergeRel {
                source,
                rel_type,
                target,
                direction,
            } => {
                let (Some(&Bound::Node(s)), Some(&Bound::Node(t))) =
                    (row.get(source), row.get(target))
                else {
                    unreachable!("binding checked at parse time")
                };
                let (s, t) = match direction {
                    Direction::Incoming => (t, s),
                    _ => (s, t),
                };
                store.merge_relationship(s, *rel_type, t)?;
            }
            _ => unreachable!(),
        }
        out.push(row);
    }
    Ok(out)
}

fn read_clause(
    store: &GraphStore,
    clause: &Clause,
    contains: Option<&str>,
    rows: Vec<Row>,
) -> Vec<Row> {
    match clause {
        Clause::Match(pattern) => rows
            .into_iter()
            .flat_map(|row| match_pattern(store, pattern, row))
            .collect(),
        Clause::Where { var, property, .. } => {
            let needle = contains.expect("resolved where");
            rows.into_iter()
                .filter(|row| {
                    let Some(Bound::Node(id)) = row.get(var) else {
                        return false;
                    };
                    store
                        .node(*id)
                        .and_then(|n| n.properties.get(property))
                        .and_then(PropertyValue::as_text)
                        .is_some_and(|s| s.contains(needle))
                })
                .collect()
        }
        _ => rows,
    }
}

fn node_ok(store: &GraphStore, pat: &NodePattern, id: NodeId) -> bool {
    pat.label
        .is_none_or(|l| store.node(id).is_some_and(|n| n.label == l))
}

fn match_pattern(store: &GraphStore, pattern: &Pattern, row: Row) -> Vec<Row> {
    let candidates = |pat: &NodePattern| -> Vec<NodeId> {
        match row.get(&pat.var) {
            Some(Bound::Node(id)) => node_ok(store, pat, *id)
                .then_some(*id)
                .into_iter()
                .collect(),
            Some(Bound::Rel(_)) => Vec::new(),
            None => store
                .nodes()
                .filter(|n| pat.label.is_none_or(|l| n.label == l))
                .map(|n| n.id)
                .collect(),
        }
    };

    match pattern {
        Pattern::Node(pat) => candidates(pat)
            .into_iter()
            .map(|id| {
                let mut r = row.clone();
                r.insert(pat.var.clone(), Bound::Node(id));
                r
            })
            .collect(),
        Pattern::Path {
            left,
            rel,
            direction,
            right,
        } => {
            let mut out = Vec::new();
            for a in candidates(left) {
                for r in store.incident(a) {
                    if !rel_ok(rel, r) {
                        continue;
                    }
                    let b = match direction {
                        Direction::Outgoing if r.source == a => r.target,
                        Direction::Incoming if r.target == a => r.source,
                        Direction::Either => r.other(a).expect("incident"),
                        _ => continue,
                    };
                    if !node_ok(store, right, b) {
                        continue;
                    }
                    let right_bound = if right.var == left.var {
                        Some(a)
                    } else {
                        match row.get(&right.var) {
                            Some(Bound::Node(id)) => Some(*id),
                            Some(Bound::Rel(_)) => continue,
                            None => None,
                        }
                    };
                    if right_bound.is_some_and(|id| id != b) {
                        continue;
                    }
                    let mut next = row.clone();
                    next.insert(left.var.clone(), Bound::Node(a));
                    next.insert(right.var.clone(), Bound::Node(b));
                    if let Some(v) = &rel.var {
                        next.insert(v.clone(), Bound::Rel(r.id));
                    }
                    out.push(next);
                }
            }
            out
        }
    }
}

fn rel_ok(pat: &RelPattern, r: &Relationship) -> bool {
    pat.rel_type.is_none_or(|t| t == r.rel_type)
}

fn finish(store: &GraphStore, query: &Query, resolved: &Resolved, rows: Vec<Row>) -> ResultTable {
    let Some(items) = query.clauses.iter().find_map(|c| match c {
        Clause::Return { items } => Some(items),
        _ => None,
    }) else {
        return ResultTable::default();
    };

    let mut keyed: Vec<Vec<Bound>> = rows
        .into_iter()
        .map(|row| items.iter().map(|v| row[v]).collect())
        .collect();
    keyed.sort();
    if let Some(k) = resolved.limit {
        keyed.truncate(k);
    }

    let rows = keyed
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|b| match b {
                    Bound::Node(id) => Value::Node(store.node(id).expect("bound node").clone()),
                    Bound::Rel(id) => {
                        Value::Relationship(store.relationship(id).expect("bound rel").clone())
                    }
                })
                .collect()
        })
        .collect();
    ResultTable {
        columns: items.clone(),
        rows,
    }
}
