//! The closed product schema: five node labels and four relationship types,
//! each type connecting a Product to one other label.

use serde::Serialize;

use crate::graph::{GraphStore, Label, PropertyValue, RawSnapshot, RelType};

/// The `(source, target)` label pair a relationship type must connect.
pub fn endpoint_rule(rel_type: RelType) -> (Label, Label) {
    match rel_type {
        RelType::BelongsTo => (Label::Product, Label::Category),
        RelType::HasBrand => (Label::Product, Label::Brand),
        RelType::HasModel => (Label::Product, Label::Model),
        RelType::HasPrice => (Label::Product, Label::Price),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    UnknownLabel,
    UnknownRelType,
    BadEndpoint,
    MissingName,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Subject {
    Node,
    Relationship,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub subject: Subject,
    pub id: u64,
    pub message: String,
}

/// Checks every node and relationship of `store`. Empty means conformant.
pub fn validate(store: &GraphStore) -> Vec<Violation> {
    let mut out = Vec::new();
    for n in store.nodes() {
        if n.name().is_empty() {
            out.push(missing_name(n.id.0, n.label.as_str()));
        }
    }
    for r in store.relationships() {
        let (src, tgt) = (
            store.node(r.source).map(|n| n.label),
            store.node(r.target).map(|n| n.label),
        );
        if let (Some(src), Some(tgt)) = (src, tgt) {
            if let Some(v) = check_endpoints(r.id.0, r.rel_type, src, tgt) {
                out.push(v);
            }
        }
    }
    out
}

/// Like [`validate`], but over an unparsed snapshot document, so unknown
/// labels and relationship types are reported instead of rejected.
pub fn validate_snapshot(raw: &RawSnapshot) -> Vec<Violation> {
    use std::collections::HashMap;

    let mut out = Vec::new();
    let mut labels = HashMap::new();
    for n in &raw.nodes {
        match n.label.parse::<Label>() {
            Ok(l) => {
                labels.insert(n.id, l);
            }
            Err(_) => out.push(Violation {
                kind: ViolationKind::UnknownLabel,
                subject: Subject::Node,
                id: n.id,
                message: format!(
                    "node {}: expected one of {:?}, got label `{}`",
                    n.id,
                    Label::ALL.map(Label::as_str),
                    n.label
                ),
            }),
        }
        let named =
            matches!(n.properties.get("name"), Some(PropertyValue::Text(s)) if !s.is_empty());
        if !named {
            out.push(missing_name(n.id, &n.label));
        }
    }
    for r in &raw.relationships {
        let rel_type = match r.rel_type.parse::<RelType>() {
            Ok(t) => t,
            Err(_) => {
                out.push(Violation {
                    kind: ViolationKind::UnknownRelType,
                    subject: Subject::Relationship,
                    id: r.id,
                    message: format!(
                        "relationship {}: expected one of {:?}, got type `{}`",
                        r.id,
                        RelType::ALL.map(RelType::as_str),
                        r.rel_type
                    ),
                });
                continue;
            }
        };
        if let (Some(&src), Some(&tgt)) = (labels.get(&r.source), labels.get(&r.target)) {
            if let Some(v) = check_endpoints(r.id, rel_type, src, tgt) {
                out.push(v);
            }
        }
    }
    out
}

fn missing_name(id: u64, label: &str) -> Violation {
    Violation {
        kind: ViolationKind::MissingName,
        subject: Subject::Node,
        id,
        message: format!("{label} node {id}: expected a non-empty text name, got none"),
    }
}

fn check_endpoints(id: u64, rel_type: RelType, src: Label, tgt: Label) -> Option<Violation> {
    let (want_src, want_tgt) = endpoint_rule(rel_type);
    (src != want_src || tgt != want_tgt).then(|| Violation {
        kind: ViolationKind::BadEndpoint,
        subject: Subject::Relationship,
        id,
        message: format!(
            "{rel_type} relationship {id}: expected {want_src} -> {want_tgt}, got {src} -> {tgt}"
        ),
    })
}
