use std::fmt;

use serde::Serialize;

use super::lexer::quote;
use crate::graph::{Label, RelType};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Literal {
    Text(String),
    Number(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Operand {
    Literal(Literal),
    Param(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// `-[]->`
    Outgoing,
    /// `<-[]-`
    Incoming,
    /// `-[]-`
    Either,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodePattern {
    pub var: String,
    pub label: Option<Label>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelPattern {
    pub var: Option<String>,
    pub rel_type: Option<RelType>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Pattern {
    Node(NodePattern),
    Path {
        left: NodePattern,
        rel: RelPattern,
        direction: Direction,
        right: NodePattern,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Clause {
    MergeNode {
        var: String,
        label: Label,
        properties: Vec<(String, Operand)>,
    },
    MergeRel {
        source: String,
        rel_type: RelType,
        target: String,
        /// Always `Outgoing` or `Incoming`; merging needs a direction.
        direction: Direction,
    },
    Match(Pattern),
    Where {
        var: String,
        property: String,
        operand: Operand,
    },
    Return {
        items: Vec<String>,
    },
    Limit(Operand),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Query {
    pub clauses: Vec<Clause>,
}

impl Query {
    pub fn is_read_only(&self) -> bool {
        !self
            .clauses
            .iter()
            .any(|c| matches!(c, Clause::MergeNode { .. } | Clause::MergeRel { .. }))
    }

    /// Names of all `$parameters` referenced.
    pub fn parameters(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for c in &self.clauses {
            let ops: Vec<&Operand> = match c {
                Clause::MergeNode { properties, .. } => properties.iter().map(|(_, o)| o).collect(),
                Clause::Where { operand, .. } | Clause::Limit(operand) => vec![operand],
                _ => vec![],
            };
            for op in ops {
                if let Operand::Param(p) = op {
                    out.push(p.as_str());
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Text(s) => f.write_str(&quote(s)),
            Literal::Number(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Literal(l) => l.fmt(f),
            Operand::Param(p) => write!(f, "${p}"),
        }
    }
}

impl fmt::Display for NodePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            Some(l) => write!(f, "({}:{l})", self.var),
            None => write!(f, "({})", self.var),
        }
    }
}

impl fmt::Display for RelPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        if let Some(v) = &self.var {
            f.write_str(v)?;
        }
        if let Some(t) = self.rel_type {
            write!(f, ":{t}")?;
        }
        f.write_str("]")
    }
}

fn write_path(
    f: &mut fmt::Formatter<'_>,
    left: &dyn fmt::Display,
    rel: &dyn fmt::Display,
    direction: Direction,
    right: &dyn fmt::Display,
) -> fmt::Result {
    match direction {
        Direction::Outgoing => write!(f, "{left}-{rel}->{right}"),
        Direction::Incoming => write!(f, "{left}<-{rel}-{right}"),
        Direction::Either => write!(f, "{left}-{rel}-{right}"),
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Node(n) => n.fmt(f),
            Pattern::Path {
                left,
                rel,
                direction,
                right,
            } => write_path(f, left, rel, *direction, right),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::MergeNode {
                var,
                label,
                properties,
            } => {
                write!(f, "MERGE ({var}:{label}")?;
                if !properties.is_empty() {
                    f.write_str(" {")?;
                    for (i, (k, v)) in properties.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{k}: {v}")?;
                    }
                    f.write_str("}")?;
                }
                f.write_str(")")
            }
            Clause::MergeRel {
                source,
                rel_type,
                target,
                direction,
            } => {
                f.write_str("MERGE ")?;
                write_path(
                    f,
                    &format_args!("({source})"),
                    &format_args!("[:{rel_type}]"),
                    *direction,
                    &format_args!("({target})"),
                )
            }
            Clause::Match(p) => write!(f, "MATCH {p}"),
            Clause::Where {
                var,
                property,
                operand,
            } => write!(f, "WHERE {var}.{property} CONTAINS {operand}"),
            Clause::Return { items } => write!(f, "RETURN {}", items.join(", ")),
            Clause::Limit(op) => write!(f, "LIMIT {op}"),
        }
    }
}

/// One clause per line.
impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            c.fmt(f)?;
        }
        Ok(())
    }
}
