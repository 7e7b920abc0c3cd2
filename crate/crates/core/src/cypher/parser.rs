use std::collections::HashMap;

use super::ast::{Clause, Direction, Literal, NodePattern, Operand, Pattern, Query, RelPattern};
use super::lexer::{tokenize, Keyword, Token, TokenKind};
use super::QueryError;
use crate::graph::{Label, RelType};

/// Parses a single query. A trailing `;` is accepted.
pub fn parse(input: &str) -> Result<Query, QueryError> {
    let mut queries = parse_script(input)?;
    match queries.len() {
        0 => Ok(Query::default()),
        1 => Ok(queries.remove(0)),
        _ => Err(QueryError::Parse {
            offset: 0,
            expected: vec!["a single statement".into()],
            found: format!("{} statements", queries.len()),
        }),
    }
}

/// Parses `;`-separated statements. Empty statements are skipped.
pub fn parse_script(input: &str) -> Result<Vec<Query>, QueryError> {
    let tokens = tokenize(input)?;
    let mut out = Vec::new();
    for statement in tokens.split(|t| t.kind == TokenKind::Punct(';')) {
        if statement.is_empty() {
            continue;
        }
        let mut p = Parser {
            tokens: statement,
            pos: 0,
            end: input.len(),
        };
        let (query, offsets) = p.query()?;
        check(&query, &offsets)?;
        out.push(query);
    }
    Ok(out)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    end: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, QueryError> {
        Err(QueryError::Parse {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self
                .peek()
                .map_or_else(|| "end of input".to_string(), |t| format!("`{}`", t.text)),
        })
    }

    fn at_punct(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { kind: TokenKind::Punct(p), .. }) if *p == c)
    }

    fn eat_punct(&mut self, c: char) -> bool {
        let hit = self.at_punct(c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn punct(&mut self, c: char) -> Result<(), QueryError> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            self.error(&[&format!("`{c}`")])
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, QueryError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Identifier(s),
                ..
            }) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => self.error(&[what]),
        }
    }

    fn keyword(&mut self, k: Keyword) -> Result<(), QueryError> {
        if matches!(self.peek(), Some(Token { kind: TokenKind::Keyword(x), .. }) if *x == k) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(&[k.as_str()])
        }
    }

    fn label(&mut self) -> Result<Label, QueryError> {
        let off = self.offset();
        let name = self.ident("a node label")?;
        name.parse().map_err(|_| QueryError::Parse {
            offset: off,
            expected: Label::ALL.iter().map(|l| l.to_string()).collect(),
            found: format!("`{name}`"),
        })
    }

    fn rel_type(&mut self) -> Result<RelType, QueryError> {
        let off = self.offset();
        let name = self.ident("a relationship type")?;
        name.parse().map_err(|_| QueryError::Parse {
            offset: off,
            expected: RelType::ALL.iter().map(|t| t.to_string()).collect(),
            found: format!("`{name}`"),
        })
    }

    fn operand(&mut self) -> Result<Operand, QueryError> {
        let op = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::StringLiteral(s)) => Operand::Literal(Literal::Text(s.clone())),
            Some(TokenKind::Number(n)) => Operand::Literal(Literal::Number(*n)),
            Some(TokenKind::Parameter(p)) => Operand::Param(p.clone()),
            _ => return self.error(&["a string", "a number", "a $parameter"]),
        };
        self.pos += 1;
        Ok(op)
    }

    /// Parses clauses until the statement ends; also returns each clause's
    /// starting offset for diagnostics.
    fn query(&mut self) -> Result<(Query, Vec<usize>), QueryError> {
        let mut clauses = Vec::new();
        let mut offsets = Vec::new();
        while self.peek().is_some() {
            offsets.push(self.offset());
            clauses.push(self.clause()?);
        }
        Ok((Query { clauses }, offsets))
    }

    fn clause(&mut self) -> Result<Clause, QueryError> {
        let kw = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Keyword(k)) => *k,
            _ => return self.error(&["MERGE", "MATCH", "WHERE", "RETURN", "LIMIT"]),
        };
        self.pos += 1;
        match kw {
            Keyword::Merge => self.merge(),
            Keyword::Match => Ok(Clause::Match(self.pattern()?)),
            Keyword::Where => {
                let var = self.ident("a variable")?;
                self.punct('.')?;
                let property = self.ident("a property name")?;
                self.keyword(Keyword::Contains)?;
                let operand = self.operand()?;
                Ok(Clause::Where {
                    var,
                    property,
                    operand,
                })
            }
            Keyword::Return => {
                let mut items = vec![self.ident("a variable")?];
                while self.eat_punct(',') {
                    items.push(self.ident("a variable")?);
                }
                Ok(Clause::Return { items })
            }
            Keyword::Limit => Ok(Clause::Limit(self.operand()?)),
            Keyword::Contains => {
                self.pos -= 1;
                self.error(&["MERGE", "MATCH", "WHERE", "RETURN", "LIMIT"])
            }
        }
    }

    fn merge(&mut self) -> Result<Clause, QueryError> {
        self.punct('(')?;
        let var = self.ident("a variable")?;
        if self.eat_punct(':') {
            let label = self.label()?;
            let mut properties = Vec::new();
            if self.eat_punct('{') {
                loop {
                    let key = self.ident("a property name")?;
                    self.punct(':')?;
                    properties.push((key, self.operand()?));
                    if !self.eat_punct(',') {
                        break;
                    }
                }
                self.punct('}')?;
            }
            self.punct(')')?;
            return Ok(Clause::MergeNode {
                var,
                label,
                properties,
            });
        }
        self.punct(')')?;

        let incoming = self.eat_punct('<');
        self.punct('-')?;
        self.punct('[')?;
        self.punct(':')?;
        let rel_type = self.rel_type()?;
        self.punct(']')?;
        self.punct('-')?;
        let outgoing = self.eat_punct('>');
        let direction = match (incoming, outgoing) {
            (false, true) => Direction::Outgoing,
            (true, false) => Direction::Incoming,
            (true, true) => return self.error(&["`(`"]),
            (false, false) => return self.error(&["`>`"]),
        };
        self.punct('(')?;
        let target = self.ident("a variable")?;
        self.punct(')')?;
        Ok(Clause::MergeRel {
            source: var,
            rel_type,
            target,
            direction,
        })
    }

    fn node_pattern(&mut self) -> Result<NodePattern, QueryError> {
        self.punct('(')?;
        let var = self.ident("a variable")?;
        let label = if self.eat_punct(':') {
            Some(self.label()?)
        } else {
            None
        };
        self.punct(')')?;
        Ok(NodePattern { var, label })
    }

    fn pattern(&mut self) -> Result<Pattern, QueryError> {
        let left = self.node_pattern()?;
        if !self.at_punct('-') && !self.at_punct('<') {
            return Ok(Pattern::Node(left));
        }
        let incoming = self.eat_punct('<');
        self.punct('-')?;
        self.punct('[')?;
        let var = match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Identifier(_)) => Some(self.ident("a variable")?),
            _ => None,
        };
        let rel_type = if self.eat_punct(':') {
            Some(self.rel_type()?)
        } else {
            None
        };
        self.punct(']')?;
        self.punct('-')?;
        let outgoing = self.eat_punct('>');
        let direction = match (incoming, outgoing) {
            (false, false) => Direction::Either,
            (false, true) => Direction::Outgoing,
            (true, false) => Direction::Incoming,
            (true, true) => return self.error(&["`(`"]),
        };
        let right = self.node_pattern()?;
        Ok(Pattern::Path {
            left,
            rel: RelPattern { var, rel_type },
            direction,
            right,
        })
    }
}

#[derive(Clone, Copy, PartialEq)]
enum VarKind {
    Node,
    Rel,
}

/// Clause ordering and variable scoping.
fn check(query: &Query, offsets: &[usize]) -> Result<(), QueryError> {
    let mut scope: HashMap<&str, VarKind> = HashMap::new();
    let mut seen_return = false;
    let mut seen_limit = false;

    for (i, clause) in query.clauses.iter().enumerate() {
        let offset = offsets[i];
        let order = |message: &str| QueryError::Parse {
            offset,
            expected: vec![message.to_string()],
            found: format!("`{}`", clause.to_string().split(' ').next().unwrap_or("")),
        };
        let bind_err = |message: String| QueryError::Bind { offset, message };

        if seen_limit {
            return Err(order("end of statement after LIMIT"));
        }
        if seen_return && !matches!(clause, Clause::Limit(_)) {
            return Err(order("LIMIT or end of statement after RETURN"));
        }

        let need_node = |scope: &HashMap<&str, VarKind>, v: &str| match scope.get(v) {
            Some(VarKind::Node) => Ok(()),
            Some(VarKind::Rel) => Err(bind_err(format!(
                "`{v}` is a relationship, expected a node"
            ))),
            None => Err(bind_err(format!("variable `{v}` is not bound"))),
        };

        match clause {
            Clause::MergeNode { var, .. } => {
                if scope.contains_key(var.as_str()) {
                    return Err(bind_err(format!("variable `{var}` is already bound")));
                }
                scope.insert(var, VarKind::Node);
            }
            Clause::MergeRel { source, target, .. } => {
                need_node(&scope, source)?;
                need_node(&scope, target)?;
            }
            Clause::Match(pattern) => {
                let (nodes, rel) = match pattern {
                    Pattern::Node(n) => (vec![n], None),
                    Pattern::Path {
                        left, rel, right, ..
                    } => (vec![left, right], rel.var.as_deref()),
                };
                for n in nodes {
                    if scope.get(n.var.as_str()) == Some(&VarKind::Rel) {
                        return Err(bind_err(format!(
                            "`{}` is a relationship, expected a node",
                            n.var
                        )));
                    }
                    scope.insert(&n.var, VarKind::Node);
                }
                if let Some(r) = rel {
                    if scope.contains_key(r) {
                        return Err(bind_err(format!("variable `{r}` is already bound")));
                    }
                    scope.insert(r, VarKind::Rel);
                }
            }
            Clause::Where { var, .. } => {
                if i == 0 || !matches!(query.clauses[i - 1], Clause::Match(_)) {
                    return Err(order("WHERE directly after MATCH"));
                }
                need_node(&scope, var)?;
            }
            Clause::Return { items } => {
                for v in items {
                    if !scope.contains_key(v.as_str()) {
                        return Err(bind_err(format!("variable `{v}` is not bound")));
                    }
                }
                seen_return = true;
            }
            Clause::Limit(_) => {
                if !seen_return {
                    return Err(order("RETURN before LIMIT"));
                }
                seen_limit = true;
            }
        }
    }
    Ok(())
}
