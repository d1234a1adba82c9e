//! The line-oriented diagram format.
//!
//! ```text
//! rank: 4
//! edge: 0 1 3
//! edge: 1 2 4
//! edge: 2 3 inf
//! ```
//!
//! Pairs without an `edge:` line commute (label 2). Instead of `rank:` and
//! edges, a diagram may be given as one or more `type:` lines naming
//! standard diagrams (`A4`, `I2(5)`, `~A2`, ...); several of them form a
//! disjoint union. Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Write;

use coxdiag::{CoxeterLabel, CoxeterSystem, TypeClass, MAX_RANK};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A whitespace-separated token with its 1-based column.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(s: &str, offset: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(b)) => {
                out.push(Token {
                    text: &s[b..i],
                    column: offset + s[..b].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

enum Body {
    Empty,
    Edges {
        rank: usize,
        edges: BTreeMap<(usize, usize), CoxeterLabel>,
    },
    Types(Vec<CoxeterSystem>),
}

pub fn parse_diagram(text: &str) -> Result<CoxeterSystem, ParseError> {
    let mut body = Body::Empty;
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let err = |column: usize, message: String| ParseError {
            line,
            column,
            message,
        };
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw[..raw.len() - trimmed.len()].chars().count();
        let Some((key, rest)) = trimmed.split_once(':') else {
            return Err(err(
                indent + 1,
                "expected 'rank:', 'edge:' or 'type:'".into(),
            ));
        };
        let offset = indent + key.chars().count() + 1;
        let args = tokens(rest, offset);
        let end_column = raw.chars().count() + 1;
        let arity = |n: usize| -> Result<(), ParseError> {
            match args.get(n) {
                Some(extra) => Err(err(extra.column, format!("unexpected '{}'", extra.text))),
                None if args.len() < n => {
                    Err(err(end_column, format!("'{key}:' takes {n} values")))
                }
                None => Ok(()),
            }
        };
        match key {
            "rank" => {
                if !matches!(body, Body::Empty) {
                    return Err(err(
                        indent + 1,
                        "'rank:' must come first and only once".into(),
                    ));
                }
                arity(1)?;
                let t = &args[0];
                let rank: usize = t
                    .text
                    .parse()
                    .map_err(|_| err(t.column, format!("invalid rank '{}'", t.text)))?;
                if rank > MAX_RANK {
                    return Err(err(
                        t.column,
                        format!("rank {rank} exceeds the maximum of {MAX_RANK}"),
                    ));
                }
                body = Body::Edges {
                    rank,
                    edges: BTreeMap::new(),
                };
            }
            "edge" => {
                let Body::Edges { rank, edges } = &mut body else {
                    return Err(err(indent + 1, "'edge:' needs a preceding 'rank:'".into()));
                };
                arity(3)?;
                let index = |t: &Token| -> Result<usize, ParseError> {
                    let i: usize = t
                        .text
                        .parse()
                        .map_err(|_| err(t.column, format!("invalid vertex '{}'", t.text)))?;
                    if i >= *rank {
                        return Err(err(
                            t.column,
                            format!("vertex {i} is out of range for rank {rank}"),
                        ));
                    }
                    Ok(i)
                };
                let (i, j) = (index(&args[0])?, index(&args[1])?);
                if i >= j {
                    return Err(err(
                        args[1].column,
                        format!("expected i < j, got {i} and {j}"),
                    ));
                }
                let t = &args[2];
                let m: CoxeterLabel = t
                    .text
                    .parse()
                    .map_err(|_| err(t.column, format!("invalid label '{}'", t.text)))?;
                if !m.is_edge() {
                    return Err(err(
                        t.column,
                        format!("edge label must be at least 3 or 'inf', got {m}"),
                    ));
                }
                if edges.insert((i, j), m).is_some() {
                    return Err(err(indent + 1, format!("duplicate edge {i} {j}")));
                }
            }
            "type" => {
                arity(1)?;
                let t = &args[0];
                let class: TypeClass = t
                    .text
                    .parse()
                    .map_err(|_| err(t.column, format!("unknown type '{}'", t.text)))?;
                let d = class.diagram().expect("named types have diagrams");
                match &mut body {
                    Body::Empty => body = Body::Types(vec![d]),
                    Body::Types(parts) => parts.push(d),
                    Body::Edges { .. } => {
                        return Err(err(indent + 1, "'type:' cannot follow 'rank:'".into()));
                    }
                }
            }
            other => return Err(err(indent + 1, format!("unknown key '{other}'"))),
        }
    }
    match body {
        Body::Empty => Err(ParseError {
            line: last_line,
            column: 1,
            message: "no diagram given".into(),
        }),
        Body::Edges { rank, edges } => Ok(CoxeterSystem::from_edges(
            rank,
            edges.into_iter().map(|((i, j), m)| (i, j, m)),
        )
        .expect("edges were checked")),
        Body::Types(parts) => {
            let mut it = parts.into_iter();
            let first = it.next().expect("at least one type");
            it.try_fold(first, |acc, d| acc.disjoint_union(&d))
                .map_err(|e| ParseError {
                    line: last_line,
                    column: 1,
                    message: e.to_string(),
                })
        }
    }
}

/// Writes the diagram in the input format, edges in lexicographic order.
pub fn render(system: &CoxeterSystem) -> String {
    let mut out = format!("rank: {}\n", system.rank());
    let mut edges: Vec<_> = system.edges().collect();
    edges.sort_by_key(|&(i, j, _)| (i, j));
    for (i, j, m) in edges {
        writeln!(out, "edge: {i} {j} {m}").expect("writing to a string");
    }
    out
}
