//! Query-file and inline-argument parsing.
//!
//! A query file lists the insertions of an invariant computation, one per
//! line, behind a versioned header:
//!
//! ```text
//! gkmgw query v1
//! # degree-zero twisted sector checks
//! insertion psi=0 point@p0
//! insertion unit@v:1
//! insertion one
//! insertion class v:1:u1+u2;v:2:1/2
//! ```
//!
//! Class terms name a group element (a class representative), not a class
//! index; the representative is folded to its conjugacy class. The same
//! class grammar (`point@v`, `unit@v:rep`, `one`, `class v:rep:coeff;...`)
//! is accepted inline by the `pairing` command.

use gkmgw_core::crcoh::{global_unit, point_class, sector_unit, EqCRClass, InertiaIndex};
use gkmgw_core::gkm::{EffClass, StackyGKMGraph};
use gkmgw_core::localize::Insertion;
use gkmgw_core::qfield::parse_ratfunc;
use thiserror::Error;

pub const QUERY_HEADER: &str = "gkmgw query v1";

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("query file: {0}")]
    Header(String),
    #[error("query file line {line}: {msg}")]
    Line { line: usize, msg: String },
}

/// Resolves `vertex:rep` to the vertex name and the conjugacy class of the
/// representative element.
fn resolve_sector(graph: &StackyGKMGraph, v: &str, rep: &str) -> Result<(String, usize), String> {
    let group = graph
        .vertices
        .get(v)
        .ok_or_else(|| format!("unknown vertex '{}'", v))?;
    let rep: usize = rep
        .parse()
        .map_err(|_| format!("bad element index '{}'", rep))?;
    if rep >= group.order() {
        return Err(format!(
            "element index {} out of range for |G| = {} at '{}'",
            rep,
            group.order(),
            v
        ));
    }
    Ok((v.to_string(), group.class_of(rep as u16)))
}

/// Parses one class expression against the graph.
pub fn parse_class_expr(graph: &StackyGKMGraph, expr: &str) -> Result<EqCRClass, String> {
    let expr = expr.trim();
    if expr == "one" {
        return Ok(global_unit(graph));
    }
    if let Some(v) = expr.strip_prefix("point@") {
        if !graph.vertices.contains_key(v) {
            return Err(format!("unknown vertex '{}'", v));
        }
        return Ok(point_class(graph, v));
    }
    if let Some(rest) = expr.strip_prefix("unit@") {
        let (v, rep) = rest
            .split_once(':')
            .ok_or_else(|| format!("expected unit@vertex:rep, found '{}'", expr))?;
        let (v, class) = resolve_sector(graph, v, rep)?;
        return Ok(sector_unit(graph, &v, class));
    }
    if let Some(rest) = expr.strip_prefix("class ") {
        let mut cls = EqCRClass::zero();
        for term in rest.split(';') {
            let mut parts = term.trim().splitn(3, ':');
            let (v, rep, coeff) = match (parts.next(), parts.next(), parts.next()) {
                (Some(v), Some(r), Some(c)) => (v, r, c),
                _ => return Err(format!("expected vertex:rep:coeff, found '{}'", term)),
            };
            let (v, class) = resolve_sector(graph, v, rep)?;
            let coeff = parse_ratfunc(coeff, graph.m).map_err(|e| e.to_string())?;
            cls.add_term(InertiaIndex::new(v, class), coeff);
        }
        return Ok(cls);
    }
    Err(format!("unrecognized class expression '{}'", expr))
}

/// Parses a full query file into insertion order.
pub fn parse_query_file(
    graph: &StackyGKMGraph,
    text: &str,
) -> Result<Vec<Insertion>, QueryError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == QUERY_HEADER => {}
        other => {
            return Err(QueryError::Header(format!(
                "expected header '{}', found '{}'",
                QUERY_HEADER,
                other.map(|(_, h)| h.trim()).unwrap_or("")
            )))
        }
    }
    let mut insertions = Vec::new();
    for (i, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let body = line.strip_prefix("insertion").and_then(|rest| {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                Some(rest.trim_start())
            } else {
                None
            }
        });
        let body = body.ok_or_else(|| QueryError::Line {
            line: i + 1,
            msg: format!("expected an insertion line, found '{}'", line),
        })?;
        let (psi, expr) = match body.strip_prefix("psi=") {
            Some(rest) => {
                let (num, expr) = rest.split_once(char::is_whitespace).ok_or_else(|| {
                    QueryError::Line { line: i + 1, msg: "psi=N needs a class".into() }
                })?;
                let psi = num.parse::<usize>().map_err(|_| QueryError::Line {
                    line: i + 1,
                    msg: format!("bad psi power '{}'", num),
                })?;
                (psi, expr.trim_start())
            }
            None => (0, body),
        };
        let class = parse_class_expr(graph, expr)
            .map_err(|msg| QueryError::Line { line: i + 1, msg })?;
        insertions.push(Insertion { psi, class });
    }
    Ok(insertions)
}

/// Parses a degree argument `e1:d1,e2:d2,...`; `-` or an empty string is the
/// zero class.
pub fn parse_degree(graph: &StackyGKMGraph, s: &str) -> Result<EffClass, String> {
    let mut beta = EffClass::default();
    let s = s.trim();
    if s.is_empty() || s == "-" {
        return Ok(beta);
    }
    for part in s.split(',') {
        let (e, d) = part
            .trim()
            .split_once(':')
            .ok_or_else(|| format!("expected edge:degree, found '{}'", part))?;
        if !graph.edges.contains_key(e) {
            return Err(format!("unknown edge '{}'", e));
        }
        let d: u64 = d
            .parse()
            .map_err(|_| format!("bad degree '{}' on edge '{}'", d, e))?;
        if d > 0 {
            *beta.0.entry(e.to_string()).or_insert(0) += d;
        }
    }
    Ok(beta)
}

/// Parses a monodromy constraint: one whitespace-separated group per
/// marking, each group a comma-separated list of allowed `vertex:rep`
/// sectors.
pub fn parse_monodromy(
    graph: &StackyGKMGraph,
    s: &str,
    markings: usize,
) -> Result<Vec<std::collections::BTreeSet<(String, usize)>>, String> {
    let mut out = Vec::new();
    for group in s.split_whitespace() {
        let mut set = std::collections::BTreeSet::new();
        for entry in group.split(',') {
            let (v, rep) = entry
                .split_once(':')
                .ok_or_else(|| format!("expected vertex:rep, found '{}'", entry))?;
            set.insert(resolve_sector(graph, v, rep)?);
        }
        out.push(set);
    }
    if out.len() != markings {
        return Err(format!(
            "monodromy lists {} markings, query has {}",
            out.len(),
            markings
        ));
    }
    Ok(out)
}
