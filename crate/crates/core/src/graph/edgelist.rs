//! Plain-text edge lists.
//!
//! ```text
//! # optional comments
//! 4          <- node count
//! 0 1
//! 1 2
//! 2 3
//! ```

use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

/// An edge list together with the lines that repeated an earlier edge.
#[derive(Debug, Clone)]
pub struct ParsedEdgeList {
    pub graph: Graph,
    pub duplicate_lines: Vec<usize>,
}

/// Parses an edge list. Duplicate edges are accepted and reported.
pub fn parse_edge_list<R: BufRead>(source: R) -> Result<ParsedEdgeList> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut duplicate_lines = Vec::new();

    for (index, line) in source.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let content = line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let Some(count) = n else {
            let count = content
                .parse::<usize>()
                .map_err(|_| parse_err(format!("expected node count, found {content:?}")))?;
            if count == 0 {
                return Err(parse_err("node count must be positive".into()));
            }
            n = Some(count);
            continue;
        };
        let mut fields = content.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(format!("expected \"u v\", found {content:?}")));
        };
        let parse_id = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(format!("invalid node id {s:?}")))
        };
        let (u, v) = (parse_id(a)?, parse_id(b)?);
        if u >= count || v >= count {
            return Err(parse_err(format!(
                "node id {} out of range for n = {count}",
                u.max(v)
            )));
        }
        if u == v {
            return Err(parse_err("self-loop".into()));
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        } else {
            duplicate_lines.push(line_no);
        }
    }

    let n = n.ok_or(Error::Parse {
        line: 0,
        message: "missing node count".into(),
    })?;
    let graph = Graph::from_edges(n, edges)?;
    Ok(ParsedEdgeList {
        graph,
        duplicate_lines,
    })
}

/// Reads an edge list, logging a warning for duplicated edges.
pub fn read_edge_list<R: BufRead>(source: R) -> Result<Graph> {
    let parsed = parse_edge_list(source)?;
    if !parsed.duplicate_lines.is_empty() {
        log::warn!(
            "edge list repeats {} edge(s) (first at line {}); duplicates ignored",
            parsed.duplicate_lines.len(),
            parsed.duplicate_lines[0]
        );
    }
    Ok(parsed.graph)
}

pub fn write_edge_list<W: Write>(g: &Graph, mut sink: W) -> Result<()> {
    writeln!(sink, "{}", g.node_count())?;
    for &(u, v) in g.edges() {
        writeln!(sink, "{u} {v}")?;
    }
    sink.flush()?;
    Ok(())
}
