//! DIMACS ASCII and plain edge-list formats.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use super::{Edge, Graph, GraphError};

/// Result of reading a DIMACS file.
#[derive(Debug, Clone, PartialEq)]
pub struct DimacsGraph {
    pub graph: Graph,
    /// Edge count announced on the problem line.
    pub declared_edges: usize,
    /// Edge lines that repeated an already-seen pair and were dropped.
    pub duplicate_edges: usize,
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse { line, message: message.into() }
}

fn io_err(e: std::io::Error) -> GraphError {
    GraphError::Io(e.to_string())
}

/// Read DIMACS ASCII (`c` comments, one `p edge n m` line, `e u v` edges with
/// 1-based ids). Repeated edges collapse into one and are counted.
pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<DimacsGraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut duplicates = 0;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(io_err)?;
        let mut fields = line.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        match tag {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(parse_err(lineno, "second problem line"));
                }
                let kind = fields.next().ok_or_else(|| parse_err(lineno, "problem line missing format"))?;
                if kind != "edge" && kind != "col" {
                    return Err(parse_err(lineno, format!("unsupported problem format `{kind}`")));
                }
                let n = parse_count(fields.next(), lineno, "vertex count")?;
                let m = parse_count(fields.next(), lineno, "edge count")?;
                header = Some((n, m));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| parse_err(lineno, "edge before problem line"))?;
                let a = parse_count(fields.next(), lineno, "edge endpoint")?;
                let b = parse_count(fields.next(), lineno, "edge endpoint")?;
                if fields.next().is_some() {
                    return Err(parse_err(lineno, "trailing fields on edge line"));
                }
                for x in [a, b] {
                    if x == 0 || x > n {
                        return Err(parse_err(lineno, format!("vertex {x} out of range 1..={n}")));
                    }
                }
                if a == b {
                    return Err(parse_err(lineno, format!("self-loop at vertex {a}")));
                }
                let (u, v) = ((a.min(b)) - 1, (a.max(b)) - 1);
                if seen.insert((u, v)) {
                    edges.push(Edge { u, v, w: 1.0 });
                } else {
                    duplicates += 1;
                }
            }
            other => return Err(parse_err(lineno, format!("unknown line type `{other}`"))),
        }
    }
    let (n, declared_edges) = header.ok_or(GraphError::MissingProblemLine)?;
    Ok(DimacsGraph { graph: Graph::assemble(n, edges), declared_edges, duplicate_edges: duplicates })
}

fn parse_count(field: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    let s = field.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    s.parse().map_err(|_| parse_err(line, format!("bad {what} `{s}`")))
}

/// Write `p edge n m` followed by `e u v` lines, 1-based, ascending `(u, v)`.
pub fn write_dimacs<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "p edge {} {}", g.num_vertices(), g.num_edges())?;
    for e in g.edges() {
        writeln!(out, "e {} {}", e.u + 1, e.v + 1)?;
    }
    Ok(())
}

/// Read `u v [w]` lines (0-based, `#` comments). The vertex count is one past
/// the largest id seen; a `# vertices N` comment raises it to `N` so isolated
/// trailing vertices survive a round trip.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut declared_n = 0usize;
    let mut raw = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(io_err)?;
        let trimmed = line.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut parts = comment.split_whitespace();
            if parts.next() == Some("vertices") {
                declared_n = parse_count(parts.next(), lineno, "vertex count")?;
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let body = trimmed.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(parse_err(lineno, "expected `u v [w]`"));
        }
        let u = parse_count(Some(fields[0]), lineno, "vertex id")?;
        let v = parse_count(Some(fields[1]), lineno, "vertex id")?;
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| parse_err(lineno, format!("bad weight `{s}`")))?,
            None => 1.0,
        };
        raw.push((lineno, u, v, w));
    }
    let n = raw.iter().map(|&(_, u, v, _)| u.max(v) + 1).max().unwrap_or(0).max(declared_n);
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(raw.len());
    for (lineno, u, v, w) in raw {
        if u == v {
            return Err(parse_err(lineno, format!("self-loop at vertex {u}")));
        }
        if !w.is_finite() {
            return Err(parse_err(lineno, "non-finite weight"));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(parse_err(lineno, format!("duplicate edge ({}, {})", key.0, key.1)));
        }
        edges.push(Edge { u: key.0, v: key.1, w });
    }
    Ok(Graph::assemble(n, edges))
}

/// Write the edge-list format; weights use the shortest round-trip decimal.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# vertices {}", g.num_vertices())?;
    for e in g.edges() {
        if e.w == 1.0 {
            writeln!(out, "{} {}", e.u, e.v)?;
        } else {
            writeln!(out, "{} {} {:?}", e.u, e.v, e.w)?;
        }
    }
    Ok(())
}
