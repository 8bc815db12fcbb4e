//! Text formats for graphs.
//!
//! Undirected graphs use the DIMACS edge format:
//!
//! ```text
//! c optional comments
//! p edge <n> <m>
//! e <u> <v>
//! ```
//!
//! Directed graphs use `p arc <n> <m>` followed by one `a <u> <v>` line per
//! arc. Vertices are 1-based in both formats. Lines starting with `s` carry
//! named vertex sets (see [`crate::families::load_component`]) and are
//! ignored by [`load_graph`].

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A named vertex set annotation (`s <name> <v1> <v2> ...`), 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SetAnnotation {
    pub name: String,
    pub vertices: Vec<usize>,
}

pub(crate) fn parse(text: &str) -> Result<(Graph, Vec<SetAnnotation>)> {
    let mut graph: Option<Graph> = None;
    let mut sets = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        let mut fields = line.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        match tag {
            "c" | "%" | "#" => {}
            "p" => {
                if graph.is_some() {
                    return Err(Error::parse(line_no, "duplicate problem line"));
                }
                let kind = fields.next();
                if !matches!(kind, Some("edge" | "arc" | "col")) {
                    return Err(Error::parse(
                        line_no,
                        "expected `p edge <n> <m>` or `p arc <n> <m>`",
                    ));
                }
                let n = number(fields.next(), line_no, "vertex count")?;
                let _m = number(fields.next(), line_no, "arc count")?;
                if fields.next().is_some() {
                    return Err(Error::parse(line_no, "trailing fields in problem line"));
                }
                graph = Some(Graph::empty(n));
            }
            "e" | "a" => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| Error::parse(line_no, "arc before the problem line"))?;
                let u = vertex(fields.next(), g.n(), line_no)?;
                let v = vertex(fields.next(), g.n(), line_no)?;
                if u == v {
                    return Err(Error::parse(
                        line_no,
                        format!("self-loop on vertex {}", u + 1),
                    ));
                }
                if tag == "e" {
                    g.add_edge(u, v)?;
                } else {
                    g.add_arc(u, v)?;
                }
            }
            "s" => {
                let g = graph.as_ref().ok_or_else(|| {
                    Error::parse(line_no, "set annotation before the problem line")
                })?;
                let name = fields
                    .next()
                    .ok_or_else(|| Error::parse(line_no, "set annotation without a name"))?
                    .to_string();
                let vertices = fields
                    .map(|f| vertex(Some(f), g.n(), line_no))
                    .collect::<Result<Vec<_>>>()?;
                sets.push(SetAnnotation { name, vertices });
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("unknown line type `{other}`"),
                ))
            }
        }
    }
    let graph =
        graph.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing problem line"))?;
    Ok((graph, sets))
}

fn number(field: Option<&str>, line: usize, what: &str) -> Result<usize> {
    field
        .ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what}")))
}

fn vertex(field: Option<&str>, n: usize, line: usize) -> Result<usize> {
    let v = number(field, line, "vertex")?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

/// Parses either graph format.
pub fn load_graph(bytes: &[u8]) -> Result<Graph> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::parse(1, format!("input is not UTF-8: {e}")))?;
    parse(text).map(|(g, _)| g)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    load_graph(&std::fs::read(path)?)
}

/// Serializes `g` in the edge format when undirected, the arc format otherwise.
pub fn save_graph(g: &Graph) -> Vec<u8> {
    format_graph(g, &[]).into_bytes()
}

pub fn write_graph(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    std::fs::write(path, save_graph(g))?;
    Ok(())
}

pub(crate) fn format_graph(g: &Graph, sets: &[(&str, &[usize])]) -> String {
    let mut out = String::new();
    if g.is_undirected() {
        let edges: Vec<_> = g.arcs().filter(|(u, v)| u < v).collect();
        writeln!(out, "p edge {} {}", g.n(), edges.len()).unwrap();
        for (u, v) in edges {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
    } else {
        writeln!(out, "p arc {} {}", g.n(), g.arc_count()).unwrap();
        for (u, v) in g.arcs() {
            writeln!(out, "a {} {}", u + 1, v + 1).unwrap();
        }
    }
    for (name, members) in sets {
        write!(out, "s {name}").unwrap();
        for v in members.iter() {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    out
}
