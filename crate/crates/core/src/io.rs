//! Edge-list and weight-file formats.
//!
//! Edge lists hold one edge per line as `u v` or `u v w`, whitespace
//! separated. Lines starting with `#` or `%` and blank lines are skipped.
//! Vertex ids are arbitrary tokens, re-indexed densely in order of first
//! appearance; edge indices follow the order in which edges first appear.
//! Self-loops and repeated edges are dropped and counted.
//!
//! Weight files hold `u v w` per line and must name every edge of the graph
//! exactly once.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, WeightVector};

/// A parsed edge-list file.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: Graph,
    /// Present when every edge line carried a third column.
    pub weights: Option<WeightVector>,
    pub duplicates_dropped: usize,
    pub self_loops_dropped: usize,
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<EdgeList> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_edge_list(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

fn is_comment(line: &str) -> bool {
    let trimmed = line.trim_start();
    trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%')
}

fn parse_weight(token: &str, line: usize) -> Result<f64> {
    let w: f64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("weight {token:?} is not a number")))?;
    if !w.is_finite() || w < 0.0 {
        return Err(Error::parse(
            line,
            format!("weight {token:?} must be finite and nonnegative"),
        ));
    }
    Ok(w)
}

pub fn read_edge_list(reader: impl BufRead) -> Result<EdgeList> {
    let mut index: HashMap<String, VertexId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut weighted: Option<bool> = None;
    let mut duplicates_dropped = 0;
    let mut self_loops_dropped = 0;

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io("<edge list>", e))?;
        if is_comment(&line) {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::parse(
                lineno,
                format!("expected `u v` or `u v w`, found {} tokens", tokens.len()),
            ));
        }
        let has_weight = tokens.len() == 3;
        match weighted {
            None => weighted = Some(has_weight),
            Some(w) if w != has_weight => {
                return Err(Error::parse(
                    lineno,
                    "mixes weighted and unweighted edge lines",
                ));
            }
            _ => {}
        }
        let weight = if has_weight {
            Some(parse_weight(tokens[2], lineno)?)
        } else {
            None
        };
        if tokens[0] == tokens[1] {
            self_loops_dropped += 1;
            continue;
        }
        let mut id = |token: &str| {
            *index.entry(token.to_string()).or_insert_with(|| {
                labels.push(token.to_string());
                labels.len() - 1
            })
        };
        let (a, b) = (id(tokens[0]), id(tokens[1]));
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            duplicates_dropped += 1;
            continue;
        }
        edges.push(key);
        if let Some(w) = weight {
            weights.push(w);
        }
    }

    let graph = Graph::with_labels(labels, &edges)?;
    let weights = match weighted {
        Some(true) => Some(WeightVector::new(weights)?),
        _ => None,
    };
    Ok(EdgeList {
        graph,
        weights,
        duplicates_dropped,
        self_loops_dropped,
    })
}

/// Writes the canonical form of `graph`: one `u v` (or `u v w`) line per edge
/// in edge-index order, using the original labels.
pub fn write_edge_list(
    graph: &Graph,
    weights: Option<&WeightVector>,
    mut out: impl Write,
) -> std::io::Result<()> {
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        match weights {
            Some(w) => writeln!(out, "{} {} {}", graph.label(u), graph.label(v), w[e])?,
            None => writeln!(out, "{} {}", graph.label(u), graph.label(v))?,
        }
    }
    Ok(())
}

pub fn load_weights(graph: &Graph, path: impl AsRef<Path>) -> Result<WeightVector> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_weights(graph, BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_weights(graph: &Graph, reader: impl BufRead) -> Result<WeightVector> {
    let index: HashMap<&str, VertexId> = graph
        .labels()
        .iter()
        .enumerate()
        .map(|(v, label)| (label.as_str(), v))
        .collect();
    let edge_of: HashMap<(VertexId, VertexId), usize> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &uv)| (uv, e))
        .collect();
    let mut values: Vec<Option<f64>> = vec![None; graph.m()];

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io("<weights>", e))?;
        if is_comment(&line) {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::parse(
                lineno,
                format!("expected `u v w`, found {} tokens", tokens.len()),
            ));
        }
        let lookup = |token: &str| {
            index.get(token).copied().ok_or_else(|| {
                Error::WeightMismatch(format!("line {lineno}: unknown vertex {token:?}"))
            })
        };
        let (a, b) = (lookup(tokens[0])?, lookup(tokens[1])?);
        let e = *edge_of.get(&(a.min(b), a.max(b))).ok_or_else(|| {
            Error::WeightMismatch(format!(
                "line {lineno}: ({}, {}) is not an edge of the graph",
                tokens[0], tokens[1]
            ))
        })?;
        let w = parse_weight(tokens[2], lineno)?;
        if values[e].replace(w).is_some() {
            return Err(Error::WeightMismatch(format!(
                "line {lineno}: edge ({}, {}) is listed twice",
                tokens[0], tokens[1]
            )));
        }
    }

    let mut out = Vec::with_capacity(values.len());
    for (e, value) in values.into_iter().enumerate() {
        match value {
            Some(w) => out.push(w),
            None => {
                let (u, v) = graph.edge(e);
                return Err(Error::WeightMismatch(format!(
                    "no weight for edge ({}, {})",
                    graph.label(u),
                    graph.label(v)
                )));
            }
        }
    }
    WeightVector::new(out)
}

/// Writes a weight file that [`read_weights`] accepts for the same graph.
pub fn write_weights(
    graph: &Graph,
    weights: &WeightVector,
    out: impl Write,
) -> std::io::Result<()> {
    write_edge_list(graph, Some(weights), out)
}
