//! Plain-text edge lists: one whitespace-separated label pair per line,
//! `#` comment lines. Edges are undirected.
//!
//! A `#@labels a b c ...` comment fixes the id order of the listed labels
//! (and keeps isolated nodes). Files written by [`save_edge_list`] carry one.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

const LABELS_PRAGMA: &str = "#@labels";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListFile {
    pub path: PathBuf,
    pub graph: Graph,
    /// `labels[id]` is the label first seen for that id.
    pub labels: Vec<String>,
    pub line_count: usize,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

impl EdgeListFile {
    pub fn warnings(&self) -> usize {
        self.duplicate_edges + self.self_loops
    }

    pub fn label_ids(&self) -> HashMap<&str, usize> {
        self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
    }

    pub fn stats(&self) -> Result<GraphStats> {
        let mut s = GraphStats::of(&self.graph)?;
        s.duplicate_edges = self.duplicate_edges;
        s.self_loops = self.self_loops;
        Ok(s)
    }
}

/// Parses edge-list text. `path` is only used in error messages.
pub fn parse_edge_list<'a>(text: &'a str, path: &Path) -> Result<EdgeListFile> {
    let mut ids: HashMap<&'a str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut self_loops = 0;
    let mut line_count = 0;
    let mut id = |label: &'a str| -> usize {
        *ids.entry(label).or_insert_with(|| {
            labels.push(label.to_string());
            labels.len() - 1
        })
    };
    for (lineno, line) in text.lines().enumerate() {
        line_count += 1;
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix(LABELS_PRAGMA) {
            rest.split_whitespace().for_each(|l| {
                id(l);
            });
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: format!("expected 2 tokens, found {}", tokens.len()),
            });
        }
        let i = id(tokens[0]);
        let j = id(tokens[1]);
        if i == j {
            self_loops += 1;
        } else {
            edges.push((i.min(j), i.max(j)));
        }
    }
    if labels.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: line_count,
            message: "no edges found".into(),
        });
    }
    let raw = edges.len();
    edges.sort_unstable();
    edges.dedup();
    let duplicate_edges = raw - edges.len();
    let graph = Graph::from_edges(labels.len(), edges)?;
    Ok(EdgeListFile {
        path: path.to_path_buf(),
        graph,
        labels,
        line_count,
        duplicate_edges,
        self_loops,
    })
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<EdgeListFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path)
}

/// Edge-list text for `g`, header first, edges in `(i, j)` id order.
pub fn format_edge_list(g: &Graph, labels: &[String]) -> Result<String> {
    if labels.len() != g.n() {
        return Err(Error::SizeMismatch {
            left: labels.len(),
            right: g.n(),
        });
    }
    let mut out = format!(
        "# deanon {} edge list\n# n={} m={}\n{LABELS_PRAGMA}",
        env!("CARGO_PKG_VERSION"),
        g.n(),
        g.m()
    );
    for l in labels {
        if l.is_empty() || l.starts_with('#') || l.contains(char::is_whitespace) {
            return Err(Error::invalid(format!("label {l:?} cannot be written to an edge list")));
        }
        out.push(' ');
        out.push_str(l);
    }
    out.push('\n');
    for (i, j) in g.edges() {
        writeln!(out, "{} {}", labels[i], labels[j]).expect("write to String");
    }
    Ok(out)
}

pub fn save_edge_list(g: &Graph, labels: &[String], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = format_edge_list(g, labels)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Decimal labels `0..n`.
pub fn identity_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub density: f64,
    pub components: usize,
    pub largest_component: usize,
    pub isolated_nodes: usize,
    pub max_degree: usize,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

impl GraphStats {
    pub fn of(g: &Graph) -> Result<Self> {
        let sizes = component_sizes(g);
        Ok(GraphStats {
            n: g.n(),
            m: g.m(),
            density: if g.n() >= 2 { g.density()? } else { 0.0 },
            components: sizes.len(),
            largest_component: sizes.iter().copied().max().unwrap_or(0),
            isolated_nodes: (0..g.n()).filter(|&i| g.neighbors(i).is_empty()).count(),
            max_degree: (0..g.n()).map(|i| g.neighbors(i).len()).max().unwrap_or(0),
            duplicate_edges: 0,
            self_loops: 0,
        })
    }
}

/// Sizes of connected components, in order of their smallest node.
pub fn component_sizes(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}
