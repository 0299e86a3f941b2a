//! The trivial-intersection graph on the words of a constant-dimension code.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{GrassmannianCode, Subspace};

/// Simple graph on subspaces. Edges are stored as `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeGraph {
    vertices: Vec<Subspace>,
    edges: BTreeSet<(usize, usize)>,
}

impl CodeGraph {
    pub fn new<I>(vertices: Vec<Subspace>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::Malformed(format!("loop at vertex {i}")));
            }
            if i.max(j) >= vertices.len() {
                return Err(Error::Malformed(format!("edge ({i}, {j}) out of range")));
            }
            if !set.insert((i.min(j), i.max(j))) {
                return Err(Error::Malformed(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(CodeGraph {
            vertices,
            edges: set,
        })
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertices.len();
        self.edges.len() == n * n.saturating_sub(1) / 2
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// DOT text; node labels carry the vertex index and a hex rendering of its basis.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph Gamma {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(out, "  {i} [label=\"{i}:{}\"];", hex_basis(v)).unwrap();
        }
        for &(i, j) in &self.edges {
            writeln!(out, "  {i} -- {j};").unwrap();
        }
        out.push_str("}\n");
        out
    }

    /// 0/1 adjacency matrix, one CSV row per vertex, no header.
    pub fn adjacency_csv(&self) -> String {
        let n = self.vertices.len();
        let mut adj = vec![0u8; n * n];
        for &(i, j) in &self.edges {
            adj[i * n + j] = 1;
            adj[j * n + i] = 1;
        }
        let mut out = String::new();
        for row in adj.chunks(n.max(1)).take(n) {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Full bases for the DOT labels, as `{p, n, k, vertices}`.
    pub fn sidecar(&self) -> GraphSidecar {
        let first = self.vertices.first();
        GraphSidecar {
            p: first.map_or(0, |v| v.modulus()),
            n: first.map_or(0, |v| v.ambient()),
            k: first.map_or(0, |v| v.dim()),
            vertices: self.vertices.iter().map(|v| v.basis().to_rows()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSidecar {
    pub p: u32,
    pub n: usize,
    pub k: usize,
    pub vertices: Vec<Vec<Vec<u32>>>,
}

/// Each entry as fixed-width hex, rows joined by `.`.
fn hex_basis(s: &Subspace) -> String {
    let width = format!("{:x}", s.modulus() - 1).len();
    s.basis()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| format!("{x:0width$x}")).collect::<String>())
        .collect::<Vec<_>>()
        .join(".")
}

/// Vertices are the code's words in order; `i ~ j` iff their intersection is `{0}`.
pub fn build_gamma(code: &GrassmannianCode) -> CodeGraph {
    let w = code.words();
    let edges: Vec<(usize, usize)> = (0..w.len())
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..w.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| w[i].intersection_dim(&w[j]).expect("words share ambient") == 0)
        .collect();
    CodeGraph {
        vertices: w.to_vec(),
        edges: edges.into_iter().collect(),
    }
}
