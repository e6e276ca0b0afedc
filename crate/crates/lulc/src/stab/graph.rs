//! Simple graphs over F₂ adjacency, the local-complementation rule that
//! generates LC orbits of graph states, and the serialization formats used
//! by the command line (JSON adjacency lists and DOT).

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::BitVec;
use crate::stab::tableau::{PauliGen, StabilizerTableau};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {}", .0 + 1)]
    SelfLoop(usize),
    #[error("duplicate edge [{}, {}]", .0 + 1, .1 + 1)]
    DuplicateEdge(usize, usize),
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// An undirected simple graph on vertices 0..n-1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<BitVec>,
}

impl Graph {
    #[must_use]
    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![BitVec::zeros(n); n] }
    }

    /// Build from symmetric zero-diagonal adjacency rows.
    pub(crate) fn from_adjacency(adj: Vec<BitVec>) -> Self {
        let n = adj.len();
        for (i, row) in adj.iter().enumerate() {
            assert_eq!(row.len(), n, "adjacency must be square");
            assert!(!row.get(i), "adjacency diagonal must be zero");
            for j in row.ones() {
                assert!(adj[j].get(i), "adjacency must be symmetric");
            }
        }
        Self { n, adj }
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for (i, j) in edges {
            if i >= n {
                return Err(GraphError::VertexOutOfRange(i, n));
            }
            if j >= n {
                return Err(GraphError::VertexOutOfRange(j, n));
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            if g.has_edge(i, j) {
                return Err(GraphError::DuplicateEdge(i.min(j), i.max(j)));
            }
            g.toggle_edge(i, j);
        }
        Ok(g)
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].get(j)
    }

    pub fn toggle_edge(&mut self, i: usize, j: usize) {
        assert_ne!(i, j, "no self-loops");
        self.adj[i].flip(j);
        self.adj[j].flip(i);
    }

    /// Neighborhood row of v as a bit vector.
    pub fn neighbors(&self, v: usize) -> &BitVec {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].weight()
    }

    /// Edges as (i, j) with i < j, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in self.adj[i].ones() {
                if j > i {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[must_use]
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitVec::weight).sum::<usize>() / 2
    }

    /// Number of edges present in exactly one of the two graphs.
    pub fn edge_difference(&self, other: &Graph) -> usize {
        assert_eq!(self.n, other.n, "graph size mismatch");
        self.adj
            .iter()
            .zip(&other.adj)
            .map(|(a, b)| a.xor(b).weight())
            .sum::<usize>()
            / 2
    }

    /// Complement the subgraph induced by the neighborhood of v.
    #[must_use]
    pub fn local_complement(&self, v: usize) -> Graph {
        assert!(v < self.n, "vertex {v} out of range");
        let mut out = self.clone();
        let nb: Vec<usize> = self.adj[v].ones().collect();
        for (a, &i) in nb.iter().enumerate() {
            for &j in &nb[a + 1..] {
                out.toggle_edge(i, j);
            }
        }
        out
    }

    /// Canonical graph-state tableau: X_v Z(N(v)) with phase +1 per vertex.
    #[must_use]
    pub fn tableau(&self) -> StabilizerTableau {
        let gens = (0..self.n)
            .map(|v| PauliGen::new(BitVec::unit(self.n, v), self.adj[v].clone(), 0))
            .collect();
        StabilizerTableau::new(self.n, gens).expect("graph tableau is always valid")
    }

    /// DOT rendering with 1-based vertex labels.
    #[must_use]
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph {name} {{");
        for v in 0..self.n {
            let _ = writeln!(out, "  {};", v + 1);
        }
        for (i, j) in self.edges() {
            let _ = writeln!(out, "  {} -- {};", i + 1, j + 1);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            n: self.n,
            edges: self.edges().iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let mut edges = Vec::with_capacity(file.edges.len());
        for [i, j] in file.edges {
            if i == 0 || j == 0 {
                return Err(GraphError::Json("vertex labels are 1-based".into()));
            }
            edges.push((i - 1, j - 1));
        }
        Self::from_edges(file.n, edges)
    }
}

/// JSON shape: {"n": 5, "edges": [[1,2], ...]} with 1-based labels.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// BFS closure of a graph under local complementation at every vertex.
#[derive(Clone, Debug)]
pub struct OrbitResult {
    pub graphs: BTreeSet<Graph>,
    /// False when the cap was hit and the orbit is only partial.
    pub complete: bool,
}

impl OrbitResult {
    pub fn contains(&self, g: &Graph) -> bool {
        self.graphs.contains(g)
    }
}

/// Enumerate the LC orbit of g, up to `cap` distinct graphs.
#[must_use]
pub fn lc_orbit(g: &Graph, cap: usize) -> OrbitResult {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(g.clone());
    queue.push_back(g.clone());
    while let Some(cur) = queue.pop_front() {
        for v in 0..cur.n() {
            // complementing a neighborhood of fewer than two vertices is a no-op
            if cur.degree(v) < 2 {
                continue;
            }
            let next = cur.local_complement(v);
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return OrbitResult { graphs: seen, complete: false };
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    OrbitResult { graphs: seen, complete: true }
}
