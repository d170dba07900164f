//! Undirected weighted graphs, random instance generators and file formats.
//!
//! Vertex ids are dense `0..n`. Edges are stored once, canonically with
//! `u < v`, sorted ascending; the adjacency lists mirror the edge list
//! exactly. Unweighted graphs carry weight `1.0` on every edge.

mod coding;
mod generate;
mod io;

pub use coding::{coding_graph, write_coding_fixture, CodingFamily};
pub use generate::{gen_er, gen_regular, gen_sk, REGULAR_MAX_RESTARTS};
pub use io::{parse_dimacs, parse_edge_list, write_dimacs, write_edge_list, DimacsGraph};

use std::collections::HashSet;
use std::path::PathBuf;

use thiserror::Error;

pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("non-finite weight on edge ({0}, {1})")]
    NonFiniteWeight(VertexId, VertexId),
    #[error("edge probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("no {d}-regular graph on {n} vertices")]
    InfeasibleDegree { n: usize, d: usize },
    #[error("pairing model exceeded {0} restarts")]
    RestartsExceeded(usize),
    #[error("graph needs at least {0} vertices")]
    TooFewVertices(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing problem line")]
    MissingProblemLine,
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(VertexId, f64)>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adjacency: vec![Vec::new(); n] }
    }

    /// Build a graph from weighted edges, rejecting loops, duplicate pairs,
    /// out-of-range ids and non-finite weights.
    pub fn from_weighted_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (a, b, w) in edges {
            let (u, v) = canonical(n, a, b)?;
            if !w.is_finite() {
                return Err(GraphError::NonFiniteWeight(u, v));
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            list.push(Edge { u, v, w });
        }
        Ok(Self::assemble(n, list))
    }

    /// Unit-weight graph from vertex pairs.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        Self::from_weighted_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    fn assemble(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort_by_key(|e| (e.u, e.v));
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.u].push((e.v, e.w));
            adjacency[e.v].push((e.u, e.w));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }
        Graph { n, edges, adjacency }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, f64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.adjacency[v].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Mean degree `2m/n`; zero for the empty vertex set.
    pub fn avg_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            2.0 * self.edges.len() as f64 / self.n as f64
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n
            && v < self.n
            && self.adjacency[u].binary_search_by_key(&v, |&(x, _)| x).is_ok()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Subgraph induced by `keep` (sorted, distinct). Vertex `i` of the result
    /// is `keep[i]` of `self`.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| index[e.u] != usize::MAX && index[e.v] != usize::MAX)
            .map(|e| {
                let (a, b) = (index[e.u], index[e.v]);
                Edge { u: a.min(b), v: a.max(b), w: e.w }
            })
            .collect();
        Self::assemble(keep.len(), edges)
    }
}

fn canonical(n: usize, a: VertexId, b: VertexId) -> Result<(VertexId, VertexId), GraphError> {
    for x in [a, b] {
        if x >= n {
            return Err(GraphError::VertexOutOfRange { vertex: x, n });
        }
    }
    if a == b {
        return Err(GraphError::SelfLoop(a));
    }
    Ok((a.min(b), a.max(b)))
}

/// Where a graph comes from. Each variant carries exactly the parameters its
/// kind needs.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Er { n: usize, p: f64, seed: u64 },
    /// Sparse ER parameterized by mean degree: `p = dbar / n`.
    ErMeanDegree { n: usize, dbar: f64, seed: u64 },
    Regular { n: usize, d: usize, seed: u64 },
    Sk { n: usize, seed: u64 },
    DimacsFile(PathBuf),
    EdgeListFile(PathBuf),
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph, GraphError> {
        match self {
            GraphSource::Er { n, p, seed } => gen_er(*n, *p, *seed),
            GraphSource::ErMeanDegree { n, dbar, seed } => {
                let p = if *n == 0 { 0.0 } else { dbar / *n as f64 };
                gen_er(*n, p, *seed)
            }
            GraphSource::Regular { n, d, seed } => gen_regular(*n, *d, *seed),
            GraphSource::Sk { n, seed } => gen_sk(*n, *seed),
            GraphSource::DimacsFile(path) => {
                let file = std::fs::File::open(path).map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
                parse_dimacs(std::io::BufReader::new(file)).map(|d| d.graph)
            }
            GraphSource::EdgeListFile(path) => {
                let file = std::fs::File::open(path).map_err(|e| GraphError::Io(format!("{}: {e}", path.display())))?;
                parse_edge_list(std::io::BufReader::new(file))
            }
        }
    }
}
