use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

use super::point::HeteroclinicPoint;

/// Index of an edge in an [`EdgeShift`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

/// The edge shift of a finite, strongly connected directed multigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeShift {
    adjacency: Vec<Vec<u64>>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<EdgeId>>,
    by_label: HashMap<String, EdgeId>,
}

impl EdgeShift {
    /// Expansion constant of the base-2 metric.
    pub const LAMBDA: u32 = 2;
    /// Bracket-domain radius.
    pub const EPSILON_X: f64 = 1.0;

    /// Builds the edge shift of an adjacency matrix. Edges are numbered
    /// row-major (all edges `u -> v` for `u = 0`, then `u = 1`, ...) and
    /// labelled by their index.
    pub fn from_adjacency(adjacency: Vec<Vec<u64>>) -> Result<Self> {
        let n = adjacency.len();
        if n == 0 {
            return Err(Error::InvalidShift("empty adjacency matrix".into()));
        }
        if adjacency.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidShift("adjacency matrix is not square".into()));
        }
        let mut edges = Vec::new();
        for (u, row) in adjacency.iter().enumerate() {
            for (v, &count) in row.iter().enumerate() {
                for _ in 0..count {
                    let label = edges.len().to_string();
                    edges.push(Edge {
                        source: u,
                        target: v,
                        label,
                    });
                }
            }
        }
        Self::from_edges(n, edges)
    }

    /// Builds the edge shift of an explicit labelled edge list.
    pub fn from_edges(num_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::InvalidShift("no vertices".into()));
        }
        if edges.is_empty() {
            return Err(Error::ZeroMatrix);
        }
        if u32::try_from(edges.len()).is_err() {
            return Err(Error::InvalidShift("too many edges".into()));
        }
        let mut adjacency = vec![vec![0u64; num_vertices]; num_vertices];
        let mut out_edges = vec![Vec::new(); num_vertices];
        let mut by_label = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if e.source >= num_vertices || e.target >= num_vertices {
                return Err(Error::InvalidShift(format!(
                    "edge {:?} references a missing vertex",
                    e.label
                )));
            }
            if e.label.is_empty() || e.label.contains(char::is_whitespace) {
                return Err(Error::InvalidShift(format!(
                    "edge label {:?} must be nonempty without whitespace",
                    e.label
                )));
            }
            if by_label.insert(e.label.clone(), EdgeId(i as u32)).is_some() {
                return Err(Error::InvalidShift(format!(
                    "duplicate edge label {:?}",
                    e.label
                )));
            }
            adjacency[e.source][e.target] += 1;
            out_edges[e.source].push(EdgeId(i as u32));
        }
        for v in 0..num_vertices {
            let has_out = adjacency[v].iter().any(|&c| c > 0);
            let has_in = adjacency.iter().any(|row| row[v] > 0);
            if !has_out || !has_in {
                return Err(Error::InvalidShift(format!("vertex {v} is stranded")));
            }
        }
        if !is_irreducible(&adjacency) {
            return Err(Error::ReducibleMatrix);
        }
        Ok(Self {
            adjacency,
            edges,
            out_edges,
            by_label,
        })
    }

    /// The full shift on `k` symbols: one vertex with `k` loops.
    pub fn full(k: u64) -> Result<Self> {
        Self::from_adjacency(vec![vec![k]])
    }

    /// The golden-mean shift (no two consecutive 1s) as the edge shift of
    /// `[[1, 1], [1, 0]]`: edge 0 is `0 -> 0`, edge 1 is `0 -> 1`, edge 2 is `1 -> 0`.
    pub fn golden_mean() -> Self {
        Self::from_adjacency(vec![vec![1, 1], vec![1, 0]]).expect("golden mean graph is valid")
    }

    pub fn lambda(&self) -> u32 {
        Self::LAMBDA
    }

    pub fn epsilon_x(&self) -> f64 {
        Self::EPSILON_X
    }

    pub fn adjacency(&self) -> &[Vec<u64>] {
        &self.adjacency
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        e.index() < self.edges.len()
    }

    pub fn source(&self, e: EdgeId) -> usize {
        self.edges[e.index()].source
    }

    pub fn target(&self, e: EdgeId) -> usize {
        self.edges[e.index()].target
    }

    pub fn label(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].label
    }

    pub fn edge_by_label(&self, label: &str) -> Option<EdgeId> {
        self.by_label.get(label).copied()
    }

    pub fn out_edges(&self, vertex: usize) -> &[EdgeId] {
        &self.out_edges[vertex]
    }

    /// Parses a whitespace-separated list of edge labels.
    pub fn parse_word(&self, text: &str) -> Result<Vec<EdgeId>> {
        text.split_whitespace()
            .map(|label| {
                self.edge_by_label(label)
                    .ok_or_else(|| Error::InvalidShift(format!("unknown edge label {label:?}")))
            })
            .collect()
    }

    pub fn format_word(&self, word: &[EdgeId]) -> String {
        word.iter()
            .map(|&e| self.label(e))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn follows(&self, first: EdgeId, second: EdgeId) -> bool {
        self.target(first) == self.source(second)
    }

    pub fn is_path(&self, word: &[EdgeId]) -> bool {
        word.iter().all(|&e| self.contains_edge(e))
            && word.windows(2).all(|w| self.follows(w[0], w[1]))
    }

    pub fn is_closed_path(&self, word: &[EdgeId]) -> bool {
        !word.is_empty() && self.is_path(word) && self.follows(word[word.len() - 1], word[0])
    }

    /// Checks that every coordinate of `x` is an edge of this shift and that
    /// consecutive coordinates compose.
    pub fn validate_point(&self, x: &HeteroclinicPoint) -> Result<()> {
        let bad = |what: &str| Error::MismatchedShift(format!("{what} of {x:?}"));
        if !self.is_closed_path(x.left().orbit().cycle()) {
            return Err(bad("left tail"));
        }
        if !self.is_closed_path(x.right().orbit().cycle()) {
            return Err(bad("right tail"));
        }
        // Tails are closed paths, so only the junctions around the core matter.
        for n in x.start() - 1..=x.end() {
            let (a, b) = (x.coord(n), x.coord(n + 1));
            if !self.follows(a, b) {
                return Err(bad("junction"));
            }
        }
        Ok(())
    }

    /// `d(x, y) = 2^{-m}` with `m = min{|n| : x_n != y_n}`, after checking both
    /// points live in this shift.
    pub fn metric(&self, x: &HeteroclinicPoint, y: &HeteroclinicPoint) -> Result<f64> {
        self.validate_point(x)?;
        self.validate_point(y)?;
        Ok(x.distance(y))
    }
}

/// Strong connectivity of the graph with the given adjacency matrix.
pub fn is_irreducible(adjacency: &[Vec<u64>]) -> bool {
    let n = adjacency.len();
    if n == 0 {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                let w = if forward {
                    adjacency[u][v]
                } else {
                    adjacency[v][u]
                };
                if w > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}
