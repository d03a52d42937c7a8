//! Simple undirected graphs with stable vertex identifiers.
//!
//! The graph doubles as the network of the message-passing model and as the
//! problem instance, so it is immutable after construction and cheap to share.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

/// Vertex identifier. Identifiers are unique but need not be contiguous.
pub type Vertex = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop at vertex {0} is not allowed in a simple graph")]
    SelfLoop(Vertex),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
}

/// An immutable simple undirected graph: no self-loops, no parallel edges,
/// symmetric adjacency. All query operations are pure.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl Graph {
    pub fn empty() -> Self {
        Graph::default()
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// are rejected. Endpoints are added as vertices automatically.
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Self::from_parts(std::iter::empty(), edges)
    }

    /// Builds a graph from explicit vertices (possibly isolated) plus edges.
    pub fn from_parts<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = Vertex>,
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        for v in vertices {
            adj.entry(v).or_default();
        }
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj.entry(u).or_default().insert(v);
            adj.entry(v).or_default().insert(u);
        }
        Ok(Graph { adj })
    }

    /// Parses the line-oriented edge-list format: one `u v` pair per line,
    /// `#` starts a comment, blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut it = content.split_whitespace();
            let u = parse_vertex(it.next(), line)?;
            let v = parse_vertex(it.next(), line)?;
            if it.next().is_some() {
                return Err(GraphError::Parse {
                    line,
                    msg: "expected exactly two vertex ids".into(),
                });
            }
            if u == v {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("self-loop at vertex {u}"),
                });
            }
            edges.push((u, v));
        }
        Graph::from_edges(edges)
    }

    /// Emits the graph in the edge-list format, sorted and deduplicated.
    /// Isolated vertices are recorded as comments since the format has no
    /// way to state them as data.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (v, nbrs) in &self.adj {
            if nbrs.is_empty() {
                let _ = writeln!(out, "# isolated {v}");
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|n| n.len()).sum::<usize>() / 2
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.vertices().collect()
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Open neighborhood. Empty set for unknown vertices.
    pub fn neighbors(&self, v: Vertex) -> &BTreeSet<Vertex> {
        static EMPTY: BTreeSet<Vertex> = BTreeSet::new();
        self.adj.get(&v).unwrap_or(&EMPTY)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(|n| n.len()).max().unwrap_or(0)
    }

    pub fn closed_neighborhood(&self, v: Vertex) -> BTreeSet<Vertex> {
        let mut set = self.neighbors(v).clone();
        set.insert(v);
        set
    }

    /// Union of closed neighborhoods over a vertex set.
    pub fn closed_neighborhood_of_set(&self, set: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
        let mut out = BTreeSet::new();
        for &v in set {
            out.insert(v);
            out.extend(self.neighbors(v).iter().copied());
        }
        out
    }

    /// Vertices at distance at most `radius` from `v`, including `v` itself.
    pub fn ball(&self, v: Vertex, radius: usize) -> Result<BTreeSet<Vertex>, GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let mut seen = BTreeSet::from([v]);
        let mut queue = VecDeque::from([(v, 0usize)]);
        while let Some((u, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for &w in self.neighbors(u) {
                if seen.insert(w) {
                    queue.push_back((w, d + 1));
                }
            }
        }
        Ok(seen)
    }

    /// Induced subgraph on `keep`. Vertices of `keep` missing from the graph
    /// are ignored.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, nbrs)| (v, nbrs.intersection(keep).copied().collect()))
            .collect();
        Graph { adj }
    }

    pub fn without_vertices(&self, drop: &BTreeSet<Vertex>) -> Graph {
        let keep: BTreeSet<Vertex> = self.vertices().filter(|v| !drop.contains(v)).collect();
        self.induced(&keep)
    }

    /// The star of `v`: the vertex, its neighbors, and its incident edges.
    /// This is exactly what a node knows before any communication.
    pub fn star(&self, v: Vertex) -> Graph {
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        adj.insert(v, self.neighbors(v).clone());
        for &u in self.neighbors(v) {
            adj.entry(u).or_default().insert(v);
        }
        Graph { adj }
    }

    /// Union of two graphs (vertex-wise and edge-wise).
    pub fn union(&self, other: &Graph) -> Graph {
        let mut out = self.clone();
        out.absorb(other);
        out
    }

    /// In-place union, used by the simulator to accumulate flooded
    /// knowledge without copying the accumulated graph per message.
    pub(crate) fn absorb(&mut self, other: &Graph) {
        for (&v, nbrs) in &other.adj {
            self.adj.entry(v).or_default().extend(nbrs.iter().copied());
        }
    }

    /// Degeneracy: the maximum over subgraphs of the minimum degree, computed
    /// by repeatedly peeling a vertex of minimum degree.
    pub fn degeneracy(&self) -> usize {
        let mut degree: BTreeMap<Vertex, usize> =
            self.adj.iter().map(|(&v, n)| (v, n.len())).collect();
        let mut order: BTreeSet<(usize, Vertex)> =
            degree.iter().map(|(&v, &d)| (d, v)).collect();
        let mut removed: BTreeSet<Vertex> = BTreeSet::new();
        let mut best = 0;
        while let Some(&(d, v)) = order.iter().next() {
            order.remove(&(d, v));
            removed.insert(v);
            best = best.max(d);
            for &u in self.neighbors(v) {
                if !removed.contains(&u) {
                    let du = degree[&u];
                    order.remove(&(du, u));
                    degree.insert(u, du - 1);
                    order.insert((du - 1, u));
                }
            }
        }
        best
    }
}

fn parse_vertex(token: Option<&str>, line: usize) -> Result<Vertex, GraphError> {
    let token = token.ok_or_else(|| GraphError::Parse {
        line,
        msg: "expected two vertex ids, found fewer".into(),
    })?;
    token.parse::<Vertex>().map_err(|_| GraphError::Parse {
        line,
        msg: format!("invalid vertex id {token:?}"),
    })
}
