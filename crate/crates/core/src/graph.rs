//! Finite simple connected graphs, unweighted shortest paths, intervals and gates.
//!
//! Vertex ids are dense (`0..n`). External string labels live in a side table
//! and are only consulted at I/O boundaries.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::DistanceMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} references a vertex outside 0..{2}")]
    OutOfRange(usize, usize, usize),
    #[error("graph is disconnected: vertex {0} is unreachable from vertex 0")]
    Disconnected(usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("no vertex of the set is a gate for vertex {0}")]
    NoGate(usize),
    #[error("invalid graph JSON: {0}")]
    Json(String),
}

/// A finite, simple, undirected, connected graph.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    boundary: Option<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj && self.labels == other.labels
    }
}

impl Eq for Graph {}

/// On-disk representation: `{"n": .., "edges": [[u,v],..], "labels": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph whose labels are the decimal vertex ids.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::with_labels(n, edges, (0..n).map(|v| v.to_string()).collect())
    }

    pub fn with_labels(
        n: usize,
        edges: &[(usize, usize)],
        labels: Vec<String>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if labels.len() != n {
            return Err(GraphError::LabelCount {
                expected: n,
                got: labels.len(),
            });
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        let mut index = HashMap::with_capacity(n);
        for (v, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), v).is_some() {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        let g = Graph {
            adj,
            labels,
            index,
            boundary: None,
        };
        let dist = bfs_distances(&g, 0);
        if let Some(v) = dist.iter().position(|&d| d == UNREACHABLE) {
            return Err(GraphError::Disconnected(v));
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn boundary(&self) -> Option<&[usize]> {
        self.boundary.as_deref()
    }

    pub fn set_boundary(&mut self, mut vertices: Vec<usize>) {
        vertices.sort_unstable();
        vertices.dedup();
        self.boundary = Some(vertices);
    }

    /// Induced subgraph on `vertices` (in the given order), keeping labels.
    /// Fails if the induced subgraph is disconnected.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph, GraphError> {
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if pos[w] != usize::MAX && i < pos[w] {
                    edges.push((i, pos[w]));
                }
            }
        }
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        Graph::with_labels(vertices.len(), &edges, labels)
    }

    pub fn to_json_value(&self) -> GraphJson {
        GraphJson {
            n: self.n(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
            labels: Some(self.labels.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Graph::try_from(raw)
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(raw: GraphJson) -> Result<Self, Self::Error> {
        let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        match raw.labels {
            Some(labels) => Graph::with_labels(raw.n, &edges, labels),
            None => Graph::new(raw.n, &edges),
        }
    }
}

pub(crate) const UNREACHABLE: u32 = u32::MAX;

/// Breadth-first distances from `source` to every vertex.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<u32> {
    bfs_adjacency(g.adjacency(), source)
}

pub(crate) fn bfs_adjacency(adj: &[Vec<usize>], source: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; adj.len()];
    let mut queue = VecDeque::with_capacity(adj.len());
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for &w in &adj[u] {
            if dist[w] == UNREACHABLE {
                dist[w] = du + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Distance matrix over all vertices, labelled by the graph's labels.
pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let mut entries = Vec::with_capacity(n * n);
    for s in 0..n {
        entries.extend(bfs_distances(g, s));
    }
    DistanceMatrix::from_parts_unchecked(g.labels().to_vec(), entries)
}

/// `I(u, v)`: every vertex on some shortest `u`-`v` path, ascending.
pub fn interval(g: &Graph, u: usize, v: usize) -> Vec<usize> {
    let du = bfs_distances(g, u);
    let dv = bfs_distances(g, v);
    let duv = du[v];
    (0..g.n()).filter(|&x| du[x] + dv[x] == duv).collect()
}

pub(crate) fn interval_in(d: &DistanceMatrix, u: usize, v: usize) -> Vec<usize> {
    let duv = d.get(u, v);
    (0..d.len())
        .filter(|&x| d.get(u, x) + d.get(x, v) == duv)
        .collect()
}

/// Outcome of the brute-force median test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianCheck {
    pub median: bool,
    pub bipartite: bool,
    /// First triple (in lexicographic order) whose interval intersection is
    /// not a singleton, with the size of that intersection.
    pub witness: Option<MedianWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MedianWitness {
    pub triple: [usize; 3],
    pub intersection_size: usize,
}

/// Checks that every triple has exactly one median, scanning all triples.
///
/// Intervals are materialized as bitsets, so the scan is `O(n^3 * n / 64)`.
pub fn is_median(g: &Graph) -> MedianCheck {
    let n = g.n();
    let d = all_pairs_distances(g);
    let bipartite = is_bipartite(g);
    let mut intervals = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            let mut bits = FixedBitSet::with_capacity(n);
            if u <= v {
                for x in interval_in(&d, u, v) {
                    bits.insert(x);
                }
            }
            intervals.push(bits);
        }
    }
    let at = |u: usize, v: usize| &intervals[u.min(v) * n + u.max(v)];
    let mut scratch = FixedBitSet::with_capacity(n);
    for x in 0..n {
        for y in x..n {
            for z in y..n {
                scratch.clone_from(at(x, y));
                scratch.intersect_with(at(y, z));
                scratch.intersect_with(at(z, x));
                let size = scratch.count_ones(..);
                if size != 1 {
                    return MedianCheck {
                        median: false,
                        bipartite,
                        witness: Some(MedianWitness {
                            triple: [x, y, z],
                            intersection_size: size,
                        }),
                    };
                }
            }
        }
    }
    MedianCheck {
        median: true,
        bipartite,
        witness: None,
    }
}

pub fn is_bipartite(g: &Graph) -> bool {
    let d = bfs_distances(g, 0);
    g.edges().all(|(u, v)| d[u] != d[v])
}

/// The gate of `x` in `h`: the unique member of `h` lying on a shortest path
/// from `x` to every member of `h`.
pub fn gate(g: &Graph, x: usize, h: &[usize]) -> Result<usize, GraphError> {
    let dx = bfs_distances(g, x);
    let rows: Vec<Vec<u32>> = h.iter().map(|&y| bfs_distances(g, y)).collect();
    h.iter()
        .copied()
        .find(|&c| {
            h.iter()
                .zip(&rows)
                .all(|(&y, dy)| dx[c] + dy[c] == dx[y])
        })
        .ok_or(GraphError::NoGate(x))
}
