//! Simple undirected graphs with dense internal vertex ids, plus the degree,
//! triangle, and Eulerian analyses the decomposition pipeline is built on.
//!
//! Input labels are arbitrary non-negative integers; they are remapped to
//! `0..n-1` in ascending label order and the label table is kept so that
//! certificates can be emitted in the caller's vocabulary. All adjacency is
//! stored as sorted sets, so every iteration order in this module is
//! deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

/// Dense internal vertex id, `0..n-1`.
pub type VertexId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge {0}-{0} is not allowed in a simple graph")]
    LoopEdge(u64),
    #[error("vertex triple {0:?} does not induce a triangle")]
    NotATriangle([u64; 3]),
}

/// Immutable simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<VertexId>>,
    labels: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from labelled edges. Duplicate edges collapse (set
    /// semantics); the vertex set is exactly the labels that appear.
    pub fn build(edges: &[(u64, u64)]) -> Result<Self, GraphError> {
        Self::build_with_min_label_range(edges, 0)
    }

    /// Builds a graph whose vertex set is the edge labels united with
    /// `0..declared`. The declared range is how an edge-list header names
    /// isolated vertices.
    pub fn build_with_min_label_range(
        edges: &[(u64, u64)],
        declared: u64,
    ) -> Result<Self, GraphError> {
        let mut labels: BTreeSet<u64> = (0..declared).collect();
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            labels.insert(u);
            labels.insert(v);
        }
        let labels: Vec<u64> = labels.into_iter().collect();
        let index: BTreeMap<u64, VertexId> = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as VertexId))
            .collect();
        let mut adj = vec![BTreeSet::new(); labels.len()];
        let mut edge_count = 0;
        for &(u, v) in edges {
            let (a, b) = (index[&u], index[&v]);
            if adj[a as usize].insert(b) {
                adj[b as usize].insert(a);
                edge_count += 1;
            }
        }
        Ok(Graph {
            adj,
            labels,
            edge_count,
        })
    }

    /// Builds a graph on `0..n-1` directly from internal-id edges. Labels are
    /// the identity. Panics on loops; duplicate edges collapse.
    pub fn from_dense(n: usize, edges: &[(VertexId, VertexId)]) -> Self {
        let mut adj = vec![BTreeSet::new(); n];
        let mut edge_count = 0;
        for &(u, v) in edges {
            assert_ne!(u, v, "loop edge {u}-{v}");
            assert!(
                (u as usize) < n && (v as usize) < n,
                "edge {u}-{v} out of range for n={n}"
            );
            if adj[u as usize].insert(v) {
                adj[v as usize].insert(u);
                edge_count += 1;
            }
        }
        Graph {
            adj,
            labels: (0..n as u64).collect(),
            edge_count,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.adj.len() as VertexId
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u as usize].contains(&v)
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in self.vertices() {
            for &v in &self.adj[u as usize] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn vertex_of_label(&self, label: u64) -> Option<VertexId> {
        self.labels
            .binary_search(&label)
            .ok()
            .map(|i| i as VertexId)
    }

    /// Same vertex set with every edge incident to `removed` dropped.
    pub fn without_vertex_edges(&self, removed: &[VertexId]) -> Graph {
        let rm: BTreeSet<VertexId> = removed.iter().copied().collect();
        let mut adj: Vec<BTreeSet<VertexId>> = self
            .adj
            .iter()
            .map(|s| s.iter().copied().filter(|w| !rm.contains(w)).collect())
            .collect();
        for &v in &rm {
            adj[v as usize].clear();
        }
        let edge_count = adj.iter().map(|s| s.len()).sum::<usize>() / 2;
        Graph {
            adj,
            labels: self.labels.clone(),
            edge_count,
        }
    }

    /// Same vertex set plus the star of edges `v`-`w` for each `w`.
    pub fn with_added_star(&self, v: VertexId, neighbors: &[VertexId]) -> Graph {
        let mut g = self.clone();
        for &w in neighbors {
            assert_ne!(v, w, "loop edge {v}-{w}");
            if g.adj[v as usize].insert(w) {
                g.adj[w as usize].insert(v);
                g.edge_count += 1;
            }
        }
        g
    }

    /// BFS distances from a set of sources; `None` for unreachable vertices.
    pub fn bfs_distances(&self, sources: &[VertexId]) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s as usize].is_none() {
                dist[s as usize] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize].unwrap();
            for &w in &self.adj[u as usize] {
                if dist[w as usize].is_none() {
                    dist[w as usize] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// True when all non-isolated vertices lie in one connected component.
    pub fn is_connected_ignoring_isolated(&self) -> bool {
        let start = match self.vertices().find(|&v| self.degree(v) > 0) {
            Some(v) => v,
            None => return true,
        };
        let dist = self.bfs_distances(&[start]);
        self.vertices().all(|v| self.degree(v) == 0 || dist[v as usize].is_some())
    }

    /// Connected components restricted to non-isolated vertices, each sorted,
    /// ordered by smallest member.
    pub fn edge_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n()];
        let mut comps = Vec::new();
        for v in self.vertices() {
            if seen[v as usize] || self.degree(v) == 0 {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([v]);
            seen[v as usize] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adj[u as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

/// Odd/even degree census: `alpha` odd-degree vertices, `beta` non-isolated
/// even-degree vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub alpha: usize,
    pub beta: usize,
    pub odd: Vec<bool>,
}

pub fn degree_profile(g: &Graph) -> DegreeProfile {
    let mut alpha = 0;
    let mut beta = 0;
    let mut odd = vec![false; g.n()];
    for v in g.vertices() {
        let d = g.degree(v);
        if d % 2 == 1 {
            alpha += 1;
            odd[v as usize] = true;
        } else if d > 0 {
            beta += 1;
        }
    }
    debug_assert!(alpha % 2 == 0, "handshake lemma violated");
    DegreeProfile { alpha, beta, odd }
}

/// A triangle, stored as a sorted vertex triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triangle(pub [VertexId; 3]);

impl Triangle {
    /// Validates that the triple induces three mutual edges in `g`.
    pub fn new(g: &Graph, mut vs: [VertexId; 3]) -> Result<Self, GraphError> {
        vs.sort_unstable();
        let [a, b, c] = vs;
        if a == b || b == c || !g.has_edge(a, b) || !g.has_edge(b, c) || !g.has_edge(a, c) {
            return Err(GraphError::NotATriangle([
                g.label(a),
                g.label(b),
                g.label(c),
            ]));
        }
        Ok(Triangle(vs))
    }

    pub fn vertices(&self) -> [VertexId; 3] {
        self.0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }
}

/// All triangles, by ordered neighbor intersection (`u < v < w`), so the
/// output is lexicographically sorted and deterministic.
pub fn enumerate_triangles(g: &Graph) -> Vec<Triangle> {
    let mut out = Vec::new();
    for u in g.vertices() {
        for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
            for &w in g.neighbors(u).intersection(g.neighbors(v)) {
                if w > v {
                    out.push(Triangle([u, v, w]));
                }
            }
        }
    }
    out
}

/// Shortest-path distance between two distinct triangles: minimum over all
/// vertex pairs, `None` when they lie in different components.
pub fn triangle_distance(
    g: &Graph,
    t1: &Triangle,
    t2: &Triangle,
) -> Result<Option<u32>, GraphError> {
    Triangle::new(g, t1.0)?;
    Triangle::new(g, t2.0)?;
    let dist = g.bfs_distances(&t1.0);
    Ok(t2
        .0
        .iter()
        .filter_map(|&v| dist[v as usize])
        .min())
}

/// Connected (ignoring isolated vertices) with every degree even.
pub fn is_eulerian(g: &Graph) -> bool {
    g.vertices().all(|v| g.degree(v).is_multiple_of(2)) && g.is_connected_ignoring_isolated()
}
