//! Path/cycle sequences, the decomposition certificate, and the independent
//! verifier every other module is checked against.
//!
//! The verifier is deliberately dumb: it re-derives everything from the graph
//! and the raw vertex sequences, so a bug elsewhere cannot vouch for itself.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{degree_profile, Graph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("a path must contain at least one vertex")]
    EmptyPath,
    #[error("path repeats vertex {0}")]
    RepeatedVertex(VertexId),
    #[error("a cycle needs at least three distinct vertices, got {0}")]
    CycleTooShort(usize),
    #[error("decomposition fails verification: {0}")]
    InvalidDecomposition(Violation),
}

/// Ordered vertex sequence with all vertices distinct. A single vertex is a
/// valid, edgeless path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathSeq(Vec<VertexId>);

impl PathSeq {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self, DecompError> {
        if vertices.is_empty() {
            return Err(DecompError::EmptyPath);
        }
        let mut seen = BTreeSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(DecompError::RepeatedVertex(v));
            }
        }
        Ok(PathSeq(vertices))
    }

    /// Skips the distinctness check; used by tests that build broken paths on
    /// purpose and by hot paths that have already established it.
    pub fn new_unchecked(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty());
        PathSeq(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn first(&self) -> VertexId {
        self.0[0]
    }

    pub fn last(&self) -> VertexId {
        *self.0.last().unwrap()
    }

    /// Vertex count; never zero by construction.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn edge_count(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_single_vertex(&self) -> bool {
        self.0.len() == 1
    }

    /// Consecutive pairs normalized to `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.0
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    pub fn reversed(&self) -> PathSeq {
        let mut v = self.0.clone();
        v.reverse();
        PathSeq(v)
    }
}

impl fmt::Display for PathSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

/// Cyclic vertex sequence of at least three distinct vertices; the wraparound
/// pair is an edge too.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSeq(Vec<VertexId>);

impl CycleSeq {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self, DecompError> {
        if vertices.len() < 3 {
            return Err(DecompError::CycleTooShort(vertices.len()));
        }
        let mut seen = BTreeSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(DecompError::RepeatedVertex(v));
            }
        }
        Ok(CycleSeq(vertices))
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// Vertex count; at least three by construction.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    /// Cycle edges (including wraparound), normalized to `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| {
            let (a, b) = (self.0[i], self.0[(i + 1) % n]);
            (a.min(b), a.max(b))
        })
    }

    /// The two cycle neighbors of `v`, ascending.
    pub fn neighbors_of(&self, v: VertexId) -> Option<(VertexId, VertexId)> {
        let n = self.0.len();
        let i = self.0.iter().position(|&x| x == v)?;
        let a = self.0[(i + n - 1) % n];
        let b = self.0[(i + 1) % n];
        Some((a.min(b), a.max(b)))
    }

    /// The path left after deleting edge `(u, v)`, running from `u` to `v`
    /// the long way around.
    pub fn minus_edge(&self, u: VertexId, v: VertexId) -> Option<PathSeq> {
        let n = self.0.len();
        let i = (0..n).find(|&i| {
            let (a, b) = (self.0[i], self.0[(i + 1) % n]);
            (a, b) == (u, v) || (a, b) == (v, u)
        })?;
        let (a, b) = (self.0[i], self.0[(i + 1) % n]);
        // Walk from b forward to a; that path starts at b and ends at a.
        let mut seq = Vec::with_capacity(n);
        for k in 0..n {
            seq.push(self.0[(i + 1 + k) % n]);
        }
        debug_assert_eq!((seq[0], *seq.last().unwrap()), (b, a));
        let path = PathSeq::new_unchecked(seq);
        if (a, b) == (v, u) {
            Some(path)
        } else {
            Some(path.reversed())
        }
    }
}

impl fmt::Display for CycleSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join("-"))
    }
}

/// A claimed edge partition of a host graph into simple paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub paths: Vec<PathSeq>,
}

impl Decomposition {
    pub fn new(paths: Vec<PathSeq>) -> Self {
        Decomposition { paths }
    }

    /// Number of paths: the quantity all bounds are stated on.
    pub fn count(&self) -> usize {
        self.paths.len()
    }

    /// Drops edgeless single-vertex paths; final certificates never carry
    /// them.
    pub fn without_single_vertices(mut self) -> Self {
        self.paths.retain(|p| !p.is_single_vertex());
        self
    }
}

/// One verification failure, naming the offending path or edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RepeatedVertex { path: usize, vertex: VertexId },
    UnknownVertex { path: usize, vertex: VertexId },
    MissingEdge { path: usize, u: VertexId, v: VertexId },
    DuplicateEdge { u: VertexId, v: VertexId },
    UncoveredEdge { u: VertexId, v: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RepeatedVertex { path, vertex } => {
                write!(f, "path #{path} repeats vertex {vertex}")
            }
            Violation::UnknownVertex { path, vertex } => {
                write!(f, "path #{path} mentions vertex {vertex} not in the graph")
            }
            Violation::MissingEdge { path, u, v } => {
                write!(f, "path #{path} uses edge {u}-{v} absent from the graph")
            }
            Violation::DuplicateEdge { u, v } => {
                write!(f, "edge {u}-{v} is covered more than once")
            }
            Violation::UncoveredEdge { u, v } => {
                write!(f, "edge {u}-{v} is not covered by any path")
            }
        }
    }
}

/// Verifier output: empty violation list means the decomposition is valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the three decomposition invariants against `g`: every element is a
/// simple path of `g`, path edge sets are pairwise disjoint, and their union
/// is exactly `E(g)`. All violations are reported, not just the first.
pub fn verify_decomposition(g: &Graph, d: &Decomposition) -> VerifyReport {
    let mut violations = Vec::new();
    let mut covered: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for (idx, path) in d.paths.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for &v in path.vertices() {
            if (v as usize) >= g.n() {
                violations.push(Violation::UnknownVertex { path: idx, vertex: v });
            }
            if !seen.insert(v) {
                violations.push(Violation::RepeatedVertex { path: idx, vertex: v });
            }
        }
        for w in path.vertices().windows(2) {
            let (u, v) = (w[0].min(w[1]), w[0].max(w[1]));
            if (u as usize) < g.n() && (v as usize) < g.n() && !g.has_edge(u, v) {
                violations.push(Violation::MissingEdge { path: idx, u, v });
            }
            if !covered.insert((u, v)) {
                violations.push(Violation::DuplicateEdge { u, v });
            }
        }
    }
    for (u, v) in g.edges() {
        if !covered.contains(&(u, v)) {
            violations.push(Violation::UncoveredEdge { u, v });
        }
    }
    VerifyReport { violations }
}

/// Number of paths in `d` with `v` as an end vertex. By convention a
/// single-vertex path at `v` counts twice; such paths only ever appear in
/// intermediate structures.
pub fn endpoint_count(d: &Decomposition, v: VertexId) -> usize {
    d.paths
        .iter()
        .map(|p| {
            if p.is_single_vertex() {
                if p.first() == v {
                    2
                } else {
                    0
                }
            } else {
                usize::from(p.first() == v) + usize::from(p.last() == v)
            }
        })
        .sum()
}

/// Which path-count bound to check a decomposition against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `floor(3n/5)`.
    ThreeFifthsN,
    /// `alpha/2 + floor(3*beta/5)`.
    CfzAlphaBeta,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::ThreeFifthsN => "three_fifths_n",
            BoundKind::CfzAlphaBeta => "cfz_alpha_beta",
        }
    }

    pub fn allowed(&self, g: &Graph) -> usize {
        match self {
            BoundKind::ThreeFifthsN => 3 * g.n() / 5,
            BoundKind::CfzAlphaBeta => {
                let p = degree_profile(g);
                p.alpha / 2 + 3 * p.beta / 5
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub allowed: usize,
    pub achieved: usize,
    pub pass: bool,
}

/// Verifies `d` against `g` and compares its size to the requested bound.
pub fn bound_check(
    g: &Graph,
    d: &Decomposition,
    kind: BoundKind,
) -> Result<BoundReport, DecompError> {
    let report = verify_decomposition(g, d);
    if let Some(first) = report.violations.into_iter().next() {
        return Err(DecompError::InvalidDecomposition(first));
    }
    let allowed = kind.allowed(g);
    let achieved = d.count();
    Ok(BoundReport {
        kind,
        allowed,
        achieved,
        pass: achieved <= allowed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{bowtie, cycle_graph};

    fn p(vs: &[VertexId]) -> PathSeq {
        PathSeq::new(vs.to_vec()).unwrap()
    }

    #[test]
    fn cycle_as_two_paths_verifies() {
        let c5 = cycle_graph(5);
        let d = Decomposition::new(vec![p(&[0, 1, 2]), p(&[2, 3, 4, 0])]);
        assert!(verify_decomposition(&c5, &d).ok());
    }

    #[test]
    fn repeated_vertex_is_flagged() {
        let t = cycle_graph(3);
        let d = Decomposition::new(vec![PathSeq::new_unchecked(vec![0, 1, 2, 0])]);
        let rep = verify_decomposition(&t, &d);
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, Violation::RepeatedVertex { path: 0, vertex: 0 })));
    }

    #[test]
    fn uncovered_edge_is_flagged() {
        let t = cycle_graph(3);
        let d = Decomposition::new(vec![p(&[0, 1, 2])]);
        let rep = verify_decomposition(&t, &d);
        assert_eq!(
            rep.violations,
            vec![Violation::UncoveredEdge { u: 0, v: 2 }]
        );
    }

    #[test]
    fn duplicate_and_missing_edges_are_flagged() {
        let c5 = cycle_graph(5);
        let dup = Decomposition::new(vec![p(&[0, 1, 2]), p(&[2, 1]), p(&[2, 3, 4, 0])]);
        assert!(verify_decomposition(&c5, &dup)
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateEdge { u: 1, v: 2 })));

        let chord = Decomposition::new(vec![p(&[0, 2]), p(&[2, 3, 4, 0])]);
        assert!(verify_decomposition(&c5, &chord)
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MissingEdge { path: 0, u: 0, v: 2 })));
    }

    #[test]
    fn verification_is_order_independent() {
        let c5 = cycle_graph(5);
        let a = Decomposition::new(vec![p(&[0, 1, 2]), p(&[2, 3, 4, 0])]);
        let b = Decomposition::new(vec![p(&[2, 3, 4, 0]), p(&[0, 1, 2])]);
        assert_eq!(
            verify_decomposition(&c5, &a).ok(),
            verify_decomposition(&c5, &b).ok()
        );
    }

    #[test]
    fn endpoint_counts() {
        let d = Decomposition::new(vec![p(&[0, 1, 2]), p(&[2, 3, 4, 0])]);
        assert_eq!(endpoint_count(&d, 2), 2);
        assert_eq!(endpoint_count(&d, 1), 0);
        assert_eq!(endpoint_count(&d, 0), 2);
        let single = Decomposition::new(vec![p(&[7])]);
        assert_eq!(endpoint_count(&single, 7), 2);

        let total: usize = (0..5).map(|v| endpoint_count(&d, v)).sum();
        assert_eq!(total, 2 * d.count());
    }

    #[test]
    fn bound_check_examples() {
        let bow = bowtie();
        let d = Decomposition::new(vec![p(&[0, 1, 2, 3, 4]), p(&[0, 2, 4])]);
        let rep = bound_check(&bow, &d, BoundKind::ThreeFifthsN).unwrap();
        assert_eq!((rep.allowed, rep.achieved, rep.pass), (3, 2, true));

        // Two disjoint triangles need four paths but floor(18/5) allows 3.
        let two = Graph::from_dense(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let d = Decomposition::new(vec![
            p(&[1, 0, 2]),
            p(&[1, 2]),
            p(&[4, 3, 5]),
            p(&[4, 5]),
        ]);
        let rep = bound_check(&two, &d, BoundKind::ThreeFifthsN).unwrap();
        assert_eq!((rep.allowed, rep.achieved, rep.pass), (3, 4, false));

        let path4 = Graph::from_dense(4, &[(0, 1), (1, 2), (2, 3)]);
        let d = Decomposition::new(vec![p(&[0, 1, 2, 3])]);
        let rep = bound_check(&path4, &d, BoundKind::CfzAlphaBeta).unwrap();
        assert_eq!((rep.allowed, rep.achieved, rep.pass), (2, 1, true));
    }

    #[test]
    fn bound_check_rejects_invalid() {
        let t = cycle_graph(3);
        let d = Decomposition::new(vec![p(&[0, 1, 2])]);
        assert!(matches!(
            bound_check(&t, &d, BoundKind::ThreeFifthsN),
            Err(DecompError::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn cycle_minus_edge() {
        let c = CycleSeq::new(vec![0, 1, 2, 3, 4]).unwrap();
        let path = c.minus_edge(2, 3).unwrap();
        assert_eq!(path.vertices(), &[2, 1, 0, 4, 3]);
        let path = c.minus_edge(4, 0).unwrap();
        assert_eq!(path.vertices(), &[4, 3, 2, 1, 0]);
        assert!(c.minus_edge(0, 2).is_none());
    }
}
