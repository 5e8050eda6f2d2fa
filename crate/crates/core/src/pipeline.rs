//! Triangle-removal-set discovery and the reattachment pipeline.
//!
//! The end-to-end construction: validate (or find) a removal set `R`, strip
//! it, decompose the triangle-free remainder under the
//! `alpha/2 + floor(3*beta/5)` contract, then reattach the removed vertices
//! one at a time. Every edge back to a reattached vertex lands on a path
//! endpoint (its neighbors all have odd degree in the stripped graph); paths
//! hit at both ends close into cycles through the vertex, and those cycles —
//! a flower at the vertex — are decomposed in groups of six. The ledger
//! records `(d_i, q_i, t_i)` per step and the final count stays within
//! `floor(3n/5)`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::decomp::{
    verify_decomposition, BoundKind, CycleSeq, Decomposition, PathSeq,
};
use crate::graph::{
    enumerate_triangles, is_eulerian, triangle_distance, Graph, Triangle, VertexId,
};
use crate::merge::{decompose_flower_bundle, Flower, MergeError};
use crate::solver::{decompose_triangle_free, SolverBudget, SolverError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error("graph has a triangle component {0:?}")]
    TriangleComponent([VertexId; 3]),
    #[error("graph is not Eulerian")]
    NotEulerian,
    #[error("graph has {0} vertices; at least 4 are required")]
    TooSmall(usize),
    #[error("triangles {t1:?} and {t2:?} are at distance {dist}, required at least 3")]
    TrianglesTooClose {
        t1: [VertexId; 3],
        t2: [VertexId; 3],
        dist: u32,
    },
    #[error("no triangle removal set found")]
    RemovalSetNotFound,
    #[error("neighbor {0} has no unconsumed path endpoint; upstream invariant breach")]
    MissingEndpoint(VertexId),
    #[error("final count {achieved} exceeds floor(3n/5) = {allowed}; this is a bug, ledger: {ledger:?}")]
    BoundViolated {
        achieved: usize,
        allowed: usize,
        ledger: Box<BoundLedger>,
    },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Merge(#[from] MergeError),
}

/// One reason a candidate removal set fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RemovalViolation {
    NotInGraph(VertexId),
    Duplicate(VertexId),
    DegreeTooSmall { vertex: VertexId, degree: usize },
    SurvivorOddDegree(VertexId),
    ClosedNeighborhoodsIntersect { a: VertexId, b: VertexId, shared: VertexId },
    TriangleRemains([VertexId; 3]),
}

/// A validated triangle removal set: stripping `vertices` leaves the graph
/// triangle-free, every listed vertex has degree at least 4, every survivor
/// has even degree, and the closed neighborhoods of the listed vertices are
/// pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleRemovalSet {
    vertices: Vec<VertexId>,
    degrees: Vec<usize>,
}

impl TriangleRemovalSet {
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Checks the four removal-set conditions for `r` against `g`, reporting
/// every violated condition.
pub fn validate_removal_set(
    g: &Graph,
    r: &[VertexId],
) -> Result<TriangleRemovalSet, Vec<RemovalViolation>> {
    let mut violations = Vec::new();
    let mut seen = BTreeSet::new();
    for &v in r {
        if (v as usize) >= g.n() {
            violations.push(RemovalViolation::NotInGraph(v));
            continue;
        }
        if !seen.insert(v) {
            violations.push(RemovalViolation::Duplicate(v));
        }
        let d = g.degree(v);
        if d < 4 {
            violations.push(RemovalViolation::DegreeTooSmall { vertex: v, degree: d });
        }
    }
    if violations.iter().any(|v| matches!(v, RemovalViolation::NotInGraph(_))) {
        return Err(violations);
    }
    for v in g.vertices() {
        if !seen.contains(&v) && g.degree(v) % 2 == 1 {
            violations.push(RemovalViolation::SurvivorOddDegree(v));
        }
    }
    for (i, &a) in r.iter().enumerate() {
        for &b in &r[i + 1..] {
            if a == b {
                continue;
            }
            let mut na: BTreeSet<VertexId> = g.neighbors(a).iter().copied().collect();
            na.insert(a);
            let mut nb: BTreeSet<VertexId> = g.neighbors(b).iter().copied().collect();
            nb.insert(b);
            if let Some(&shared) = na.intersection(&nb).next() {
                violations.push(RemovalViolation::ClosedNeighborhoodsIntersect { a, b, shared });
            }
        }
    }
    let stripped = g.without_vertex_edges(r);
    if let Some(t) = enumerate_triangles(&stripped).first() {
        violations.push(RemovalViolation::TriangleRemains(t.vertices()));
    }
    if violations.is_empty() {
        Ok(TriangleRemovalSet {
            vertices: r.to_vec(),
            degrees: r.iter().map(|&v| g.degree(v)).collect(),
        })
    } else {
        Err(violations)
    }
}

/// Vertex count cap for the exhaustive removal-set search.
const EXHAUSTIVE_N_CAP: usize = 12;
/// Largest candidate set size tried exhaustively.
const EXHAUSTIVE_SIZE_CAP: usize = 4;

/// Finds a triangle removal set: greedily the maximum-degree vertex of each
/// triangle (ties to the smaller label), falling back to an exhaustive
/// search over small vertex subsets when the graph is small enough.
pub fn find_removal_set(g: &Graph) -> Option<TriangleRemovalSet> {
    let triangles = enumerate_triangles(g);
    let mut greedy: Vec<VertexId> = Vec::new();
    for t in &triangles {
        let pick = t
            .vertices()
            .into_iter()
            .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        if !greedy.contains(&pick) {
            greedy.push(pick);
        }
    }
    if let Ok(set) = validate_removal_set(g, &greedy) {
        return Some(set);
    }
    if g.n() <= EXHAUSTIVE_N_CAP {
        let verts: Vec<VertexId> = g.vertices().collect();
        for size in 0..=EXHAUSTIVE_SIZE_CAP.min(g.n()) {
            let mut found = None;
            subsets_of_size(&verts, size, &mut Vec::new(), &mut |cand| {
                if found.is_none() {
                    if let Ok(set) = validate_removal_set(g, cand) {
                        found = Some(set);
                    }
                }
            });
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

fn subsets_of_size(
    verts: &[VertexId],
    size: usize,
    prefix: &mut Vec<VertexId>,
    f: &mut impl FnMut(&[VertexId]),
) {
    if prefix.len() == size {
        f(prefix);
        return;
    }
    let start = prefix
        .last()
        .map(|&v| verts.iter().position(|&x| x == v).unwrap() + 1)
        .unwrap_or(0);
    for i in start..verts.len() {
        prefix.push(verts[i]);
        subsets_of_size(verts, size, prefix, f);
        prefix.pop();
    }
}

/// Ledger entry for one reattached vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReattachRecord {
    pub vertex: VertexId,
    pub degree: usize,
    pub cycles_formed: usize,
    pub bundle_paths: usize,
    pub path_count_after: usize,
}

/// Per-run accounting: the initial triangle-free count, one record per
/// reattachment, and the final count against `floor(3n/5)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundLedger {
    pub records: Vec<ReattachRecord>,
    pub initial_count: usize,
    pub final_count: usize,
    pub allowed: usize,
    pub seed: u64,
}

/// Adds `v` and its edges back into a decomposed graph.
///
/// Every neighbor has odd degree in `g_without`, hence is a path endpoint in
/// `d`. Neighbors are processed in ascending order, each consuming the free
/// endpoint of the smallest-indexed path ending there. A path consumed at
/// both ends closes into a cycle through `v`; the resulting cycles form a
/// flower at `v` and are decomposed in groups of six. Returns the verified
/// decomposition of `g_without + star(v)` and the ledger record.
pub fn reattach(
    g_without: &Graph,
    v: VertexId,
    d: Decomposition,
    neighbors: &[VertexId],
) -> Result<(Decomposition, ReattachRecord), PipelineError> {
    debug_assert!(g_without.neighbors(v).is_empty(), "v must carry no edges yet");
    debug_assert!(verify_decomposition(g_without, &d).ok());

    let old_count = d.count();
    let mut paths: Vec<PathSeq> = d.paths;
    // (front_attached, back_attached) per path.
    let mut attach: Vec<(Option<VertexId>, Option<VertexId>)> = vec![(None, None); paths.len()];
    let mut nbrs = neighbors.to_vec();
    nbrs.sort_unstable();

    for &w in &nbrs {
        debug_assert!(g_without.degree(w) % 2 == 1, "neighbor degree must be odd");
        let slot = paths.iter().enumerate().find_map(|(i, p)| {
            if p.first() == w && attach[i].0.is_none() {
                Some((i, true))
            } else if p.last() == w && attach[i].1.is_none() {
                Some((i, false))
            } else {
                None
            }
        });
        match slot {
            Some((i, front)) => {
                if front {
                    attach[i].0 = Some(v);
                } else {
                    attach[i].1 = Some(v);
                }
            }
            None => return Err(PipelineError::MissingEndpoint(w)),
        }
    }

    let mut out: Vec<PathSeq> = Vec::new();
    let mut cycles: Vec<CycleSeq> = Vec::new();
    for (i, p) in paths.drain(..).enumerate() {
        match attach[i] {
            (None, None) => out.push(p),
            (Some(_), None) => {
                let mut vs = vec![v];
                vs.extend_from_slice(p.vertices());
                out.push(PathSeq::new_unchecked(vs));
            }
            (None, Some(_)) => {
                let mut vs = p.vertices().to_vec();
                vs.push(v);
                out.push(PathSeq::new_unchecked(vs));
            }
            (Some(_), Some(_)) => {
                // Both endpoints grabbed an edge to v: the path closes into
                // a cycle through v.
                let mut vs = vec![v];
                vs.extend_from_slice(p.vertices());
                cycles.push(
                    CycleSeq::new(vs).expect("path plus hub forms a simple cycle"),
                );
            }
        }
    }

    let q = cycles.len();
    let t = if q > 0 {
        let flower = Flower::new(cycles, v)?;
        let bundle = decompose_flower_bundle(&flower)?;
        let t = bundle.len();
        out.extend(bundle);
        t
    } else {
        0
    };
    assert!(q <= neighbors.len() / 2, "q <= d/2 by endpoint accounting");

    let new_count = out.len();
    assert_eq!(
        new_count,
        old_count - q + t,
        "count delta must match the flower bundle arithmetic"
    );
    let record = ReattachRecord {
        vertex: v,
        degree: neighbors.len(),
        cycles_formed: q,
        bundle_paths: t,
        path_count_after: new_count,
    };
    Ok((Decomposition::new(out), record))
}

/// Strips the removal set, decomposes the triangle-free remainder, and
/// reattaches every removed vertex in order. The final decomposition
/// verifies against `g` and stays within `floor(3n/5)` paths.
pub fn decompose_with_removal_set(
    g: &Graph,
    r: &TriangleRemovalSet,
    budget: &SolverBudget,
    seed: u64,
) -> Result<(Decomposition, BoundLedger), PipelineError> {
    if let Some(t) = triangle_component(g) {
        return Err(PipelineError::TriangleComponent(t));
    }
    let removed: Vec<VertexId> = r.vertices().to_vec();
    debug_assert!(
        validate_removal_set(g, &removed).is_ok(),
        "removal set must validate against the graph it is used on"
    );
    let stripped = g.without_vertex_edges(&removed);
    let mut d = decompose_triangle_free(&stripped, budget, seed)?.without_single_vertices();
    let initial_count = d.count();

    let mut current = stripped;
    let mut records = Vec::new();
    for &v in &removed {
        let neighbors: Vec<VertexId> = g.neighbors(v).iter().copied().collect();
        let (next, record) = reattach(&current, v, d, &neighbors)?;
        current = current.with_added_star(v, &neighbors);
        let report = verify_decomposition(&current, &next);
        assert!(
            report.ok(),
            "intermediate decomposition must verify after reattaching {v}: {:?}",
            report.violations
        );
        d = next;
        records.push(record);
    }

    let allowed = BoundKind::ThreeFifthsN.allowed(g);
    let ledger = BoundLedger {
        records,
        initial_count,
        final_count: d.count(),
        allowed,
        seed,
    };
    if d.count() > allowed {
        return Err(PipelineError::BoundViolated {
            achieved: d.count(),
            allowed,
            ledger: Box::new(ledger),
        });
    }
    debug_assert!(verify_decomposition(g, &d).ok());
    Ok((d, ledger))
}

/// First component that is exactly a triangle, if any.
fn triangle_component(g: &Graph) -> Option<[VertexId; 3]> {
    for comp in g.edge_components() {
        if comp.len() == 3
            && comp.iter().all(|&v| g.degree(v) == 2)
            && g.has_edge(comp[0], comp[1])
            && g.has_edge(comp[1], comp[2])
            && g.has_edge(comp[0], comp[2])
        {
            return Some([comp[0], comp[1], comp[2]]);
        }
    }
    None
}

/// Entry point for Eulerian graphs: requires `n >= 4`, connectivity with all
/// degrees even, and pairwise triangle distance at least 3. Under those
/// hypotheses the greedy removal set always validates and the pipeline lands
/// within `floor(3n/5)` paths.
pub fn decompose_eulerian(
    g: &Graph,
    budget: &SolverBudget,
    seed: u64,
) -> Result<(Decomposition, BoundLedger), PipelineError> {
    if g.n() < 4 {
        return Err(PipelineError::TooSmall(g.n()));
    }
    if !is_eulerian(g) {
        return Err(PipelineError::NotEulerian);
    }
    let triangles = enumerate_triangles(g);
    check_triangle_spacing(g, &triangles)?;
    let set = if triangles.is_empty() {
        TriangleRemovalSet {
            vertices: vec![],
            degrees: vec![],
        }
    } else {
        find_removal_set(g).ok_or(PipelineError::RemovalSetNotFound)?
    };
    decompose_with_removal_set(g, &set, budget, seed)
}

fn check_triangle_spacing(g: &Graph, triangles: &[Triangle]) -> Result<(), PipelineError> {
    for (i, t1) in triangles.iter().enumerate() {
        for t2 in &triangles[i + 1..] {
            let dist = triangle_distance(g, t1, t2).expect("triangles validated");
            if let Some(dist) = dist {
                if dist < 3 {
                    return Err(PipelineError::TrianglesTooClose {
                        t1: t1.vertices(),
                        t2: t2.vertices(),
                        dist,
                    });
                }
            }
        }
    }
    Ok(())
}
