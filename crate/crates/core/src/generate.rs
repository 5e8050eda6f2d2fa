//! Seeded instance families: disjoint triangles, flowers, Eulerian graphs
//! with well-spaced planted triangles, and triangle-free Eulerian graphs.
//!
//! Generators never trust themselves: every instance is post-validated
//! against its family's declared shape before being returned, and the same
//! spec and seed always reproduce the same graph byte for byte.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{enumerate_triangles, is_eulerian, triangle_distance, Graph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("infeasible spec: {0}")]
    InfeasibleSpec(String),
}

/// Rejection-sampling cap per instance.
const MAX_ATTEMPTS: usize = 10_000;

/// An instance family with its size parameters. The seed is supplied at
/// generation time and recorded by callers alongside the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    /// `k` vertex-disjoint triangles.
    DisjointTriangles { k: usize },
    /// Edge-disjoint cycles of the given lengths sharing exactly one hub.
    Flower { cycle_lengths: Vec<usize> },
    /// Connected, all degrees even, exactly `t` triangles pairwise at
    /// distance at least 3, on `n` vertices.
    SpacedTriangleEulerian { n: usize, t: usize },
    /// Connected, all degrees even, no triangles, on `n` vertices.
    TriangleFreeEulerian { n: usize },
}

impl GenSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            GenSpec::DisjointTriangles { .. } => "disjoint_triangles",
            GenSpec::Flower { .. } => "flower",
            GenSpec::SpacedTriangleEulerian { .. } => "spaced_triangle_eulerian",
            GenSpec::TriangleFreeEulerian { .. } => "triangle_free_eulerian",
        }
    }
}

pub fn generate(spec: &GenSpec, seed: u64) -> Result<Graph, GenError> {
    match spec {
        GenSpec::DisjointTriangles { k } => disjoint_triangles(*k),
        GenSpec::Flower { cycle_lengths } => flower(cycle_lengths),
        GenSpec::SpacedTriangleEulerian { n, t } => spaced_triangle_eulerian(*n, *t, seed),
        GenSpec::TriangleFreeEulerian { n } => triangle_free_eulerian(*n, seed),
    }
}

fn disjoint_triangles(k: usize) -> Result<Graph, GenError> {
    if k == 0 {
        return Err(GenError::InfeasibleSpec("need k >= 1 triangles".into()));
    }
    let mut edges = Vec::with_capacity(3 * k);
    for i in 0..k as VertexId {
        let b = 3 * i;
        edges.extend([(b, b + 1), (b + 1, b + 2), (b, b + 2)]);
    }
    let g = Graph::from_dense(3 * k, &edges);
    debug_assert_eq!(enumerate_triangles(&g).len(), k);
    Ok(g)
}

fn flower(cycle_lengths: &[usize]) -> Result<Graph, GenError> {
    if cycle_lengths.is_empty() {
        return Err(GenError::InfeasibleSpec("need at least one cycle".into()));
    }
    if let Some(&l) = cycle_lengths.iter().find(|&&l| l < 3) {
        return Err(GenError::InfeasibleSpec(format!(
            "cycle length {l} is below 3"
        )));
    }
    let mut edges = Vec::new();
    let mut next: VertexId = 1;
    for &len in cycle_lengths {
        let mut prev: VertexId = 0;
        for _ in 0..len - 1 {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 0));
    }
    let g = Graph::from_dense(next as usize, &edges);
    debug_assert_eq!(g.degree(0), 2 * cycle_lengths.len());
    Ok(g)
}

/// Plants `t` triangles on a base cycle of `n - 2t` vertices with at least
/// three cycle edges between consecutive plants, then sprinkles chord cycles
/// that keep degrees even, create no triangles, and stay two steps away from
/// every plant so triangle distances cannot drop below 3.
fn spaced_triangle_eulerian(n: usize, t: usize, seed: u64) -> Result<Graph, GenError> {
    let c = n as i64 - 2 * t as i64;
    if t == 0 {
        return triangle_free_eulerian(n, seed);
    }
    if c < 3 * t as i64 || c < 3 {
        return Err(GenError::InfeasibleSpec(format!(
            "cannot space {t} triangles on {n} vertices (base cycle would have {c})"
        )));
    }
    let c = c as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..MAX_ATTEMPTS {
        // Gaps of at least 3 around the base cycle, extra slack distributed
        // at random.
        let mut gaps = vec![3usize; t];
        let mut slack = c - 3 * t;
        while slack > 0 {
            let i = rng.random_range(0..t);
            gaps[i] += 1;
            slack -= 1;
        }
        let mut plants = Vec::with_capacity(t);
        let mut pos = 0usize;
        for g in &gaps {
            plants.push(pos as VertexId);
            pos += g;
        }

        let mut edges: Vec<(VertexId, VertexId)> = (0..c)
            .map(|i| (i as VertexId, ((i + 1) % c) as VertexId))
            .collect();
        for (i, &p) in plants.iter().enumerate() {
            let x = (c + 2 * i) as VertexId;
            let y = (c + 2 * i + 1) as VertexId;
            edges.extend([(p, x), (x, y), (y, p)]);
        }

        // Base-cycle vertices at distance >= 2 from every plant are safe
        // endpoints for chords.
        let safe: Vec<VertexId> = (0..c as VertexId)
            .filter(|&v| {
                plants.iter().all(|&p| {
                    let d = (v as i64 - p as i64).rem_euclid(c as i64);
                    let d = d.min(c as i64 - d);
                    d >= 2
                })
            })
            .collect();
        let chord_cycles = rng.random_range(0..=2usize);
        let g = sprinkle_chord_cycles(n, edges, &safe, chord_cycles, &mut rng);

        let triangles = enumerate_triangles(&g);
        let spaced = triangles.iter().enumerate().all(|(i, t1)| {
            triangles[i + 1..].iter().all(|t2| {
                matches!(triangle_distance(&g, t1, t2), Ok(None) | Ok(Some(3..)))
            })
        });
        if is_eulerian(&g) && triangles.len() == t && spaced {
            return Ok(g);
        }
    }
    Err(GenError::InfeasibleSpec(format!(
        "rejection sampling exhausted for n={n}, t={t}"
    )))
}

/// A random Hamiltonian cycle plus a few triangle-free chord cycles.
fn triangle_free_eulerian(n: usize, seed: u64) -> Result<Graph, GenError> {
    if n < 4 {
        return Err(GenError::InfeasibleSpec(format!(
            "need n >= 4 for a triangle-free Eulerian graph, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut order: Vec<VertexId> = (0..n as VertexId).collect();
        order.shuffle(&mut rng);
        let edges: Vec<(VertexId, VertexId)> = (0..n)
            .map(|i| (order[i], order[(i + 1) % n]))
            .collect();
        let all: Vec<VertexId> = (0..n as VertexId).collect();
        let chord_cycles = rng.random_range(0..=2usize);
        let g = sprinkle_chord_cycles(n, edges, &all, chord_cycles, &mut rng);
        if is_eulerian(&g) && enumerate_triangles(&g).is_empty() {
            return Ok(g);
        }
    }
    Err(GenError::InfeasibleSpec(format!(
        "rejection sampling exhausted for n={n}"
    )))
}

/// Tries to add up to `count` cycles over `allowed` vertices, keeping the
/// graph simple and triangle-free; failed attempts are skipped.
fn sprinkle_chord_cycles(
    n: usize,
    mut edges: Vec<(VertexId, VertexId)>,
    allowed: &[VertexId],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Graph {
    let mut g = Graph::from_dense(n, &edges);
    for _ in 0..count {
        if allowed.len() < 4 {
            break;
        }
        let len = rng.random_range(4..=allowed.len().min(8));
        let mut picks = allowed.to_vec();
        picks.shuffle(rng);
        picks.truncate(len);
        picks.sort_unstable();
        let mut cand = edges.clone();
        let mut fresh = Vec::new();
        for i in 0..picks.len() {
            let e = (picks[i], picks[(i + 1) % picks.len()]);
            fresh.push((e.0.min(e.1), e.0.max(e.1)));
        }
        let before = enumerate_triangles(&g).len();
        let mut dup = false;
        for &e in &fresh {
            if cand.iter().any(|&(a, b)| (a.min(b), a.max(b)) == e) {
                dup = true;
                break;
            }
        }
        if dup {
            continue;
        }
        cand.extend(fresh.iter().copied());
        let g2 = Graph::from_dense(n, &cand);
        if enumerate_triangles(&g2).len() != before {
            continue;
        }
        edges = cand;
        g = g2;
    }
    g
}
