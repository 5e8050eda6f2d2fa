//! Helpers shared by the integration suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use pathdec::decomp::{verify_decomposition, CycleSeq, Decomposition, PathSeq};
use pathdec::graph::{Graph, VertexId};
use pathdec::merge::MergeInstance;

/// Graph induced by the union of some paths and cycles; vertex count covers
/// every mentioned vertex so edgeless paths still fit.
pub fn union_graph(paths: &[&PathSeq], cycles: &[&CycleSeq]) -> Graph {
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for p in paths {
        edges.extend(p.edges());
    }
    for c in cycles {
        edges.extend(c.edges());
    }
    let n = paths
        .iter()
        .flat_map(|p| p.vertices().iter().copied())
        .chain(cycles.iter().flat_map(|c| c.vertices().iter().copied()))
        .max()
        .map_or(0, |v| v as usize + 1);
    Graph::from_dense(n, &edges)
}

pub fn assert_fragment(host: &Graph, paths: &[PathSeq], expected: usize) {
    assert_eq!(paths.len(), expected, "wrong fragment size");
    let rep = verify_decomposition(host, &Decomposition::new(paths.to_vec()));
    assert!(rep.ok(), "fragment fails verification: {:?}", rep.violations);
}

/// Random valid merge instance: a path on 1..=4 vertices and edge-disjoint
/// cycles of length 3..=8 through it, with `|V(P)| + cycles <= 6`. Cycles
/// may share vertices with each other and with the path; edge-disjointness
/// is enforced by rejection.
pub fn random_merge_instance(rng: &mut ChaCha8Rng) -> MergeInstance {
    loop {
        if let Some(inst) = try_random_merge_instance(rng) {
            return inst;
        }
    }
}

fn try_random_merge_instance(rng: &mut ChaCha8Rng) -> Option<MergeInstance> {
    let k = rng.random_range(1..=4usize);
    let q = rng.random_range(0..=(6 - k).min(5));
    let path_vs: Vec<VertexId> = (0..k as VertexId).collect();
    let mut used_edges: std::collections::BTreeSet<(VertexId, VertexId)> = path_vs
        .windows(2)
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
        .collect();
    let mut pool: Vec<VertexId> = path_vs.clone();
    let mut next_fresh = k as VertexId;
    let mut cycles = Vec::new();
    'cycles: for _ in 0..q {
        'attempts: for _ in 0..200 {
            let len = rng.random_range(3..=8usize);
            // At least one path vertex; sometimes reuse other cycle
            // vertices, rest fresh.
            let n_old = rng.random_range(1..=len.min(pool.len()));
            let mut old = pool.clone();
            old.shuffle(rng);
            old.truncate(n_old);
            if !old.iter().any(|v| path_vs.contains(v)) {
                old[0] = path_vs[rng.random_range(0..k)];
                if old[1..].contains(&old[0]) {
                    continue 'attempts;
                }
            }
            let mut vs = old;
            while vs.len() < len {
                vs.push(next_fresh + (vs.len() - n_old) as VertexId);
            }
            vs.shuffle(rng);
            let cand = CycleSeq::new(vs).ok()?;
            let cand_edges: Vec<(VertexId, VertexId)> = cand.edges().collect();
            if cand_edges.iter().any(|e| used_edges.contains(e)) {
                continue 'attempts;
            }
            used_edges.extend(cand_edges);
            next_fresh += (len - n_old) as VertexId;
            for &v in cand.vertices() {
                if !pool.contains(&v) {
                    pool.push(v);
                }
            }
            cycles.push(cand);
            continue 'cycles;
        }
        return None;
    }
    MergeInstance::new(PathSeq::new(path_vs).unwrap(), cycles).ok()
}
