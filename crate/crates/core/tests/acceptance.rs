//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line with its runtime (visible under `--nocapture`).

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{assert_fragment, random_merge_instance, union_graph};
use pathdec::decomp::{
    verify_decomposition, BoundKind, CycleSeq, Decomposition, PathSeq,
};
use pathdec::generate::{generate, GenSpec};
use pathdec::graph::{degree_profile, enumerate_triangles, Graph, VertexId};
use pathdec::merge::{
    contracted_two_path_search, decompose_flower_bundle, exceptional_instance,
    flower_bundle_path_count, merge_path_with_cycles, two_path_merge, Flower, MergeOutcome,
};
use pathdec::pipeline::{
    decompose_eulerian, decompose_with_removal_set, find_removal_set,
};
use pathdec::solver::{exact_min_decomposition, SolverBudget};

fn finish(name: &str, started: Instant, limit: Duration) {
    let elapsed = started.elapsed();
    println!("criterion {name}: PASS ({elapsed:.2?})");
    assert!(
        elapsed < limit,
        "criterion {name} exceeded its time limit: {elapsed:.2?} > {limit:.2?}"
    );
}

fn triangle_flower(q: usize) -> Flower {
    let mut cycles = Vec::new();
    for i in 0..q as VertexId {
        cycles.push(CycleSeq::new(vec![0, 2 * i + 1, 2 * i + 2]).unwrap());
    }
    Flower::new(cycles, 0).unwrap()
}

/// Criterion 1: grouped flower decomposition counts for q = 1..13 triangles
/// are exactly 2,3,4,5,6,7,9,10,11,12,13,14,16.
#[test]
fn criterion_1_flower_bundle_count_table() {
    let started = Instant::now();
    let expected = [2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 13, 14, 16];
    for (q, &want) in (1..=13usize).zip(expected.iter()) {
        assert_eq!(flower_bundle_path_count(q), want, "formula at q={q}");
        let flower = triangle_flower(q);
        let out = decompose_flower_bundle(&flower).unwrap();
        let host = union_graph(&[], &flower.cycles.iter().collect::<Vec<_>>());
        assert_fragment(&host, &out, want);
    }
    finish("1 (flower bundle count table)", started, Duration::from_secs(1));
}

/// Criterion 2: 500 random valid merge instances, every call returns exactly
/// |cycles| + 1 paths and the fragment verifies.
#[test]
fn criterion_2_merge_envelope_sweep() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut by_cycles = [0usize; 6];
    for round in 0..500 {
        let inst = random_merge_instance(&mut rng);
        by_cycles[inst.cycles.len()] += 1;
        let out = merge_path_with_cycles(&inst)
            .unwrap_or_else(|e| panic!("round {round}: {e}"));
        let host = union_graph(
            &[&inst.path],
            &inst.cycles.iter().collect::<Vec<_>>(),
        );
        assert_fragment(&host, &out, inst.cycles.len() + 1);
    }
    assert!(
        by_cycles[1..].iter().all(|&c| c > 10),
        "sweep must hit every cycle count: {by_cycles:?}"
    );
    finish("2 (merge envelope sweep, 500 instances)", started, Duration::from_secs(10));
}

/// Criterion 3: the five-cycle-with-chord-path instance admits no two-path
/// partition, for tails extended by up to three vertices each.
#[test]
fn criterion_3_exceptional_detection() {
    let started = Instant::now();
    for t1 in 1..=4usize {
        for t2 in 1..=4usize {
            let (p, c) = exceptional_instance(t1, t2);
            assert_eq!(
                two_path_merge(&p, &c).unwrap(),
                MergeOutcome::Exceptional,
                "tails {t1},{t2}"
            );
            let edges: Vec<(VertexId, VertexId)> = p.edges().chain(c.edges()).collect();
            assert_eq!(contracted_two_path_search(&edges).unwrap(), None);
        }
    }
    finish("3 (exceptional-graph detection)", started, Duration::from_secs(1));
}

/// Criterion 4: k disjoint triangles need exactly 2k paths, proven optimal.
#[test]
fn criterion_4_disjoint_triangle_lower_bound() {
    let started = Instant::now();
    for k in 1..=3usize {
        let g = generate(&GenSpec::DisjointTriangles { k }, 0).unwrap();
        let (d, optimal) = exact_min_decomposition(&g, &SolverBudget::default()).unwrap();
        assert!(optimal, "k={k} must solve to optimality");
        assert_eq!(d.count(), 2 * k, "k={k}");
        assert!(verify_decomposition(&g, &d).ok());
    }
    finish("4 (disjoint-triangle lower bound)", started, Duration::from_secs(5));
}

/// Criterion 5: 100 seeded spaced-triangle Eulerian instances with
/// n in [15, 60], t in [1, 3]: the certificate verifies, the count stays
/// within floor(3n/5), and the ledger or satisfies q <= d/2 and the exact
/// count-delta identity at every step.
#[test]
fn criterion_5_pipeline_end_to_end() {
    let started = Instant::now();
    let budget = SolverBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    for i in 0..100u64 {
        let t = rng.random_range(1..=3usize);
        let n = rng.random_range(15..=60usize);
        let spec = GenSpec::SpacedTriangleEulerian { n, t };
        let g = generate(&spec, i).unwrap_or_else(|e| panic!("instance {i}: {e}"));
        let (d, ledger) = decompose_eulerian(&g, &budget, i)
            .unwrap_or_else(|e| panic!("instance {i} (n={n}, t={t}): {e}"));
        let rep = verify_decomposition(&g, &d);
        assert!(rep.ok(), "instance {i}: {:?}", rep.violations);
        assert!(
            d.count() <= 3 * g.n() / 5,
            "instance {i}: {} > {}",
            d.count(),
            3 * g.n() / 5
        );
        let mut prev = ledger.initial_count;
        for rec in &ledger.records {
            if rec.cycles_formed >= 1 {
                assert!(
                    rec.cycles_formed <= rec.degree / 2,
                    "instance {i}: q={} d={}",
                    rec.cycles_formed,
                    rec.degree
                );
                assert_eq!(
                    rec.bundle_paths,
                    flower_bundle_path_count(rec.cycles_formed),
                    "instance {i}: t must be the grouped-flower value"
                );
            } else {
                assert_eq!(rec.bundle_paths, 0);
            }
            assert_eq!(
                rec.path_count_after,
                prev - rec.cycles_formed + rec.bundle_paths,
                "instance {i}: count delta"
            );
            prev = rec.path_count_after;
        }
        assert_eq!(prev, ledger.final_count);
        assert_eq!(ledger.final_count, d.count());
    }
    finish("5 (pipeline end-to-end, 100 instances)", started, Duration::from_secs(120));
}

/// Criterion 6: on 50 small instances across the generator families the
/// exact count never exceeds the pipeline count, and triangle-free
/// instances satisfy the alpha/2 + floor(3*beta/5) bound.
#[test]
fn criterion_6_oracle_dominance() {
    let started = Instant::now();
    let budget = SolverBudget::default();
    let specs = [
        GenSpec::DisjointTriangles { k: 2 },
        GenSpec::Flower {
            cycle_lengths: vec![4, 5],
        },
        GenSpec::SpacedTriangleEulerian { n: 13, t: 1 },
        GenSpec::TriangleFreeEulerian { n: 10 },
    ];
    let mut checked = 0usize;
    let mut seed = 0u64;
    while checked < 50 {
        let spec = &specs[checked % specs.len()];
        seed += 1;
        let g = match generate(spec, seed) {
            Ok(g) => g,
            Err(_) => continue,
        };
        if g.m() > 20 {
            continue;
        }
        let (exact, optimal) = exact_min_decomposition(&g, &budget).unwrap();
        assert!(optimal, "m <= 20 must solve exactly");

        if enumerate_triangles(&g).is_empty() {
            let prof = degree_profile(&g);
            assert!(
                exact.count() <= prof.alpha / 2 + 3 * prof.beta / 5,
                "{} seed {seed}: exact {} vs cfz bound",
                spec.family_name(),
                exact.count()
            );
        }

        match spec {
            GenSpec::DisjointTriangles { k } => {
                assert_eq!(exact.count(), 2 * k, "seed {seed}");
            }
            _ => {
                let pipeline_count = match decompose_eulerian(&g, &budget, seed) {
                    Ok((d, _)) => d.count(),
                    Err(_) => {
                        let set = find_removal_set(&g).expect("family admits a removal set");
                        let (d, _) =
                            decompose_with_removal_set(&g, &set, &budget, seed).unwrap();
                        d.count()
                    }
                };
                assert!(
                    exact.count() <= pipeline_count,
                    "{} seed {seed}: exact {} > pipeline {}",
                    spec.family_name(),
                    exact.count(),
                    pipeline_count
                );
            }
        }
        checked += 1;
    }
    finish("6 (oracle dominance, 50 instances)", started, Duration::from_secs(300));
}

/// Criterion 7: 200 certificate mutations (dropped edge, duplicated path,
/// repeated vertex) are all flagged; unmutated certificates are accepted.
#[test]
fn criterion_7_verifier_soundness() {
    let started = Instant::now();
    let budget = SolverBudget::default();
    let mut sources: Vec<(Graph, Decomposition)> = Vec::new();
    for seed in 0..10u64 {
        let g = generate(&GenSpec::SpacedTriangleEulerian { n: 20, t: 2 }, seed).unwrap();
        let (d, _) = decompose_eulerian(&g, &budget, seed).unwrap();
        assert!(verify_decomposition(&g, &d).ok(), "original must verify");
        sources.push((g, d));
    }
    let mut flagged = 0usize;
    let mut case = 0usize;
    while flagged < 200 {
        let (g, d) = &sources[case % sources.len()];
        let path_idx = (case / 3) % d.paths.len();
        let mut mutant = d.paths.clone();
        match case % 3 {
            0 => {
                // Drop the last edge of one path.
                let vs = mutant[path_idx].vertices().to_vec();
                if vs.len() < 2 {
                    case += 1;
                    continue;
                }
                mutant[path_idx] = PathSeq::new_unchecked(vs[..vs.len() - 1].to_vec());
            }
            1 => {
                // Duplicate a path.
                mutant.push(mutant[path_idx].clone());
            }
            _ => {
                // Introduce a repeated vertex.
                let mut vs = mutant[path_idx].vertices().to_vec();
                vs.push(vs[0]);
                mutant[path_idx] = PathSeq::new_unchecked(vs);
            }
        }
        let rep = verify_decomposition(g, &Decomposition::new(mutant));
        assert!(!rep.ok(), "mutant {case} slipped through");
        flagged += 1;
        case += 1;
    }
    finish("7 (verifier soundness, 200 mutants)", started, Duration::from_secs(10));
}

/// Bound-kind sanity used throughout the suite: the two bounds agree with
/// their definitions on a known instance.
#[test]
fn bound_definitions_are_wired_correctly() {
    let g = generate(&GenSpec::TriangleFreeEulerian { n: 10 }, 3).unwrap();
    let prof = degree_profile(&g);
    assert_eq!(BoundKind::ThreeFifthsN.allowed(&g), 3 * g.n() / 5);
    assert_eq!(
        BoundKind::CfzAlphaBeta.allowed(&g),
        prof.alpha / 2 + 3 * prof.beta / 5
    );
}
