//! Acceptance suite: one test per criterion, every threshold pinned in code.
//!
//! Run with `cargo test -p reeb-cli --test acceptance`; cargo prints one
//! pass/fail line per criterion.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use reeb_core::orient::{
    check_sink_complement, complement_components, orient_tree, split_sides, subtree_chi,
};
use reeb_core::randfield::{random_tree_field_with, RandomFieldConfig};
use reeb_core::reeb::{build_reeb, ReebGraph};
use reeb_core::surface::{sample_torus, TorusFunction};
use reeb_core::symmetry::{aut_phi, AutGroup, PhiAutomorphism};
use reeb_core::treelib::enumerate_oriented_trees;
use reeb_core::verdict::{analyze, Conclusion, NotApplicableReason};

/// Criterion 1: over all labeled trees with up to 7 vertices and all edge
/// orientations, every tree has a sink and out-degree <= 1 forces exactly
/// one. Runtime under 10 seconds.
#[test]
fn c1_lemma3_exhaustive_trees_up_to_7() {
    let start = Instant::now();
    let mut cases = 0u64;
    for n in 1..=7 {
        for tree in enumerate_oriented_trees(n).unwrap() {
            cases += 1;
            let sinks = tree.sinks();
            assert!(!sinks.is_empty(), "finite oriented tree without a sink");
            if tree.out_degrees().iter().all(|&d| d <= 1) {
                assert_eq!(sinks.len(), 1, "out-degree <= 1 with several sinks");
                assert!(tree.has_unique_sink_under_outdeg1().unwrap());
            } else if sinks.len() >= 2 {
                // The path argument always produces a witness vertex.
                let w = tree
                    .double_out_on_path(sinks[0], sinks[1])
                    .expect("witness on the path between two sinks");
                assert!(tree.out_degrees()[w] >= 2);
            }
        }
    }
    let expected: u64 = (1..=7u64)
        .map(|n| match n {
            1 => 1,
            _ => n.pow(n as u32 - 2) * (1 << (n - 1)),
        })
        .sum();
    assert_eq!(cases, expected);
    assert!(cases > 100_000, "exhaustive sweep covers ~10^5+ cases");
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "criterion 1 runtime {elapsed:?} exceeds 10 s"
    );
}

/// Criterion 2: on at least 100 random tree fields on the 16x16 grid torus,
/// every edge has exactly one disk side with chi adding to zero, every
/// vertex has out-degree <= 1, and the unique sink's complement components
/// are all disks. Runtime under 60 seconds.
#[test]
fn c2_separation_orientation_and_sink_on_random_fields() {
    let start = Instant::now();
    let mut found = 0usize;
    let mut seed = 0u64;
    while found < 100 {
        let (mesh, graph) = match random_tree_field_with(RandomFieldConfig::default(), seed) {
            Some((m, g, _)) => (m, g),
            None => {
                seed += 1;
                continue;
            }
        };
        seed += 1;
        assert!(graph.vertex_count() >= 2, "a field on the torus has at least two critical components");
        let tree = orient_tree(&mesh, &graph).expect("tree field orients");
        for e in graph.edges() {
            let (lower, upper) = split_sides(&mesh, &graph, e.id).expect("edge splits");
            assert!(
                lower.is_disk() ^ upper.is_disk(),
                "exactly one disk side per edge"
            );
            assert_eq!(
                lower.euler_characteristic + upper.euler_characteristic,
                0,
                "chi is additive under cutting"
            );
        }
        let mut sinks = 0;
        for v in graph.vertices() {
            let d = tree.out_degree(v.id);
            assert!(d <= 1, "out-degree bound");
            if d == 0 {
                sinks += 1;
            }
        }
        assert_eq!(sinks, 1, "unique sink");
        let comps = complement_components(&mesh, &graph, tree.sink()).unwrap();
        for c in &comps {
            assert_eq!(c.euler_characteristic, 1, "sink complement piece is a disk");
            assert_eq!(c.boundary_circles, 1, "one boundary circle per piece");
        }
        assert!(check_sink_complement(&mesh, &graph, tree.sink()));
        found += 1;
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "criterion 2 runtime {elapsed:?} exceeds 60 s"
    );
}

/// Criterion 3: the sinsin golden case at n = 32.
#[test]
fn c3_sinsin_golden_case() {
    let mesh = sample_torus(&TorusFunction::SinSin, 32).unwrap();
    let graph = build_reeb(&mesh).unwrap();
    // Star with four leaves.
    assert_eq!(graph.vertex_count(), 5);
    assert_eq!(graph.edge_count(), 4);
    let mut degrees: Vec<usize> = graph.vertices().iter().map(|v| graph.degree(v.id)).collect();
    degrees.sort();
    assert_eq!(degrees, vec![1, 1, 1, 1, 4]);
    // Levels at -1, 0, +1 within the grid quantization tolerance.
    let mut levels: Vec<f64> = graph.vertices().iter().map(|v| v.level).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (level, expected) in levels.iter().zip([-1.0, -1.0, 0.0, 1.0, 1.0]) {
        assert!(
            (level - expected).abs() <= 1e-2,
            "level {level} vs {expected}"
        );
    }
    // The sink is the central vertex.
    let tree = orient_tree(&mesh, &graph).unwrap();
    let sink = tree.sink();
    assert_eq!(graph.degree(sink), 4);
    assert_eq!(graph.vertex(sink).level, 0.0);
    assert!(check_sink_complement(&mesh, &graph, sink));
    // chi bookkeeping sums to zero.
    let total: i64 = graph.vertices().iter().map(|v| v.component.chi()).sum();
    assert_eq!(total, 0);
    // The level-preserving group has order four.
    assert_eq!(aut_phi(&graph).order(), 4);
    // Verdict: inconclusive with the over-approximation caveat.
    let verdict = analyze(&mesh);
    assert_eq!(verdict.conclusion, Conclusion::HypothesisFailsInconclusive);
    assert!(verdict.caveat_overapprox);
    assert_eq!(verdict.local_stabilizer_order, 4);
}

/// Criterion 4: the scaled sinsin golden case at n = 32, including the
/// process exit code of the CLI.
#[test]
fn c4_scaled_sinsin_golden_case() {
    let mesh = sample_torus(&TorusFunction::SinSinScaled([1.0, 0.8, 0.6, 0.4]), 32).unwrap();
    let graph = build_reeb(&mesh).unwrap();
    let mut degrees: Vec<usize> = graph.vertices().iter().map(|v| graph.degree(v.id)).collect();
    degrees.sort();
    assert_eq!(degrees, vec![1, 1, 1, 1, 4]);
    let mut leaf_levels: Vec<f64> = graph
        .vertices()
        .iter()
        .filter(|v| graph.degree(v.id) == 1)
        .map(|v| v.level)
        .collect();
    leaf_levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(leaf_levels, vec![-0.8, -0.4, 0.6, 1.0]);
    assert_eq!(aut_phi(&graph).order(), 1);
    let verdict = analyze(&mesh);
    assert_eq!(verdict.conclusion, Conclusion::Splits);
    assert!(verdict.formula.as_deref().unwrap().contains("ℤ² × π₀S′(f)"));
    assert_eq!(verdict.exit_code(), 0);

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("out.json");
    let dot = dir.path().join("g.dot");
    let status = Command::new(env!("CARGO_BIN_EXE_reeb"))
        .args([
            "--builtin",
            "sinsin_scaled[1,0.8,0.6,0.4]",
            "--n",
            "32",
            "--report",
            report.to_str().unwrap(),
            "--dot",
            dot.to_str().unwrap(),
        ])
        .status()
        .expect("binary runs");
    assert_eq!(status.code(), Some(0), "exit code 0 for the splitting case");
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["conclusion"], "Splits");
    assert!(json["formula"].as_str().unwrap().contains("ℤ² × π₀S′(f)"));
    assert!(std::fs::read_to_string(&dot).unwrap().contains("peripheries=2"));
}

/// Criterion 5: negative controls. The height field has degenerate critical
/// circles; the two-saddle field passes Property (L) but has a cycle.
#[test]
fn c5_negative_controls() {
    let height = sample_torus(&TorusFunction::Height, 32).unwrap();
    let verdict = analyze(&height);
    assert!(!verdict.property_l_ok);
    assert_eq!(
        verdict.conclusion,
        Conclusion::NotApplicable(NotApplicableReason::PropertyLViolated)
    );
    assert_eq!(verdict.exit_code(), 3);

    let twosaddle = sample_torus(&TorusFunction::TwoSaddle, 32).unwrap();
    let graph = build_reeb(&twosaddle).unwrap();
    assert_eq!(graph.betti_1(), 1);
    let verdict = analyze(&twosaddle);
    assert!(verdict.property_l_ok);
    assert_eq!(
        verdict.conclusion,
        Conclusion::NotApplicable(NotApplicableReason::GraphNotTree)
    );
    assert_eq!(verdict.conclusion.to_string(), "NotApplicable(GraphNotTree)");
    assert_eq!(verdict.exit_code(), 3);
}

/// Factorial brute force over level-preserving vertex bijections, extended
/// to edges class by class: the oracle for the backtracking implementation.
fn aut_phi_brute_force(graph: &ReebGraph) -> AutGroup {
    fn perms(items: &[usize]) -> Vec<Vec<usize>> {
        fn rec(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            if k == v.len() {
                out.push(v.clone());
                return;
            }
            for i in k..v.len() {
                v.swap(k, i);
                rec(v, k + 1, out);
                v.swap(k, i);
            }
        }
        let mut v = items.to_vec();
        let mut out = Vec::new();
        rec(&mut v, 0, &mut out);
        out
    }
    let nv = graph.vertex_count();
    let mut by_level: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for v in graph.vertices() {
        by_level.entry(v.level.to_bits()).or_default().push(v.id.0);
    }
    let mut maps: Vec<Vec<usize>> = vec![vec![usize::MAX; nv]];
    for vs in by_level.values() {
        let mut next = Vec::new();
        for base in &maps {
            for p in perms(vs) {
                let mut m = base.clone();
                for (src, dst) in vs.iter().zip(p.iter()) {
                    m[*src] = *dst;
                }
                next.push(m);
            }
        }
        maps = next;
    }
    let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in graph.edges() {
        classes
            .entry((e.ends[0].0, e.ends[1].0))
            .or_default()
            .push(e.id.0);
    }
    let mut elements = Vec::new();
    for m in maps {
        let preserves = classes.iter().all(|(&(a, b), es)| {
            classes
                .get(&(m[a], m[b]))
                .map(|img| img.len() == es.len())
                .unwrap_or(false)
        }) && classes.values().map(|v| v.len()).sum::<usize>()
            == graph.edge_count();
        if !preserves {
            continue;
        }
        let mut eperms: Vec<Vec<usize>> = vec![vec![usize::MAX; graph.edge_count()]];
        for (&(a, b), es) in &classes {
            let img = &classes[&(m[a], m[b])];
            let mut next = Vec::new();
            for base in &eperms {
                for p in perms(img) {
                    let mut ep = base.clone();
                    for (s, t) in es.iter().zip(p.iter()) {
                        ep[*s] = *t;
                    }
                    next.push(ep);
                }
            }
            eperms = next;
        }
        for ep in eperms {
            elements.push(PhiAutomorphism {
                vertex_perm: m.clone(),
                edge_perm: ep,
            });
        }
    }
    elements.sort();
    elements.dedup();
    AutGroup { elements }
}

/// Criterion 6: the backtracking group equals the factorial brute force on
/// all test graphs with at most 10 vertices, and the clipping Euler
/// characteristic equals the Reeb-subtree sum on every edge of every test
/// tree.
#[test]
fn c6_oracle_equivalence() {
    let mut graphs: Vec<ReebGraph> = vec![
        build_reeb(&sample_torus(&TorusFunction::SinSin, 8).unwrap()).unwrap(),
        build_reeb(&sample_torus(&TorusFunction::SinSinScaled([1.0, 0.8, 0.6, 0.4]), 8).unwrap())
            .unwrap(),
        build_reeb(&sample_torus(&TorusFunction::TwoSaddle, 16).unwrap()).unwrap(),
        ReebGraph::from_parts(vec![0.0, 1.0, 2.0], vec![(0, 1), (1, 2)]).unwrap(),
        ReebGraph::from_parts(
            vec![0.0, 1.0, 1.0, -1.0, -1.0, 2.0],
            vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 5)],
        )
        .unwrap(),
        ReebGraph::from_parts(
            vec![0.0, 1.0, 1.0, 1.0, -1.0, -2.0],
            vec![(0, 1), (0, 2), (0, 3), (0, 4), (4, 5)],
        )
        .unwrap(),
    ];
    // A synthetic multigraph with swappable parallel edges.
    graphs.push(
        ReebGraph::from_parts(vec![0.0, 1.0, 2.0], vec![(0, 1), (0, 1), (1, 2)]).unwrap(),
    );
    for g in &graphs {
        assert!(g.vertex_count() <= 10);
        let fast = aut_phi(g);
        let slow = aut_phi_brute_force(g);
        assert_eq!(fast.elements, slow.elements, "groups agree element by element");
    }

    // Clipping chi versus subtree chi sums.
    let mut trees = vec![
        (
            sample_torus(&TorusFunction::SinSin, 8).unwrap(),
            None,
        ),
        (sample_torus(&TorusFunction::SinSin, 16).unwrap(), None),
        (sample_torus(&TorusFunction::SinSin, 32).unwrap(), None),
        (
            sample_torus(&TorusFunction::SinSinScaled([1.0, 0.8, 0.6, 0.4]), 16).unwrap(),
            None,
        ),
    ];
    for seed in [0u64, 1, 2, 3, 4] {
        if let Some((mesh, graph, _)) =
            random_tree_field_with(RandomFieldConfig::default(), seed)
        {
            trees.push((mesh, Some(graph)));
        }
    }
    assert!(trees.len() >= 8);
    for (mesh, graph) in trees {
        let graph = graph.unwrap_or_else(|| build_reeb(&mesh).unwrap());
        for e in graph.edges() {
            let (lower, upper) = split_sides(&mesh, &graph, e.id).unwrap();
            assert_eq!(
                lower.euler_characteristic,
                subtree_chi(&graph, e.id, e.ends[0]),
                "lower side of {:?}",
                e.id
            );
            assert_eq!(
                upper.euler_characteristic,
                subtree_chi(&graph, e.id, e.ends[1]),
                "upper side of {:?}",
                e.id
            );
        }
    }
}

/// Criterion 7: verdicts of all four builtins are byte-identical across the
/// resolutions 8, 16, 32 and 64.
#[test]
fn c7_resolution_stability() {
    let builtins = [
        TorusFunction::SinSin,
        TorusFunction::SinSinScaled([1.0, 0.8, 0.6, 0.4]),
        TorusFunction::Height,
        TorusFunction::TwoSaddle,
    ];
    for f in &builtins {
        let base = analyze(&sample_torus(f, 8).unwrap()).to_json();
        for n in [16, 32, 64] {
            let report = analyze(&sample_torus(f, n).unwrap()).to_json();
            assert_eq!(report, base, "{f} at n={n}");
        }
    }
}
