//! Level-preserving automorphisms of a Reeb graph.
//!
//! The computed group is all graph automorphisms commuting with the level
//! function. It contains the image of the identity-isotopic field-preserving
//! homeomorphisms, so triviality of a local stabilizer here soundly implies
//! triviality downstairs; a nontrivial result is inconclusive and callers
//! carry an over-approximation caveat.

use std::collections::{BTreeMap, BTreeSet};

use crate::reeb::{EdgeId, ReebGraph, VertexId};

/// A graph automorphism preserving vertex levels: a vertex permutation plus a
/// compatible edge permutation (parallel edges may swap).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PhiAutomorphism {
    pub vertex_perm: Vec<usize>,
    pub edge_perm: Vec<usize>,
}

impl PhiAutomorphism {
    pub fn identity(nv: usize, ne: usize) -> PhiAutomorphism {
        PhiAutomorphism {
            vertex_perm: (0..nv).collect(),
            edge_perm: (0..ne).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_perm.iter().enumerate().all(|(k, &v)| k == v)
            && self.edge_perm.iter().enumerate().all(|(k, &e)| k == e)
    }

    /// `(self.compose(other))(x) = self(other(x))`.
    pub fn compose(&self, other: &PhiAutomorphism) -> PhiAutomorphism {
        PhiAutomorphism {
            vertex_perm: other.vertex_perm.iter().map(|&v| self.vertex_perm[v]).collect(),
            edge_perm: other.edge_perm.iter().map(|&e| self.edge_perm[e]).collect(),
        }
    }

    pub fn inverse(&self) -> PhiAutomorphism {
        let mut vp = vec![0; self.vertex_perm.len()];
        let mut ep = vec![0; self.edge_perm.len()];
        for (k, &v) in self.vertex_perm.iter().enumerate() {
            vp[v] = k;
        }
        for (k, &e) in self.edge_perm.iter().enumerate() {
            ep[e] = k;
        }
        PhiAutomorphism {
            vertex_perm: vp,
            edge_perm: ep,
        }
    }
}

/// The finite group of level-preserving automorphisms, closed under
/// composition and inverse, identity included.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub elements: Vec<PhiAutomorphism>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &PhiAutomorphism) -> bool {
        self.elements.contains(g)
    }

    /// Checks the group axioms by brute force; used by tests.
    pub fn is_closed(&self) -> bool {
        let id = self
            .elements
            .iter()
            .any(|g| g.is_identity());
        id && self.elements.iter().all(|g| {
            self.contains(&g.inverse())
                && self.elements.iter().all(|h| self.contains(&g.compose(h)))
        })
    }
}

fn level_key(x: f64) -> u64 {
    x.to_bits()
}

/// Parallel-edge classes keyed by ordered endpoint pair.
fn edge_classes(graph: &ReebGraph) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in graph.edges() {
        classes
            .entry((e.ends[0].0, e.ends[1].0))
            .or_default()
            .push(e.id.0);
    }
    classes
}

/// Computes the full group of level-preserving automorphisms by backtracking
/// over level-compatible vertex matchings, then extending each vertex
/// permutation with every compatible edge permutation.
pub fn aut_phi(graph: &ReebGraph) -> AutGroup {
    let nv = graph.vertex_count();
    let ne = graph.edge_count();
    let classes = edge_classes(graph);

    // Candidate signature: level, and for each incident parallel class the
    // neighbor's level, direction and multiplicity.
    let sig = |v: usize| -> Vec<(u64, bool, usize, u64)> {
        let mut s: Vec<(u64, bool, usize, u64)> = classes
            .iter()
            .filter(|(&(a, b), _)| a == v || b == v)
            .map(|(&(a, b), es)| {
                let up = a == v; // the neighbor is the upper endpoint
                let other = if up { b } else { a };
                (
                    level_key(graph.vertices()[v].level),
                    up,
                    es.len(),
                    level_key(graph.vertices()[other].level),
                )
            })
            .collect();
        s.sort();
        s
    };
    let sigs: Vec<_> = (0..nv).map(sig).collect();
    let candidates: Vec<Vec<usize>> = (0..nv)
        .map(|v| (0..nv).filter(|&w| sigs[w] == sigs[v]).collect())
        .collect();

    // Class keys are (lower, upper) by level, not by id; keep a symmetric
    // multiplicity lookup for the adjacency checks.
    let mut mult: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&(a, b), es) in &classes {
        mult.insert((a, b), es.len());
        mult.insert((b, a), es.len());
    }
    let count = |a: usize, b: usize| mult.get(&(a, b)).copied().unwrap_or(0);

    let mut vperms: Vec<Vec<usize>> = Vec::new();
    let mut map = vec![usize::MAX; nv];
    let mut used = vec![false; nv];

    fn dfs(
        v: usize,
        nv: usize,
        candidates: &[Vec<usize>],
        count: &dyn Fn(usize, usize) -> usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == nv {
            out.push(map.clone());
            return;
        }
        for &w in &candidates[v] {
            if used[w] {
                continue;
            }
            // Adjacency multiplicities against every already-mapped vertex.
            let ok = (0..v).all(|u| count(v, u) == count(w, map[u]));
            if !ok {
                continue;
            }
            map[v] = w;
            used[w] = true;
            dfs(v + 1, nv, candidates, count, map, used, out);
            used[w] = false;
            map[v] = usize::MAX;
        }
    }
    dfs(0, nv, &candidates, &count, &mut map, &mut used, &mut vperms);

    // Extend each vertex permutation with all compatible edge permutations:
    // per parallel class, any bijection onto the image class.
    let mut elements: Vec<PhiAutomorphism> = Vec::new();
    for vp in vperms {
        let mut per_class: Vec<(Vec<usize>, Vec<Vec<usize>>)> = Vec::new();
        let mut feasible = true;
        for (&(a, b), es) in &classes {
            // Level preservation keeps the (lower, upper) order, so the image
            // class is keyed by the mapped pair directly.
            let img = classes.get(&(vp[a], vp[b]));
            let img = match img {
                Some(v) if v.len() == es.len() => v,
                _ => {
                    feasible = false;
                    break;
                }
            };
            per_class.push((es.clone(), permutations(img)));
        }
        if !feasible {
            continue;
        }
        // Cartesian product over classes.
        let mut eperms: Vec<Vec<usize>> = vec![vec![usize::MAX; ne]];
        for (sources, targets_list) in &per_class {
            let mut next: Vec<Vec<usize>> = Vec::new();
            for base in &eperms {
                for targets in targets_list {
                    let mut ep = base.clone();
                    for (s, t) in sources.iter().zip(targets.iter()) {
                        ep[*s] = *t;
                    }
                    next.push(ep);
                }
            }
            eperms = next;
        }
        for ep in eperms {
            debug_assert!(ep.iter().all(|&e| e != usize::MAX));
            elements.push(PhiAutomorphism {
                vertex_perm: vp.clone(),
                edge_perm: ep,
            });
        }
    }
    elements.sort();
    elements.dedup();
    AutGroup { elements }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut items = items.to_vec();
    permute(&mut items, 0, &mut out);
    out.sort();
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Subgroup of `group` fixing the vertex `v`.
pub fn vertex_stabilizer(group: &AutGroup, v: VertexId) -> AutGroup {
    AutGroup {
        elements: group
            .elements
            .iter()
            .filter(|g| g.vertex_perm[v.0] == v.0)
            .cloned()
            .collect(),
    }
}

/// A half-edge at the center of a star, labeled by whether its far endpoint
/// lies above the center level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub upward: bool,
}

/// The combinatorial star of a vertex: its half-edges only, which is the
/// minimal faithful model of any geometric star neighborhood.
#[derive(Clone, Debug)]
pub struct Star {
    pub center: VertexId,
    pub half_edges: Vec<HalfEdge>,
}

/// Builds the star of `v` with half-edges sorted by edge id.
pub fn star(graph: &ReebGraph, v: VertexId) -> Star {
    let mut half_edges: Vec<HalfEdge> = graph
        .edges()
        .iter()
        .filter(|e| e.ends.contains(&v))
        .map(|e| HalfEdge {
            edge: e.id,
            upward: e.ends[0] == v,
        })
        .collect();
    half_edges.sort_by_key(|h| h.edge);
    Star {
        center: v,
        half_edges,
    }
}

/// The local stabilizer: restrictions of the vertex stabilizer of `v` in the
/// full level-preserving group to the half-edges at `v`, as permutations of
/// the star's half-edge positions.
#[derive(Clone, Debug)]
pub struct LocalStabilizer {
    pub star: Star,
    /// Distinct permutations of half-edge positions, sorted.
    pub elements: Vec<Vec<usize>>,
}

impl LocalStabilizer {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

pub fn local_stabilizer(graph: &ReebGraph, v: VertexId) -> LocalStabilizer {
    let group = aut_phi(graph);
    local_stabilizer_in(graph, &group, v)
}

/// Restriction of a precomputed group's vertex stabilizer to the star of `v`.
pub fn local_stabilizer_in(graph: &ReebGraph, group: &AutGroup, v: VertexId) -> LocalStabilizer {
    let st = star(graph, v);
    let stab = vertex_stabilizer(group, v);
    let index_of = |e: usize| st.half_edges.iter().position(|h| h.edge.0 == e).unwrap();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for g in &stab.elements {
        let perm: Vec<usize> = st
            .half_edges
            .iter()
            .map(|h| index_of(g.edge_perm[h.edge.0]))
            .collect();
        seen.insert(perm);
    }
    LocalStabilizer {
        star: st,
        elements: seen.into_iter().collect(),
    }
}

/// Outcome of the trivial-local-stabilizer hypothesis check at the sink.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub trivial: bool,
    /// Set when `trivial` is false: the computed group over-approximates the
    /// realized one, so nontriviality is inconclusive.
    pub caveat_overapproximation: bool,
}

/// Decides the hypothesis "the local stabilizer of the sink is trivial" in
/// the computable over-approximation.
pub fn is_hypothesis_satisfied(graph: &ReebGraph, sink: VertexId) -> HypothesisCheck {
    let local = local_stabilizer(graph, sink);
    let trivial = local.is_trivial();
    HypothesisCheck {
        trivial,
        caveat_overapproximation: !trivial,
    }
}
