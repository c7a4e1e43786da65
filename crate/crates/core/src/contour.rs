//! Level-set components and piecewise-linear critical vertex classification.
//!
//! A vertex is classified by the sign sequence of `f(link) - f(v)` around its
//! link cycle. Maximal flat arcs are contracted to a single zero symbol
//! first; a zero sitting between two equal signs is the piecewise-linear
//! analog of a repeated factor in the critical germ and makes the vertex
//! `Degenerate`. Otherwise 0 sign changes is an extremum, 2 is regular and
//! 2k is a k-fold saddle.

use std::collections::HashMap;

use crate::surface::Mesh;
use crate::unionfind::UnionFind;

/// Classification of a mesh vertex by link sign changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexClass {
    Regular,
    Min,
    Max,
    /// `Saddle(k)` has exactly `2k` sign changes around the link, `k >= 2`.
    Saddle(usize),
    /// A flat link arc bounded by two equal signs; rejected by Property (L).
    Degenerate,
}

/// Classifies the cyclic sign sequence of `f(link) - f(center)`.
///
/// Entries are -1, 0, +1. Returns `Degenerate` for an all-zero link, which a
/// validated mesh cannot produce.
pub(crate) fn classify_signs(signs: &[i8]) -> VertexClass {
    // Contract maximal cyclic runs of zeros to one symbol.
    let n = signs.len();
    let mut symbols: Vec<i8> = Vec::with_capacity(n);
    let start = match signs.iter().position(|&s| s != 0) {
        Some(k) => k,
        None => return VertexClass::Degenerate,
    };
    let mut prev_zero = false;
    for k in 0..n {
        let s = signs[(start + k) % n];
        if s == 0 {
            if !prev_zero {
                symbols.push(0);
            }
            prev_zero = true;
        } else {
            symbols.push(s);
            prev_zero = false;
        }
    }
    // symbols starts with a nonzero sign, so no cyclic zero merge is needed.
    let m = symbols.len();
    let mut changes = 0usize;
    for k in 0..m {
        if symbols[k] != 0 {
            continue;
        }
        let before = symbols[(k + m - 1) % m];
        let after = symbols[(k + 1) % m];
        if before == after {
            return VertexClass::Degenerate;
        }
    }
    let nonzero: Vec<i8> = symbols.iter().copied().filter(|&s| s != 0).collect();
    for k in 0..nonzero.len() {
        if nonzero[k] != nonzero[(k + 1) % nonzero.len()] {
            changes += 1;
        }
    }
    debug_assert!(changes % 2 == 0);
    match changes {
        0 => {
            if nonzero[0] > 0 {
                VertexClass::Min
            } else {
                VertexClass::Max
            }
        }
        2 => VertexClass::Regular,
        c => VertexClass::Saddle(c / 2),
    }
}

/// Classifies a vertex of the mesh by its link sign changes.
pub fn classify_vertex(mesh: &Mesh, v: usize) -> VertexClass {
    let fv = mesh.value(v);
    let signs: Vec<i8> = mesh
        .link(v)
        .verts
        .iter()
        .map(|&u| {
            let d = mesh.value(u);
            if d > fv {
                1
            } else if d < fv {
                -1
            } else {
                0
            }
        })
        .collect();
    classify_signs(&signs)
}

/// Result of the Property (L) surrogate check.
#[derive(Clone, Debug)]
pub struct PropertyLReport {
    pub ok: bool,
    pub offending_vertices: Vec<usize>,
}

/// Checks that every vertex is Regular, Min, Max or Saddle(k).
pub fn check_property_l(mesh: &Mesh) -> PropertyLReport {
    let offending: Vec<usize> = (0..mesh.vertex_count())
        .filter(|&v| classify_vertex(mesh, v) == VertexClass::Degenerate)
        .collect();
    PropertyLReport {
        ok: offending.is_empty(),
        offending_vertices: offending,
    }
}

/// A cell of the level set `f^{-1}(t)`: a mesh vertex at value `t`, the
/// crossing point interior to an edge strictly spanning `t`, or a whole edge
/// with both endpoints at `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LevelCell {
    Vertex(usize),
    EdgeCross(usize),
    FlatEdge(usize),
}

/// One point of a regular level curve, in traversal order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Crossing {
    /// Interior point of a mesh edge; `t` is the interpolation parameter from
    /// the edge's lower-index endpoint, strictly inside (0, 1).
    Edge { edge: usize, t: f64 },
    /// The curve passes through a regular mesh vertex lying exactly at the
    /// queried level.
    Vertex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Regular,
    Critical,
}

/// A connected component of a level set.
#[derive(Clone, Debug)]
pub struct LevelComponent {
    pub level: f64,
    pub kind: ComponentKind,
    /// Member cells, sorted canonically.
    pub cells: Vec<LevelCell>,
    /// Closed traversal for regular components.
    pub cycle: Option<Vec<Crossing>>,
    /// Number of curve arcs crossing triangle interiors.
    pub arc_count: usize,
}

impl LevelComponent {
    /// Euler characteristic of the component as a graph: point cells minus
    /// one-dimensional cells (flat edges and triangle arcs).
    pub fn chi(&self) -> i64 {
        let points = self
            .cells
            .iter()
            .filter(|c| !matches!(c, LevelCell::FlatEdge(_)))
            .count() as i64;
        let flats = self
            .cells
            .iter()
            .filter(|c| matches!(c, LevelCell::FlatEdge(_)))
            .count() as i64;
        points - flats - self.arc_count as i64
    }
}

/// How a triangle meets the level `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum TriLevelHit {
    None,
    /// One corner at `t`, the other two on the same side.
    CornerTouch { v: usize },
    /// One corner at `t`, the other two straddling: an arc from the corner to
    /// the crossing on the opposite edge.
    CornerArc { v: usize, opposite_edge: usize },
    /// Two corners at `t`: the edge between them lies in the level set.
    FlatEdge { edge: usize },
    /// No corner at `t`, two edges strictly crossed by one arc.
    CrossArc { e1: usize, e2: usize },
}

pub(crate) fn triangle_level_hit(mesh: &Mesh, t_idx: usize, level: f64) -> TriLevelHit {
    let tri = mesh.triangle(t_idx);
    let at: Vec<usize> = tri.iter().copied().filter(|&v| mesh.value(v) == level).collect();
    match at.len() {
        0 => {
            let crossed: Vec<usize> = (0..3)
                .filter_map(|k| {
                    let (u, w) = (tri[k], tri[(k + 1) % 3]);
                    let (a, b) = (mesh.value(u), mesh.value(w));
                    if (a < level && level < b) || (b < level && level < a) {
                        mesh.edge_between(u, w)
                    } else {
                        None
                    }
                })
                .collect();
            match crossed.len() {
                0 => TriLevelHit::None,
                2 => TriLevelHit::CrossArc {
                    e1: crossed[0],
                    e2: crossed[1],
                },
                n => unreachable!("linear triangle crossed by {n} edges"),
            }
        }
        1 => {
            let v = at[0];
            let others: Vec<usize> = tri.iter().copied().filter(|&u| u != v).collect();
            let (a, b) = (mesh.value(others[0]), mesh.value(others[1]));
            if (a < level && level < b) || (b < level && level < a) {
                TriLevelHit::CornerArc {
                    v,
                    opposite_edge: mesh.edge_between(others[0], others[1]).expect("mesh edge"),
                }
            } else {
                TriLevelHit::CornerTouch { v }
            }
        }
        2 => TriLevelHit::FlatEdge {
            edge: mesh.edge_between(at[0], at[1]).expect("mesh edge"),
        },
        _ => unreachable!("flat triangles are rejected at construction"),
    }
}

pub(crate) struct LevelScan {
    pub components: Vec<LevelComponent>,
    /// Cell to index into `components`.
    pub component_of: HashMap<LevelCell, usize>,
}

/// Mesh cells whose closed value span contains a level: the only cells a
/// level scan has to look at.
#[derive(Clone, Debug, Default)]
pub(crate) struct LevelCandidates {
    pub verts: Vec<usize>,
    pub edges: Vec<usize>,
    pub tris: Vec<usize>,
}

pub(crate) fn full_candidates(mesh: &Mesh, level: f64) -> LevelCandidates {
    let verts = (0..mesh.vertex_count())
        .filter(|&v| mesh.value(v) == level)
        .collect();
    let edges = (0..mesh.edge_count())
        .filter(|&e| {
            let (u, w) = mesh.edge_endpoints(e);
            let (a, b) = (mesh.value(u), mesh.value(w));
            a.min(b) <= level && level <= a.max(b)
        })
        .collect();
    let tris = (0..mesh.triangle_count())
        .filter(|&t| {
            let (lo, hi) = mesh.triangle_span(t);
            lo <= level && level <= hi
        })
        .collect();
    LevelCandidates { verts, edges, tris }
}

pub(crate) fn level_scan(mesh: &Mesh, level: f64) -> LevelScan {
    level_scan_with(mesh, level, &full_candidates(mesh, level))
}

pub(crate) fn level_scan_with(
    mesh: &Mesh,
    level: f64,
    candidates: &LevelCandidates,
) -> LevelScan {
    // Collect cells in a canonical order: vertices ascending, then edge
    // cells ascending.
    let mut cand_verts = candidates.verts.clone();
    let mut cand_edges = candidates.edges.clone();
    let mut cand_tris = candidates.tris.clone();
    cand_verts.sort_unstable();
    cand_edges.sort_unstable();
    cand_tris.sort_unstable();
    let mut cells: Vec<LevelCell> = Vec::new();
    for &v in &cand_verts {
        debug_assert_eq!(mesh.value(v), level);
        cells.push(LevelCell::Vertex(v));
    }
    for &e in &cand_edges {
        let (u, w) = mesh.edge_endpoints(e);
        let (a, b) = (mesh.value(u), mesh.value(w));
        if a == level && b == level {
            cells.push(LevelCell::FlatEdge(e));
        } else if (a < level && level < b) || (b < level && level < a) {
            cells.push(LevelCell::EdgeCross(e));
        }
    }
    if cells.is_empty() {
        return LevelScan {
            components: Vec::new(),
            component_of: HashMap::new(),
        };
    }
    let slot: HashMap<LevelCell, usize> =
        cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut uf = UnionFind::new(cells.len());

    // Flat edges join their endpoints.
    for (k, cell) in cells.iter().enumerate() {
        if let LevelCell::FlatEdge(e) = cell {
            let (u, w) = mesh.edge_endpoints(*e);
            uf.union(k, slot[&LevelCell::Vertex(u)]);
            uf.union(k, slot[&LevelCell::Vertex(w)]);
        }
    }
    // Arcs through triangles join boundary cells; remember them for the
    // cycle walk and the arc count.
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for &t in &cand_tris {
        let (lo, hi) = mesh.triangle_span(t);
        if level < lo || level > hi {
            continue;
        }
        match triangle_level_hit(mesh, t, level) {
            TriLevelHit::CrossArc { e1, e2 } => {
                let (a, b) = (slot[&LevelCell::EdgeCross(e1)], slot[&LevelCell::EdgeCross(e2)]);
                uf.union(a, b);
                arcs.push((a, b));
            }
            TriLevelHit::CornerArc { v, opposite_edge } => {
                let (a, b) = (
                    slot[&LevelCell::Vertex(v)],
                    slot[&LevelCell::EdgeCross(opposite_edge)],
                );
                uf.union(a, b);
                arcs.push((a, b));
            }
            _ => {}
        }
    }

    // Gather components, canonically ordered by smallest member cell.
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for k in 0..cells.len() {
        groups.entry(uf.find(k)).or_default().push(k);
    }
    let mut roots: Vec<usize> = groups.keys().copied().collect();
    roots.sort_by_key(|r| groups[r].iter().min().copied());
    let root_index: HashMap<usize, usize> =
        roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();

    let mut arc_counts = vec![0usize; roots.len()];
    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in &arcs {
        arc_counts[root_index[&uf.find(a)]] += 1;
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }

    let mut components = Vec::with_capacity(roots.len());
    let mut component_of = HashMap::new();
    for (ci, &root) in roots.iter().enumerate() {
        let mut members = groups[&root].clone();
        members.sort();
        let comp_cells: Vec<LevelCell> = members.iter().map(|&k| cells[k]).collect();
        for &c in &comp_cells {
            component_of.insert(c, ci);
        }
        let critical = comp_cells.iter().any(|c| match c {
            LevelCell::Vertex(v) => classify_vertex(mesh, *v) != VertexClass::Regular,
            _ => false,
        });
        let kind = if critical {
            ComponentKind::Critical
        } else {
            ComponentKind::Regular
        };
        let cycle = if kind == ComponentKind::Regular {
            Some(walk_regular_cycle(mesh, level, &cells, &members, &adjacency))
        } else {
            None
        };
        components.push(LevelComponent {
            level,
            kind,
            cells: comp_cells,
            cycle,
            arc_count: arc_counts[ci],
        });
    }
    LevelScan {
        components,
        component_of,
    }
}

fn walk_regular_cycle(
    mesh: &Mesh,
    level: f64,
    cells: &[LevelCell],
    members: &[usize],
    adjacency: &HashMap<usize, Vec<usize>>,
) -> Vec<Crossing> {
    // In a regular component every point cell has exactly two incident
    // connectors (arcs, or flat edges at a through-vertex); walk them.
    let mut neighbors: HashMap<usize, Vec<usize>> = HashMap::new();
    for &k in members {
        let mut nb = adjacency.get(&k).cloned().unwrap_or_default();
        if let LevelCell::FlatEdge(e) = cells[k] {
            let (u, w) = mesh.edge_endpoints(e);
            // Flat edge connectors: splice the edge between its endpoints.
            let su = members
                .iter()
                .copied()
                .find(|&m| cells[m] == LevelCell::Vertex(u))
                .expect("flat edge endpoint in component");
            let sw = members
                .iter()
                .copied()
                .find(|&m| cells[m] == LevelCell::Vertex(w))
                .expect("flat edge endpoint in component");
            nb = vec![su, sw];
            neighbors.entry(su).or_default().push(k);
            neighbors.entry(sw).or_default().push(k);
        }
        neighbors.entry(k).or_default().extend(nb);
    }
    let start = *members.iter().min().expect("nonempty component");
    let mut out = Vec::new();
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        match cells[cur] {
            LevelCell::Vertex(v) => out.push(Crossing::Vertex(v)),
            LevelCell::EdgeCross(e) => {
                let (u, w) = mesh.edge_endpoints(e);
                let (a, b) = (mesh.value(u), mesh.value(w));
                out.push(Crossing::Edge {
                    edge: e,
                    t: (level - a) / (b - a),
                });
            }
            LevelCell::FlatEdge(_) => {}
        }
        let nb = &neighbors[&cur];
        debug_assert_eq!(nb.len(), 2, "regular component cell has two connectors");
        let next = if nb[0] != prev { nb[0] } else { nb[1] };
        prev = cur;
        cur = next;
        if cur == start {
            break;
        }
    }
    out
}

/// Connected components of `f^{-1}(t)`, canonically ordered.
///
/// A level outside the value range yields an empty list.
pub fn level_components(mesh: &Mesh, t: f64) -> Vec<LevelComponent> {
    level_scan(mesh, t).components
}
