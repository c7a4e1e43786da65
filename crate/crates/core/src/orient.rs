//! Orientation of tree Reeb graphs on the torus by the disk-side rule.
//!
//! For an edge of a tree Reeb graph, any regular level in its interval cuts
//! the torus along a simple closed curve into two compact subsurfaces, and
//! exactly one of them is a disk. The edge is oriented away from its disk
//! side. Under Property (L) every vertex then has out-degree at most one and
//! the tree has a unique sink, the vertex whose complement is a disjoint
//! union of open disks.
//!
//! Euler characteristics are computed from clipped cell complexes: crossing
//! points become vertices, curve arcs become edges, clipped triangles stay
//! single faces.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::contour::{level_scan, triangle_level_hit, ComponentKind, LevelCell, TriLevelHit};
use crate::reeb::{EdgeId, ReebGraph, VertexId};
use crate::surface::Mesh;
use crate::unionfind::UnionFind;

#[derive(Debug, Error)]
pub enum OrientError {
    #[error("Reeb graph is not a tree")]
    NotATree,
    #[error("mesh is not a torus (genus {0})")]
    NotATorus(u32),
    #[error("graph has no mesh projection")]
    NotMeshBacked,
    #[error("vertex {0} has out-degree {1} > 1")]
    OutDegreeViolation(usize, usize),
    #[error("oriented tree has no sink")]
    NoSink,
    #[error("oriented tree has {0} sinks")]
    MultipleSinks(usize),
    #[error("edge {0}: splitting did not yield exactly one disk side")]
    DiskSideViolation(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// One side of the torus cut along a regular level curve.
#[derive(Clone, Debug)]
pub struct SideSurface {
    /// Triangles lying entirely on this side.
    pub full_triangles: Vec<usize>,
    /// Triangles crossed by the curve; their clipped polygon belongs to this
    /// side (the same triangles appear on the other side too).
    pub clipped_triangles: Vec<usize>,
    pub connected: bool,
    pub euler_characteristic: i64,
    pub boundary_circles: usize,
}

impl SideSurface {
    pub fn is_disk(&self) -> bool {
        self.connected && self.euler_characteristic == 1 && self.boundary_circles == 1
    }
}

/// Lower and upper raw levels of an edge, independent of snapping.
fn raw_interval(graph: &ReebGraph, e: EdgeId) -> (f64, f64) {
    let edge = graph.edge(e);
    (
        graph.vertex(edge.ends[0]).raw_level,
        graph.vertex(edge.ends[1]).raw_level,
    )
}

/// Picks a cut level in the open interval of the edge avoiding every mesh
/// vertex value, preferring the value gap around the interval midpoint.
fn choose_cut_level(mesh: &Mesh, graph: &ReebGraph, e: EdgeId) -> Result<f64, OrientError> {
    let (lo, hi) = raw_interval(graph, e);
    let mut bounds: Vec<f64> = mesh
        .values()
        .iter()
        .copied()
        .filter(|&x| lo < x && x < hi)
        .collect();
    bounds.push(lo);
    bounds.push(hi);
    bounds.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    bounds.dedup();
    let mid = 0.5 * (lo + hi);
    let pos = bounds.partition_point(|&x| x < mid).clamp(1, bounds.len() - 1);
    let candidate_gaps =
        std::iter::once(pos - 1).chain((0..bounds.len() - 1).filter(|&g| g != pos - 1));
    for g in candidate_gaps {
        let z = 0.5 * (bounds[g] + bounds[g + 1]);
        if bounds[g] < z && z < bounds[g + 1] {
            return Ok(z);
        }
    }
    Err(OrientError::Internal(format!(
        "no regular level available in ({lo}, {hi})"
    )))
}

/// Splits the torus along a regular level curve of the given edge, at an
/// automatically chosen level. Returns the sides containing the lower and
/// the upper endpoint, in that order.
pub fn split_sides(
    mesh: &Mesh,
    graph: &ReebGraph,
    e: EdgeId,
) -> Result<(SideSurface, SideSurface), OrientError> {
    let z = choose_cut_level(mesh, graph, e)?;
    split_sides_at_level(mesh, graph, e, z)
}

/// Splits at an explicit regular level `z` strictly inside the edge interval
/// and distinct from every mesh vertex value.
pub fn split_sides_at_level(
    mesh: &Mesh,
    graph: &ReebGraph,
    e: EdgeId,
    z: f64,
) -> Result<(SideSurface, SideSurface), OrientError> {
    if !graph.is_mesh_backed() {
        return Err(OrientError::NotMeshBacked);
    }
    let stats = mesh.stats();
    if !stats.is_torus {
        return Err(OrientError::NotATorus(stats.genus));
    }
    if !graph.is_tree() {
        return Err(OrientError::NotATree);
    }
    let (lo, hi) = raw_interval(graph, e);
    if !(lo < z && z < hi) || mesh.values().contains(&z) {
        return Err(OrientError::Internal(format!(
            "cut level {z} is not regular inside ({lo}, {hi})"
        )));
    }

    // The curve: the unique component at level z whose cells lie over e.
    let scan = level_scan(mesh, z);
    let mut curve = None;
    for comp in &scan.components {
        debug_assert_eq!(comp.kind, ComponentKind::Regular);
        let cell = comp.cells.first().copied().expect("nonempty component");
        let me = match cell {
            LevelCell::EdgeCross(me) => me,
            _ => unreachable!("z avoids vertex values"),
        };
        let t = mesh.edge_triangles(me).0;
        if graph.band_edge(t, z) == e {
            if curve.is_some() {
                return Err(OrientError::Internal(
                    "several level components over one edge".into(),
                ));
            }
            curve = Some(comp);
        }
    }
    let curve = curve
        .ok_or_else(|| OrientError::Internal("no level component over the edge".into()))?;
    let curve_cells: HashSet<LevelCell> = curve.cells.iter().copied().collect();

    // Cut triangles: both neighbors of every crossed mesh edge.
    let mut cut: HashSet<usize> = HashSet::new();
    for cell in &curve.cells {
        if let LevelCell::EdgeCross(me) = cell {
            let (t1, t2) = mesh.edge_triangles(*me);
            cut.insert(t1);
            cut.insert(t2);
        }
    }
    let crossings = curve.cells.len();
    debug_assert_eq!(cut.len(), crossings, "the curve alternates edges and triangles");

    // Pieces: below/above for cut triangles, whole otherwise.
    let nt = mesh.triangle_count();
    let mut uf = UnionFind::new(2 * nt);
    let piece_touching = |t: usize, me: usize| -> usize {
        if !cut.contains(&t) {
            return 2 * t;
        }
        let (u, w) = mesh.edge_endpoints(me);
        let x = if mesh.value(u) != z { mesh.value(u) } else { mesh.value(w) };
        if x > z {
            2 * t + 1
        } else {
            2 * t
        }
    };
    for me in 0..mesh.edge_count() {
        let (t1, t2) = mesh.edge_triangles(me);
        if curve_cells.contains(&LevelCell::EdgeCross(me)) {
            uf.union(2 * t1, 2 * t2);
            uf.union(2 * t1 + 1, 2 * t2 + 1);
        } else {
            uf.union(piece_touching(t1, me), piece_touching(t2, me));
        }
    }

    // Exactly two sides.
    let mut piece_slots: Vec<usize> = Vec::with_capacity(nt + crossings);
    for t in 0..nt {
        piece_slots.push(2 * t);
        if cut.contains(&t) {
            piece_slots.push(2 * t + 1);
        }
    }
    let mut roots: Vec<usize> = piece_slots.iter().map(|&s| uf.find(s)).collect();
    roots.sort();
    roots.dedup();
    if roots.len() != 2 {
        return Err(OrientError::Internal(format!(
            "curve split the torus into {} pieces",
            roots.len()
        )));
    }
    let some_cut = *cut.iter().min().expect("curve crosses triangles");
    let lower_root = uf.find(2 * some_cut);
    let upper_root = uf.find(2 * some_cut + 1);
    if lower_root == upper_root {
        return Err(OrientError::Internal("curve does not separate".into()));
    }

    // Count cells per side.
    let mut v_in = [0i64; 2];
    let mut e_in = [0i64; 2];
    let mut f_full = [0i64; 2];
    let mut full = [Vec::new(), Vec::new()];
    let side_of = |root: usize| -> usize {
        if root == lower_root {
            0
        } else {
            1
        }
    };
    for t in 0..nt {
        if !cut.contains(&t) {
            let s = side_of(uf.find(2 * t));
            f_full[s] += 1;
            full[s].push(t);
        }
    }
    for v in 0..mesh.vertex_count() {
        let t = mesh.link(v).tris[0];
        let slot = if cut.contains(&t) {
            if mesh.value(v) > z {
                2 * t + 1
            } else {
                2 * t
            }
        } else {
            2 * t
        };
        v_in[side_of(uf.find(slot))] += 1;
    }
    for me in 0..mesh.edge_count() {
        if curve_cells.contains(&LevelCell::EdgeCross(me)) {
            e_in[0] += 1;
            e_in[1] += 1;
        } else {
            let (t1, _) = mesh.edge_triangles(me);
            e_in[side_of(uf.find(piece_touching(t1, me)))] += 1;
        }
    }
    let arcs = cut.len() as i64;
    let cross = crossings as i64;
    let mut clipped: Vec<usize> = cut.iter().copied().collect();
    clipped.sort();
    // Cells per side: mesh vertices plus one crossing-point copy each;
    // uncrossed edges, one subsegment per crossed edge (already in e_in) and
    // one boundary arc per clipped triangle; full triangles plus one clipped
    // polygon per cut triangle.
    let make_side = |s: usize, full: Vec<usize>| SideSurface {
        full_triangles: full,
        clipped_triangles: clipped.clone(),
        connected: true,
        euler_characteristic: (v_in[s] + cross) - (e_in[s] + arcs) + (f_full[s] + arcs),
        boundary_circles: 1,
    };
    let [full0, full1] = full;
    let lower = make_side(0, full0);
    let upper = make_side(1, full1);
    debug_assert_eq!(
        lower.euler_characteristic + upper.euler_characteristic,
        0,
        "chi is additive when cutting the torus along a circle"
    );
    Ok((lower, upper))
}

/// Euler characteristic of a side computed from the Reeb subtree: the sum of
/// the component characteristics of the critical components on the side of
/// `toward` after removing the edge. The cheap cross-check for the clipping
/// route.
pub fn subtree_chi(graph: &ReebGraph, e: EdgeId, toward: VertexId) -> i64 {
    let mut seen = vec![false; graph.vertex_count()];
    let mut stack = vec![toward];
    seen[toward.0] = true;
    while let Some(v) = stack.pop() {
        for edge in graph.edges() {
            if edge.id == e || !edge.ends.contains(&v) {
                continue;
            }
            let other = if edge.ends[0] == v { edge.ends[1] } else { edge.ends[0] };
            if !seen[other.0] {
                seen[other.0] = true;
                stack.push(other);
            }
        }
    }
    graph
        .vertices()
        .iter()
        .filter(|v| seen[v.id.0])
        .map(|v| v.component.chi())
        .sum()
}

/// A tree Reeb graph with every edge directed away from its disk side.
#[derive(Clone, Debug)]
pub struct OrientedReebTree {
    graph: ReebGraph,
    /// Per edge id: (from, to).
    directions: Vec<(VertexId, VertexId)>,
    sink: VertexId,
}

impl OrientedReebTree {
    /// Wraps an existing tree with explicit directions, validating the
    /// out-degree bound and sink uniqueness. `toward_upper[e]` directs edge
    /// `e` toward its upper endpoint.
    pub fn from_parts(graph: ReebGraph, toward_upper: Vec<bool>) -> Result<Self, OrientError> {
        if !graph.is_tree() {
            return Err(OrientError::NotATree);
        }
        if toward_upper.len() != graph.edge_count() {
            return Err(OrientError::Internal("direction per edge required".into()));
        }
        let directions: Vec<(VertexId, VertexId)> = graph
            .edges()
            .iter()
            .zip(&toward_upper)
            .map(|(e, &up)| {
                if up {
                    (e.ends[0], e.ends[1])
                } else {
                    (e.ends[1], e.ends[0])
                }
            })
            .collect();
        let sink = validate_orientation(&graph, &directions)?;
        Ok(OrientedReebTree {
            graph,
            directions,
            sink,
        })
    }

    pub fn graph(&self) -> &ReebGraph {
        &self.graph
    }

    /// Direction of an edge as (from, to).
    pub fn direction(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.directions[e.0]
    }

    /// The unique vertex with out-degree zero; its in-degree equals its
    /// degree.
    pub fn sink(&self) -> VertexId {
        self.sink
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.directions.iter().filter(|&&(from, _)| from == v).count()
    }

    /// DOT rendering of the directed tree; the sink gets a doubled border.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph reeb {\n");
        for v in self.graph.vertices() {
            let extra = if v.id == self.sink { ", peripheries=2" } else { "" };
            let _ = writeln!(
                s,
                "  v{} [label=\"v{} level={}\"{extra}];",
                v.id.0, v.id.0, v.level
            );
        }
        for e in self.graph.edges() {
            let (from, to) = self.directions[e.id.0];
            let _ = writeln!(s, "  v{} -> v{};", from.0, to.0);
        }
        s.push_str("}\n");
        s
    }
}

fn validate_orientation(
    graph: &ReebGraph,
    directions: &[(VertexId, VertexId)],
) -> Result<VertexId, OrientError> {
    let mut out = vec![0usize; graph.vertex_count()];
    for &(from, _) in directions {
        out[from.0] += 1;
    }
    if let Some((v, &d)) = out.iter().enumerate().find(|&(_, &d)| d > 1) {
        return Err(OrientError::OutDegreeViolation(v, d));
    }
    let sinks: Vec<usize> = (0..graph.vertex_count()).filter(|&v| out[v] == 0).collect();
    match sinks.len() {
        0 => Err(OrientError::NoSink),
        1 => Ok(VertexId(sinks[0])),
        n => Err(OrientError::MultipleSinks(n)),
    }
}

/// Orients every edge of a tree Reeb graph on the torus away from its disk
/// side and verifies out-degrees and sink uniqueness.
pub fn orient_tree(mesh: &Mesh, graph: &ReebGraph) -> Result<OrientedReebTree, OrientError> {
    let stats = mesh.stats();
    if !stats.is_torus {
        return Err(OrientError::NotATorus(stats.genus));
    }
    if !graph.is_tree() {
        return Err(OrientError::NotATree);
    }
    let mut directions = Vec::with_capacity(graph.edge_count());
    for e in graph.edges() {
        let (lower, upper) = split_sides(mesh, graph, e.id)?;
        let dir = match (lower.is_disk(), upper.is_disk()) {
            (true, false) => (e.ends[0], e.ends[1]),
            (false, true) => (e.ends[1], e.ends[0]),
            _ => return Err(OrientError::DiskSideViolation(e.id.0)),
        };
        directions.push(dir);
    }
    let sink = validate_orientation(graph, &directions)?;
    Ok(OrientedReebTree {
        graph: graph.clone(),
        directions,
        sink,
    })
}

/// One connected component of the mesh minus a critical component, seen as a
/// compact surface after cutting: copies of the removed cells become its
/// boundary.
#[derive(Clone, Debug)]
pub struct ComplementComponent {
    pub euler_characteristic: i64,
    pub boundary_circles: usize,
    /// Isolated boundary points: the component closes off at a single vertex
    /// (only possible when the removed component is one point).
    pub cone_points: usize,
}

impl ComplementComponent {
    /// Connected by construction; chi 1 with one boundary circle pins a disk.
    pub fn is_disk(&self) -> bool {
        self.euler_characteristic == 1 && self.boundary_circles == 1 && self.cone_points == 0
    }
}

/// Fan decomposition of the link of a vertex of the removed component: runs
/// of link slots between spokes (level arcs and flat level edges at the
/// vertex).
struct Fans {
    count: usize,
    /// Fan of each link vertex slot, `usize::MAX` on spokes.
    of_vert: Vec<usize>,
    /// Fan of each link triangle slot, `usize::MAX` on spokes.
    of_tri: Vec<usize>,
    /// Representative piece slot of each fan.
    piece: Vec<usize>,
}

/// Components of the mesh minus the critical component of the Reeb vertex
/// `v`, with their clipped-complex Euler characteristics and boundary
/// circle counts.
pub fn complement_components(
    mesh: &Mesh,
    graph: &ReebGraph,
    v: VertexId,
) -> Result<Vec<ComplementComponent>, OrientError> {
    if !graph.is_mesh_backed() {
        return Err(OrientError::NotMeshBacked);
    }
    let comp = &graph.vertex(v).component;
    let tv = graph.vertex(v).raw_level;
    let cells: HashSet<LevelCell> = comp.cells.iter().copied().collect();

    // Cut classification per triangle.
    #[derive(Clone, Copy, PartialEq)]
    enum Cut {
        No,
        Cross { e1: usize, e2: usize },
        Corner { v0: usize, opposite: usize },
    }
    let nt = mesh.triangle_count();
    let mut cut = vec![Cut::No; nt];
    for t in 0..nt {
        let (lo, hi) = mesh.triangle_span(t);
        if tv < lo || tv > hi {
            continue;
        }
        match triangle_level_hit(mesh, t, tv) {
            TriLevelHit::CrossArc { e1, e2 } => {
                if cells.contains(&LevelCell::EdgeCross(e1)) {
                    cut[t] = Cut::Cross { e1, e2 };
                }
            }
            TriLevelHit::CornerArc { v: v0, opposite_edge } => {
                if cells.contains(&LevelCell::Vertex(v0)) {
                    cut[t] = Cut::Corner {
                        v0,
                        opposite: opposite_edge,
                    };
                }
            }
            _ => {}
        }
    }
    let is_cut = |t: usize| !matches!(cut[t], Cut::No);

    // Union-find over piece slots: 2t below, 2t+1 above for cut triangles.
    let mut uf = UnionFind::new(2 * nt);
    let piece_touching = |t: usize, me: usize| -> usize {
        if !is_cut(t) {
            return 2 * t;
        }
        let (u, w) = mesh.edge_endpoints(me);
        let x = if mesh.value(u) != tv { mesh.value(u) } else { mesh.value(w) };
        if x > tv {
            2 * t + 1
        } else {
            2 * t
        }
    };
    for me in 0..mesh.edge_count() {
        let (t1, t2) = mesh.edge_triangles(me);
        if cells.contains(&LevelCell::FlatEdge(me)) {
            continue; // removed; triangles detach across it
        }
        if cells.contains(&LevelCell::EdgeCross(me)) {
            uf.union(2 * t1, 2 * t2);
            uf.union(2 * t1 + 1, 2 * t2 + 1);
        } else {
            uf.union(piece_touching(t1, me), piece_touching(t2, me));
        }
    }

    // Component indexing over existing piece slots, by smallest slot.
    let mut slot_list: Vec<usize> = Vec::new();
    for t in 0..nt {
        slot_list.push(2 * t);
        if is_cut(t) {
            slot_list.push(2 * t + 1);
        }
    }
    let mut index_of_root: HashMap<usize, usize> = HashMap::new();
    for &s in &slot_list {
        let r = uf.find(s);
        let next = index_of_root.len();
        index_of_root.entry(r).or_insert(next);
    }
    let ncomp = index_of_root.len();
    let comp_of_slot = |uf: &mut UnionFind, s: usize, index_of_root: &HashMap<usize, usize>| {
        index_of_root[&uf.find(s)]
    };

    // Fan decompositions at the removed component's vertices.
    let mut fans: HashMap<usize, Fans> = HashMap::new();
    for cell in &comp.cells {
        let v0 = match cell {
            LevelCell::Vertex(v0) => *v0,
            _ => continue,
        };
        let link = mesh.link(v0);
        let len = link.verts.len();
        let vert_spoke: Vec<bool> = link.verts.iter().map(|&u| mesh.value(u) == tv).collect();
        let tri_spoke: Vec<bool> = link
            .tris
            .iter()
            .map(|&t| matches!(cut[t], Cut::Corner { v0: w, .. } if w == v0))
            .collect();
        // Slots alternate vertex, triangle; spokes are never adjacent.
        let slots = 2 * len;
        let spoke = |slot: usize| {
            if slot % 2 == 0 {
                vert_spoke[slot / 2]
            } else {
                tri_spoke[slot / 2]
            }
        };
        let mut of_vert = vec![usize::MAX; len];
        let mut of_tri = vec![usize::MAX; len];
        let mut count = 0usize;
        let first_spoke = (0..slots).find(|&s| spoke(s));
        match first_spoke {
            None => {
                count = 1;
                of_vert.iter_mut().for_each(|x| *x = 0);
                of_tri.iter_mut().for_each(|x| *x = 0);
            }
            Some(start) => {
                let mut fan = usize::MAX;
                for k in 1..=slots {
                    let slot = (start + k) % slots;
                    if spoke(slot) {
                        fan = usize::MAX;
                        continue;
                    }
                    if fan == usize::MAX {
                        fan = count;
                        count += 1;
                    }
                    if slot % 2 == 0 {
                        of_vert[slot / 2] = fan;
                    } else {
                        of_tri[slot / 2] = fan;
                    }
                }
            }
        }
        // Representative piece per fan: an uncut triangle slot if any, else
        // the sliver of a spoke triangle on the side of a member link vertex.
        let mut piece = vec![usize::MAX; count];
        for k in 0..len {
            let f = of_tri[k];
            if f != usize::MAX && !is_cut(link.tris[k]) {
                piece[f] = 2 * link.tris[k];
            }
        }
        for k in 0..len {
            let f = of_vert[k];
            if f == usize::MAX || piece[f] != usize::MAX {
                continue;
            }
            // Both neighbor triangle slots are spokes; use the sliver side.
            let t = link.tris[k];
            debug_assert!(is_cut(t));
            let side = if mesh.value(link.verts[k]) > tv { 1 } else { 0 };
            piece[f] = 2 * t + side;
        }
        debug_assert!(piece.iter().all(|&p| p != usize::MAX));
        fans.insert(
            v0,
            Fans {
                count,
                of_vert,
                of_tri,
                piece,
            },
        );
    }

    // Cell counts per complement component.
    let mut v_count = vec![0i64; ncomp];
    let mut e_count = vec![0i64; ncomp];
    let mut f_count = vec![0i64; ncomp];

    for t in 0..nt {
        if is_cut(t) {
            f_count[comp_of_slot(&mut uf, 2 * t, &index_of_root)] += 1;
            f_count[comp_of_slot(&mut uf, 2 * t + 1, &index_of_root)] += 1;
        } else {
            f_count[comp_of_slot(&mut uf, 2 * t, &index_of_root)] += 1;
        }
    }
    for vtx in 0..mesh.vertex_count() {
        if cells.contains(&LevelCell::Vertex(vtx)) {
            continue;
        }
        let t = mesh.link(vtx).tris[0];
        let slot = if is_cut(t) {
            if mesh.value(vtx) > tv {
                2 * t + 1
            } else {
                2 * t
            }
        } else {
            2 * t
        };
        v_count[comp_of_slot(&mut uf, slot, &index_of_root)] += 1;
    }
    for me in 0..mesh.edge_count() {
        if cells.contains(&LevelCell::FlatEdge(me)) {
            continue;
        }
        let (t1, _) = mesh.edge_triangles(me);
        if cells.contains(&LevelCell::EdgeCross(me)) {
            e_count[comp_of_slot(&mut uf, 2 * t1, &index_of_root)] += 1;
            e_count[comp_of_slot(&mut uf, 2 * t1 + 1, &index_of_root)] += 1;
        } else {
            e_count[comp_of_slot(&mut uf, piece_touching(t1, me), &index_of_root)] += 1;
        }
    }

    // Boundary copies. Vertex copies: fans and crossing sides; edge copies:
    // arcs per side and flat edges per adjacent triangle. Each edge copy
    // yields a segment of the boundary; walking them counts circles.
    #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
    enum CopyNode {
        Fan(usize, usize),
        CrossSide(usize, bool),
    }
    let mut copy_slot: HashMap<CopyNode, usize> = HashMap::new();
    let mut copy_comp: Vec<usize> = Vec::new();
    let mut copy_degree: Vec<usize> = Vec::new();
    let mut boundary_edges: Vec<(usize, usize, usize)> = Vec::new(); // (copy, copy, comp)

    // Register all fan copies (also the degree-zero cone fans).
    let mut fan_keys: Vec<usize> = fans.keys().copied().collect();
    fan_keys.sort();
    for &v0 in &fan_keys {
        let f = &fans[&v0];
        for fan in 0..f.count {
            let comp_idx = comp_of_slot(&mut uf, f.piece[fan], &index_of_root);
            copy_slot.insert(CopyNode::Fan(v0, fan), copy_comp.len());
            copy_comp.push(comp_idx);
            copy_degree.push(0);
        }
    }
    for cell in &comp.cells {
        if let LevelCell::EdgeCross(me) = cell {
            let (t1, _) = mesh.edge_triangles(*me);
            for (above, slot) in [(false, 2 * t1), (true, 2 * t1 + 1)] {
                let comp_idx = comp_of_slot(&mut uf, slot, &index_of_root);
                copy_slot.insert(CopyNode::CrossSide(*me, above), copy_comp.len());
                copy_comp.push(comp_idx);
                copy_degree.push(0);
            }
        }
    }
    let fan_of_arc_end = |t: usize, v0: usize, above: bool| -> CopyNode {
        let f = &fans[&v0];
        let link = mesh.link(v0);
        let k = link.tris.iter().position(|&x| x == t).expect("triangle in link");
        let ua = link.verts[k];
        let pick = |u: usize| (mesh.value(u) > tv) == above;
        let u_slot = if pick(ua) { k } else { (k + 1) % link.verts.len() };
        debug_assert!(pick(link.verts[u_slot]));
        CopyNode::Fan(v0, f.of_vert[u_slot])
    };
    for t in 0..nt {
        match cut[t] {
            Cut::No => {}
            Cut::Cross { e1, e2 } => {
                for above in [false, true] {
                    let a = copy_slot[&CopyNode::CrossSide(e1, above)];
                    let b = copy_slot[&CopyNode::CrossSide(e2, above)];
                    let comp_idx = comp_of_slot(&mut uf, 2 * t + above as usize, &index_of_root);
                    boundary_edges.push((a, b, comp_idx));
                }
            }
            Cut::Corner { v0, opposite } => {
                for above in [false, true] {
                    let a = copy_slot[&CopyNode::CrossSide(opposite, above)];
                    let b = copy_slot[&fan_of_arc_end(t, v0, above)];
                    let comp_idx = comp_of_slot(&mut uf, 2 * t + above as usize, &index_of_root);
                    boundary_edges.push((a, b, comp_idx));
                }
            }
        }
    }
    for cell in &comp.cells {
        if let LevelCell::FlatEdge(me) = cell {
            let (p, q) = mesh.edge_endpoints(*me);
            let (t1, t2) = mesh.edge_triangles(*me);
            for t in [t1, t2] {
                let fan_at = |v0: usize| -> CopyNode {
                    let f = &fans[&v0];
                    let link = mesh.link(v0);
                    let k = link.tris.iter().position(|&x| x == t).expect("tri in link");
                    CopyNode::Fan(v0, f.of_tri[k])
                };
                let a = copy_slot[&fan_at(p)];
                let b = copy_slot[&fan_at(q)];
                let comp_idx = comp_of_slot(&mut uf, 2 * t, &index_of_root);
                boundary_edges.push((a, b, comp_idx));
            }
        }
    }

    // chi per component: interior cells plus boundary copies.
    let mut fan_copies = vec![0i64; ncomp];
    let mut cross_copies = vec![0i64; ncomp];
    for (node, &slot) in &copy_slot {
        match node {
            CopyNode::Fan(..) => fan_copies[copy_comp[slot]] += 1,
            CopyNode::CrossSide(..) => cross_copies[copy_comp[slot]] += 1,
        }
    }
    let mut boundary_edge_count = vec![0i64; ncomp];
    for &(a, b, comp_idx) in &boundary_edges {
        copy_degree[a] += 1;
        copy_degree[b] += 1;
        boundary_edge_count[comp_idx] += 1;
    }
    debug_assert!(copy_degree.iter().all(|&d| d == 0 || d == 2));

    // Boundary circles: connected components of the copy graph.
    let mut buf = UnionFind::new(copy_comp.len());
    for &(a, b, _) in &boundary_edges {
        buf.union(a, b);
    }
    let mut circle_roots: HashSet<(usize, usize)> = HashSet::new();
    let mut cone_points = vec![0usize; ncomp];
    for slot in 0..copy_comp.len() {
        if copy_degree[slot] == 0 {
            cone_points[copy_comp[slot]] += 1;
        } else {
            circle_roots.insert((copy_comp[slot], buf.find(slot)));
        }
    }
    let mut circles = vec![0usize; ncomp];
    for &(comp_idx, _) in &circle_roots {
        circles[comp_idx] += 1;
    }

    let mut out = Vec::with_capacity(ncomp);
    for k in 0..ncomp {
        out.push(ComplementComponent {
            euler_characteristic: (v_count[k] + fan_copies[k] + cross_copies[k])
                - (e_count[k] + boundary_edge_count[k])
                + f_count[k],
            boundary_circles: circles[k],
            cone_points: cone_points[k],
        });
    }
    Ok(out)
}

/// True exactly when every component of the mesh minus the critical
/// component of `v` is a disk. For the sink of an oriented tree on the torus
/// this holds; for every other vertex it fails.
pub fn check_sink_complement(mesh: &Mesh, graph: &ReebGraph, v: VertexId) -> bool {
    match complement_components(mesh, graph, v) {
        Ok(comps) => comps.iter().all(|c| c.is_disk()),
        Err(_) => false,
    }
}
