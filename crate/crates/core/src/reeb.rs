//! The Kronrod-Reeb graph of a piecewise-linear field.
//!
//! Vertices are the critical components of level sets; edges are the
//! connected components of the mesh minus all critical components, each an
//! open annulus swept by regular level circles. Construction cuts every
//! triangle into bands at the levels where a critical component crosses it
//! and merges bands with union-find across shared edges; the surviving
//! regions are exactly the edges, and the critical components they attach to
//! below and above are the endpoints.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::contour::{
    check_property_l, classify_vertex, level_scan_with, ComponentKind, LevelCandidates,
    LevelCell, LevelComponent, TriLevelHit, VertexClass,
};
use crate::surface::Mesh;
use crate::unionfind::UnionFind;

#[derive(Debug, Error)]
pub enum ReebError {
    #[error("Property (L) violated at {} vertices (first: {:?})",
            offending.len(), offending.first())]
    PropertyLViolated { offending: Vec<usize> },
    #[error("unknown mesh cell")]
    UnknownCell,
    #[error("graph has no mesh projection")]
    NotMeshBacked,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("level tolerance {tol} would merge the endpoints of edge {edge}")]
    DegenerateTolerance { tol: f64, edge: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// A vertex of the Reeb graph: one critical level component.
#[derive(Clone, Debug)]
pub struct ReebVertex {
    pub id: VertexId,
    /// Level after optional tolerance snapping; equals `raw_level` by default.
    pub level: f64,
    /// Exact stored critical value.
    pub raw_level: f64,
    /// The critical component; empty cells on synthetic graphs.
    pub component: LevelComponent,
}

/// An edge of the Reeb graph: a family of regular level components.
#[derive(Clone, Debug)]
pub struct ReebEdge {
    pub id: EdgeId,
    /// Endpoints ordered `[lower, upper]` by level.
    pub ends: [VertexId; 2],
    /// Open level interval `(lower level, upper level)`.
    pub interval: (f64, f64),
}

/// A point of the Reeb graph: a vertex, or a point interior to an edge with
/// its normalized parameter in (0, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReebPoint {
    Vertex(VertexId),
    EdgePoint { edge: EdgeId, t: f64 },
}

/// A cell of the mesh that can be projected to the Reeb graph.
#[derive(Clone, Copy, Debug)]
pub enum MeshCell {
    Vertex(usize),
    Triangle(usize),
}

#[derive(Clone, Debug)]
pub struct ReebGraph {
    vertices: Vec<ReebVertex>,
    edges: Vec<ReebEdge>,
    /// Projection per mesh triangle; empty on synthetic graphs.
    tri_proj: Vec<ReebPoint>,
    /// Projection per mesh vertex; empty on synthetic graphs.
    vert_proj: Vec<ReebPoint>,
    /// Ascending cut levels per triangle with the cutting Reeb vertex.
    tri_cuts: Vec<Vec<(f64, VertexId)>>,
    /// Edge of the region each band of each triangle belongs to;
    /// `band_edges[t].len() == tri_cuts[t].len() + 1`.
    band_edges: Vec<Vec<EdgeId>>,
}

impl ReebGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[ReebVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[ReebEdge] {
        &self.edges
    }

    pub fn vertex(&self, v: VertexId) -> &ReebVertex {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &ReebEdge {
        &self.edges[e.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.ends.contains(&v)).count()
    }

    pub fn edges_at(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| e.ends.contains(&v))
            .map(|e| e.id)
            .collect()
    }

    /// First Betti number `E - V + 1` of the connected graph.
    pub fn betti_1(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// A connected graph is a tree exactly when `E = V - 1`.
    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertices.len()
    }

    pub fn is_mesh_backed(&self) -> bool {
        !self.tri_proj.is_empty()
    }

    /// Projects a mesh cell to the Reeb point it lies over.
    pub fn project(&self, cell: MeshCell) -> Result<ReebPoint, ReebError> {
        if !self.is_mesh_backed() {
            return Err(ReebError::NotMeshBacked);
        }
        match cell {
            MeshCell::Vertex(v) => {
                self.vert_proj.get(v).copied().ok_or(ReebError::UnknownCell)
            }
            MeshCell::Triangle(t) => {
                self.tri_proj.get(t).copied().ok_or(ReebError::UnknownCell)
            }
        }
    }

    /// Level of a Reeb point under the induced function.
    pub fn phi(&self, p: &ReebPoint) -> f64 {
        match p {
            ReebPoint::Vertex(v) => self.vertices[v.0].level,
            ReebPoint::EdgePoint { edge, t } => {
                let (lo, hi) = self.edges[edge.0].interval;
                lo + t * (hi - lo)
            }
        }
    }

    /// Edge whose region contains the band of triangle `t` at `level`.
    pub(crate) fn band_edge(&self, t: usize, level: f64) -> EdgeId {
        let k = self.tri_cuts[t].iter().filter(|&&(c, _)| c <= level).count();
        self.band_edges[t][k]
    }

    /// Edge whose cylinder lies over the part of a triangle at a regular
    /// level; finer than [`ReebGraph::project`] for triangles meeting
    /// several cylinders.
    pub fn edge_over(&self, triangle: usize, level: f64) -> Result<EdgeId, ReebError> {
        if !self.is_mesh_backed() {
            return Err(ReebError::NotMeshBacked);
        }
        if triangle >= self.tri_cuts.len() {
            return Err(ReebError::UnknownCell);
        }
        Ok(self.band_edge(triangle, level))
    }

    /// Builds a graph without a mesh behind it, for tests and synthetic
    /// inputs. Validates connectivity and edge monotonicity.
    pub fn from_parts(levels: Vec<f64>, edges: Vec<(usize, usize)>) -> Result<ReebGraph, ReebError> {
        let n = levels.len();
        if n == 0 {
            return Err(ReebError::InvalidGraph("no vertices".into()));
        }
        let mut uf = UnionFind::new(n);
        let mut es = Vec::with_capacity(edges.len());
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(ReebError::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
            if levels[a] == levels[b] {
                return Err(ReebError::InvalidGraph(format!(
                    "edge ({a}, {b}) joins equal levels"
                )));
            }
            let (lo, hi) = if levels[a] < levels[b] { (a, b) } else { (b, a) };
            uf.union(a, b);
            es.push(ReebEdge {
                id: EdgeId(k),
                ends: [VertexId(lo), VertexId(hi)],
                interval: (levels[lo], levels[hi]),
            });
        }
        let root = uf.find(0);
        if (1..n).any(|v| uf.find(v) != root) {
            return Err(ReebError::InvalidGraph("graph is not connected".into()));
        }
        let vertices = levels
            .iter()
            .enumerate()
            .map(|(k, &l)| ReebVertex {
                id: VertexId(k),
                level: l,
                raw_level: l,
                component: LevelComponent {
                    level: l,
                    kind: ComponentKind::Critical,
                    cells: Vec::new(),
                    cycle: None,
                    arc_count: 0,
                },
            })
            .collect();
        Ok(ReebGraph {
            vertices,
            edges: es,
            tri_proj: Vec::new(),
            vert_proj: Vec::new(),
            tri_cuts: Vec::new(),
            band_edges: Vec::new(),
        })
    }

    /// Snaps vertex levels within `tol` of each other to the lowest level of
    /// their cluster. Refuses tolerances that would flatten an edge.
    pub fn with_level_tolerance(&self, tol: f64) -> Result<ReebGraph, ReebError> {
        if tol <= 0.0 {
            return Ok(self.clone());
        }
        let mut levels: Vec<f64> = self.vertices.iter().map(|v| v.raw_level).collect();
        let mut sorted: Vec<f64> = levels.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite levels"));
        sorted.dedup();
        let mut rep: HashMap<u64, f64> = HashMap::new();
        let mut cluster_rep = f64::NEG_INFINITY;
        for &l in &sorted {
            if l - cluster_rep > tol {
                cluster_rep = l;
            }
            rep.insert(l.to_bits(), cluster_rep);
        }
        for l in levels.iter_mut() {
            *l = rep[&l.to_bits()];
        }
        for e in &self.edges {
            if levels[e.ends[0].0] == levels[e.ends[1].0] {
                return Err(ReebError::DegenerateTolerance { tol, edge: e.id.0 });
            }
        }
        let mut out = self.clone();
        for (v, l) in out.vertices.iter_mut().zip(&levels) {
            v.level = *l;
        }
        for e in out.edges.iter_mut() {
            e.interval = (levels[e.ends[0].0], levels[e.ends[1].0]);
        }
        Ok(out)
    }

    /// DOT rendering with levels as labels; vertices are emitted in id order,
    /// which is (level, component) order for mesh-built graphs.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph reeb {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  v{} [label=\"v{} level={}\"];", v.id.0, v.id.0, v.level);
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -- v{};", e.ends[0].0, e.ends[1].0);
        }
        s.push_str("}\n");
        s
    }
}

/// Ids whose value spans contain each query level, computed by one sweep in
/// ascending level order. Total work is proportional to the actual number of
/// (level, cell) incidences.
fn stab_levels(levels: &[f64], mut spans: Vec<(f64, f64, usize)>) -> Vec<Vec<usize>> {
    spans.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values"));
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); levels.len()];
    let mut ptr = 0;
    let mut active: Vec<(f64, usize)> = Vec::new();
    for (li, &level) in levels.iter().enumerate() {
        while ptr < spans.len() && spans[ptr].0 <= level {
            active.push((spans[ptr].1, spans[ptr].2));
            ptr += 1;
        }
        let mut k = 0;
        while k < active.len() {
            if active[k].0 < level {
                active.swap_remove(k);
            } else {
                out[li].push(active[k].1);
                k += 1;
            }
        }
    }
    out
}

/// Candidate cells per critical level.
fn sweep_candidates(mesh: &Mesh, levels: &[f64]) -> Vec<LevelCandidates> {
    let level_index: HashMap<u64, usize> = levels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l.to_bits(), i))
        .collect();
    let mut verts: Vec<Vec<usize>> = vec![Vec::new(); levels.len()];
    for v in 0..mesh.vertex_count() {
        if let Some(&li) = level_index.get(&mesh.value(v).to_bits()) {
            verts[li].push(v);
        }
    }
    let edge_spans: Vec<(f64, f64, usize)> = (0..mesh.edge_count())
        .map(|e| {
            let (u, w) = mesh.edge_endpoints(e);
            let (a, b) = (mesh.value(u), mesh.value(w));
            (a.min(b), a.max(b), e)
        })
        .collect();
    let tri_spans: Vec<(f64, f64, usize)> = (0..mesh.triangle_count())
        .map(|t| {
            let (lo, hi) = mesh.triangle_span(t);
            (lo, hi, t)
        })
        .collect();
    let edges = stab_levels(levels, edge_spans);
    let tris = stab_levels(levels, tri_spans);
    verts
        .into_iter()
        .zip(edges)
        .zip(tris)
        .map(|((verts, edges), tris)| LevelCandidates { verts, edges, tris })
        .collect()
}

/// Cut event of one triangle at one critical level.
#[derive(Clone, Copy, Debug)]
enum TriEvent {
    /// The region below the cut attaches above to the vertex, and vice versa.
    Split { level: f64, vid: VertexId },
    /// Only the extreme band toward the level attaches to the vertex.
    Touch { level: f64, vid: VertexId, from_below: bool },
}

/// Builds the Reeb graph of the field on a validated mesh.
///
/// Fails if the field violates the Property (L) surrogate; every other
/// failure mode would be a construction bug and panics via debug assertions.
pub fn build_reeb(mesh: &Mesh) -> Result<ReebGraph, ReebError> {
    let report = check_property_l(mesh);
    if !report.ok {
        return Err(ReebError::PropertyLViolated {
            offending: report.offending_vertices,
        });
    }

    // Critical levels: distinct values of non-regular vertices, ascending.
    let mut critical_levels: Vec<f64> = (0..mesh.vertex_count())
        .filter(|&v| classify_vertex(mesh, v) != VertexClass::Regular)
        .map(|v| mesh.value(v))
        .collect();
    critical_levels.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    critical_levels.dedup();
    debug_assert!(!critical_levels.is_empty(), "a nonconstant field has extrema");

    let candidates = sweep_candidates(mesh, &critical_levels);

    // Reeb vertices: critical components per level, in (level, component)
    // order. Remember per-level cell membership for the cutting pass.
    let mut vertices: Vec<ReebVertex> = Vec::new();
    let mut cell_vertex: Vec<HashMap<LevelCell, Option<VertexId>>> = Vec::new();
    for (li, &level) in critical_levels.iter().enumerate() {
        let scan = level_scan_with(mesh, level, &candidates[li]);
        let mut map = HashMap::new();
        let mut comp_vid: Vec<Option<VertexId>> = Vec::new();
        for comp in scan.components.iter() {
            if comp.kind == ComponentKind::Critical {
                let vid = VertexId(vertices.len());
                vertices.push(ReebVertex {
                    id: vid,
                    level,
                    raw_level: level,
                    component: comp.clone(),
                });
                comp_vid.push(Some(vid));
            } else {
                comp_vid.push(None);
            }
        }
        for (cell, ci) in scan.component_of.iter() {
            map.insert(*cell, comp_vid[*ci]);
        }
        cell_vertex.push(map);
    }

    // Cutting pass: collect split/touch events per triangle, cut levels per
    // mesh edge, and flat-edge behavior.
    let nt = mesh.triangle_count();
    let ne = mesh.edge_count();
    let mut tri_events: Vec<Vec<TriEvent>> = vec![Vec::new(); nt];
    let mut edge_cuts: Vec<Vec<f64>> = vec![Vec::new(); ne];
    // Flat edges in a critical component detach their triangles; flat edges
    // in a regular component merge the bands on both sides.
    let mut flat_detached: Vec<bool> = vec![false; ne];

    for (li, &level) in critical_levels.iter().enumerate() {
        let members = &cell_vertex[li];
        for &t in &candidates[li].tris {
            let (lo, hi) = mesh.triangle_span(t);
            debug_assert!(lo <= level && level <= hi);
            match crate::contour::triangle_level_hit(mesh, t, level) {
                TriLevelHit::None => {}
                TriLevelHit::CrossArc { e1, .. } => {
                    if let Some(vid) = members[&LevelCell::EdgeCross(e1)] {
                        tri_events[t].push(TriEvent::Split { level, vid });
                    }
                }
                TriLevelHit::CornerArc { v, .. } => {
                    if let Some(vid) = members[&LevelCell::Vertex(v)] {
                        tri_events[t].push(TriEvent::Split { level, vid });
                    }
                }
                TriLevelHit::CornerTouch { v } => {
                    if let Some(vid) = members[&LevelCell::Vertex(v)] {
                        // The whole triangle sits on one side of the level.
                        let from_below = lo == level;
                        tri_events[t].push(TriEvent::Touch { level, vid, from_below });
                    }
                }
                TriLevelHit::FlatEdge { edge } => {
                    if let Some(vid) = members[&LevelCell::FlatEdge(edge)] {
                        flat_detached[edge] = true;
                        let from_below = lo == level;
                        tri_events[t].push(TriEvent::Touch { level, vid, from_below });
                    }
                }
            }
        }
        for &e in &candidates[li].edges {
            let (u, w) = mesh.edge_endpoints(e);
            let (a, b) = (mesh.value(u), mesh.value(w));
            if (a < level && level < b) || (b < level && level < a) {
                if let Some(Some(_)) = members.get(&LevelCell::EdgeCross(e)) {
                    edge_cuts[e].push(level);
                }
            }
        }
    }

    // Band slots per triangle.
    let mut tri_cuts: Vec<Vec<(f64, VertexId)>> = vec![Vec::new(); nt];
    for t in 0..nt {
        for ev in &tri_events[t] {
            if let TriEvent::Split { level, vid } = ev {
                tri_cuts[t].push((*level, *vid));
            }
        }
        tri_cuts[t].sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite levels"));
    }
    let mut offset = vec![0usize; nt + 1];
    for t in 0..nt {
        offset[t + 1] = offset[t] + tri_cuts[t].len() + 1;
    }
    let total_slots = offset[nt];
    let band_below = |tri_cuts: &Vec<Vec<(f64, VertexId)>>, t: usize, x: f64| -> usize {
        // Band whose open interval sits just below or contains values < x is
        // indexed by the number of cuts <= x; segment callers guarantee no
        // cut lies strictly inside their range.
        tri_cuts[t].iter().filter(|&&(c, _)| c <= x).count()
    };

    let mut uf = UnionFind::new(total_slots);

    for e in 0..ne {
        let (u, w) = mesh.edge_endpoints(e);
        let (t1, t2) = mesh.edge_triangles(e);
        let (a, b) = (mesh.value(u), mesh.value(w));
        if a == b {
            if flat_detached[e] {
                continue;
            }
            // Regular flat edge: with Property (L) the two triangles lie on
            // opposite sides of the shared level; merge the bands facing it.
            let facing = |t: usize| -> usize {
                if mesh.triangle_span(t).0 == a {
                    0 // triangle above the level: its lowest band
                } else {
                    tri_cuts[t].len() // triangle below: its top band
                }
            };
            uf.union(offset[t1] + facing(t1), offset[t2] + facing(t2));
            continue;
        }
        // Segment the edge at its cut levels and merge band pairs.
        let (lo, hi) = (a.min(b), a.max(b));
        let mut cuts = edge_cuts[e].clone();
        cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite levels"));
        let mut bounds = Vec::with_capacity(cuts.len() + 2);
        bounds.push(lo);
        bounds.extend(cuts.iter().copied());
        bounds.push(hi);
        for s in 0..bounds.len() - 1 {
            let seg_lo = bounds[s];
            let k1 = band_below(&tri_cuts, t1, seg_lo);
            let k2 = band_below(&tri_cuts, t2, seg_lo);
            uf.union(offset[t1] + k1, offset[t2] + k2);
        }
    }

    // Attachments: each region must see exactly one vertex below and one
    // above.
    let mut attach_below: HashMap<usize, VertexId> = HashMap::new();
    let mut attach_above: HashMap<usize, VertexId> = HashMap::new();
    let record = |map: &mut HashMap<usize, VertexId>, root: usize, vid: VertexId| {
        if let Some(prev) = map.insert(root, vid) {
            debug_assert_eq!(prev, vid, "region attaches to one vertex per side");
        }
    };
    for t in 0..nt {
        for ev in &tri_events[t] {
            match *ev {
                TriEvent::Split { level, vid } => {
                    let k = tri_cuts[t]
                        .iter()
                        .position(|&(c, u)| c == level && u == vid)
                        .expect("split registered as cut");
                    let below_root = uf.find(offset[t] + k);
                    let above_root = uf.find(offset[t] + k + 1);
                    record(&mut attach_above, below_root, vid);
                    record(&mut attach_below, above_root, vid);
                }
                TriEvent::Touch { level, vid, from_below } => {
                    let k = if from_below {
                        // Triangle above the level: its lowest band.
                        band_below(&tri_cuts, t, level)
                    } else {
                        let n_cuts = tri_cuts[t].len();
                        let k = band_below(&tri_cuts, t, level);
                        debug_assert_eq!(k, n_cuts, "touch from above is the top band");
                        k
                    };
                    let root = uf.find(offset[t] + k);
                    if from_below {
                        record(&mut attach_below, root, vid);
                    } else {
                        record(&mut attach_above, root, vid);
                    }
                }
            }
        }
    }

    // Regions in deterministic order of their smallest slot.
    let mut region_order: Vec<usize> = Vec::new();
    let mut seen: HashMap<usize, ()> = HashMap::new();
    for slot in 0..total_slots {
        let root = uf.find(slot);
        if seen.insert(root, ()).is_none() {
            region_order.push(root);
        }
    }
    let mut edges: Vec<ReebEdge> = Vec::new();
    let mut edge_of_root: HashMap<usize, EdgeId> = HashMap::new();
    // Sort regions by (lower level, upper level, lower id, upper id, root).
    let mut keyed: Vec<(f64, f64, usize, usize, usize)> = region_order
        .iter()
        .map(|&root| {
            let lo = attach_below.get(&root).copied().unwrap_or_else(|| {
                panic!("region without lower attachment");
            });
            let hi = attach_above.get(&root).copied().unwrap_or_else(|| {
                panic!("region without upper attachment");
            });
            (
                vertices[lo.0].raw_level,
                vertices[hi.0].raw_level,
                lo.0,
                hi.0,
                root,
            )
        })
        .collect();
    keyed.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .unwrap()
            .then(x.1.partial_cmp(&y.1).unwrap())
            .then(x.2.cmp(&y.2))
            .then(x.3.cmp(&y.3))
            .then(x.4.cmp(&y.4))
    });
    for (lo_level, hi_level, lo, hi, root) in keyed {
        let id = EdgeId(edges.len());
        debug_assert!(lo_level < hi_level, "edge interval is nondegenerate");
        edges.push(ReebEdge {
            id,
            ends: [VertexId(lo), VertexId(hi)],
            interval: (lo_level, hi_level),
        });
        edge_of_root.insert(root, id);
    }

    let band_edges: Vec<Vec<EdgeId>> = (0..nt)
        .map(|t| {
            (0..tri_cuts[t].len() + 1)
                .map(|k| edge_of_root[&uf.find(offset[t] + k)])
                .collect()
        })
        .collect();

    // Projections. Triangles meeting a critical component project to its
    // vertex (lowest level, then smallest id, when several); others to an
    // interior point of their band's edge.
    let mut tri_proj = Vec::with_capacity(nt);
    for t in 0..nt {
        if tri_events[t].is_empty() {
            let eid = band_edges[t][0];
            let (lo, hi) = edges[eid.0].interval;
            let (s_lo, s_hi) = mesh.triangle_span(t);
            let mid = 0.5 * (s_lo + s_hi);
            let param = ((mid - lo) / (hi - lo)).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
            tri_proj.push(ReebPoint::EdgePoint { edge: eid, t: param });
        } else {
            let vid = tri_events[t]
                .iter()
                .map(|ev| match *ev {
                    TriEvent::Split { level, vid } => (level, vid.0),
                    TriEvent::Touch { level, vid, .. } => (level, vid.0),
                })
                .min_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)))
                .map(|(_, v)| VertexId(v))
                .unwrap();
            tri_proj.push(ReebPoint::Vertex(vid));
        }
    }
    let mut vert_proj = Vec::with_capacity(mesh.vertex_count());
    for v in 0..mesh.vertex_count() {
        let fv = mesh.value(v);
        let pos = critical_levels.partition_point(|&l| l < fv);
        let li = (pos < critical_levels.len() && critical_levels[pos] == fv).then_some(pos);
        let member = li.and_then(|li| {
            cell_vertex[li]
                .get(&LevelCell::Vertex(v))
                .copied()
                .flatten()
        });
        if let Some(vid) = member {
            vert_proj.push(ReebPoint::Vertex(vid));
        } else {
            let t = mesh.link(v).tris[0];
            let k = tri_cuts[t].iter().filter(|&&(c, _)| c < fv).count();
            let eid = band_edges[t][k];
            let (lo, hi) = edges[eid.0].interval;
            let param = ((fv - lo) / (hi - lo)).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
            vert_proj.push(ReebPoint::EdgePoint { edge: eid, t: param });
        }
    }

    let graph = ReebGraph {
        vertices,
        edges,
        tri_proj,
        vert_proj,
        tri_cuts,
        band_edges,
    };

    // Connectivity and the Euler bookkeeping identity are construction
    // invariants.
    debug_assert!(graph_is_connected(&graph), "Reeb graph is connected");
    debug_assert_eq!(
        graph.vertices.iter().map(|v| v.component.chi()).sum::<i64>(),
        mesh.stats().euler_characteristic,
        "critical component chi sums to chi of the surface"
    );
    debug_assert!(graph.betti_1() <= mesh.stats().genus as usize);
    Ok(graph)
}

fn graph_is_connected(g: &ReebGraph) -> bool {
    let n = g.vertices.len();
    let mut uf = UnionFind::new(n);
    for e in &g.edges {
        uf.union(e.ends[0].0, e.ends[1].0);
    }
    let root = uf.find(0);
    (1..n).all(|v| uf.find(v) == root)
}
