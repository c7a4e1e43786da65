//! Validated combinatorial closed surfaces carrying a scalar field.
//!
//! A [`Mesh`] is a triangulated closed surface given purely combinatorially:
//! triangles as vertex-index triples plus one `f64` value per vertex.
//! Construction checks that every edge lies in exactly two triangles, that
//! every vertex link is a single cycle, that the surface is connected and
//! orientable, and that no triangle has all three values equal.
//!
//! Scalar values are stored exactly as given; no symbolic perturbation is
//! applied, so flat edges (two equal endpoint values) are legal and level
//! sets may contain whole subcomplexes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("vertex index {index} out of range (vertex count {count})")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("non-manifold mesh: {0}")]
    NonManifold(String),
    #[error("mesh is not connected")]
    Disconnected,
    #[error("triangle {0} has all three vertex values equal")]
    FlatTriangle(usize),
    #[error("mesh is not orientable")]
    NonOrientable,
    #[error("vertex {0} has a non-finite value")]
    NonFiniteValue(usize),
    #[error("unknown builtin function id: {0}")]
    UnknownFunction(String),
    #[error("grid resolution {0} too small (need n >= 8)")]
    ResolutionTooSmall(usize),
    #[error("grid resolution {0} unsupported: the builtin samplers need n divisible by 4")]
    UnsupportedResolution(usize),
    #[error("invalid mesh JSON: {0}")]
    Json(String),
}

/// An undirected mesh edge together with its two incident triangles.
#[derive(Clone, Copy, Debug)]
pub(crate) struct MeshEdge {
    /// Endpoints with `ends[0] < ends[1]`.
    pub ends: [usize; 2],
    pub tris: [usize; 2],
}

/// Cyclic link of a vertex: `verts[k]` and `verts[k+1]` are joined by the
/// edge of `tris[k]` opposite the center (indices wrap).
#[derive(Clone, Debug)]
pub(crate) struct VertexLink {
    pub verts: Vec<usize>,
    pub tris: Vec<usize>,
}

/// A validated triangulated closed orientable surface with one scalar per
/// vertex. Immutable after construction; all queries are pure.
#[derive(Clone, Debug)]
pub struct Mesh {
    triangles: Vec<[usize; 3]>,
    values: Vec<f64>,
    positions: Option<Vec<[f64; 2]>>,
    edges: Vec<MeshEdge>,
    edge_ids: HashMap<(usize, usize), usize>,
    links: Vec<VertexLink>,
}

/// Euler characteristic, genus and the torus flag of a closed orientable
/// surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceStats {
    pub euler_characteristic: i64,
    pub genus: u32,
    pub is_torus: bool,
}

impl Mesh {
    /// Builds and fully validates a mesh from raw triangles and values.
    pub fn build(triangles: Vec<[usize; 3]>, values: Vec<f64>) -> Result<Mesh, SurfaceError> {
        Mesh::build_with_positions(triangles, values, None)
    }

    pub(crate) fn build_with_positions(
        triangles: Vec<[usize; 3]>,
        values: Vec<f64>,
        positions: Option<Vec<[f64; 2]>>,
    ) -> Result<Mesh, SurfaceError> {
        let n = values.len();
        for (v, x) in values.iter().enumerate() {
            if !x.is_finite() {
                return Err(SurfaceError::NonFiniteValue(v));
            }
        }
        if triangles.is_empty() {
            return Err(SurfaceError::NonManifold("no triangles".into()));
        }
        for tri in &triangles {
            for &v in tri {
                if v >= n {
                    return Err(SurfaceError::IndexOutOfRange { index: v, count: n });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(SurfaceError::NonManifold(format!(
                    "degenerate triangle {:?}",
                    tri
                )));
            }
        }

        // Edge table: every undirected edge must lie in exactly two triangles.
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edge_tris: Vec<([usize; 2], Vec<usize>)> = Vec::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (u, w) = (tri[k], tri[(k + 1) % 3]);
                let key = (u.min(w), u.max(w));
                let id = *edge_ids.entry(key).or_insert_with(|| {
                    edge_tris.push(([key.0, key.1], Vec::new()));
                    edge_tris.len() - 1
                });
                edge_tris[id].1.push(t);
            }
        }
        let mut edges = Vec::with_capacity(edge_tris.len());
        for (ends, tris) in &edge_tris {
            if tris.len() != 2 {
                return Err(SurfaceError::NonManifold(format!(
                    "edge ({}, {}) lies in {} triangles",
                    ends[0],
                    ends[1],
                    tris.len()
                )));
            }
            edges.push(MeshEdge {
                ends: *ends,
                tris: [tris[0], tris[1]],
            });
        }

        // Triangle adjacency must be connected.
        let mut seen = vec![false; triangles.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(t) = stack.pop() {
            let tri = triangles[t];
            for k in 0..3 {
                let (u, w) = (tri[k], tri[(k + 1) % 3]);
                let id = edge_ids[&(u.min(w), u.max(w))];
                for &t2 in &edges[id].tris {
                    if !seen[t2] {
                        seen[t2] = true;
                        count += 1;
                        stack.push(t2);
                    }
                }
            }
        }
        if count != triangles.len() {
            return Err(SurfaceError::Disconnected);
        }
        let mut referenced = vec![false; n];
        for tri in &triangles {
            for &v in tri {
                referenced[v] = true;
            }
        }
        if let Some(v) = referenced.iter().position(|&r| !r) {
            return Err(SurfaceError::NonManifold(format!(
                "vertex {v} not in any triangle"
            )));
        }

        // Coherent-orientation pass: flip triangles so that every shared edge
        // is traversed in opposite directions by its two triangles.
        let mut flip = vec![false; triangles.len()];
        let mut assigned = vec![false; triangles.len()];
        let mut stack = vec![0usize];
        assigned[0] = true;
        let traverses = |t: usize, f: bool, u: usize, w: usize| -> bool {
            // Does triangle t (with flip f) walk the directed edge u -> w?
            let tri = triangles[t];
            (0..3).any(|k| {
                let (a, b) = if f {
                    (tri[(k + 1) % 3], tri[k])
                } else {
                    (tri[k], tri[(k + 1) % 3])
                };
                a == u && b == w
            })
        };
        while let Some(t) = stack.pop() {
            let tri = triangles[t];
            for k in 0..3 {
                let (u, w) = (tri[k], tri[(k + 1) % 3]);
                let id = edge_ids[&(u.min(w), u.max(w))];
                let t2 = if edges[id].tris[0] == t {
                    edges[id].tris[1]
                } else {
                    edges[id].tris[0]
                };
                // t walks u->w or w->u depending on its flip; t2 must walk the reverse.
                let (du, dw) = if traverses(t, flip[t], u, w) {
                    (u, w)
                } else {
                    (w, u)
                };
                let want_flip = !traverses(t2, false, dw, du);
                if !assigned[t2] {
                    assigned[t2] = true;
                    flip[t2] = want_flip;
                    stack.push(t2);
                } else if flip[t2] != want_flip {
                    return Err(SurfaceError::NonOrientable);
                }
            }
        }

        // Vertex links: oriented triangles induce, at each vertex, directed
        // link edges that must close into a single cycle.
        let mut link_next: Vec<HashMap<usize, (usize, usize)>> = vec![HashMap::new(); n];
        for (t, tri) in triangles.iter().enumerate() {
            let o = if flip[t] {
                [tri[0], tri[2], tri[1]]
            } else {
                *tri
            };
            for k in 0..3 {
                let (v, p, q) = (o[k], o[(k + 1) % 3], o[(k + 2) % 3]);
                if link_next[v].insert(p, (q, t)).is_some() {
                    return Err(SurfaceError::NonManifold(format!(
                        "broken link at vertex {v}"
                    )));
                }
            }
        }
        let mut links = Vec::with_capacity(n);
        for (v, next) in link_next.iter().enumerate() {
            let start = *next.keys().min().expect("nonempty link");
            let mut verts = Vec::with_capacity(next.len());
            let mut tris = Vec::with_capacity(next.len());
            let mut cur = start;
            loop {
                verts.push(cur);
                let &(q, t) = next.get(&cur).ok_or_else(|| {
                    SurfaceError::NonManifold(format!("broken link at vertex {v}"))
                })?;
                tris.push(t);
                cur = q;
                if cur == start {
                    break;
                }
            }
            if verts.len() != next.len() {
                return Err(SurfaceError::NonManifold(format!(
                    "link of vertex {v} is not a single cycle"
                )));
            }
            links.push(VertexLink { verts, tris });
        }

        for (t, tri) in triangles.iter().enumerate() {
            if values[tri[0]] == values[tri[1]] && values[tri[1]] == values[tri[2]] {
                return Err(SurfaceError::FlatTriangle(t));
            }
        }

        Ok(Mesh {
            triangles,
            values,
            positions,
            edges,
            edge_ids,
            links,
        })
    }

    /// Same triangulation, new values: revalidates only the value-dependent
    /// invariants (finiteness and flat triangles). Used by generators that
    /// draw many fields on one grid.
    pub fn rebuild_with_values(&self, values: Vec<f64>) -> Result<Mesh, SurfaceError> {
        if values.len() != self.values.len() {
            return Err(SurfaceError::IndexOutOfRange {
                index: values.len(),
                count: self.values.len(),
            });
        }
        for (v, x) in values.iter().enumerate() {
            if !x.is_finite() {
                return Err(SurfaceError::NonFiniteValue(v));
            }
        }
        for (t, tri) in self.triangles.iter().enumerate() {
            if values[tri[0]] == values[tri[1]] && values[tri[1]] == values[tri[2]] {
                return Err(SurfaceError::FlatTriangle(t));
            }
        }
        let mut out = self.clone();
        out.values = values;
        out.positions = None;
        Ok(out)
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, v: usize) -> f64 {
        self.values[v]
    }

    /// Grid positions in `[0,1)^2`, present only on sampler-built meshes.
    pub fn positions(&self) -> Option<&[[f64; 2]]> {
        self.positions.as_deref()
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        (self.edges[e].ends[0], self.edges[e].ends[1])
    }

    pub fn edge_triangles(&self, e: usize) -> (usize, usize) {
        (self.edges[e].tris[0], self.edges[e].tris[1])
    }

    pub fn edge_between(&self, u: usize, w: usize) -> Option<usize> {
        self.edge_ids.get(&(u.min(w), u.max(w))).copied()
    }

    pub(crate) fn link(&self, v: usize) -> &VertexLink {
        &self.links[v]
    }

    /// Value span `(min, max)` of a triangle.
    pub fn triangle_span(&self, t: usize) -> (f64, f64) {
        let [a, b, c] = self.triangles[t];
        let (va, vb, vc) = (self.values[a], self.values[b], self.values[c]);
        (va.min(vb).min(vc), va.max(vb).max(vc))
    }

    /// Euler characteristic, genus and torus flag.
    pub fn stats(&self) -> SurfaceStats {
        let chi = self.vertex_count() as i64 - self.edge_count() as i64
            + self.triangle_count() as i64;
        debug_assert!(chi % 2 == 0, "closed orientable surface has even chi");
        let genus = ((2 - chi) / 2).max(0) as u32;
        SurfaceStats {
            euler_characteristic: chi,
            genus,
            is_torus: genus == 1,
        }
    }

    /// Serializes to the `{"triangles": [...], "values": [...]}` schema.
    pub fn to_json(&self) -> String {
        let file = MeshFile {
            triangles: self.triangles.clone(),
            values: self.values.clone(),
        };
        serde_json::to_string(&file).expect("mesh serialization")
    }

    /// Parses and validates a mesh from the JSON schema.
    pub fn from_json(s: &str) -> Result<Mesh, SurfaceError> {
        let file: MeshFile =
            serde_json::from_str(s).map_err(|e| SurfaceError::Json(e.to_string()))?;
        Mesh::build(file.triangles, file.values)
    }
}

#[derive(Serialize, Deserialize)]
struct MeshFile {
    triangles: Vec<[usize; 3]>,
    values: Vec<f64>,
}

/// The built-in analytic fields on the flat torus `[0,1)^2`.
///
/// `SinSin` is `sin(2πx)·sin(2πy)`; `SinSinScaled` multiplies it by one
/// positive constant on each of the four open squares cut out by the
/// gridlines `x, y ∈ {0, 1/2}`; `Height` is `cos(2πx)`; `TwoSaddle` is
/// `cos(2πx) + 0.5·cos(2πy)`.
#[derive(Clone, Debug, PartialEq)]
pub enum TorusFunction {
    SinSin,
    SinSinScaled([f64; 4]),
    Height,
    TwoSaddle,
}

impl FromStr for TorusFunction {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, SurfaceError> {
        match s {
            "sinsin" => return Ok(TorusFunction::SinSin),
            "height" => return Ok(TorusFunction::Height),
            "twosaddle" => return Ok(TorusFunction::TwoSaddle),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("sinsin_scaled[") {
            if let Some(inner) = rest.strip_suffix(']') {
                let parts: Vec<&str> = inner.split(',').collect();
                if parts.len() == 4 {
                    let mut f = [0.0; 4];
                    for (k, p) in parts.iter().enumerate() {
                        match p.trim().parse::<f64>() {
                            Ok(x) if x > 0.0 && x.is_finite() => f[k] = x,
                            _ => return Err(SurfaceError::UnknownFunction(s.into())),
                        }
                    }
                    return Ok(TorusFunction::SinSinScaled(f));
                }
            }
        }
        Err(SurfaceError::UnknownFunction(s.into()))
    }
}

impl fmt::Display for TorusFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusFunction::SinSin => write!(f, "sinsin"),
            TorusFunction::SinSinScaled(c) => {
                write!(f, "sinsin_scaled[{},{},{},{}]", c[0], c[1], c[2], c[3])
            }
            TorusFunction::Height => write!(f, "height"),
            TorusFunction::TwoSaddle => write!(f, "twosaddle"),
        }
    }
}

impl TorusFunction {
    /// Value at grid point `(i/n, j/n)`.
    ///
    /// The sine-based fields return an exact `0.0` on the gridlines
    /// `x, y ∈ {0, 1/2}`; those are the only ties the samplers produce on
    /// purpose, everything else is plain `f64` evaluation.
    fn eval(&self, i: usize, j: usize, n: usize) -> f64 {
        use std::f64::consts::TAU;
        let on_grid = |k: usize| k == 0 || 2 * k == n;
        let angle = |k: usize| TAU * (k as f64) / (n as f64);
        match self {
            TorusFunction::SinSin | TorusFunction::SinSinScaled(_) => {
                if on_grid(i) || on_grid(j) {
                    return 0.0;
                }
                let s = angle(i).sin() * angle(j).sin();
                match self {
                    TorusFunction::SinSin => s,
                    TorusFunction::SinSinScaled(f) => {
                        let q = match (2 * i < n, 2 * j < n) {
                            (true, true) => 0,
                            (false, true) => 1,
                            (false, false) => 2,
                            (true, false) => 3,
                        };
                        s * f[q]
                    }
                    _ => unreachable!(),
                }
            }
            TorusFunction::Height => angle(i).cos(),
            TorusFunction::TwoSaddle => angle(i).cos() + 0.5 * angle(j).cos(),
        }
    }
}

/// Triangles of the n-by-n grid torus, each square split along one diagonal.
///
/// The diagonal of a square touching a gridline intersection `{0, n/2}^2`
/// must pass through that corner, otherwise the square adjacent to a sinsin
/// saddle would contain a triangle with three zero values. Remaining squares
/// alternate by parity.
pub(crate) fn torus_grid_triangles(n: usize) -> Vec<[usize; 3]> {
    let idx = |i: usize, j: usize| (j % n) * n + (i % n);
    let on_grid = |k: usize| k % n == 0 || 2 * (k % n) == n;
    let mut tris = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let a = idx(i, j);
            let b = idx(i + 1, j);
            let c = idx(i + 1, j + 1);
            let d = idx(i, j + 1);
            let diag_ac = if on_grid(i) && on_grid(j) {
                true
            } else if on_grid(i + 1) && on_grid(j) {
                false
            } else if on_grid(i + 1) && on_grid(j + 1) {
                true
            } else if on_grid(i) && on_grid(j + 1) {
                false
            } else {
                (i + j) % 2 == 0
            };
            if diag_ac {
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            } else {
                tris.push([a, b, d]);
                tris.push([b, c, d]);
            }
        }
    }
    tris
}

/// Samples a builtin field on the n-by-n grid torus.
///
/// `n` must be at least 8 and divisible by 4: the designed critical set of
/// the builtins lies on the gridlines `x, y ∈ {0, 1/2}` and on the quarter
/// points, which are grid points only for such `n`.
pub fn sample_torus(function: &TorusFunction, n: usize) -> Result<Mesh, SurfaceError> {
    if n < 8 {
        return Err(SurfaceError::ResolutionTooSmall(n));
    }
    if n % 4 != 0 {
        return Err(SurfaceError::UnsupportedResolution(n));
    }
    let mut values = vec![0.0; n * n];
    let mut positions = vec![[0.0, 0.0]; n * n];
    for j in 0..n {
        for i in 0..n {
            values[j * n + i] = function.eval(i, j, n);
            positions[j * n + i] = [i as f64 / n as f64, j as f64 / n as f64];
        }
    }
    Mesh::build_with_positions(torus_grid_triangles(n), values, Some(positions))
}

/// Vertex index of the grid point `(i, j)` on an n-by-n grid torus.
pub fn grid_index(i: usize, j: usize, n: usize) -> usize {
    (j % n) * n + (i % n)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn octahedron() -> Mesh {
        // Equator 0..4 at value 0, top pole 4 at +1, bottom pole 5 at -1.
        let tris = vec![
            [0, 1, 4],
            [1, 2, 4],
            [2, 3, 4],
            [3, 0, 4],
            [1, 0, 5],
            [2, 1, 5],
            [3, 2, 5],
            [0, 3, 5],
        ];
        Mesh::build(tris, vec![0.0, 0.0, 0.0, 0.0, 1.0, -1.0]).expect("octahedron is valid")
    }

    #[test]
    fn octahedron_valid_and_sphere_stats() {
        let m = octahedron();
        assert_eq!(m.triangle_count(), 8);
        let s = m.stats();
        assert_eq!(s.euler_characteristic, 2);
        assert_eq!(s.genus, 0);
        assert!(!s.is_torus);
    }

    #[test]
    fn two_disjoint_tetrahedra_are_disconnected() {
        let tet = |o: usize| {
            vec![
                [o, o + 1, o + 2],
                [o, o + 3, o + 1],
                [o + 1, o + 3, o + 2],
                [o + 2, o + 3, o],
            ]
        };
        let mut tris = tet(0);
        tris.extend(tet(4));
        let values = (0..8).map(|k| k as f64).collect();
        match Mesh::build(tris, values) {
            Err(SurfaceError::Disconnected) => {}
            other => panic!("expected Disconnected, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn open_fan_is_non_manifold() {
        // A single triangle: every edge lies in one triangle only.
        match Mesh::build(vec![[0, 1, 2]], vec![0.0, 1.0, 2.0]) {
            Err(SurfaceError::NonManifold(_)) => {}
            other => panic!("expected NonManifold, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn index_out_of_range_is_reported() {
        match Mesh::build(vec![[0, 1, 7]], vec![0.0, 1.0, 2.0]) {
            Err(SurfaceError::IndexOutOfRange { index: 7, count: 3 }) => {}
            other => panic!("expected IndexOutOfRange, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn flat_triangle_is_rejected() {
        // Octahedron with a constant equator and equal pole values forces a
        // flat triangle only if some triangle is all-equal; use a tetrahedron
        // with three equal values instead.
        let tris = vec![[0, 1, 2], [0, 3, 1], [1, 3, 2], [2, 3, 0]];
        match Mesh::build(tris, vec![1.0, 1.0, 1.0, 0.0]) {
            Err(SurfaceError::FlatTriangle(0)) => {}
            other => panic!("expected FlatTriangle, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn klein_bottle_is_rejected_as_non_orientable() {
        // n-by-n grid with a torus glue in j and an orientation-reversing
        // glue in i: (n, j) ~ (0, n - j).
        let n = 6;
        let vx = |i: usize, j: usize| -> usize {
            if i % n == 0 && i != 0 {
                ((n - j % n) % n) * n
            } else {
                (j % n) * n + (i % n)
            }
        };
        let mut tris = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let (a, b, c, d) = (vx(i, j), vx(i + 1, j), vx(i + 1, j + 1), vx(i, j + 1));
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            }
        }
        // Distinct values so no flat triangle interferes.
        let values = (0..n * n).map(|k| (k * k % 97) as f64 + k as f64 * 0.001).collect();
        match Mesh::build(tris, values) {
            Err(SurfaceError::NonOrientable) => {}
            other => panic!("expected NonOrientable, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn sinsin_grid_counts_and_chi() {
        let m = sample_torus(&TorusFunction::SinSin, 8).unwrap();
        assert_eq!(m.vertex_count(), 64);
        assert_eq!(m.triangle_count(), 128);
        let s = m.stats();
        assert_eq!(s.euler_characteristic, 0);
        assert_eq!(s.genus, 1);
        assert!(s.is_torus);
    }

    #[test]
    fn height_is_constant_along_columns() {
        let n = 16;
        let m = sample_torus(&TorusFunction::Height, n).unwrap();
        for i in 0..n {
            let v0 = m.value(grid_index(i, 0, n));
            for j in 1..n {
                assert_eq!(m.value(grid_index(i, j, n)), v0);
            }
        }
    }

    #[test]
    fn scaled_extrema_match_direct_evaluation() {
        // Oracle: the scaled field at the four quarter points equals the
        // factor times sin(2πx)sin(2πy) evaluated there.
        let n = 32;
        let f = TorusFunction::SinSinScaled([1.0, 0.8, 0.6, 0.4]);
        let m = sample_torus(&f, n).unwrap();
        use std::f64::consts::TAU;
        let direct = |i: usize, j: usize, factor: f64| {
            factor * (TAU * i as f64 / n as f64).sin() * (TAU * j as f64 / n as f64).sin()
        };
        let q = n / 4;
        assert_eq!(m.value(grid_index(q, q, n)), direct(q, q, 1.0));
        assert_eq!(m.value(grid_index(3 * q, q, n)), direct(3 * q, q, 0.8));
        assert_eq!(m.value(grid_index(3 * q, 3 * q, n)), direct(3 * q, 3 * q, 0.6));
        assert_eq!(m.value(grid_index(q, 3 * q, n)), direct(q, 3 * q, 0.4));
        assert_eq!(m.value(grid_index(q, q, n)), 1.0);
        assert_eq!(m.value(grid_index(3 * q, q, n)), -0.8);
        assert_eq!(m.value(grid_index(3 * q, 3 * q, n)), 0.6);
        assert_eq!(m.value(grid_index(q, 3 * q, n)), -0.4);
    }

    #[test]
    fn sampler_round_trips_through_build() {
        let m = sample_torus(&TorusFunction::SinSin, 8).unwrap();
        let rebuilt = Mesh::build(m.triangles().to_vec(), m.values().to_vec()).unwrap();
        assert_eq!(rebuilt.triangles(), m.triangles());
        assert_eq!(rebuilt.values(), m.values());
        assert_eq!(rebuilt.edge_count(), m.edge_count());
    }

    #[test]
    fn all_builtins_validate_on_supported_resolutions() {
        let fns = [
            TorusFunction::SinSin,
            TorusFunction::SinSinScaled([1.0, 0.8, 0.6, 0.4]),
            TorusFunction::Height,
            TorusFunction::TwoSaddle,
        ];
        for f in &fns {
            for n in [8, 12, 16, 20, 32] {
                let m = sample_torus(f, n).unwrap();
                assert!(m.stats().is_torus, "{f} at n={n}");
            }
        }
    }

    #[test]
    fn bad_resolutions_are_rejected() {
        assert!(matches!(
            sample_torus(&TorusFunction::SinSin, 6),
            Err(SurfaceError::ResolutionTooSmall(6))
        ));
        assert!(matches!(
            sample_torus(&TorusFunction::SinSin, 10),
            Err(SurfaceError::UnsupportedResolution(10))
        ));
    }

    #[test]
    fn function_id_parsing() {
        assert_eq!("sinsin".parse::<TorusFunction>().unwrap(), TorusFunction::SinSin);
        assert_eq!(
            "sinsin_scaled[1.0,0.8,0.6,0.4]".parse::<TorusFunction>().unwrap(),
            TorusFunction::SinSinScaled([1.0, 0.8, 0.6, 0.4])
        );
        assert!("sinsin_scaled[1,0,1,1]".parse::<TorusFunction>().is_err());
        assert!("nope".parse::<TorusFunction>().is_err());
    }

    #[test]
    fn genus_two_surface_from_two_glued_tori() {
        // Remove one triangle from each of two grid tori and identify the
        // boundary triangles. Oracle: count V - E + F on the glued complex.
        let n = 8;
        let tris = torus_grid_triangles(n);
        let nv = n * n;
        let removed = tris[0];
        let mut glued: Vec<[usize; 3]> = Vec::new();
        for (t, tri) in tris.iter().enumerate() {
            if t != 0 {
                glued.push(*tri);
            }
        }
        // Second copy: map its removed triangle's corners onto the first
        // copy's boundary (reversing orientation across the seam) and give
        // every other vertex a fresh compact index.
        let removed2 = [removed[0], removed[2], removed[1]];
        let mut remap: std::collections::HashMap<usize, usize> = HashMap::new();
        let mut next = nv;
        for v in 0..nv {
            if let Some(k) = removed2.iter().position(|&x| x == v) {
                remap.insert(v, removed[k]);
            } else {
                remap.insert(v, next);
                next += 1;
            }
        }
        for (t, tri) in tris.iter().enumerate() {
            if t != 0 {
                glued.push([remap[&tri[0]], remap[&tri[1]], remap[&tri[2]]]);
            }
        }
        let total_v = 2 * nv - 3;
        assert_eq!(next, total_v);
        let values: Vec<f64> = (0..total_v).map(|k| (k as f64).sin() + k as f64 * 1e-6).collect();
        let m = Mesh::build(glued, values).unwrap();
        let expected_chi =
            m.vertex_count() as i64 - m.edge_count() as i64 + m.triangle_count() as i64;
        let s = m.stats();
        assert_eq!(s.euler_characteristic, expected_chi);
        assert_eq!(s.euler_characteristic, -2);
        assert_eq!(s.genus, 2);
        assert!(!s.is_torus);
    }

    #[test]
    fn validator_survives_random_triangle_soup() {
        // Arbitrary garbage must come back as an error, never a panic.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut accepted = 0;
        for _ in 0..500 {
            let nv = rng.gen_range(1..12usize);
            let nt = rng.gen_range(1..20usize);
            let triangles: Vec<[usize; 3]> = (0..nt)
                .map(|_| {
                    [
                        rng.gen_range(0..nv + 2),
                        rng.gen_range(0..nv + 2),
                        rng.gen_range(0..nv + 2),
                    ]
                })
                .collect();
            let values: Vec<f64> = (0..nv).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if Mesh::build(triangles, values).is_ok() {
                accepted += 1;
            }
        }
        // Random soups are essentially never closed surfaces.
        assert_eq!(accepted, 0);
    }

    #[test]
    fn json_round_trip() {
        let m = sample_torus(&TorusFunction::TwoSaddle, 8).unwrap();
        let s = m.to_json();
        let back = Mesh::from_json(&s).unwrap();
        assert_eq!(back.triangles(), m.triangles());
        assert_eq!(back.values(), m.values());
        assert!(Mesh::from_json("{not json").is_err());
    }
}
