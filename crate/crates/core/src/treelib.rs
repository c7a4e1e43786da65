//! Standalone oriented-tree combinatorics.
//!
//! An oriented tree with every out-degree at most one has exactly one sink;
//! this module states that as executable operations and provides exhaustive
//! generators over all labeled trees (by Prüfer sequence) with all edge
//! orientations, for property testing at small sizes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("enumeration bound exceeded: n = {0} (supported 1..=9)")]
    BoundExceeded(usize),
    #[error("vertex {0} has out-degree {1} > 1")]
    OutDegreePreconditionViolated(usize, usize),
    #[error("invalid tree: {0}")]
    Invalid(String),
}

/// A directed graph whose underlying undirected graph is a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedTree {
    n: usize,
    /// Directed edges `(from, to)`.
    edges: Vec<(usize, usize)>,
}

impl OrientedTree {
    /// Validates that the underlying undirected graph is a tree on `n`
    /// vertices.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<OrientedTree, TreeError> {
        if n == 0 {
            return Err(TreeError::Invalid("empty vertex set".into()));
        }
        if edges.len() + 1 != n {
            return Err(TreeError::Invalid(format!(
                "{} edges on {} vertices",
                edges.len(),
                n
            )));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let nx = parent[c];
                parent[c] = r;
                c = nx;
            }
            r
        }
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(TreeError::Invalid(format!("edge ({a}, {b}) out of range")));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(TreeError::Invalid(format!("edge ({a}, {b}) closes a cycle")));
            }
            parent[ra] = rb;
        }
        Ok(OrientedTree { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for &(a, _) in &self.edges {
            out[a] += 1;
        }
        out
    }

    /// Vertices with no outgoing edge. Nonempty for every finite oriented
    /// tree.
    pub fn sinks(&self) -> Vec<usize> {
        let out = self.out_degrees();
        (0..self.n).filter(|&v| out[v] == 0).collect()
    }

    /// Executable statement of the uniqueness lemma: under out-degree at most
    /// one everywhere, the tree has exactly one sink. Returning `false` is a
    /// counterexample, i.e. a test failure.
    pub fn has_unique_sink_under_outdeg1(&self) -> Result<bool, TreeError> {
        for (v, d) in self.out_degrees().into_iter().enumerate() {
            if d > 1 {
                return Err(TreeError::OutDegreePreconditionViolated(v, d));
            }
        }
        Ok(self.sinks().len() == 1)
    }

    /// The path-argument extractor behind the uniqueness proof: given two
    /// sinks, some vertex on the path between them has both path edges
    /// outgoing. Returns that vertex, or `None` if the inputs are not two
    /// distinct sinks.
    pub fn double_out_on_path(&self, s1: usize, s2: usize) -> Option<usize> {
        if s1 == s2 {
            return None;
        }
        let path = self.path_between(s1, s2)?;
        // forward[k]: the edge between path[k] and path[k+1] points toward
        // path[k+1]. It starts false (an edge into the sink s1) and ends
        // true, so somewhere it flips and that vertex has two outgoing edges.
        let forward: Vec<bool> = path
            .windows(2)
            .map(|w| self.edges.contains(&(w[0], w[1])))
            .collect();
        if *forward.first()? || !*forward.last()? {
            return None;
        }
        for k in 1..path.len() - 1 {
            if !forward[k - 1] && forward[k] {
                return Some(path[k]);
            }
        }
        None
    }

    fn path_between(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, w) in &self.edges {
            adj[u].push(w);
            adj[w].push(u);
        }
        let mut prev = vec![usize::MAX; self.n];
        let mut stack = vec![a];
        prev[a] = a;
        while let Some(v) = stack.pop() {
            if v == b {
                break;
            }
            for &u in &adj[v] {
                if prev[u] == usize::MAX {
                    prev[u] = v;
                    stack.push(u);
                }
            }
        }
        if prev[b] == usize::MAX {
            return None;
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

/// Decodes a Prüfer sequence of length `n - 2` into the edge list of the
/// labeled tree it encodes.
pub fn tree_from_pruefer(code: &[usize]) -> Vec<(usize, usize)> {
    let n = code.len() + 2;
    let mut degree = vec![1usize; n];
    for &a in code {
        degree[a] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    // Smallest-leaf-first decoding with a moving pointer.
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &a in code {
        edges.push((leaf, a));
        degree[a] -= 1;
        if degree[a] == 1 && a < ptr {
            leaf = a;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

/// Streams every labeled tree on `n` vertices with every edge-direction
/// assignment, each exactly once: `n^(n-2) * 2^(n-1)` oriented trees.
pub fn enumerate_oriented_trees(
    n: usize,
) -> Result<impl Iterator<Item = OrientedTree>, TreeError> {
    if n == 0 || n > 9 {
        return Err(TreeError::BoundExceeded(n));
    }
    let trees: Box<dyn Iterator<Item = Vec<(usize, usize)>>> = if n == 1 {
        Box::new(std::iter::once(Vec::new()))
    } else if n == 2 {
        Box::new(std::iter::once(vec![(0, 1)]))
    } else {
        let count = (n as u64).pow(n as u32 - 2);
        Box::new((0..count).map(move |mut code_id| {
            let mut code = vec![0usize; n - 2];
            for slot in code.iter_mut() {
                *slot = (code_id % n as u64) as usize;
                code_id /= n as u64;
            }
            tree_from_pruefer(&code)
        }))
    };
    let orientations = 1u64 << (n - 1);
    Ok(trees.flat_map(move |edges| {
        (0..orientations.max(1)).map(move |mask| {
            let directed: Vec<(usize, usize)> = edges
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| if mask >> k & 1 == 0 { (a, b) } else { (b, a) })
                .collect();
            OrientedTree {
                n,
                edges: directed,
            }
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_is_its_own_sink() {
        let t = OrientedTree::new(1, vec![]).unwrap();
        assert_eq!(t.sinks(), vec![0]);
        assert!(t.has_unique_sink_under_outdeg1().unwrap());
    }

    #[test]
    fn path_sink_is_the_terminal_vertex() {
        let t = OrientedTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(t.sinks(), vec![2]);
        assert!(t.has_unique_sink_under_outdeg1().unwrap());
    }

    #[test]
    fn outward_star_has_all_leaves_as_sinks() {
        let n = 6;
        let t = OrientedTree::new(n, (1..n).map(|k| (0, k)).collect()).unwrap();
        assert_eq!(t.sinks(), (1..n).collect::<Vec<_>>());
        assert!(matches!(
            t.has_unique_sink_under_outdeg1(),
            Err(TreeError::OutDegreePreconditionViolated(0, 5))
        ));
    }

    #[test]
    fn inward_star_has_the_center_as_unique_sink() {
        let n = 6;
        let t = OrientedTree::new(n, (1..n).map(|k| (k, 0)).collect()).unwrap();
        assert_eq!(t.sinks(), vec![0]);
        assert!(t.has_unique_sink_under_outdeg1().unwrap());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_oriented_trees(1).unwrap().count(), 1);
        assert_eq!(enumerate_oriented_trees(2).unwrap().count(), 2);
        assert_eq!(enumerate_oriented_trees(3).unwrap().count(), 12);
        assert_eq!(enumerate_oriented_trees(4).unwrap().count(), 16 * 8);
        assert!(enumerate_oriented_trees(10).is_err());
        assert!(enumerate_oriented_trees(0).is_err());
    }

    #[test]
    fn enumerated_trees_are_valid_and_distinct() {
        let all: Vec<OrientedTree> = enumerate_oriented_trees(4).unwrap().collect();
        for t in &all {
            OrientedTree::new(t.vertex_count(), t.edges().to_vec()).expect("valid tree");
        }
        let mut keys: Vec<Vec<(usize, usize)>> = all
            .iter()
            .map(|t| {
                let mut e = t.edges().to_vec();
                e.sort();
                e
            })
            .collect();
        keys.sort();
        let before = keys.len();
        keys.dedup();
        assert_eq!(keys.len(), before, "each oriented tree exactly once");
    }

    #[test]
    fn pruefer_decoding_matches_cayley() {
        // All decoded trees on 5 vertices are distinct as edge sets.
        let n = 5;
        let mut seen = std::collections::HashSet::new();
        for id in 0..(n as u64).pow(n as u32 - 2) {
            let mut code = vec![0usize; n - 2];
            let mut c = id;
            for slot in code.iter_mut() {
                *slot = (c % n as u64) as usize;
                c /= n as u64;
            }
            let mut edges: Vec<(usize, usize)> = tree_from_pruefer(&code)
                .into_iter()
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect();
            edges.sort();
            assert!(seen.insert(edges), "duplicate tree for code {code:?}");
        }
        assert_eq!(seen.len(), 125);
    }

    #[test]
    fn double_out_extractor_finds_a_witness() {
        // Two sinks 0 and 2 on a path 0 <- 1 -> 2: vertex 1 is the witness.
        let t = OrientedTree::new(3, vec![(1, 0), (1, 2)]).unwrap();
        assert_eq!(t.sinks(), vec![0, 2]);
        assert_eq!(t.double_out_on_path(0, 2), Some(1));
        // Exhaustive: every enumerated tree with two sinks has a witness.
        for t in enumerate_oriented_trees(5).unwrap() {
            let sinks = t.sinks();
            if sinks.len() >= 2 {
                let w = t
                    .double_out_on_path(sinks[0], sinks[1])
                    .expect("witness exists");
                assert!(t.out_degrees()[w] >= 2);
            }
        }
    }
}
