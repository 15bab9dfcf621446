//! Simple undirected graphs on `{0, ..., n - 1}`.

mod fixtures;
mod graph6;
mod refine;

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::perm::{GeneratedGroup, Permutation};

pub use fixtures::{cycle_graph, k33, lcf_graph, pappus, K33_NAMES, PAPPUS_GRAPH6};
pub use graph6::{decode_graph6, encode_graph6};
pub use refine::{automorphisms_fixing, isomorphic_small, ISOMORPHISM_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("edge {{{0}, {1}}} listed twice")]
    Duplicate(usize, usize),
    #[error("vertex {vertex} out of range for {count} vertices")]
    OutOfRange { vertex: usize, count: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("group action is not semiregular")]
    NotSemiregular,
    #[error("an edge joins two vertices of the same orbit")]
    EdgeInsideOrbit,
    #[error("malformed graph6: {0}")]
    Graph6(String),
    #[error("malformed edge list line {line}: {reason}")]
    EdgeList { line: usize, reason: String },
    #[error("{what} has {size} vertices, above the cap {cap}")]
    SizeCap { what: &'static str, size: usize, cap: usize },
    #[error("invalid spanning tree: {0}")]
    BadTree(String),
    #[error("walk steps along a non-edge {0} -> {1}")]
    NotAWalk(usize, usize),
}

/// Adjacency in compressed form with each neighbor list sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    offsets: Vec<u32>,
    adjacency: Vec<u32>,
}

impl SimpleGraph {
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut degree = vec![0u32; vertex_count];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::OutOfRange {
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        offsets.push(0u32);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill: Vec<u32> = offsets[..vertex_count].to_vec();
        let mut adjacency = vec![0u32; 2 * edges.len()];
        for &(u, v) in edges {
            adjacency[fill[u] as usize] = v as u32;
            fill[u] += 1;
            adjacency[fill[v] as usize] = u as u32;
            fill[v] += 1;
        }
        for v in 0..vertex_count {
            let list = &mut adjacency[offsets[v] as usize..offsets[v + 1] as usize];
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (v.min(w[0] as usize), v.max(w[0] as usize));
                return Err(GraphError::Duplicate(a, b));
            }
        }
        Ok(SimpleGraph { offsets, adjacency })
    }

    /// Parses lines of the form `u v`; blank lines and `#` comments are skipped.
    /// Without an explicit count the graph has `max index + 1` vertices.
    pub fn parse_edge_list(text: &str, vertex_count: Option<usize>) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |reason: &str| GraphError::EdgeList {
                line: i + 1,
                reason: reason.to_string(),
            };
            if fields.len() != 2 {
                return Err(bad("expected two vertex indices"));
            }
            let u = fields[0].parse::<usize>().map_err(|_| bad("not an index"))?;
            let v = fields[1].parse::<usize>().map_err(|_| bad("not an index"))?;
            edges.push((u, v));
        }
        let count = vertex_count.unwrap_or_else(|| {
            edges
                .iter()
                .map(|&(u, v)| u.max(v) + 1)
                .max()
                .unwrap_or(0)
        });
        Self::from_edges(count, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() {
            for &v in self.neighbors(u) {
                if u < v as usize {
                    out.push((u, v as usize));
                }
            }
        }
        out
    }

    /// Both orientations of every edge, sorted.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.adjacency.len());
        for u in 0..self.vertex_count() {
            for &v in self.neighbors(u) {
                out.push((u, v as usize));
            }
        }
        out
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.degree() == self.vertex_count()
            && (0..self.vertex_count()).all(|u| {
                let pu = p.apply(u);
                self.degree(pu) == self.degree(u)
                    && self
                        .neighbors(u)
                        .iter()
                        .all(|&v| self.has_edge(pu, p.apply(v as usize)))
            })
    }

    /// The graph with vertex `v` renamed `p(v)`.
    pub fn relabel(&self, p: &Permutation) -> SimpleGraph {
        let edges: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (p.apply(u), p.apply(v)))
            .collect();
        SimpleGraph::from_edges(self.vertex_count(), &edges).expect("relabelling keeps the graph simple")
    }

    pub fn predicates(&self) -> Predicates {
        let n = self.vertex_count();
        let is_cubic = (0..n).all(|v| self.degree(v) == 3);
        let components = self.component_count();
        let coloring = self.two_coloring();
        let parts = coloring.map(|colors| {
            let mut parts = [Vec::new(), Vec::new()];
            for (v, &c) in colors.iter().enumerate() {
                parts[c as usize].push(v);
            }
            parts
        });
        Predicates {
            is_cubic,
            is_connected: components <= 1,
            is_bipartite: parts.is_some(),
            parts,
            girth: self.girth(),
        }
    }

    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w as usize);
                    }
                }
            }
        }
        count
    }

    /// A proper 2-colouring, each component starting from colour 0 at its
    /// smallest vertex, if one exists.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let n = self.vertex_count();
        let mut color = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    let w = w as usize;
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    /// Length of a shortest cycle; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best = usize::MAX;
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![u32::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            dist[s] = 0;
            touched.push(s);
            queue.push_back(s);
            'bfs: while let Some(u) = queue.pop_front() {
                if 2 * dist[u] as usize + 1 >= best {
                    break;
                }
                for &w in self.neighbors(u) {
                    let w = w as usize;
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u as u32;
                        touched.push(w);
                        queue.push_back(w);
                    } else if parent[u] != w as u32 {
                        best = best.min((dist[u] + dist[w] + 1) as usize);
                        if 2 * dist[u] as usize + 1 >= best {
                            break 'bfs;
                        }
                    }
                }
            }
            queue.clear();
            for &t in &touched {
                dist[t] = u32::MAX;
                parent[t] = u32::MAX;
            }
            touched.clear();
        }
        (best != usize::MAX).then_some(best)
    }

    /// Breadth-first spanning tree, neighbors taken in ascending order.
    /// Cotree arcs are oriented from smaller to larger endpoint and sorted.
    pub fn spanning_tree(&self, root: usize) -> Result<SpanningData, GraphError> {
        let n = self.vertex_count();
        if root >= n {
            return Err(GraphError::OutOfRange {
                vertex: root,
                count: n,
            });
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut tree_arcs = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    tree_arcs.push((u, w));
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(GraphError::Disconnected);
        }
        let cotree_arcs = self
            .edges()
            .into_iter()
            .filter(|&(u, v)| parent[v] != Some(u) && parent[u] != Some(v))
            .collect();
        Ok(SpanningData {
            root,
            parent,
            tree_arcs,
            cotree_arcs,
        })
    }

    /// A spanning tree with the given edges. Cotree arcs follow
    /// `cotree_order` (which must list every non-tree edge once, in either
    /// orientation); with an empty order the default orientation and sorting apply.
    pub fn pinned_spanning_tree(
        &self,
        root: usize,
        tree_edges: &[(usize, usize)],
        cotree_order: &[(usize, usize)],
    ) -> Result<SpanningData, GraphError> {
        let n = self.vertex_count();
        let bad = |s: &str| GraphError::BadTree(s.to_string());
        if root >= n || tree_edges.len() + 1 != n {
            return Err(bad("wrong number of tree edges"));
        }
        for &(u, v) in tree_edges {
            if !self.has_edge(u, v) {
                return Err(GraphError::NotAWalk(u, v));
            }
        }
        let tree = SimpleGraph::from_edges(n, tree_edges)?;
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut tree_arcs = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &w in tree.neighbors(u) {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    tree_arcs.push((u, w));
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(bad("tree edges do not span the graph"));
        }
        let is_tree = |u: usize, v: usize| parent[v] == Some(u) || parent[u] == Some(v);
        let non_tree: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .filter(|&(u, v)| !is_tree(u, v))
            .collect();
        let cotree_arcs = if cotree_order.is_empty() {
            non_tree
        } else {
            let mut listed: Vec<(usize, usize)> = cotree_order
                .iter()
                .map(|&(u, v)| (u.min(v), u.max(v)))
                .collect();
            listed.sort_unstable();
            if listed != non_tree {
                return Err(bad("cotree order does not list exactly the non-tree edges"));
            }
            cotree_order.to_vec()
        };
        Ok(SpanningData {
            root,
            parent,
            tree_arcs,
            cotree_arcs,
        })
    }

    /// One closed walk per cotree arc `(t, h)`: tree path from the root to
    /// `t`, the arc, then the tree path from `h` back to the root.
    pub fn fundamental_cycles(&self, sp: &SpanningData) -> Vec<ClosedWalk> {
        sp.cotree_arcs
            .iter()
            .map(|&(t, h)| {
                let mut vertices = sp.tree_path(t);
                let mut back = sp.tree_path(h);
                back.reverse();
                vertices.extend(back);
                ClosedWalk { vertices }
            })
            .collect()
    }

    /// Quotient by the orbits of a semiregular group. Orbits are numbered
    /// by their smallest vertex; the second value maps vertices to orbits.
    pub fn quotient_by(&self, group: &GeneratedGroup) -> Result<(SimpleGraph, Vec<usize>), GraphError> {
        let n = self.vertex_count();
        if group.degree() != n {
            return Err(GraphError::OutOfRange {
                vertex: group.degree(),
                count: n,
            });
        }
        let orbits = group.orbits();
        let order = group.order();
        if orbits.iter().any(|o| o.len() as u128 != order) {
            return Err(GraphError::NotSemiregular);
        }
        let mut class = vec![0usize; n];
        for (i, o) in orbits.iter().enumerate() {
            for &v in o {
                class[v] = i;
            }
        }
        let mut edges = Vec::new();
        for (u, v) in self.edges() {
            let (a, b) = (class[u], class[v]);
            if a == b {
                return Err(GraphError::EdgeInsideOrbit);
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        edges.dedup();
        let q = SimpleGraph::from_edges(orbits.len(), &edges)?;
        Ok((q, class))
    }

    /// The sequence of vertices is a walk in this graph.
    pub fn check_walk(&self, vertices: &[usize]) -> Result<(), GraphError> {
        for w in vertices.windows(2) {
            if !self.has_edge(w[0], w[1]) {
                return Err(GraphError::NotAWalk(w[0], w[1]));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub is_cubic: bool,
    pub is_connected: bool,
    pub is_bipartite: bool,
    pub parts: Option<[Vec<usize>; 2]>,
    /// `None` stands for infinite girth.
    pub girth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningData {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    /// `(parent, child)` in discovery order.
    pub tree_arcs: Vec<(usize, usize)>,
    pub cotree_arcs: Vec<(usize, usize)>,
}

impl SpanningData {
    /// Vertices on the tree path from the root to `v`.
    pub fn tree_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedWalk {
    pub vertices: Vec<usize>,
}

impl ClosedWalk {
    /// The walk with every vertex replaced by its image.
    pub fn image(&self, p: &Permutation) -> ClosedWalk {
        ClosedWalk {
            vertices: self.vertices.iter().map(|&v| p.apply(v)).collect(),
        }
    }
}
