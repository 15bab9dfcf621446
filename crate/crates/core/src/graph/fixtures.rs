use super::{decode_graph6, GraphError, SimpleGraph};

/// Vertex names of `K_{3,3}`; parts are `{u, v, w}` and `{x, y, z}`.
pub const K33_NAMES: [&str; 6] = ["u", "v", "w", "x", "y", "z"];

/// The `Z_3`-cover of `K_{3,3}` with tree voltages 0 on `ux, uy, uz, vy, wz`
/// and voltages 1, 2, 2, 1 on the arcs `(v,z), (w,x), (v,x), (w,y)`;
/// vertex `(base, g)` has index `3 * base + g`.
pub const PAPPUS_GRAPH6: &str = "Q??????aQHEOcGQ_CgCK?SO?g_?";

pub fn k33() -> SimpleGraph {
    let mut edges = Vec::new();
    for u in 0..3 {
        for v in 3..6 {
            edges.push((u, v));
        }
    }
    SimpleGraph::from_edges(6, &edges).expect("K3,3 is simple")
}

pub fn cycle_graph(n: usize) -> SimpleGraph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::from_edges(n, &edges).expect("cycles of length at least 3 are simple")
}

/// Hamiltonian cycle `0..n` plus chords `i -- i + shifts[i mod len]`.
pub fn lcf_graph(n: usize, shifts: &[i64]) -> Result<SimpleGraph, GraphError> {
    if shifts.is_empty() {
        return Err(GraphError::BadTree("empty LCF notation".into()));
    }
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
    for i in 0..n {
        let j = (i as i64 + shifts[i % shifts.len()]).rem_euclid(n as i64) as usize;
        edges.push((i.min(j), i.max(j)));
    }
    edges.sort_unstable();
    edges.dedup();
    SimpleGraph::from_edges(n, &edges)
}

/// The Pappus graph, from the pinned graph6 string.
pub fn pappus() -> SimpleGraph {
    decode_graph6(PAPPUS_GRAPH6).expect("pinned graph6 string is valid")
}
