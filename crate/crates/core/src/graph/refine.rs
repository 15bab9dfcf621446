//! Individualization and refinement.
//!
//! Colour refinement replaces each vertex colour by the pair (own colour,
//! sorted multiset of neighbour colours) and renumbers colours in sorted
//! order of these signatures, so the numbering depends only on the
//! structure. Two colourings are compared round by round through their
//! signature histograms; any difference proves no colour-preserving
//! isomorphism exists below that node. The search individualizes one vertex
//! of the first non-singleton cell on the source side and every vertex of
//! the matching cell on the target side, so each colour-preserving
//! isomorphism is reached at exactly one leaf.

use super::{GraphError, SimpleGraph};
use crate::perm::Permutation;

/// Largest graph accepted by [`isomorphic_small`].
pub const ISOMORPHISM_CAP: usize = 200;

/// One refinement round's histogram: for each new colour in order, its
/// size followed by its signature.
type Trace = Vec<Vec<u32>>;

fn distinct(colors: &[u32]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Refines `colors` to the coarsest equitable refinement. Each round's
/// histogram is passed to `observe`; refinement stops early (returning
/// `false`) when `observe` rejects a round.
fn refine(g: &SimpleGraph, colors: &mut [u32], mut observe: impl FnMut(usize, &[u32]) -> bool) -> bool {
    let n = g.vertex_count();
    let mut count = distinct(colors);
    let mut offsets: Vec<usize> = Vec::with_capacity(n + 1);
    let mut arena: Vec<u32> = Vec::new();
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut hist: Vec<u32> = Vec::new();
    let mut round = 0;
    loop {
        offsets.clear();
        arena.clear();
        for v in 0..n {
            offsets.push(arena.len());
            arena.push(colors[v]);
            let start = arena.len();
            arena.extend(g.neighbors(v).iter().map(|&w| colors[w as usize]));
            arena[start..].sort_unstable();
        }
        offsets.push(arena.len());
        let sig = |v: u32| &arena[offsets[v as usize]..offsets[v as usize + 1]];
        order.sort_unstable_by(|&a, &b| sig(a).cmp(sig(b)));

        hist.clear();
        let mut next = 0u32;
        let mut i = 0;
        while i < n {
            let s = sig(order[i]);
            let mut j = i;
            while j < n && sig(order[j]) == s {
                colors[order[j] as usize] = next;
                j += 1;
            }
            hist.push((j - i) as u32);
            hist.push(s.len() as u32);
            hist.extend_from_slice(s);
            next += 1;
            i = j;
        }
        if !observe(round, &hist) {
            return false;
        }
        round += 1;
        let new_count = next as usize;
        if new_count == count {
            return true;
        }
        count = new_count;
    }
}

fn refine_recording(g: &SimpleGraph, colors: &mut [u32]) -> Trace {
    let mut trace = Vec::new();
    refine(g, colors, |_, h| {
        trace.push(h.to_vec());
        true
    });
    trace
}

fn refine_matching(g: &SimpleGraph, colors: &mut [u32], trace: &Trace) -> bool {
    let mut rounds = 0;
    let ok = refine(g, colors, |round, h| {
        rounds = round + 1;
        trace.get(round).is_some_and(|t| t.as_slice() == h)
    });
    ok && rounds == trace.len()
}

struct Search<'a, F: FnMut(&[u32]) -> bool> {
    g1: &'a SimpleGraph,
    g2: &'a SimpleGraph,
    /// Receives each leaf's vertex map; returns `true` to stop the search.
    leaf: F,
}

impl<F: FnMut(&[u32]) -> bool> Search<'_, F> {
    fn explore(&mut self, c1: &[u32], c2: &[u32]) -> bool {
        let k = c1.iter().max().map_or(0, |&m| m + 1);
        let mut sizes = vec![0u32; k as usize];
        for &c in c1 {
            sizes[c as usize] += 1;
        }
        let Some(cell) = sizes.iter().position(|&s| s > 1) else {
            let mut by_color = vec![0u32; k as usize];
            for (v, &c) in c2.iter().enumerate() {
                by_color[c as usize] = v as u32;
            }
            let map: Vec<u32> = c1.iter().map(|&c| by_color[c as usize]).collect();
            return (self.leaf)(&map);
        };
        let cell = cell as u32;
        let s = c1.iter().position(|&c| c == cell).expect("cell is nonempty");
        let mut s1 = c1.to_vec();
        s1[s] = k;
        let trace = refine_recording(self.g1, &mut s1);
        for t in (0..c2.len()).filter(|&t| c2[t] == cell) {
            let mut s2 = c2.to_vec();
            s2[t] = k;
            if refine_matching(self.g2, &mut s2, &trace) && self.explore(&s1, &s2) {
                return true;
            }
        }
        false
    }
}

/// A vertex bijection `p` with `{p(u), p(v)}` an edge of `g2` for every
/// edge `{u, v}` of `g1`, if one exists.
pub fn isomorphic_small(g1: &SimpleGraph, g2: &SimpleGraph) -> Result<Option<Permutation>, GraphError> {
    for g in [g1, g2] {
        if g.vertex_count() > ISOMORPHISM_CAP {
            return Err(GraphError::SizeCap {
                what: "isomorphism input",
                size: g.vertex_count(),
                cap: ISOMORPHISM_CAP,
            });
        }
    }
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let mut c1 = vec![0u32; n];
    let mut c2 = vec![0u32; n];
    let trace = refine_recording(g1, &mut c1);
    if !refine_matching(g2, &mut c2, &trace) {
        return Ok(None);
    }
    let mut found = None;
    let mut search = Search {
        g1,
        g2,
        leaf: |map: &[u32]| {
            let ok = g1
                .edges()
                .iter()
                .all(|&(u, v)| g2.has_edge(map[u] as usize, map[v] as usize));
            if ok {
                found = Some(Permutation::from_images(map.to_vec()).expect("leaf map is a bijection"));
            }
            ok
        },
    };
    search.explore(&c1, &c2);
    Ok(found)
}

/// Every automorphism of `g` fixing `v`, identity first.
pub fn automorphisms_fixing(g: &SimpleGraph, v: usize, cap: usize) -> Result<Vec<Permutation>, GraphError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(GraphError::SizeCap {
            what: "automorphism search input",
            size: n,
            cap,
        });
    }
    if v >= n {
        return Err(GraphError::OutOfRange { vertex: v, count: n });
    }
    let mut colors = vec![0u32; n];
    colors[v] = 1;
    refine_recording(g, &mut colors);
    let mut found = Vec::new();
    let mut search = Search {
        g1: g,
        g2: g,
        leaf: |map: &[u32]| {
            let p = Permutation::from_images(map.to_vec()).expect("leaf map is a bijection");
            if g.is_automorphism(&p) {
                found.push(p);
            }
            false
        },
    };
    search.explore(&colors, &colors);
    Ok(found)
}
