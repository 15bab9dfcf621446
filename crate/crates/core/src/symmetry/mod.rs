//! s-arcs, arc-regular actions, edge-reversing involutions, and the
//! automorphism-group checks that certify a graph is not a Cayley graph.

mod certificate;

use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{automorphisms_fixing, isomorphic_small, pappus, GraphError, SimpleGraph};
use crate::kgroup::{KError, KParams};
use crate::perm::{index_two_subgroups, odd_order_core, GeneratedGroup, PermError, Permutation};
use crate::voltage::{CoverGraph, VoltageError};

pub use certificate::{
    certify_non_cayley, Certificate, CertifyOptions, FullAutRecord, GraphRecord, IndexTwoRecord,
    InvolutionRecord, LiftRecord, SRegularityRecord, Stage, ToolRecord, DEFAULT_VERTEX_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("x^2 + x + 1 = 0 has no solution modulo {0}")]
    NoRoot(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{what} of size {size} exceeds the cap {cap}")]
    SizeCap { what: String, size: u128, cap: u128 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Voltage(#[from] VoltageError),
}

impl From<KError> for SymmetryError {
    fn from(e: KError) -> Self {
        match e {
            KError::NoRoot(n) => SymmetryError::NoRoot(n),
            KError::SizeCap { what, size, cap } => SymmetryError::SizeCap {
                what: what.to_string(),
                size: size as u128,
                cap: cap as u128,
            },
            other => SymmetryError::InvalidParams(other.to_string()),
        }
    }
}

/// A walk `(v_0, ..., v_s)` without immediate reversals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ArcSequence {
    pub vertices: Vec<usize>,
}

impl ArcSequence {
    pub fn is_valid(&self, g: &SimpleGraph) -> bool {
        let v = &self.vertices;
        !v.is_empty()
            && v.iter().all(|&x| x < g.vertex_count())
            && v.windows(2).all(|w| g.has_edge(w[0], w[1]))
            && v.windows(3).all(|w| w[0] != w[2])
    }
}

/// Number of `s`-arcs.
pub fn count_s_arcs(g: &SimpleGraph, s: usize) -> u128 {
    let n = g.vertex_count();
    if s == 0 {
        return n as u128;
    }
    // ending[v][i]: s-arcs ending with the arc (neighbors(v)[i], v)
    let mut ending: Vec<Vec<u128>> = (0..n).map(|v| vec![1; g.degree(v)]).collect();
    for _ in 1..s {
        let mut next: Vec<Vec<u128>> = (0..n).map(|v| vec![0; g.degree(v)]).collect();
        for v in 0..n {
            let total: u128 = ending[v].iter().sum();
            for (i, &w) in g.neighbors(v).iter().enumerate() {
                // extend to (v, w), excluding walks that arrived from w
                let from_w = ending[v][i];
                let w = w as usize;
                let pos = g
                    .neighbors(w)
                    .binary_search(&(v as u32))
                    .expect("adjacency is symmetric");
                next[w][pos] += total - from_w;
            }
        }
        ending = next;
    }
    ending.iter().flatten().sum()
}

/// Calls `f` on every `s`-arc in lexicographic order.
pub fn for_each_s_arc(g: &SimpleGraph, s: usize, mut f: impl FnMut(&[usize])) {
    fn extend(g: &SimpleGraph, s: usize, path: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if path.len() == s + 1 {
            f(path);
            return;
        }
        let last = *path.last().unwrap();
        let prev = (path.len() >= 2).then(|| path[path.len() - 2]);
        for &w in g.neighbors(last) {
            if Some(w as usize) != prev {
                path.push(w as usize);
                extend(g, s, path, f);
                path.pop();
            }
        }
    }
    let mut path = Vec::with_capacity(s + 1);
    for v in 0..g.vertex_count() {
        path.push(v);
        extend(g, s, &mut path, &mut f);
        path.pop();
    }
}

/// The lexicographically first `s`-arc.
pub fn first_s_arc(g: &SimpleGraph, s: usize) -> Option<ArcSequence> {
    let mut path = vec![0usize];
    if g.vertex_count() == 0 {
        return None;
    }
    while path.len() < s + 1 {
        let last = *path.last().unwrap();
        let prev = (path.len() >= 2).then(|| path[path.len() - 2]);
        let next = g
            .neighbors(last)
            .iter()
            .map(|&w| w as usize)
            .find(|&w| Some(w) != prev)?;
        path.push(next);
    }
    Some(ArcSequence { vertices: path })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SRegularity {
    pub s: usize,
    pub arc_count: u128,
    pub orbit_size: u128,
    pub transitive_on_s_arcs: bool,
    pub regular_on_s_arcs: bool,
}

/// Orbit of the first `s`-arc under the group, compared with the arc count.
pub fn is_s_regular(group: &GeneratedGroup, g: &SimpleGraph, s: usize) -> Result<SRegularity, SymmetryError> {
    if group.degree() != g.vertex_count() {
        return Err(PermError::DegreeMismatch {
            left: group.degree(),
            right: g.vertex_count(),
        }
        .into());
    }
    let arc_count = count_s_arcs(g, s);
    let Some(start) = first_s_arc(g, s) else {
        return Ok(SRegularity {
            s,
            arc_count,
            orbit_size: 0,
            transitive_on_s_arcs: arc_count == 0,
            regular_on_s_arcs: false,
        });
    };
    let key = |v: &[usize]| v.iter().map(|&x| x as u32).collect::<Vec<u32>>();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let first = key(&start.vertices);
    seen.insert(first.clone());
    let mut queue = VecDeque::from([first]);
    while let Some(arc) = queue.pop_front() {
        for gen in group.generators() {
            let img: Vec<u32> = arc.iter().map(|&x| gen.images()[x as usize]).collect();
            if !seen.contains(&img) {
                seen.insert(img.clone());
                queue.push_back(img);
            }
        }
    }
    let orbit_size = seen.len() as u128;
    let transitive = orbit_size == arc_count;
    Ok(SRegularity {
        s,
        arc_count,
        orbit_size,
        transitive_on_s_arcs: transitive,
        regular_on_s_arcs: transitive && group.order() == arc_count,
    })
}

/// Arc orbits of the group; each orbit is listed from its smallest arc,
/// with the orbit of `first` (if given) moved to the front.
fn arc_orbit_representatives(group: &GeneratedGroup, g: &SimpleGraph, first: Option<(usize, usize)>) -> Vec<(usize, usize)> {
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut reps = Vec::new();
    let candidates = first.into_iter().chain(g.arcs());
    for arc in candidates {
        if seen.contains(&arc) {
            continue;
        }
        reps.push(arc);
        seen.insert(arc);
        let mut queue = VecDeque::from([arc]);
        while let Some((a, b)) = queue.pop_front() {
            for gen in group.generators() {
                let img = (gen.apply(a), gen.apply(b));
                if seen.insert(img) {
                    queue.push_back(img);
                }
            }
        }
    }
    reps
}

/// An element mapping arc `from` to arc `to`, found through a breadth-first
/// search of the arc orbit.
fn arc_transporter(group: &GeneratedGroup, from: (usize, usize), to: (usize, usize)) -> Option<Permutation> {
    let gens = group.generators();
    let mut parent: std::collections::HashMap<(usize, usize), ((usize, usize), usize)> =
        std::collections::HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut found = from == to;
    parent.insert(from, (from, usize::MAX));
    'search: while let Some((a, b)) = queue.pop_front() {
        for (k, gen) in gens.iter().enumerate() {
            let img = (gen.apply(a), gen.apply(b));
            if !parent.contains_key(&img) {
                parent.insert(img, ((a, b), k));
                if img == to {
                    found = true;
                    break 'search;
                }
                queue.push_back(img);
            }
        }
    }
    if !found {
        return None;
    }
    let mut word = Vec::new();
    let mut cur = to;
    while cur != from {
        let (prev, k) = parent[&cur];
        word.push(k);
        cur = prev;
    }
    word.reverse();
    let mut p = Permutation::identity(group.degree());
    for k in word {
        p = p.then(&gens[k]);
    }
    Some(p)
}

/// An involution reversing some arc, searched in the cosets `S g0` where
/// `g0` reverses an arc-orbit representative and `S` is that arc's stabilizer.
/// The pinned arc's orbit is examined first.
pub fn edge_reversing_involution(
    group: &GeneratedGroup,
    g: &SimpleGraph,
    pinned: (usize, usize),
) -> Result<Option<Permutation>, SymmetryError> {
    if !g.has_edge(pinned.0, pinned.1) {
        return Err(GraphError::NotAWalk(pinned.0, pinned.1).into());
    }
    for (v0, v1) in arc_orbit_representatives(group, g, Some(pinned)) {
        let Some(g0) = arc_transporter(group, (v0, v1), (v1, v0)) else {
            continue;
        };
        let stab = group.point_stabilizer(v0)?.point_stabilizer(v1)?;
        let mut found = None;
        stab.for_each_element(|s| {
            if found.is_none() {
                let x = s.then(&g0);
                if x.then(&x).is_identity() {
                    found = Some(x);
                }
            }
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Scans every element for an involution swapping the ends of some edge.
pub fn exhaustive_involution_scan(group: &GeneratedGroup, g: &SimpleGraph) -> Option<Permutation> {
    let mut found = None;
    group.for_each_element(|x| {
        if found.is_some() || x.is_identity() {
            return;
        }
        let reverses = (0..g.vertex_count()).any(|u| {
            let v = x.apply(u);
            v != u && x.apply(v) == u && g.has_edge(u, v)
        });
        if reverses && x.then(x).is_identity() {
            found = Some(x.clone());
        }
    });
    found
}

#[derive(Clone, Debug, Serialize)]
pub struct OneRegularSearch {
    pub applicable: bool,
    pub index_two_count: usize,
    /// Generators of each index-2 subgroup that is regular on arcs.
    #[serde(skip)]
    pub one_regular: Vec<GeneratedGroup>,
    pub one_regular_count: usize,
}

/// When `|group| = 2 * arcs`, every arc-regular subgroup has index 2, so
/// testing all index-2 subgroups is exhaustive.
pub fn find_one_regular_subgroups(group: &GeneratedGroup, g: &SimpleGraph) -> Result<OneRegularSearch, SymmetryError> {
    let arcs = count_s_arcs(g, 1);
    if group.order() != 2 * arcs {
        return Ok(OneRegularSearch {
            applicable: false,
            index_two_count: 0,
            one_regular: Vec::new(),
            one_regular_count: 0,
        });
    }
    let subs = index_two_subgroups(group);
    let mut one_regular = Vec::new();
    for sub in &subs {
        if is_s_regular(sub, g, 1)?.regular_on_s_arcs {
            one_regular.push(sub.clone());
        }
    }
    Ok(OneRegularSearch {
        applicable: true,
        index_two_count: subs.len(),
        one_regular_count: one_regular.len(),
        one_regular,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HallWitness {
    pub order: u128,
    pub index: u128,
    pub normal: bool,
    pub orbit_count: usize,
    pub orbit_sizes: Vec<usize>,
    pub orbits_are_bipartition: bool,
    /// Vertex stabilizer orders, one per orbit.
    pub stabilizer_orders: Vec<u128>,
    /// Index 4, two orbits forming the bipartition, stabilizers of order 3.
    pub structure_ok: bool,
}

pub fn hall_witness(group: &GeneratedGroup, g: &SimpleGraph) -> Result<HallWitness, SymmetryError> {
    let h = odd_order_core(group)?;
    let order = h.order();
    let orbits = h.orbits();
    let parts = g.predicates().parts;
    let orbits_are_bipartition = match &parts {
        Some([p0, p1]) => orbits.len() == 2 && ((&orbits[0] == p0 && &orbits[1] == p1) || (&orbits[0] == p1 && &orbits[1] == p0)),
        None => false,
    };
    let stabilizer_orders: Vec<u128> = orbits.iter().map(|o| order / o.len() as u128).collect();
    let index = group.order() / order;
    Ok(HallWitness {
        order,
        index,
        normal: h.is_normalized_by(group),
        orbit_count: orbits.len(),
        orbit_sizes: orbits.iter().map(|o| o.len()).collect(),
        structure_ok: index == 4 && orbits_are_bipartition && stabilizer_orders.iter().all(|&s| s == 3),
        orbits_are_bipartition,
        stabilizer_orders,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FullAutStabilizer {
    pub vertex: usize,
    pub order: u128,
    #[serde(skip)]
    pub generators: Vec<Permutation>,
}

/// Every automorphism fixing `v`, found by exhaustive individualization
/// and refinement; the order is exact.
pub fn full_aut_vertex_stabilizer(g: &SimpleGraph, v: usize, cap: usize) -> Result<FullAutStabilizer, SymmetryError> {
    let autos = automorphisms_fixing(g, v, cap)?;
    Ok(FullAutStabilizer {
        vertex: v,
        order: autos.len() as u128,
        generators: autos.into_iter().filter(|p| !p.is_identity()).collect(),
    })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PappusCheck {
    pub quotient_order: usize,
    pub connected: bool,
    pub cubic: bool,
    pub isomorphic_to_pappus: bool,
    pub passed: bool,
}

/// Quotient of the cover by the translations `t_a, t_b, t_c`, compared with
/// the Pappus graph.
pub fn pappus_quotient_check(cover: &CoverGraph<KParams>) -> Result<PappusCheck, SymmetryError> {
    let p = *cover.group();
    if !is_prime(p.n()) {
        return Err(SymmetryError::NotApplicable(format!("{} is not prime", p.n())));
    }
    let sylow = cover.translation_group(&[p.a(), p.b(), p.c()]);
    let (q, _) = cover.graph().quotient_by(&sylow)?;
    let pred = q.predicates();
    let iso = isomorphic_small(&q, &pappus())?.is_some();
    let quotient_order = q.vertex_count();
    Ok(PappusCheck {
        quotient_order,
        connected: pred.is_connected,
        cubic: pred.is_cubic,
        isomorphic_to_pappus: iso,
        passed: quotient_order == 18 && pred.is_connected && pred.is_cubic && iso,
    })
}
