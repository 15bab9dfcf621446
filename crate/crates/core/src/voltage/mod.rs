//! Voltage assignments and regular covers.

mod ncg;

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ClosedWalk, GraphError, SimpleGraph, SpanningData};
use crate::kgroup::{KElement, KError, KParams};
use crate::perm::{GeneratedGroup, PermError, Permutation};

pub use ncg::{
    base_automorphisms, construct_lift, lift_test, lifted_group, ncg_assignment, ncg_cover,
    ncg_spanning_tree, table1_report, BaseAutomorphism, LiftResult, LiftedGroup, Table1,
    Table1Row, NCG_COTREE_ARCS, NCG_TREE_EDGES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VoltageError {
    #[error("voltages on ({0}, {1}) and ({1}, {0}) are not mutually inverse")]
    Inconsistent(usize, usize),
    #[error("({0}, {1}) is not an arc of the base graph")]
    NotAnArc(usize, usize),
    #[error("voltage {0} is not an element of the voltage group")]
    BadVoltage(String),
    #[error("permutation is not an automorphism of the base graph")]
    NotAutomorphism,
    #[error("generator images do not define an automorphism of K")]
    NotGroupAutomorphism,
    #[error("fundamental cycle voltages do not have the expected form")]
    UnexpectedCycleVoltages,
    #[error("base automorphism {0} does not lift")]
    DoesNotLift(String),
    #[error("constructed lift fails verification: {0}")]
    BadLift(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    K(#[from] KError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// What a cover needs from its voltage group: a product with identity and
/// inverses, and a bijection with `0..order`.
pub trait VoltageGroup: Clone + Debug {
    type Element: Copy + Eq + Hash + Ord + Debug + Serialize;
    fn identity(&self) -> Self::Element;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inverse(&self, a: &Self::Element) -> Self::Element;
    fn order(&self) -> usize;
    fn index_of(&self, e: &Self::Element) -> usize;
    fn element_at(&self, index: usize) -> Self::Element;
}

impl VoltageGroup for KParams {
    type Element = KElement;
    fn identity(&self) -> KElement {
        KParams::identity(self)
    }
    fn multiply(&self, a: &KElement, b: &KElement) -> KElement {
        KParams::multiply(self, a, b)
    }
    fn inverse(&self, a: &KElement) -> KElement {
        KParams::inverse(self, a)
    }
    fn order(&self) -> usize {
        KParams::order(self) as usize
    }
    fn index_of(&self, e: &KElement) -> usize {
        KParams::index_of(self, e)
    }
    fn element_at(&self, index: usize) -> KElement {
        KParams::element_at(self, index)
    }
}

/// The cyclic group `Z_n`, written additively.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicGroup {
    pub n: u32,
}

impl VoltageGroup for CyclicGroup {
    type Element = u32;
    fn identity(&self) -> u32 {
        0
    }
    fn multiply(&self, a: &u32, b: &u32) -> u32 {
        (a + b) % self.n
    }
    fn inverse(&self, a: &u32) -> u32 {
        (self.n - a) % self.n
    }
    fn order(&self) -> usize {
        self.n as usize
    }
    fn index_of(&self, e: &u32) -> usize {
        *e as usize
    }
    fn element_at(&self, index: usize) -> u32 {
        index as u32
    }
}

/// Order of the subgroup generated by `gens`, by breadth-first closure.
pub fn generated_order<G: VoltageGroup>(group: &G, gens: &[G::Element]) -> usize {
    let mut seen = vec![false; group.order()];
    let id = group.identity();
    seen[group.index_of(&id)] = true;
    let mut queue = VecDeque::from([id]);
    let mut count = 1;
    while let Some(e) = queue.pop_front() {
        for g in gens {
            let f = group.multiply(&e, g);
            let i = group.index_of(&f);
            if !seen[i] {
                seen[i] = true;
                count += 1;
                queue.push_back(f);
            }
        }
    }
    count
}

/// One arc voltage in the JSON exchange format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcVoltage<E> {
    pub tail: usize,
    pub head: usize,
    pub voltage: E,
}

/// Voltages on both orientations of every base edge.
#[derive(Clone, Debug)]
pub struct VoltageAssignment<G: VoltageGroup> {
    group: G,
    base: SimpleGraph,
    voltages: BTreeMap<(usize, usize), G::Element>,
}

impl<G: VoltageGroup> VoltageAssignment<G> {
    /// Arcs not listed carry the identity. Listing both orientations of an
    /// edge is allowed when the two voltages are mutually inverse.
    pub fn new(
        group: G,
        base: SimpleGraph,
        arcs: &[(usize, usize, G::Element)],
    ) -> Result<Self, VoltageError> {
        let mut voltages = BTreeMap::new();
        for (u, v) in base.arcs() {
            voltages.insert((u, v), group.identity());
        }
        let mut listed: BTreeMap<(usize, usize), G::Element> = BTreeMap::new();
        for &(u, v, g) in arcs {
            if !base.has_edge(u, v) {
                return Err(VoltageError::NotAnArc(u, v));
            }
            if group.index_of(&g) >= group.order() || group.element_at(group.index_of(&g)) != g {
                return Err(VoltageError::BadVoltage(format!("{g:?}")));
            }
            let inv = group.inverse(&g);
            for (key, val) in [((u, v), g), ((v, u), inv)] {
                if let Some(prev) = listed.insert(key, val) {
                    if prev != val {
                        return Err(VoltageError::Inconsistent(key.0, key.1));
                    }
                }
                voltages.insert(key, val);
            }
        }
        Ok(VoltageAssignment {
            group,
            base,
            voltages,
        })
    }

    pub fn from_arc_voltages(
        group: G,
        base: SimpleGraph,
        arcs: &[ArcVoltage<G::Element>],
    ) -> Result<Self, VoltageError> {
        let arcs: Vec<_> = arcs.iter().map(|a| (a.tail, a.head, a.voltage)).collect();
        Self::new(group, base, &arcs)
    }

    /// One entry per edge, oriented from its smaller end.
    pub fn arc_voltages(&self) -> Vec<ArcVoltage<G::Element>> {
        self.base
            .edges()
            .into_iter()
            .map(|(tail, head)| ArcVoltage {
                tail,
                head,
                voltage: self.voltages[&(tail, head)],
            })
            .collect()
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn base(&self) -> &SimpleGraph {
        &self.base
    }

    pub fn voltage(&self, u: usize, v: usize) -> Result<G::Element, VoltageError> {
        self.voltages
            .get(&(u, v))
            .copied()
            .ok_or(VoltageError::NotAnArc(u, v))
    }

    /// `phi(v, u) * phi(u, v)` is the identity on every arc.
    pub fn is_consistent(&self) -> bool {
        self.voltages.iter().all(|(&(u, v), g)| {
            self.voltages
                .get(&(v, u))
                .is_some_and(|h| self.group.multiply(h, g) == self.group.identity())
        })
    }

    /// Product of arc voltages along a walk given by its vertices.
    pub fn walk_voltage(&self, walk: &[usize]) -> Result<G::Element, VoltageError> {
        let mut acc = self.group.identity();
        for w in walk.windows(2) {
            let g = self
                .voltages
                .get(&(w[0], w[1]))
                .ok_or(VoltageError::Graph(GraphError::NotAWalk(w[0], w[1])))?;
            acc = self.group.multiply(&acc, g);
        }
        Ok(acc)
    }

    pub fn cycle_voltages(&self, cycles: &[ClosedWalk]) -> Result<Vec<G::Element>, VoltageError> {
        cycles.iter().map(|c| self.walk_voltage(&c.vertices)).collect()
    }

    /// Whether the voltages of the fundamental cycles of `sp` generate the group.
    pub fn cycle_voltages_generate(&self, sp: &SpanningData) -> Result<bool, VoltageError> {
        let cycles = self.base.fundamental_cycles(sp);
        let gens = self.cycle_voltages(&cycles)?;
        Ok(generated_order(&self.group, &gens) == self.group.order())
    }
}

/// A regular cover; vertex `(b, g)` has index `b * |G| + index_of(g)`.
#[derive(Clone, Debug)]
pub struct CoverGraph<G: VoltageGroup> {
    assignment: VoltageAssignment<G>,
    graph: SimpleGraph,
}

impl<G: VoltageGroup> CoverGraph<G> {
    pub fn build(assignment: VoltageAssignment<G>) -> Result<Self, VoltageError> {
        if !assignment.is_consistent() {
            return Err(VoltageError::Inconsistent(0, 0));
        }
        let group = &assignment.group;
        let m = group.order();
        let base = &assignment.base;
        let mut edges = Vec::with_capacity(base.edge_count() * m);
        for (u, v) in base.edges() {
            let phi = assignment.voltage(u, v)?;
            for i in 0..m {
                let g = group.element_at(i);
                let j = group.index_of(&group.multiply(&g, &phi));
                edges.push((u * m + i, v * m + j));
            }
        }
        let graph = SimpleGraph::from_edges(base.vertex_count() * m, &edges)?;
        Ok(CoverGraph { assignment, graph })
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn assignment(&self) -> &VoltageAssignment<G> {
        &self.assignment
    }

    pub fn base(&self) -> &SimpleGraph {
        &self.assignment.base
    }

    pub fn group(&self) -> &G {
        &self.assignment.group
    }

    pub fn vertex(&self, base_vertex: usize, g: &G::Element) -> usize {
        base_vertex * self.group().order() + self.group().index_of(g)
    }

    pub fn label(&self, vertex: usize) -> (usize, G::Element) {
        let m = self.group().order();
        (vertex / m, self.group().element_at(vertex % m))
    }

    /// The fiber over each base vertex, as ranges of cover vertices.
    pub fn fiber(&self, base_vertex: usize) -> std::ops::Range<usize> {
        let m = self.group().order();
        base_vertex * m..(base_vertex + 1) * m
    }

    /// Left translation `(v, g) -> (v, k g)`.
    pub fn translation(&self, k: &G::Element) -> Permutation {
        let group = self.group();
        let m = group.order();
        let left: Vec<u32> = (0..m)
            .map(|i| group.index_of(&group.multiply(k, &group.element_at(i))) as u32)
            .collect();
        let mut images = Vec::with_capacity(self.graph.vertex_count());
        for b in 0..self.base().vertex_count() {
            images.extend(left.iter().map(|&j| (b * m) as u32 + j));
        }
        Permutation::from_images(images).expect("left translation is a bijection")
    }

    /// The group of left translations by the given elements.
    pub fn translation_group(&self, elements: &[G::Element]) -> GeneratedGroup {
        let gens = elements.iter().map(|k| self.translation(k)).collect();
        GeneratedGroup::new(self.graph.vertex_count(), gens).expect("translations share the cover's degree")
    }

    /// Whether `p` maps fibers to fibers as `alpha` maps base vertices.
    pub fn projects_to(&self, p: &Permutation, alpha: &Permutation) -> bool {
        let m = self.group().order();
        (0..self.graph.vertex_count()).all(|v| p.apply(v) / m == alpha.apply(v / m))
    }
}

/// Vertex labels of a cover, written next to exported graph files.
#[derive(Clone, Debug, Serialize)]
pub struct CoverLabels<E: Serialize> {
    pub base_vertices: Vec<String>,
    pub group_order: usize,
    pub indexing: String,
    pub labels: Vec<(String, E)>,
}

impl<G: VoltageGroup> CoverGraph<G> {
    pub fn labels(&self, base_names: &[String]) -> CoverLabels<G::Element> {
        let labels = (0..self.graph.vertex_count())
            .map(|v| {
                let (b, g) = self.label(v);
                (base_names[b].clone(), g)
            })
            .collect();
        CoverLabels {
            base_vertices: base_names.to_vec(),
            group_order: self.group().order(),
            indexing: "base_index * group_order + element_index".to_string(),
            labels,
        }
    }
}
