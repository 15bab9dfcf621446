use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::Serialize;

use super::orbit::SchreierTree;
use super::{PermError, Permutation, StabilizerChain};

/// A permutation group given by generators. The stabilizer chain is built
/// on first use and cached.
#[derive(Debug)]
pub struct GeneratedGroup {
    degree: usize,
    generators: Vec<Permutation>,
    base_prefix: Vec<usize>,
    chain: OnceLock<StabilizerChain>,
}

impl Clone for GeneratedGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        GeneratedGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            base_prefix: self.base_prefix.clone(),
            chain,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transitivity {
    pub transitive: bool,
    pub semiregular: bool,
    pub regular: bool,
}

impl GeneratedGroup {
    /// Identity generators are dropped.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        Ok(GeneratedGroup {
            degree,
            generators: generators.into_iter().filter(|g| !g.is_identity()).collect(),
            base_prefix: Vec::new(),
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        GeneratedGroup {
            degree,
            generators: Vec::new(),
            base_prefix: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    pub(crate) fn from_chain(generators: Vec<Permutation>, chain: StabilizerChain) -> Self {
        debug_assert!(chain.is_exact());
        GeneratedGroup {
            degree: chain.degree(),
            generators,
            base_prefix: Vec::new(),
            chain: OnceLock::from(chain),
        }
    }

    /// Requests that the chain start with these base points.
    pub fn with_base_prefix(mut self, prefix: Vec<usize>) -> Result<Self, PermError> {
        if let Some(&p) = prefix.iter().find(|&&p| p >= self.degree) {
            return Err(PermError::PointOutOfRange {
                point: p,
                degree: self.degree,
            });
        }
        self.base_prefix = prefix;
        self.chain = OnceLock::new();
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        self.chain.get_or_init(|| {
            StabilizerChain::build(self.degree, &self.generators, &self.base_prefix)
        })
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool, PermError> {
        if p.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                left: self.degree,
                right: p.degree(),
            });
        }
        Ok(self.chain().contains(p))
    }

    fn check_point(&self, point: usize) -> Result<(), PermError> {
        if point >= self.degree {
            return Err(PermError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        Ok(())
    }

    pub fn orbit(&self, point: usize) -> Result<Orbit<'_>, PermError> {
        self.check_point(point)?;
        let gens: Vec<&Permutation> = self.generators.iter().collect();
        Ok(Orbit {
            tree: SchreierTree::build(point, &gens, self.degree),
            gens,
            degree: self.degree,
        })
    }

    /// All orbits, each sorted, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let gens: Vec<&Permutation> = self.generators.iter().collect();
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if seen[p] {
                continue;
            }
            let tree = SchreierTree::build(p, &gens, self.degree);
            let mut orbit: Vec<usize> = tree.points.iter().map(|&q| q as usize).collect();
            for &q in &orbit {
                seen[q] = true;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Generators of the stabilizer of `point`.
    pub fn point_stabilizer(&self, point: usize) -> Result<GeneratedGroup, PermError> {
        self.check_point(point)?;
        if self.generators.iter().all(|g| g.apply(point) == point) {
            return Ok(self.clone());
        }
        let chain = self.chain();
        if chain.base().first() == Some(&point) {
            let sub = chain.sub_chain(1);
            return Ok(GeneratedGroup::from_chain(chain.level_generators(1), sub));
        }
        if let Some(u) = chain.transversal(0, point) {
            let gens = chain
                .level_generators(1)
                .iter()
                .map(|s| s.conjugate_by(&u))
                .collect();
            return GeneratedGroup::new(self.degree, gens);
        }
        let rebuilt = StabilizerChain::build(self.degree, &self.generators, &[point]);
        let gens = rebuilt.level_generators(1);
        Ok(GeneratedGroup::from_chain(gens, rebuilt.sub_chain(1)))
    }

    /// Transitive: the subset lies in a single orbit. Semiregular: every
    /// point of the subset has a trivial stabilizer.
    pub fn transitivity_predicates(&self, subset: &[usize]) -> Result<Transitivity, PermError> {
        let Some(&first) = subset.first() else {
            return Err(PermError::EmptySubset);
        };
        for &p in subset {
            self.check_point(p)?;
        }
        let order = self.order();
        let gens: Vec<&Permutation> = self.generators.iter().collect();
        let first_orbit = SchreierTree::build(first, &gens, self.degree);
        let transitive = subset
            .iter()
            .all(|&p| first_orbit.position_of(p).is_some());
        let mut semiregular = true;
        let mut seen = vec![false; self.degree];
        for &p in subset {
            if seen[p] {
                continue;
            }
            let tree = SchreierTree::build(p, &gens, self.degree);
            for &q in &tree.points {
                seen[q as usize] = true;
            }
            if tree.len() as u128 != order {
                semiregular = false;
                break;
            }
        }
        Ok(Transitivity {
            transitive,
            semiregular,
            regular: transitive && semiregular,
        })
    }

    pub fn for_each_element(&self, f: impl FnMut(&Permutation)) {
        self.chain().for_each_element(f)
    }

    /// Whether every conjugate of a generator by a generator of `outer` lies in `self`.
    pub fn is_normalized_by(&self, outer: &GeneratedGroup) -> bool {
        outer.generators.iter().all(|g| {
            self.generators
                .iter()
                .all(|x| self.chain().contains(&x.conjugate_by(g)))
        })
    }

    /// Whether every generator of `self` lies in `outer`.
    pub fn is_subgroup_of(&self, outer: &GeneratedGroup) -> bool {
        self.degree == outer.degree
            && self
                .generators
                .iter()
                .all(|x| outer.chain().contains(x))
    }

    /// Union of the supports of the generators.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for g in &self.generators {
            for (i, &p) in g.images().iter().enumerate() {
                if i as u32 != p {
                    s.insert(i);
                }
            }
        }
        s
    }
}

/// An orbit with its Schreier tree; transversal elements are built on request.
pub struct Orbit<'g> {
    tree: SchreierTree,
    gens: Vec<&'g Permutation>,
    degree: usize,
}

impl Orbit<'_> {
    pub fn root(&self) -> usize {
        self.tree.root()
    }

    /// Points in breadth-first discovery order.
    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        self.tree.points.iter().map(|&p| p as usize)
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, point: usize) -> bool {
        self.tree.position_of(point).is_some()
    }

    /// An element mapping the root to `point`.
    pub fn transversal(&self, point: usize) -> Option<Permutation> {
        let pos = self.tree.position_of(point)?;
        Some(self.tree.representative(pos, &self.gens, self.degree))
    }

    /// The generator word (indices into the group's generators) of the transversal element.
    pub fn word(&self, point: usize) -> Option<Vec<usize>> {
        let pos = self.tree.position_of(point)?;
        Some(self.tree.word(pos).into_iter().map(|l| l as usize).collect())
    }
}
