//! Deterministic Schreier–Sims.
//!
//! Levels are completed bottom-up. A level is verified by showing that every
//! Schreier generator `u_x * s * u_{x^s}^-1` lies in the group described by
//! the levels below it. Small levels do this one generator at a time with
//! explicit transversals. Large levels whose lower group is small (the usual
//! shape for groups acting on thousands of vertices with tiny point
//! stabilizers) verify all Schreier generators at once: for each domain point
//! `p` the images `u_x(p)` over the whole orbit form one column, built in a
//! single pass over the Schreier tree, and each generator keeps a bitmask of
//! the lower-group elements it can still equal. No transversal is ever stored
//! in full for those levels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::orbit::{SchreierTree, NONE};
use super::Permutation;

const REDUCTION_ATTEMPTS: [usize; 5] = [2, 2, 2, 3, 3];
const RANDOM_PRODUCT_LENGTH: usize = 32;

#[derive(Clone, Debug)]
pub struct ChainConfig {
    /// Keep explicit transversals when `orbit length * degree` is at most this.
    pub explicit_limit: usize,
    /// Largest lower subgroup enumerated for bulk verification.
    pub sweep_candidates: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            explicit_limit: 1 << 22,
            sweep_candidates: 256,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verified {
    No,
    Sampled,
    Exact,
}

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<u32>,
    tree: SchreierTree,
    explicit: Option<Vec<Permutation>>,
    verified: Verified,
}

enum Outcome {
    Pass { exact: bool },
    Fail(Permutation, usize),
}

/// Base, strong generators, basic orbits and Schreier trees of a permutation group.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    pool: Vec<Permutation>,
    levels: Vec<Level>,
    config: ChainConfig,
}

impl StabilizerChain {
    /// Exact chain for `<generators>` with the given base prefix.
    pub fn build(degree: usize, generators: &[Permutation], base_prefix: &[usize]) -> Self {
        Self::build_with(degree, generators, base_prefix, ChainConfig::default(), true)
    }

    /// With `exact == false` the large levels are only spot-checked; the
    /// result still describes a subgroup, and `contains` answering `true` is
    /// still correct, but the order may be too small. Call
    /// [`StabilizerChain::make_exact`] before relying on it.
    pub fn build_with(
        degree: usize,
        generators: &[Permutation],
        base_prefix: &[usize],
        config: ChainConfig,
        exact: bool,
    ) -> Self {
        let mut chain = Self::empty(degree, base_prefix, config);
        if chain.levels.is_empty() {
            let first_moved = generators
                .iter()
                .filter_map(|g| g.smallest_moved_point())
                .min();
            if let Some(b) = first_moved {
                chain.push_level(b);
            }
        }
        for g in generators {
            chain.insert(g);
        }
        chain.complete(exact);
        chain
    }

    pub(crate) fn empty(degree: usize, base_prefix: &[usize], config: ChainConfig) -> Self {
        let mut chain = StabilizerChain {
            degree,
            pool: Vec::new(),
            levels: Vec::new(),
            config,
        };
        for &b in base_prefix {
            assert!(b < degree, "base point {b} out of range");
            chain.push_level(b);
        }
        chain
    }

    fn push_level(&mut self, base: usize) {
        let tree = SchreierTree::build(base, &[], self.degree);
        self.levels.push(Level {
            base: base as u32,
            gens: Vec::new(),
            tree,
            explicit: None,
            verified: Verified::No,
        });
        let l = self.levels.len() - 1;
        self.rebuild(l);
    }

    fn gens_of(&self, l: usize) -> Vec<&Permutation> {
        self.levels[l]
            .gens
            .iter()
            .map(|&i| &self.pool[i as usize])
            .collect()
    }

    fn rebuild(&mut self, l: usize) {
        let gens = self.gens_of(l);
        let tree = SchreierTree::build(self.levels[l].base as usize, &gens, self.degree);
        let explicit = if tree.len().saturating_mul(self.degree) <= self.config.explicit_limit {
            Some(tree.all_representatives(&gens, self.degree))
        } else {
            None
        };
        let level = &mut self.levels[l];
        level.tree = tree;
        level.explicit = explicit;
    }

    /// Adds `g` as a generator without completing the chain. Returns whether
    /// `g` was new to the current (possibly incomplete) chain.
    pub(crate) fn insert(&mut self, g: &Permutation) -> bool {
        assert_eq!(g.degree(), self.degree, "degree mismatch");
        if g.is_identity() {
            return false;
        }
        let (res, j) = self.sift_from(g.clone(), 0);
        if res.is_identity() {
            return false;
        }
        self.add_strong(res, 0, j);
        true
    }

    fn add_strong(&mut self, res: Permutation, from: usize, to: usize) {
        if to == self.levels.len() {
            let b = res
                .smallest_moved_point()
                .expect("residue of a failed sift is not the identity");
            self.push_level(b);
        }
        let idx = self.pool.len() as u32;
        self.pool.push(res);
        for l in from..=to {
            self.levels[l].gens.push(idx);
            self.rebuild(l);
        }
        for level in &mut self.levels[..=to] {
            level.verified = Verified::No;
        }
    }

    pub(crate) fn complete(&mut self, exact: bool) {
        if exact {
            self.reduce_top_generators();
        }
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let l = i as usize;
            let done = match self.levels[l].verified {
                Verified::Exact => true,
                Verified::Sampled => !exact,
                Verified::No => false,
            };
            if done {
                i -= 1;
                continue;
            }
            match self.verify_level(l, exact) {
                Outcome::Pass { exact: e } => {
                    let lower_exact = self.levels[l + 1..]
                        .iter()
                        .all(|lv| lv.verified == Verified::Exact);
                    self.levels[l].verified = if e && lower_exact {
                        Verified::Exact
                    } else {
                        Verified::Sampled
                    };
                    i -= 1;
                }
                Outcome::Fail(res, j) => {
                    self.add_strong(res, l + 1, j);
                    i = j as isize;
                }
            }
        }
    }

    /// Exact verification of a large first level checks one Schreier
    /// generator per orbit point and generator, so a long generating list is
    /// swapped for a few seeded random products, kept only when every old
    /// generator is shown to lie in the group they generate.
    fn reduce_top_generators(&mut self) {
        let Some(top) = self.levels.first() else {
            return;
        };
        if top.explicit.is_some() || top.verified == Verified::Exact || top.gens.len() <= 2 {
            return;
        }
        let old: Vec<Permutation> = self.gens_of(0).into_iter().cloned().collect();
        let base = self.base();
        let mut rng = ChaCha8Rng::seed_from_u64(old.len() as u64);
        for size in REDUCTION_ATTEMPTS {
            if size >= old.len() {
                return;
            }
            let t: Vec<Permutation> = (0..size)
                .map(|_| {
                    let mut x = Permutation::identity(self.degree);
                    for _ in 0..RANDOM_PRODUCT_LENGTH {
                        x = x.then(&old[rng.gen_range(0..old.len())]);
                    }
                    x
                })
                .collect();
            let mut candidate = StabilizerChain::empty(self.degree, &base, self.config.clone());
            for x in &t {
                candidate.insert(x);
            }
            candidate.complete(false);
            if old.iter().all(|g| candidate.contains(g)) {
                *self = candidate;
                return;
            }
        }
    }

    /// Finishes a chain built with `exact == false`.
    pub fn make_exact(&mut self) {
        self.complete(true);
    }

    pub fn is_exact(&self) -> bool {
        self.levels.iter().all(|l| l.verified == Verified::Exact)
    }

    fn rep(&self, l: usize, pos: usize) -> Permutation {
        let level = &self.levels[l];
        match &level.explicit {
            Some(reps) => reps[pos].clone(),
            None => level
                .tree
                .representative(pos, &self.gens_of(l), self.degree),
        }
    }

    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for l in start..self.levels.len() {
            let level = &self.levels[l];
            let x = g.apply(level.base as usize);
            let Some(pos) = level.tree.position_of(x) else {
                return (g, l);
            };
            if pos != 0 {
                let u = self.rep(l, pos);
                g = g.then(&u.inverse());
            }
        }
        (g, self.levels.len())
    }

    fn verify_level(&self, l: usize, exact: bool) -> Outcome {
        if self.levels[l].explicit.is_some() {
            return self.explicit_verify(l);
        }
        match self.lower_elements(l + 1, self.config.sweep_candidates) {
            Some(lower) => self.sweep_verify(l, &lower, exact),
            None => self.explicit_verify(l),
        }
    }

    fn explicit_verify(&self, l: usize) -> Outcome {
        let level = &self.levels[l];
        let tree = &level.tree;
        let gens = self.gens_of(l);
        for xpos in 0..tree.len() {
            let ux = self.rep(l, xpos);
            let x = tree.points[xpos] as usize;
            for (k, s) in gens.iter().enumerate() {
                let ypos = tree.position_of(s.apply(x)).expect("orbit is closed");
                if tree.is_tree_edge(xpos, k, ypos) {
                    continue;
                }
                let r = ux.then(s).then(&self.rep(l, ypos).inverse());
                if r.is_identity() {
                    continue;
                }
                let (res, j) = self.sift_from(r, l + 1);
                if !res.is_identity() {
                    return Outcome::Fail(res, j);
                }
            }
        }
        Outcome::Pass { exact: true }
    }

    /// Every product of transversal elements of levels `start..`, identity
    /// first, or `None` if there would be more than `cap` of them.
    fn lower_elements(&self, start: usize, cap: usize) -> Option<Vec<Permutation>> {
        let mut total: usize = 1;
        for level in &self.levels[start..] {
            total = total.checked_mul(level.tree.len())?;
            if total > cap {
                return None;
            }
        }
        let mut elems = vec![Permutation::identity(self.degree)];
        for l in (start..self.levels.len()).rev() {
            let level = &self.levels[l];
            let reps = match &level.explicit {
                Some(r) => r.clone(),
                None => level
                    .tree
                    .all_representatives(&self.gens_of(l), self.degree),
            };
            let mut next = Vec::with_capacity(elems.len() * reps.len());
            for u in &reps {
                for e in &elems {
                    next.push(e.then(u));
                }
            }
            elems = next;
        }
        Some(elems)
    }

    fn sweep_verify(&self, l: usize, lower: &[Permutation], exact: bool) -> Outcome {
        let n = self.degree;
        let level = &self.levels[l];
        let tree = &level.tree;
        let gens = self.gens_of(l);

        let mut pairs: Vec<[u32; 3]> = Vec::new();
        for xpos in 0..tree.len() {
            let x = tree.points[xpos] as usize;
            for (k, s) in gens.iter().enumerate() {
                let ypos = tree.position_of(s.apply(x)).expect("orbit is closed");
                if !tree.is_tree_edge(xpos, k, ypos) {
                    pairs.push([xpos as u32, k as u32, ypos as u32]);
                }
            }
        }
        if pairs.is_empty() {
            return Outcome::Pass { exact: true };
        }

        let cand = lower.len();
        let words = cand.div_ceil(64);
        let mut full = vec![!0u64; words];
        if cand % 64 != 0 {
            full[words - 1] = (1u64 << (cand % 64)) - 1;
        }
        let mut masks: Vec<u64> = Vec::with_capacity(pairs.len() * words);
        for _ in 0..pairs.len() {
            masks.extend_from_slice(&full);
        }

        let mut seeds: Vec<usize> = self.levels[l + 1..]
            .iter()
            .map(|lv| lv.base as usize)
            .collect();
        if exact {
            seeds.extend(0..n);
        } else {
            seeds.extend(0..n.min(16));
            let step = (n / 16).max(1);
            seeds.extend((0..n).step_by(step));
        }

        let mut seen = vec![false; n];
        let mut slot = vec![NONE; n];
        let mut cols: Vec<Vec<u32>> = Vec::new();
        let mut batch: Vec<usize> = Vec::new();
        for seed in seeds {
            if seen[seed] {
                continue;
            }
            // closure of the seed under the lower elements
            batch.clear();
            batch.push(seed);
            seen[seed] = true;
            let mut head = 0;
            while head < batch.len() {
                let p = batch[head];
                for sigma in lower {
                    let q = sigma.apply(p);
                    if !seen[q] {
                        seen[q] = true;
                        batch.push(q);
                    }
                }
                head += 1;
            }
            if cols.len() < batch.len() {
                cols.resize_with(batch.len(), Vec::new);
            }
            for (i, &q) in batch.iter().enumerate() {
                slot[q] = i as u32;
                tree.column(q, &gens, &mut cols[i]);
            }
            for &p in &batch {
                let colp = &cols[slot[p] as usize];
                for (pi, pair) in pairs.iter().enumerate() {
                    let a = gens[pair[1] as usize].images()[colp[pair[0] as usize] as usize];
                    let m = &mut masks[pi * words..(pi + 1) * words];
                    let mut alive = false;
                    for (w, word) in m.iter_mut().enumerate() {
                        let mut bits = *word;
                        let mut keep = bits;
                        while bits != 0 {
                            let j = bits.trailing_zeros() as usize;
                            bits &= bits - 1;
                            let q = lower[w * 64 + j].images()[p] as usize;
                            if cols[slot[q] as usize][pair[2] as usize] != a {
                                keep &= !(1u64 << j);
                            }
                        }
                        *word = keep;
                        alive |= keep != 0;
                    }
                    if !alive {
                        return self.fail_pair(l, pair);
                    }
                }
            }
            for &q in &batch {
                slot[q] = NONE;
            }
        }
        Outcome::Pass { exact }
    }

    fn fail_pair(&self, l: usize, pair: &[u32; 3]) -> Outcome {
        let gens = self.gens_of(l);
        let r = self
            .rep(l, pair[0] as usize)
            .then(gens[pair[1] as usize])
            .then(&self.rep(l, pair[2] as usize).inverse());
        let (res, j) = self.sift_from(r, l + 1);
        assert!(
            !res.is_identity(),
            "Schreier generator rejected by every candidate but sifts to the identity"
        );
        Outcome::Fail(res, j)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.tree.len() as u128).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base as usize).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.tree.len()).collect()
    }

    pub fn basic_orbit(&self, level: usize) -> Vec<usize> {
        self.levels[level]
            .tree
            .points
            .iter()
            .map(|&p| p as usize)
            .collect()
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.pool
    }

    /// Generators of the stabilizer of the first `level` base points.
    pub fn level_generators(&self, level: usize) -> Vec<Permutation> {
        if level >= self.levels.len() {
            return Vec::new();
        }
        self.gens_of(level).into_iter().cloned().collect()
    }

    /// Transversal element at `level` mapping that level's base point to `point`.
    pub fn transversal(&self, level: usize, point: usize) -> Option<Permutation> {
        let pos = self.levels.get(level)?.tree.position_of(point)?;
        Some(self.rep(level, pos))
    }

    /// The chain of the stabilizer of the first `from` base points.
    pub fn sub_chain(&self, from: usize) -> StabilizerChain {
        StabilizerChain {
            degree: self.degree,
            pool: self.pool.clone(),
            levels: self.levels[from.min(self.levels.len())..].to_vec(),
            config: self.config.clone(),
        }
    }

    /// Sifts `g`; returns the residue and the level where sifting stopped
    /// (`num_levels()` if it passed every level).
    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        self.sift_from(g.clone(), 0)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g).0.is_identity()
    }

    /// Visits every group element exactly once, as `h * u` with `h` in the
    /// first point stabilizer and `u` a level-0 transversal element.
    pub fn for_each_element(&self, mut f: impl FnMut(&Permutation)) {
        let id = Permutation::identity(self.degree);
        if self.levels.is_empty() {
            f(&id);
            return;
        }
        let lower = self
            .lower_elements(1, usize::MAX)
            .expect("uncapped enumeration");
        let level = &self.levels[0];
        let tree = &level.tree;
        let gens = self.gens_of(0);
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); tree.len()];
        for pos in 1..tree.len() {
            children[tree.parent[pos] as usize].push(pos as u32);
        }
        let mut out = Permutation::identity(self.degree);
        let mut stack: Vec<(usize, Permutation)> = vec![(0, id)];
        while let Some((pos, u)) = stack.pop() {
            for h in &lower {
                h.then_into(&u, &mut out);
                f(&out);
            }
            for &c in &children[pos] {
                let next = u.then(gens[tree.label[c as usize] as usize]);
                stack.push((c as usize, next));
            }
        }
    }
}
