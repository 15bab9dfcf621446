use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::chain::ChainConfig;
use super::{two_adic_exponent_of_cycles, GeneratedGroup, PermError, Permutation, StabilizerChain};

/// Grows a subgroup one generator at a time. Intermediate chains are only
/// spot-checked; a membership answer of `true` is always correct, so an
/// element is never added twice, and `finish` completes the chain exactly.
pub(crate) struct SubgroupBuilder {
    gens: Vec<Permutation>,
    chain: StabilizerChain,
}

impl SubgroupBuilder {
    pub fn new(degree: usize) -> Self {
        SubgroupBuilder {
            gens: Vec::new(),
            chain: StabilizerChain::empty(degree, &[], ChainConfig::default()),
        }
    }

    pub fn from_group(g: &GeneratedGroup) -> Self {
        SubgroupBuilder {
            gens: g.generators().to_vec(),
            chain: g.chain().clone(),
        }
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.chain.contains(p)
    }

    pub fn try_add(&mut self, p: &Permutation) -> bool {
        if self.chain.contains(p) {
            return false;
        }
        self.gens.push(p.clone());
        self.chain.insert(p);
        self.chain.complete(false);
        true
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn finish(mut self) -> GeneratedGroup {
        self.chain.make_exact();
        GeneratedGroup::from_chain(self.gens, self.chain)
    }
}

fn closure_loop(builder: &mut SubgroupBuilder, group: &GeneratedGroup, start: usize) {
    let mut i = start;
    while i < builder.generators().len() {
        let x = builder.generators()[i].clone();
        for g in group.generators() {
            builder.try_add(&x.conjugate_by(g));
        }
        i += 1;
    }
}

/// The smallest normal subgroup of `group` containing `seeds`.
pub fn normal_closure(group: &GeneratedGroup, seeds: &[Permutation]) -> GeneratedGroup {
    let mut builder = SubgroupBuilder::new(group.degree());
    for s in seeds {
        builder.try_add(s);
    }
    closure_loop(&mut builder, group, 0);
    builder.finish()
}

/// All subgroups of index 2, one per nonzero linear functional on the
/// elementary abelian 2-quotient.
pub fn index_two_subgroups(group: &GeneratedGroup) -> Vec<GeneratedGroup> {
    let gens = group.generators();
    let mut seeds: Vec<Permutation> = gens.iter().map(|x| x.then(x)).collect();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            seeds.push(x.commutator(y));
        }
    }
    let n = normal_closure(group, &seeds);

    // basis of group / n over F_2, chosen greedily among the generators
    let mut span = SubgroupBuilder::from_group(&n);
    let mut basis: Vec<Permutation> = Vec::new();
    for x in gens {
        if span.try_add(x) {
            basis.push(x.clone());
        }
    }
    let d = basis.len();
    if d == 0 {
        return Vec::new();
    }
    assert!(d < 32, "2-quotient too large to enumerate");

    // coordinates of each generator: the subset of the basis it is congruent to
    let coords: Vec<u32> = gens
        .iter()
        .map(|x| {
            (0..1u32 << d)
                .find(|&mask| {
                    let mut p = x.clone();
                    for (k, b) in basis.iter().enumerate() {
                        if mask >> k & 1 == 1 {
                            p = p.then(b);
                        }
                    }
                    n.chain().contains(&p)
                })
                .expect("generator lies in the span of the basis modulo n")
        })
        .collect();

    let mut out = Vec::new();
    for f in 1..1u32 << d {
        let value = |c: u32| (c & f).count_ones() % 2;
        let x0 = gens
            .iter()
            .zip(&coords)
            .find(|(_, &c)| value(c) == 1)
            .map(|(x, _)| x)
            .expect("a generator outside the kernel");
        let mut builder = SubgroupBuilder::from_group(&n);
        for (x, &c) in gens.iter().zip(&coords) {
            if value(c) == 0 {
                builder.try_add(x);
            } else {
                builder.try_add(&x.then(x0));
            }
        }
        let sub = builder.finish();
        debug_assert_eq!(sub.order() * 2, group.order());
        out.push(sub);
    }
    out
}

/// The normal subgroup of odd order and 2-power index, if there is one.
pub fn odd_order_core(group: &GeneratedGroup) -> Result<GeneratedGroup, PermError> {
    let order = group.order();
    let two_part = 1u128 << order.trailing_zeros();
    let odd_part = |x: &Permutation| x.pow(1u64 << x.two_adic_order_exponent());

    let mut builder = SubgroupBuilder::new(group.degree());
    for x in group.generators() {
        builder.try_add(&odd_part(x));
    }
    closure_loop(&mut builder, group, 0);

    // products of generators can carry odd parts the generators alone miss
    let gens = group.generators();
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i..] {
            let before = builder.generators().len();
            builder.try_add(&odd_part(&x.then(y)));
            builder.try_add(&odd_part(&x.then(&y.inverse())));
            if builder.generators().len() > before {
                closure_loop(&mut builder, group, before);
            }
        }
    }
    let mut h = builder.finish();

    if h.order() * two_part != order && order <= 1_000_000 {
        let mut builder = SubgroupBuilder::from_group(&h);
        let mut odd_parts = Vec::new();
        group.for_each_element(|g| {
            let p = odd_part(g);
            if !builder.contains(&p) {
                builder.try_add(&p);
                odd_parts.push(p);
            }
        });
        let start = builder.generators().len() - odd_parts.len();
        closure_loop(&mut builder, group, start);
        h = builder.finish();
    }

    let h_order = h.order();
    if h_order % 2 == 0 {
        return Err(PermError::NoNormalComplement(format!(
            "odd parts generate a subgroup of even order {h_order}"
        )));
    }
    if h_order * two_part != order {
        return Err(PermError::NoNormalComplement(format!(
            "odd-order subgroup of order {h_order} has index {} which is not {two_part}",
            order / h_order
        )));
    }
    if !h.is_normalized_by(group) {
        return Err(PermError::NoNormalComplement(
            "odd-order subgroup is not normal".into(),
        ));
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sylow2Witness {
    pub max_two_element_order: u128,
    pub sylow2_order: u128,
    pub is_cyclic: bool,
    /// Every element was examined.
    pub exhaustive: bool,
}

const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

/// Largest 2-power element order, compared with the 2-part of the group
/// order. Exhaustive up to a million elements, seeded random search beyond.
pub fn cyclic_sylow2_witness(group: &GeneratedGroup, seed: u64) -> Sylow2Witness {
    let order = group.order();
    let sylow2_order = 1u128 << order.trailing_zeros();
    let mut scratch = vec![false; group.degree()];
    let mut best = 0u32;
    for g in group.generators() {
        best = best.max(two_adic_exponent_of_cycles(g.images(), &mut scratch));
    }
    let exhaustive = order <= EXHAUSTIVE_LIMIT;
    if exhaustive {
        group.for_each_element(|g| {
            best = best.max(two_adic_exponent_of_cycles(g.images(), &mut scratch));
        });
    } else if !group.generators().is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = group.generators();
        let mut x = Permutation::identity(group.degree());
        for _ in 0..4000 {
            x = x.then(&gens[rng.gen_range(0..gens.len())]);
            best = best.max(two_adic_exponent_of_cycles(x.images(), &mut scratch));
        }
    }
    let max_two_element_order = 1u128 << best;
    Sylow2Witness {
        max_two_element_order,
        sylow2_order,
        is_cyclic: max_two_element_order == sylow2_order,
        exhaustive,
    }
}
