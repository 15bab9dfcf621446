use std::collections::{HashMap, HashSet, VecDeque};

use ncg_core::perm::{
    cyclic_sylow2_witness, index_two_subgroups, normal_closure, odd_order_core, ChainConfig, GeneratedGroup,
    PermError, Permutation, StabilizerChain,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn closure(degree: usize, gens: &[Permutation]) -> HashSet<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.then(s);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

fn random_perm(degree: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<usize> = (0..degree).collect();
    images.shuffle(rng);
    Permutation::from_usize_images(&images).unwrap()
}

fn cycles(degree: usize, cs: &[&[usize]]) -> Permutation {
    Permutation::from_cycles(degree, cs).unwrap()
}

/// Groups with brute-force element sets no larger than 10^4.
fn random_groups(seed: u64, count: usize) -> Vec<(GeneratedGroup, HashSet<Permutation>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let degree = rng.gen_range(3..=9);
        let k = rng.gen_range(1..=3);
        let mut gens: Vec<Permutation> = (0..k).map(|_| random_perm(degree, &mut rng)).collect();
        if rng.gen_bool(0.5) {
            // bias toward smaller groups with a cycle of moderate length
            let len = rng.gen_range(2..=degree.min(5));
            let pts: Vec<usize> = (0..len).collect();
            gens[0] = cycles(degree, &[&pts]);
        }
        let elems = closure_capped(degree, &gens, 10_000);
        if let Some(elems) = elems {
            out.push((GeneratedGroup::new(degree, gens).unwrap(), elems));
        }
    }
    out
}

fn closure_capped(degree: usize, gens: &[Permutation], cap: usize) -> Option<HashSet<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.then(s);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(h);
            }
        }
    }
    Some(seen)
}

#[test]
fn chain_orders_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for (g, elems) in random_groups(1, 60) {
        assert_eq!(g.order(), elems.len() as u128);
        let mut listed = HashSet::new();
        g.for_each_element(|x| {
            assert!(listed.insert(x.clone()));
        });
        assert_eq!(listed, elems);
        for _ in 0..20 {
            let p = random_perm(g.degree(), &mut rng);
            assert_eq!(g.contains(&p).unwrap(), elems.contains(&p));
        }
        let orders: u128 = g.chain().basic_orbit_lengths().iter().map(|&l| l as u128).product();
        assert_eq!(orders, g.order());
    }
}

#[test]
fn sweep_verification_matches_brute_force() {
    let config = ChainConfig {
        explicit_limit: 0,
        sweep_candidates: 256,
    };
    for (g, elems) in random_groups(2, 40) {
        let chain = StabilizerChain::build_with(g.degree(), g.generators(), &[], config.clone(), true);
        assert!(chain.is_exact());
        assert_eq!(chain.order(), elems.len() as u128);
        let mut sampled = StabilizerChain::build_with(g.degree(), g.generators(), &[], config.clone(), false);
        assert!(sampled.order() <= elems.len() as u128);
        sampled.make_exact();
        assert_eq!(sampled.order(), elems.len() as u128);
    }
}

#[test]
fn orbit_stabilizer_identity() {
    for (g, elems) in random_groups(3, 40) {
        for point in 0..g.degree() {
            let orbit = g.orbit(point).unwrap();
            let brute_orbit: HashSet<usize> = elems.iter().map(|x| x.apply(point)).collect();
            assert_eq!(orbit.len(), brute_orbit.len());
            for q in orbit.points() {
                let t = orbit.transversal(q).unwrap();
                assert_eq!(t.apply(point), q);
                assert!(elems.contains(&t));
            }
            let stab = g.point_stabilizer(point).unwrap();
            let brute_stab = elems.iter().filter(|x| x.apply(point) == point).count();
            assert_eq!(stab.order(), brute_stab as u128);
            assert_eq!(stab.order() * orbit.len() as u128, g.order());
        }
    }
}

#[test]
fn orbits_partition_the_domain() {
    for (g, elems) in random_groups(4, 30) {
        let orbits = g.orbits();
        let mut all: Vec<usize> = orbits.iter().flatten().copied().collect();
        all.sort();
        assert_eq!(all, (0..g.degree()).collect::<Vec<_>>());
        for o in &orbits {
            let brute: HashSet<usize> = elems.iter().map(|x| x.apply(o[0])).collect();
            assert_eq!(brute, o.iter().copied().collect());
        }
    }
}

/// Number of homomorphisms onto `Z_2`, found by labelling the Cayley graph.
fn brute_index_two_kernels(degree: usize, gens: &[Permutation]) -> Vec<HashSet<Permutation>> {
    let mut kernels = Vec::new();
    for f in 1..1u32 << gens.len() {
        let mut label: HashMap<Permutation, u32> = HashMap::new();
        let id = Permutation::identity(degree);
        label.insert(id.clone(), 0);
        let mut queue = VecDeque::from([id]);
        let mut ok = true;
        while let Some(g) = queue.pop_front() {
            for (k, s) in gens.iter().enumerate() {
                let h = g.then(s);
                let l = (label[&g] + (f >> k & 1)) % 2;
                match label.get(&h) {
                    Some(&old) if old != l => ok = false,
                    Some(_) => {}
                    None => {
                        label.insert(h.clone(), l);
                        queue.push_back(h);
                    }
                }
            }
        }
        if ok {
            let kernel: HashSet<Permutation> = label.into_iter().filter(|(_, l)| *l == 0).map(|(g, _)| g).collect();
            if !kernels.contains(&kernel) {
                kernels.push(kernel);
            }
        }
    }
    kernels
}

#[test]
fn index_two_subgroups_match_brute_force() {
    for (g, _) in random_groups(5, 30) {
        let found = index_two_subgroups(&g);
        let brute = brute_index_two_kernels(g.degree(), g.generators());
        assert_eq!(found.len(), brute.len());
        for h in &found {
            assert_eq!(h.order() * 2, g.order());
            let mut elems = HashSet::new();
            h.for_each_element(|x| {
                elems.insert(x.clone());
            });
            assert!(brute.contains(&elems));
        }
    }
}

fn k33_perm(name: &str) -> Permutation {
    match name {
        "a1" => cycles(6, &[&[0, 1, 2]]),
        "a2" => cycles(6, &[&[3, 4, 5]]),
        "b" => cycles(6, &[&[0, 3], &[1, 4], &[2, 5]]),
        "d" => cycles(6, &[&[1, 4, 2, 5], &[0, 3]]),
        _ => unreachable!(),
    }
}

fn k33_group(names: &[&str]) -> GeneratedGroup {
    GeneratedGroup::new(6, names.iter().map(|n| k33_perm(n)).collect()).unwrap()
}

#[test]
fn k33_groups() {
    let l = k33_group(&["a1", "a2", "d"]);
    let full = k33_group(&["a1", "a2", "b", "d"]);
    assert_eq!(l.order(), 36);
    assert_eq!(full.order(), 72);
    assert_eq!(closure(6, full.generators()).len(), 72);
    let d2 = k33_perm("d").then(&k33_perm("d"));
    assert_eq!(d2, cycles(6, &[&[1, 2], &[4, 5]]));
    assert!(!k33_group(&["a1", "a2"]).contains(&d2).unwrap());
    assert!(l.contains(&d2).unwrap());
    assert!(!l.contains(&k33_perm("b")).unwrap());
    assert!(l.is_subgroup_of(&full));
    assert!(l.is_normalized_by(&full));
    let all: Vec<usize> = (0..6).collect();
    let t = l.transitivity_predicates(&all).unwrap();
    assert!(t.transitive && !t.regular);
}

#[test]
fn k33_index_two_and_cores() {
    let l = k33_group(&["a1", "a2", "d"]);
    // L / L' is cyclic of order 4, so exactly one index-2 subgroup
    let subs = index_two_subgroups(&l);
    assert_eq!(subs.len(), 1);
    assert_eq!(subs[0].order(), 18);
    let full = k33_group(&["a1", "a2", "b", "d"]);
    assert_eq!(
        index_two_subgroups(&full).len(),
        brute_index_two_kernels(6, full.generators()).len()
    );

    let h = odd_order_core(&l).unwrap();
    assert_eq!(h.order(), 9);
    assert_eq!(h.orbits(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    let odd: Vec<_> = closure(6, l.generators())
        .into_iter()
        .filter(|x| x.order() % 2 == 1)
        .collect();
    assert_eq!(odd.len(), 9);

    let w = cyclic_sylow2_witness(&l, 0);
    assert_eq!((w.sylow2_order, w.max_two_element_order, w.is_cyclic, w.exhaustive), (4, 4, true, true));
    let w = cyclic_sylow2_witness(&full, 0);
    assert_eq!(w.sylow2_order, 8);
    assert!(!w.is_cyclic);
}

#[test]
fn odd_core_absent() {
    // Sym(4) has no normal subgroup of odd order and 2-power index
    let s4 = GeneratedGroup::new(4, vec![cycles(4, &[&[0, 1, 2, 3]]), cycles(4, &[&[0, 1]])]).unwrap();
    assert!(matches!(odd_order_core(&s4), Err(PermError::NoNormalComplement(_))));
}

#[test]
fn normal_closure_of_a_transposition_is_everything() {
    let s5 = GeneratedGroup::new(5, vec![cycles(5, &[&[0, 1, 2, 3, 4]]), cycles(5, &[&[0, 1]])]).unwrap();
    assert_eq!(normal_closure(&s5, &[cycles(5, &[&[0, 1]])]).order(), 120);
    assert_eq!(normal_closure(&s5, &[cycles(5, &[&[0, 1, 2]])]).order(), 60);
}

#[test]
fn text_and_json_forms() {
    let p = Permutation::parse_cycles("(0 1 2)(3 4 5)", 6).unwrap();
    assert_eq!(p.to_string(), "(0 1 2)(3 4 5)");
    assert_eq!(serde_json::to_string(&p).unwrap(), "[1,2,0,4,5,3]");
    assert_eq!(serde_json::from_str::<Permutation>("[1,2,0,4,5,3]").unwrap(), p);
    assert!(Permutation::parse_cycles("(0 0)", 3).is_err());
    assert!(Permutation::from_images(vec![0, 0]).is_err());
    assert_eq!(Permutation::identity(3).to_string(), "()");
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn composition_laws(seed in any::<u64>(), degree in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [p, q, r] = [0; 3].map(|_| random_perm(degree, &mut rng));
        prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
        prop_assert!(p.then(&p.inverse()).is_identity());
        for i in 0..degree {
            prop_assert_eq!(p.then(&q).apply(i), q.apply(p.apply(i)));
        }
        prop_assert_eq!(p.conjugate_by(&q), q.inverse().then(&p).then(&q));
        prop_assert!(p.pow(p.order() as u64).is_identity());
    }

    #[test]
    fn cycle_string_round_trip(seed in any::<u64>(), degree in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_perm(degree, &mut rng);
        prop_assert_eq!(Permutation::parse_cycles(&p.to_string(), degree).unwrap(), p);
    }
}
