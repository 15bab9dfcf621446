use ncg_core::graph::k33;
use ncg_core::kgroup::{GeneratorImages, KParams};
use ncg_core::perm::{GeneratedGroup, Permutation};
use ncg_core::voltage::{
    base_automorphisms, construct_lift, lift_test, lifted_group, ncg_assignment, ncg_cover,
    ncg_spanning_tree, table1_report, ArcVoltage, CoverGraph, VoltageAssignment, VoltageError, VoltageGroup,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p7() -> KParams {
    KParams::new(7, 2).unwrap()
}

fn images(p: &KParams, words: [&str; 4]) -> GeneratorImages {
    let w = |s: &str| p.parse_word(s).unwrap();
    GeneratorImages {
        a: w(words[0]),
        b: w(words[1]),
        c: w(words[2]),
        h: w(words[3]),
    }
}

#[test]
fn table_rows_match_for_both_roots() {
    for (n, r) in [(7, 2), (7, 4), (13, 3), (13, 9), (19, 7)] {
        let p = KParams::new(n, r).unwrap();
        let t = table1_report(&p);
        assert_eq!(t.rows.len(), 16);
        for row in &t.rows {
            assert!(row.matches, "n={n} r={r}: {row:?}");
        }
    }
}

#[test]
fn specific_table_entries() {
    let p = p7();
    let t = table1_report(&p);
    let find = |auto: &str, cycle: &str| {
        t.rows
            .iter()
            .find(|r| r.automorphism == auto && r.cycle == cycle)
            .unwrap()
    };
    let r = find("alpha1", "uyvx");
    assert_eq!(r.image_walk, "vywx");
    assert_eq!(r.voltage, p.parse_word("h^-1 a^r b^-r c^-r^2").unwrap());
    let r = find("beta", "uzwx");
    assert_eq!(r.image_walk, "xwzu");
    assert_eq!(r.voltage, p.parse_word("h a^-r").unwrap());
    let r = find("delta", "uzwy");
    assert_eq!(r.image_walk, "xvzw");
    assert_eq!(r.voltage, p.parse_word("h a b^-r").unwrap());
    let r = find("alpha1", "uyvz");
    assert_eq!(r.voltage, p.parse_word("h c^{-r}").unwrap());
}

#[test]
fn walk_voltages() {
    let p = p7();
    let va = ncg_assignment(&p);
    assert_eq!(va.walk_voltage(&[0, 4, 1, 5, 0]).unwrap(), p.h());
    assert_eq!(va.walk_voltage(&[0]).unwrap(), p.identity());
    assert!(va.walk_voltage(&[0, 1]).is_err());
}

#[test]
fn lifts_of_generators() {
    for (n, r) in [(7, 2), (7, 4), (13, 3)] {
        let p = KParams::new(n, r).unwrap();
        let va = ncg_assignment(&p);
        let sp = ncg_spanning_tree();
        let expected = [
            ("alpha1", Some(["b^{-r}c^{-1}", "a^r b^{-r} c^r", "c^r", "h c^{-r}"])),
            ("alpha2", Some(["a^{-r^2}b^{r^2}c", "b^{r^2}", "a^{-r}b^{-1}", "h b"])),
            ("beta", None),
            (
                "delta",
                Some(["a^{-1}c^{r}", "a^r b^{r^2} c^{-r^2}", "a^{-r^2}b^{r^2}c^{-r^2}", "h a^{-r} b c^{r^2}"]),
            ),
        ];
        for (alpha, (name, exp)) in base_automorphisms().iter().zip(expected) {
            assert_eq!(alpha.name, name);
            let res = lift_test(&va, &sp, &alpha.perm).unwrap();
            match exp {
                Some(words) => {
                    assert!(res.lifts, "{name} should lift");
                    assert_eq!(res.images, images(&p, words), "{name}");
                }
                None => {
                    assert!(!res.lifts);
                    // the forced image of a, and the relation it breaks
                    assert_eq!(res.images.a, p.parse_word("b^-1 c^{-r^2}").unwrap());
                    assert_eq!(res.images.h, p.parse_word("h^-1 a b^{-r^2} c^{-r}").unwrap());
                    assert!(res.failed_relations.iter().any(|f| f == "a^h = a^r"));
                }
            }
        }
    }
}

#[test]
fn half_of_base_automorphisms_lift() {
    let p = p7();
    let va = ncg_assignment(&p);
    let sp = ncg_spanning_tree();
    let autos = base_automorphisms();
    let all = GeneratedGroup::new(6, autos.iter().map(|a| a.perm.clone()).collect()).unwrap();
    let liftable = GeneratedGroup::new(
        6,
        autos
            .iter()
            .filter(|a| a.name != "beta")
            .map(|a| a.perm.clone())
            .collect(),
    )
    .unwrap();
    assert_eq!(all.order(), 72);
    assert_eq!(liftable.order(), 36);
    let mut count = 0;
    let mut total = 0;
    all.for_each_element(|g| {
        total += 1;
        let lifts = lift_test(&va, &sp, g).unwrap().lifts;
        assert_eq!(lifts, liftable.contains(g).unwrap());
        count += lifts as usize;
    });
    assert_eq!((total, count), (72, 36));
}

#[test]
fn lifts_conjugate_translations() {
    let p = p7();
    let cover = ncg_cover(&p).unwrap();
    let sp = ncg_spanning_tree();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for alpha in base_automorphisms().iter().filter(|a| a.name != "beta") {
        let res = lift_test(cover.assignment(), &sp, &alpha.perm).unwrap();
        let lift = construct_lift(&cover, &sp, &alpha.perm, &res.images).unwrap();
        assert!(cover.projects_to(&lift, &alpha.perm));
        if alpha.name == "alpha1" {
            // fiber over u goes to fiber over v
            for v in cover.fiber(0) {
                assert!(cover.fiber(1).contains(&lift.apply(v)));
            }
        }
        for _ in 0..20 {
            let k = p.element_at(rng.gen_range(0..VoltageGroup::order(&p)));
            let sk = p.apply_images(&res.images, &k);
            let lhs = lift.inverse().then(&cover.translation(&k)).then(&lift);
            assert_eq!(lhs, cover.translation(&sk));
        }
    }
}

#[test]
fn cover_sizes_and_translations() {
    let p = p7();
    let cover = ncg_cover(&p).unwrap();
    let g = cover.graph();
    assert_eq!(g.vertex_count(), 6174);
    assert_eq!(g.edge_count(), 9261);
    let pred = g.predicates();
    assert!(pred.is_cubic && pred.is_connected && pred.is_bipartite);
    assert!(cover.assignment().cycle_voltages_generate(&ncg_spanning_tree()).unwrap());

    let k = cover.translation_group(&[p.a(), p.b(), p.c(), p.h()]);
    assert_eq!(k.order(), 1029);
    let orbit = k.orbit(0).unwrap();
    assert_eq!(orbit.len(), 1029);
    let all: Vec<usize> = (0..6174).collect();
    let t = k.transitivity_predicates(&all).unwrap();
    assert!(t.semiregular && !t.transitive);
    assert_eq!(k.orbits().len(), 6);
    assert_eq!(k.point_stabilizer(100).unwrap().order(), 1);
    assert_eq!(cover.translation(&p.h()).order(), 3);
    let (q, _) = g.quotient_by(&k).unwrap();
    assert_eq!(q, k33());
}

#[test]
fn lifted_group_order() {
    let p = p7();
    let cover = ncg_cover(&p).unwrap();
    let f = lifted_group(&cover, &ncg_spanning_tree()).unwrap();
    assert_eq!(f.group.order(), 37044);
    let t = f.group.orbit(0).unwrap();
    assert_eq!(t.len(), 6174);
    for g in f.group.generators() {
        assert!(cover.graph().is_automorphism(g));
    }
}

#[test]
fn connectivity_matches_generation_on_random_assignments() {
    let p = p7();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let sp = k33().spanning_tree(0).unwrap();
    let mut seen = [false; 2];
    for _ in 0..20 {
        let pool = [p.identity(), p.a(), p.h(), p.parse_word("a b").unwrap()];
        let arcs: Vec<(usize, usize, _)> = k33()
            .edges()
            .into_iter()
            .map(|(u, v)| {
                let g = if rng.gen_bool(0.5) {
                    pool[rng.gen_range(0..pool.len())]
                } else {
                    p.element_at(rng.gen_range(0..1029))
                };
                (u, v, g)
            })
            .collect();
        let va = VoltageAssignment::new(p, k33(), &arcs).unwrap();
        assert!(va.is_consistent());
        for (u, v) in k33().arcs() {
            let g = va.voltage(u, v).unwrap();
            let h = va.voltage(v, u).unwrap();
            assert_eq!(p.multiply(&g, &h), p.identity());
        }
        let generates = va.cycle_voltages_generate(&sp).unwrap();
        let cover = ncg_core::voltage::CoverGraph::build(va).unwrap();
        let connected = cover.graph().component_count() == 1;
        assert_eq!(generates, connected);
        seen[connected as usize] = true;
    }
    let _ = seen;
}

#[test]
fn identity_permutation_helper() {
    // translations by the identity are the identity permutation
    let p = p7();
    let cover = ncg_cover(&p).unwrap();
    assert_eq!(cover.translation(&p.identity()), Permutation::identity(6174));
}

#[test]
fn arc_voltage_json_round_trip() {
    let p = p7();
    let va = ncg_assignment(&p);
    let arcs = va.arc_voltages();
    assert_eq!(arcs.len(), 9);
    let text = serde_json::to_string(&arcs).unwrap();
    assert!(text.contains(r#"{"tail":0,"head":3,"voltage":[0,0,0,0]}"#));
    let back: Vec<ArcVoltage<_>> = serde_json::from_str(&text).unwrap();
    let rebuilt = VoltageAssignment::from_arc_voltages(p, k33(), &back).unwrap();
    assert_eq!(CoverGraph::build(rebuilt).unwrap().graph(), ncg_cover(&p).unwrap().graph());

    let reversed: Vec<_> = arcs
        .iter()
        .map(|a| ArcVoltage { tail: a.head, head: a.tail, voltage: p.inverse(&a.voltage) })
        .collect();
    let flipped = VoltageAssignment::from_arc_voltages(p, k33(), &reversed).unwrap();
    assert_eq!(flipped.arc_voltages(), arcs);

    let bad = [ArcVoltage { tail: 0, head: 1, voltage: p.a() }];
    assert!(matches!(VoltageAssignment::from_arc_voltages(p, k33(), &bad), Err(VoltageError::NotAnArc(0, 1))));
    let clash = [
        ArcVoltage { tail: 0, head: 3, voltage: p.a() },
        ArcVoltage { tail: 3, head: 0, voltage: p.a() },
    ];
    assert!(matches!(
        VoltageAssignment::from_arc_voltages(p, k33(), &clash),
        Err(VoltageError::Inconsistent(..))
    ));
}
