use std::collections::BTreeSet;

use ncg_core::graph::{
    automorphisms_fixing, cycle_graph, decode_graph6, encode_graph6, isomorphic_small, k33, lcf_graph, pappus,
    GraphError, SimpleGraph, PAPPUS_GRAPH6,
};
use ncg_core::kgroup::KParams;
use ncg_core::perm::{GeneratedGroup, Permutation};
use ncg_core::voltage::ncg_cover;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(rng: &mut ChaCha8Rng) -> SimpleGraph {
    let n = rng.gen_range(0..=120);
    let density = rng.gen_range(0.0..0.5);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edges(n, &edges).unwrap()
}

fn random_relabel(g: &SimpleGraph, rng: &mut ChaCha8Rng) -> (SimpleGraph, Permutation) {
    let mut images: Vec<usize> = (0..g.vertex_count()).collect();
    images.shuffle(rng);
    let p = Permutation::from_usize_images(&images).unwrap();
    (g.relabel(&p), p)
}

#[test]
fn graph6_round_trip_on_seeded_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let g = random_graph(&mut rng);
        let text = encode_graph6(&g).unwrap();
        assert_eq!(decode_graph6(&text).unwrap(), g);
        assert_eq!(decode_graph6(&format!(">>graph6<<{text}\n")).unwrap(), g);
    }
}

#[test]
fn graph6_fixed_strings() {
    assert_eq!(encode_graph6(&k33()).unwrap(), "EFz_");
    assert_eq!(encode_graph6(&cycle_graph(6)).unwrap(), "EhEG");
    assert_eq!(decode_graph6(PAPPUS_GRAPH6).unwrap(), pappus());
    assert!(matches!(decode_graph6("EFz"), Err(GraphError::Graph6(_))));
    assert!(matches!(decode_graph6("EFz_?"), Err(GraphError::Graph6(_))));
    let big = decode_graph6(&encode_graph6(&cycle_graph(100)).unwrap()).unwrap();
    assert_eq!(big, cycle_graph(100));
}

#[test]
fn edge_list_input() {
    let g = SimpleGraph::parse_edge_list("# K3,3\n0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n", None).unwrap();
    assert_eq!(g, k33());
    assert!(matches!(SimpleGraph::parse_edge_list("0 0\n", None), Err(GraphError::Loop(0))));
    assert!(SimpleGraph::parse_edge_list("0 1\n1 0\n", None).is_err());
    assert!(SimpleGraph::parse_edge_list("0 x\n", None).is_err());
    assert!(SimpleGraph::parse_edge_list("0 5\n", Some(3)).is_err());
}

#[test]
fn predicates_of_fixtures() {
    let p = k33().predicates();
    assert!(p.is_cubic && p.is_connected && p.is_bipartite);
    assert_eq!(p.girth, Some(4));
    let parts = p.parts.unwrap();
    assert_eq!(parts, [vec![0, 1, 2], vec![3, 4, 5]]);
    let p = pappus().predicates();
    assert!(p.is_cubic && p.is_connected && p.is_bipartite);
    assert_eq!(p.girth, Some(6));
    assert_eq!(cycle_graph(7).girth(), Some(7));
    assert!(!cycle_graph(7).predicates().is_bipartite);
    let forest = SimpleGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
    assert_eq!(forest.girth(), None);
    assert_eq!(forest.component_count(), 2);
}

#[test]
fn girth_matches_brute_force() {
    // shortest cycle through each edge: distance between its ends without that edge, plus one
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let g = random_graph(&mut rng);
        let mut best: Option<usize> = None;
        for (u, v) in g.edges() {
            let others: Vec<(usize, usize)> = g.edges().into_iter().filter(|&e| e != (u, v)).collect();
            let h = SimpleGraph::from_edges(g.vertex_count(), &others).unwrap();
            let mut dist = vec![usize::MAX; h.vertex_count()];
            dist[u] = 0;
            let mut queue = std::collections::VecDeque::from([u]);
            while let Some(x) = queue.pop_front() {
                for &y in h.neighbors(x) {
                    if dist[y as usize] == usize::MAX {
                        dist[y as usize] = dist[x] + 1;
                        queue.push_back(y as usize);
                    }
                }
            }
            if dist[v] != usize::MAX {
                best = Some(best.map_or(dist[v] + 1, |b: usize| b.min(dist[v] + 1)));
            }
        }
        assert_eq!(g.girth(), best);
    }
}

#[test]
fn fundamental_cycles_are_closed_walks() {
    let g = pappus();
    let sp = g.spanning_tree(0).unwrap();
    let cycles = g.fundamental_cycles(&sp);
    assert_eq!(cycles.len(), g.edge_count() - g.vertex_count() + 1);
    for c in &cycles {
        assert_eq!(c.vertices.first(), c.vertices.last());
        g.check_walk(&c.vertices).unwrap();
    }
}

#[test]
fn quotient_by_trivial_group_is_the_graph() {
    let g = pappus();
    let (q, classes) = g.quotient_by(&GeneratedGroup::trivial(18)).unwrap();
    assert_eq!(q, g);
    assert_eq!(classes, (0..18).collect::<Vec<_>>());
}

#[test]
fn quotient_rejects_bad_actions() {
    let g = k33();
    let not_semiregular = GeneratedGroup::new(6, vec![Permutation::from_cycles(6, &[&[0, 1]]).unwrap()]).unwrap();
    assert!(matches!(g.quotient_by(&not_semiregular), Err(GraphError::NotSemiregular)));
    let swap_parts = GeneratedGroup::new(6, vec![Permutation::from_cycles(6, &[&[0, 3], &[1, 4], &[2, 5]]).unwrap()])
        .unwrap();
    assert!(matches!(g.quotient_by(&swap_parts), Err(GraphError::EdgeInsideOrbit)));
}

#[test]
fn cover_quotients_are_the_base_graph() {
    for (n, r) in [(7, 2), (13, 3)] {
        let p = KParams::new(n, r).unwrap();
        let cover = ncg_cover(&p).unwrap();
        let k = cover.translation_group(&[p.a(), p.b(), p.c(), p.h()]);
        let (q, classes) = cover.graph().quotient_by(&k).unwrap();
        assert_eq!(q, k33());
        for v in (0..cover.graph().vertex_count()).step_by(97) {
            assert_eq!(classes[v], cover.label(v).0);
        }
        let sylow = cover.translation_group(&[p.a(), p.b(), p.c()]);
        let (q, _) = cover.graph().quotient_by(&sylow).unwrap();
        assert!(isomorphic_small(&q, &pappus()).unwrap().is_some());
    }
}

#[test]
fn isomorphism_on_relabelled_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for g in [k33(), pappus(), cycle_graph(9), lcf_graph(20, &[5, -5]).unwrap()] {
        for _ in 0..5 {
            let (h, _) = random_relabel(&g, &mut rng);
            let iso = isomorphic_small(&g, &h).unwrap().unwrap();
            assert_eq!(g.relabel(&iso), h);
        }
    }
    let prism = lcf_graph(6, &[3, 3]).unwrap();
    let prism2 = SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
        .unwrap();
    assert_eq!(prism, k33().relabel(&isomorphic_small(&k33(), &prism).unwrap().unwrap()));
    assert!(isomorphic_small(&k33(), &prism2).unwrap().is_none());
    assert!(isomorphic_small(&cycle_graph(6), &SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap())
        .unwrap()
        .is_none());
}

/// All automorphisms by trying every permutation.
fn brute_automorphisms(g: &SimpleGraph) -> Vec<Permutation> {
    fn extend(g: &SimpleGraph, images: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let v = images.len();
        if v == g.vertex_count() {
            out.push(Permutation::from_usize_images(images).unwrap());
            return;
        }
        for w in 0..g.vertex_count() {
            if used[w] {
                continue;
            }
            let ok = (0..v).all(|u| g.has_edge(u, v) == g.has_edge(images[u], w));
            if ok {
                used[w] = true;
                images.push(w);
                extend(g, images, used, out);
                images.pop();
                used[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(g, &mut Vec::new(), &mut vec![false; g.vertex_count()], &mut out);
    out
}

#[test]
fn automorphism_search_matches_brute_force() {
    let graphs = [
        k33(),
        cycle_graph(7),
        lcf_graph(6, &[3, 3]).unwrap(),
        lcf_graph(8, &[3, -3]).unwrap(),
        SimpleGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).unwrap(),
    ];
    for g in graphs {
        let all = brute_automorphisms(&g);
        for v in 0..g.vertex_count() {
            let found: BTreeSet<Vec<u32>> = automorphisms_fixing(&g, v, 100)
                .unwrap()
                .iter()
                .map(|p| p.images().to_vec())
                .collect();
            let brute: BTreeSet<Vec<u32>> = all.iter().filter(|p| p.apply(v) == v).map(|p| p.images().to_vec()).collect();
            assert_eq!(found, brute);
        }
    }
    assert_eq!(brute_automorphisms(&k33()).len(), 72);
    assert_eq!(automorphisms_fixing(&pappus(), 0, 100).unwrap().len(), 12);
    assert!(matches!(
        automorphisms_fixing(&k33(), 0, 5),
        Err(GraphError::SizeCap { .. })
    ));
}

#[test]
fn pappus_is_an_lcf_graph() {
    let lcf = lcf_graph(18, &[5, 7, -7, 7, -7, -5]).unwrap();
    assert!(isomorphic_small(&lcf, &pappus()).unwrap().is_some());
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn graph6_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng);
        prop_assert_eq!(decode_graph6(&encode_graph6(&g).unwrap()).unwrap(), g);
    }

    #[test]
    fn relabelling_preserves_predicates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng);
        let (h, p) = random_relabel(&g, &mut rng);
        prop_assert_eq!(g.edge_count(), h.edge_count());
        prop_assert_eq!(g.girth(), h.girth());
        prop_assert_eq!(g.component_count(), h.component_count());
        prop_assert_eq!(g.predicates().is_bipartite, h.predicates().is_bipartite);
        for (u, v) in g.edges() {
            prop_assert!(h.has_edge(p.apply(u), p.apply(v)));
        }
    }
}
