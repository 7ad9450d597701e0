mod common;

use proptest::prelude::*;

use raag_core::compat::CompatibilityGraph;
use raag_core::conditions::{check_condition1, is_barbed};
use raag_core::partition::inverse_choice;
use raag_core::search::max_clique_size;
use raag_core::{
    check_conditions, classify_vertices, compatibility_graph, enumerate_partitions, max_compatible, whitehead_images,
    GeneratorWord, SignedVertexSet, SimplicialGraph, VertexSet,
};

fn graph_from_mask(n: usize, mask: u32) -> SimplicialGraph {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((names[i].clone(), names[j].clone()));
            }
            bit += 1;
        }
    }
    SimplicialGraph::from_edges(&names, &edges).unwrap()
}

fn small_graph() -> impl Strategy<Value = SimplicialGraph> {
    (1usize..=7, any::<u32>()).prop_map(|(n, mask)| graph_from_mask(n, mask))
}

fn run_suite(name: &str, g: &SimplicialGraph, cg: &CompatibilityGraph) {
    for (check, f) in common::suite() {
        if let Err(e) = f(g, cg) {
            panic!("{check} on {name}: {e}");
        }
    }
}

#[test]
fn fixture_suite_is_exhaustive_and_clean() {
    for (name, g) in common::small_fixtures() {
        let cg = compatibility_graph(&g).unwrap();
        run_suite(&name, &g, &cg);
    }
}

/// Exhaustive maximum clique by subset enumeration, for tiny node sets.
fn naive_max_clique(cg: &CompatibilityGraph, allowed: &[usize]) -> usize {
    let k = allowed.len();
    (0u64..1 << k)
        .filter(|mask| {
            let chosen: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| allowed[i]).collect();
            chosen
                .iter()
                .enumerate()
                .all(|(a, &i)| chosen[a + 1..].iter().all(|&j| cg.compatible(i, j)))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn criterion_suite_on_random_graphs(g in small_graph()) {
        let cg = compatibility_graph(&g).unwrap();
        run_suite("random graph", &g, &cg);
    }

    #[test]
    fn stars_and_components(g in small_graph()) {
        for v in g.vertices() {
            let lk = g.link(v).unwrap();
            prop_assert_eq!(g.star(v).unwrap(), lk | VertexSet::singleton(v));
            let comps = g.components_minus_star(v).unwrap();
            let mut seen = VertexSet::EMPTY;
            for c in &comps {
                prop_assert!(!c.intersects(seen));
                seen = seen | *c;
            }
            prop_assert_eq!(seen, g.all() - g.star(v).unwrap());
        }
    }

    #[test]
    fn doubled_components_follow_the_undoubled_ones(g in small_graph()) {
        for v in g.vertices() {
            let mut expected: Vec<SignedVertexSet> =
                vec![SignedVertexSet::singleton(v.pos()), SignedVertexSet::singleton(v.neg())];
            for c in g.components_minus_star(v).unwrap() {
                if c.len() == 1 {
                    let x = c.first().unwrap();
                    expected.push(SignedVertexSet::singleton(x.pos()));
                    expected.push(SignedVertexSet::singleton(x.neg()));
                } else {
                    expected.push(c.doubled());
                }
            }
            let mut got = g.doubled_components(v).unwrap();
            expected.sort();
            got.sort();
            prop_assert_eq!(got, expected);
        }
    }

    #[test]
    fn domination_order(g in small_graph()) {
        let c = classify_vertices(&g);
        for u in g.vertices() {
            prop_assert!(g.leq(u, u).unwrap());
            for v in g.vertices() {
                let uv = g.leq(u, v).unwrap();
                for w in g.vertices() {
                    if uv && g.leq(v, w).unwrap() {
                        prop_assert!(g.leq(u, w).unwrap());
                    }
                }
                // Mutual ≤ is exactly the equivalence used for classes.
                prop_assert_eq!(uv && g.leq(v, u).unwrap(), c.class_of[u.0] == c.class_of[v.0]);
                prop_assert_eq!(g.lt_circ(u, v).unwrap(), c.dominators[u.0].contains(v));
            }
            let principal = !g.vertices().any(|w| g.lt_circ(u, w).unwrap());
            prop_assert_eq!(principal, c.principal.contains(u));
        }
    }

    #[test]
    fn relevance_matches_enumeration(g in small_graph()) {
        let c = classify_vertices(&g);
        for v in g.vertices() {
            let relevant = g.doubled_components(v).unwrap().len() >= 4;
            prop_assert_eq!(relevant, c.relevant.contains(v));
            prop_assert_eq!(relevant, !enumerate_partitions(&g, v).unwrap().partitions.is_empty());
        }
    }

    #[test]
    fn condition_relations(g in small_graph()) {
        let r = check_conditions(&g).unwrap();
        prop_assert_eq!(r.spiky, r.spiky_char);
        prop_assert_eq!(r.spiky, r.condition1.holds && r.condition2.holds);
        if is_barbed(&g).holds {
            prop_assert!(check_condition1(&g).holds);
        }
        // An isolated vertex is split by every partition, so the split claim needs connectivity.
        if is_barbed(&g).holds && g.is_connected() {
            let c = classify_vertices(&g);
            for u in c.non_principal().iter() {
                prop_assert_eq!(c.class_members(u), VertexSet::singleton(u));
            }
            let cg = compatibility_graph(&g).unwrap();
            for p in cg.nodes().iter().filter(|p| !p.max_bases().intersects(c.principal)) {
                prop_assert_eq!(p.split(), p.max_bases());
            }
        }
    }

    #[test]
    fn max_search_matches_naive(g in small_graph(), pick in any::<u8>()) {
        let cg = compatibility_graph(&g).unwrap();
        prop_assume!(cg.len() <= 16);
        let w: VertexSet = g.vertices().filter(|v| pick >> (v.0 % 8) & 1 == 1).collect();
        let allowed = cg.based_in(w);
        let ids: Vec<usize> = allowed.iter().collect();
        let r = max_compatible(&cg, w);
        prop_assert_eq!(r.size, naive_max_clique(&cg, &ids));
        prop_assert_eq!(r.size, max_clique_size(&cg, &allowed));
        prop_assert!(r.witness.is_pairwise_compatible(&cg));
        for &i in &r.witness.members {
            prop_assert!(cg.node(i).max_bases().intersects(w));
        }
        prop_assert!(r.size <= max_compatible(&cg, g.all()).size);
    }

    #[test]
    fn automorphism_inverse(g in small_graph()) {
        let cg = compatibility_graph(&g).unwrap();
        for p in cg.nodes() {
            let m = p.max_bases().first().unwrap();
            let inv = inverse_choice(&g, p, m.pos()).unwrap();
            let forward = whitehead_images(&g, p, m.pos()).unwrap();
            let back = whitehead_images(&g, &inv, m.neg()).unwrap();
            for v in g.vertices() {
                prop_assert_eq!(forward[&v].substitute(&back), GeneratorWord::letter(v.pos()));
            }
        }
    }
}

#[test]
fn distance_lemma_needs_connectivity() {
    let g = raag_core::families::path_plus_isolated();
    let at = |base: &str, side: &[&str]| {
        let p = raag_core::Partition::from_side(&g, g.vertex(base).unwrap(), g.signed_set(side).unwrap()).unwrap();
        assert!(enumerate_partitions(&g, g.vertex(base).unwrap())
            .unwrap()
            .partitions
            .contains(&p));
        p
    };
    let p = at("a", &["a", "c", "c^-1", "d", "d^-1"]);
    let q = at("d", &["d", "a", "a^-1", "b", "b^-1"]);
    assert_eq!(
        g.distance(g.vertex("a").unwrap(), g.vertex("d").unwrap()).unwrap(),
        Some(3)
    );
    assert!(!raag_core::is_compatible(&p, &q));
}
