//! Cross-module invariants: order algebra, closure laws, oracle agreements,
//! generated class families, and strategy replayability.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use polyquant_core::cfi::{element_id, element_parts};
use polyquant_core::closure::{
    empty_relation_class, imhof_star, is_downwards_monotone, is_p_closed, Sampler, StructureClass,
};
use polyquant_core::csp::{build_c_ell, build_hypergraph_target, solve_xor, structure_to_xor};
use polyquant_core::family::{
    apply_to_relation, gamma_closure, is_partial_polymorphism, Family,
};
use polyquant_core::game::pebble::{
    canonical_response, distinct_var_tuples, solve_pebble_game, PgConfig, PgVerdict, Side,
};
use polyquant_core::graph::{complete_bipartite, complete_graph, OrderedGraph};
use polyquant_core::search::find_homomorphism;
use polyquant_core::structure::{leq, transpose, union, Structure, Vocabulary};

fn structure_strategy() -> impl Strategy<Value = Structure> {
    (1usize..=3, 1usize..=2, any::<u32>()).prop_map(|(n, arity, mask)| {
        let vocab = Vocabulary::new(vec![("R".into(), arity)]).unwrap();
        let space = n.pow(arity as u32);
        let tuples: Vec<Vec<usize>> = (0..space)
            .filter(|&i| mask >> (i % 32) & 1 == 1 || mask >> ((i + 7) % 32) & 1 == 1)
            .map(|mut i| {
                let mut t = Vec::with_capacity(arity);
                for _ in 0..arity {
                    t.push(i % n);
                    i /= n;
                }
                t
            })
            .collect();
        Structure::from_parts(vocab, n, vec![tuples]).unwrap()
    })
}

fn family_strategy() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Maltsev),
        Just(Family::majority()),
        Just(Family::near_unanimity(4).unwrap()),
        Just(Family::Nowhere),
    ]
}

proptest! {
    #[test]
    fn transpose_is_an_involution(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
        let mut rng = common::seeded_rng(seed);
        let tuples: Vec<Vec<usize>> = (0..rows)
            .map(|_| (0..cols).map(|_| rand::Rng::random_range(&mut rng, 0..10usize)).collect())
            .collect();
        let t = transpose(&tuples).unwrap();
        let back = transpose(&t).unwrap();
        prop_assert_eq!(back, tuples);
    }

    #[test]
    fn structure_json_is_canonical(a in structure_strategy()) {
        let s = a.to_json_string();
        let back = Structure::from_json_str(&s).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_json_string(), s);
    }

    #[test]
    fn closure_is_inflationary_monotone_idempotent(a in structure_strategy(), family in family_strategy()) {
        let (closed, _) = gamma_closure(&family, &a).unwrap();
        prop_assert!(leq(&a, &closed).unwrap(), "inflationary");
        let (again, trace) = gamma_closure(&family, &closed).unwrap();
        prop_assert_eq!(&again, &closed);
        prop_assert_eq!(trace.fixpoint_index, 0);

        // Monotone: dropping one tuple never grows the closure beyond it.
        let rel = a.relation("R").unwrap();
        if let Some(first) = rel.tuples().first().cloned() {
            let smaller_tuples: Vec<Vec<usize>> =
                rel.tuples().iter().filter(|t| **t != first).cloned().collect();
            let smaller = a.with_relation("R", smaller_tuples).unwrap();
            let (closed_smaller, _) = gamma_closure(&family, &smaller).unwrap();
            prop_assert!(leq(&closed_smaller, &closed).unwrap(), "monotone");
        }
    }

    #[test]
    fn near_unanimity_is_argument_symmetric(ell in 3usize..=4, seed in any::<u64>()) {
        let family = Family::near_unanimity(ell).unwrap();
        let mut rng = common::seeded_rng(seed);
        let n = 5usize;
        let args: Vec<usize> = (0..ell).map(|_| rand::Rng::random_range(&mut rng, 0..n)).collect();
        let base = family.eval(n, &args).unwrap();
        let mut perm = args.clone();
        // A couple of random transpositions cover the orbit generators.
        for _ in 0..3 {
            let i = rand::Rng::random_range(&mut rng, 0..ell);
            let j = rand::Rng::random_range(&mut rng, 0..ell);
            perm.swap(i, j);
            prop_assert_eq!(family.eval(n, &perm).unwrap(), base);
        }
    }
}

#[test]
fn leq_is_a_partial_order_and_union_is_the_join() {
    // Every one-relation structure on two elements with a binary relation.
    let vocab = Vocabulary::new(vec![("R".into(), 2)]).unwrap();
    let all: Vec<Structure> = (0..16u32)
        .map(|mask| {
            let tuples: Vec<Vec<usize>> = (0..4usize)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| vec![i % 2, i / 2])
                .collect();
            Structure::from_parts(vocab.clone(), 2, vec![tuples]).unwrap()
        })
        .collect();
    for a in &all {
        assert!(leq(a, a).unwrap(), "reflexive");
        for b in &all {
            if leq(a, b).unwrap() && leq(b, a).unwrap() {
                assert_eq!(a, b, "antisymmetric");
            }
            let join = union(a, b).unwrap();
            assert!(leq(a, &join).unwrap() && leq(b, &join).unwrap(), "upper bound");
            for c in &all {
                if leq(a, c).unwrap() && leq(b, c).unwrap() {
                    assert!(leq(&join, c).unwrap(), "least upper bound");
                }
                if leq(a, b).unwrap() && leq(b, c).unwrap() {
                    assert!(leq(a, c).unwrap(), "transitive");
                }
            }
        }
    }
}

#[test]
fn nu4_fixes_ternary_relations_on_three_elements() {
    // Sampled complement to the exhaustive low-arity sweeps: r = 3 < 4.
    let family = Family::near_unanimity(4).unwrap();
    let mut rng = common::seeded_rng(23);
    for _ in 0..200 {
        let density: f64 = rand::Rng::random_range(&mut rng, 0.05..0.7);
        let mut rel = Vec::new();
        for x in 0..3usize {
            for y in 0..3usize {
                for z in 0..3usize {
                    if rand::Rng::random_bool(&mut rng, density) {
                        rel.push(vec![x, y, z]);
                    }
                }
            }
        }
        let image = apply_to_relation(&family, 3, &rel).unwrap();
        assert!(image.iter().all(|t| rel.contains(t)), "4-ary family escaped an arity-3 relation");
    }
}

#[test]
fn xor_and_backtracking_agree_on_random_parity_instances() {
    let c3 = build_c_ell(3).unwrap();
    let mut rng = common::seeded_rng(31);
    for _ in 0..150 {
        let n = rand::Rng::random_range(&mut rng, 1..=6usize);
        let density: f64 = rand::Rng::random_range(&mut rng, 0.02..0.2);
        let mut r0 = Vec::new();
        let mut r1 = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if rand::Rng::random_bool(&mut rng, density) {
                        if rand::Rng::random_bool(&mut rng, 0.5) {
                            r0.push(vec![x, y, z]);
                        } else {
                            r1.push(vec![x, y, z]);
                        }
                    }
                }
            }
        }
        let a = Structure::from_parts(c3.vocab().clone(), n, vec![r0, r1]).unwrap();
        let via_xor = solve_xor(&structure_to_xor(&a).unwrap());
        let via_hom = find_homomorphism(&a, &c3).unwrap();
        assert_eq!(via_xor.is_some(), via_hom.is_some());
        if let Some(bits) = via_xor {
            // The assignment, read as a map to {0,1}, is a homomorphism.
            for (idx, rel) in a.relations().iter().enumerate() {
                for t in rel.tuples() {
                    let parity: usize = t.iter().map(|&e| bits[e] as usize).sum::<usize>() % 2;
                    assert_eq!(parity, idx);
                }
            }
        }
    }
}

#[test]
fn edge_halving_double_counts_vertex_incidences() {
    // For any assignment separating the two elements of each edge, the
    // per-vertex counts of value-1 second elements sum to twice the edge
    // count of value-1 second elements.
    let mut rng = common::seeded_rng(37);
    for graph in [complete_graph(4), complete_bipartite(3)] {
        for _ in 0..50 {
            let bits: Vec<bool> =
                (0..graph.edge_count()).map(|_| rand::Rng::random_bool(&mut rng, 0.5)).collect();
            // g((e,2)) = bits[e], g((e,1)) = !bits[e].
            let count_per_vertex: usize = (0..graph.vertex_count())
                .map(|v| {
                    graph
                        .incident_edges(v)
                        .iter()
                        .filter(|&&e| bits[e])
                        .count()
                })
                .sum();
            let ones = bits.iter().filter(|&&b| b).count();
            assert_eq!(count_per_vertex, 2 * ones);
            // Sanity: the assignment really separates each edge pair.
            for e in 0..graph.edge_count() {
                let one = element_id(e, 1);
                let two = element_id(e, 2);
                assert_ne!(element_parts(one).1, element_parts(two).1);
            }
        }
    }
}

#[test]
fn p_closed_verdicts_imply_monotone_verdicts() {
    // On every census where the closure verdict holds, the monotonicity
    // verdict holds as well.
    let cases: Vec<(StructureClass, Family)> = vec![
        (StructureClass::csp(build_c_ell(3).unwrap()), Family::near_unanimity(4).unwrap()),
        (StructureClass::csp(build_hypergraph_target(3, 3, None).unwrap()), Family::majority()),
        (empty_relation_class(), Family::Maltsev),
    ];
    for (class, family) in cases {
        let closed = is_p_closed(&class, &family, 3, &Sampler::Exhaustive).unwrap();
        assert!(closed.holds(), "{}: {closed:?}", class.description());
        let monotone = is_downwards_monotone(
            &class,
            3,
            &Sampler::Random { count: 300, seed: 41, threads: 1 },
        )
        .unwrap();
        assert!(monotone.holds(), "{}: {monotone:?}", class.description());
    }
}

#[test]
fn imhof_star_classes_are_monotone_on_random_censuses() {
    for base in [
        StructureClass::csp(build_hypergraph_target(2, 2, None).unwrap()),
        StructureClass::csp(build_c_ell(2).unwrap()),
    ] {
        let star = imhof_star(&base).unwrap();
        let verdict = is_downwards_monotone(
            &star,
            2,
            &Sampler::Random { count: 400, seed: 43, threads: 1 },
        )
        .unwrap();
        assert!(verdict.holds(), "{}: {verdict:?}", star.description());
    }
}

#[test]
fn projective_polymorphism_pairs_close_their_csp_classes() {
    // Generated pairing: whenever a built-in family is projective and a
    // partial polymorphism of a built-in target, the class census must hold.
    let targets = vec![
        build_c_ell(3).unwrap(),
        build_hypergraph_target(2, 2, None).unwrap(),
        build_hypergraph_target(3, 3, None).unwrap(),
        build_hypergraph_target(3, 3, Some(2)).unwrap(),
    ];
    let families =
        [Family::Maltsev, Family::majority(), Family::near_unanimity(4).unwrap()];
    let mut pairs_run = 0;
    for family in &families {
        let report = polyquant_core::family::check_invariance(family, 4).unwrap();
        if !report.projective {
            continue;
        }
        for target in &targets {
            if !is_partial_polymorphism(family, target).unwrap() {
                continue;
            }
            let class = StructureClass::csp(target.clone());
            let verdict = is_p_closed(&class, family, 2, &Sampler::Exhaustive).unwrap();
            assert!(
                verdict.holds(),
                "{} with {family:?} must be closed: {verdict:?}",
                class.description()
            );
            pairs_run += 1;
        }
    }
    assert!(pairs_run >= 4, "expected several qualifying pairs, ran {pairs_run}");
}

/// All substructures of `top`, as an explicit class list (downwards monotone
/// by construction).
fn downward_closed_class(top: &Structure, description: &str) -> StructureClass {
    let mut members = Vec::new();
    let rel = top.relation("R").unwrap();
    let tuples: Vec<Vec<usize>> = rel.tuples().to_vec();
    for mask in 0u32..(1 << tuples.len()) {
        let sub: Vec<Vec<usize>> = tuples
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, t)| t.clone())
            .collect();
        members.push(top.with_relation("R", sub).unwrap());
    }
    StructureClass::explicit(top.vocab().clone(), members, description).unwrap()
}

#[test]
fn unary_monotone_classes_are_closed_for_choice_families() {
    // Unary downwards-monotone classes and partial choice families.
    let vocab = Vocabulary::new(vec![("R".into(), 1)]).unwrap();
    let top =
        Structure::from_parts(vocab, 2, vec![vec![vec![0], vec![1]]]).unwrap();
    let class = downward_closed_class(&top, "substructures of the full unary relation");
    for family in [Family::Maltsev, Family::majority(), Family::near_unanimity(4).unwrap()] {
        let verdict = is_p_closed(&class, &family, 2, &Sampler::Exhaustive).unwrap();
        assert!(verdict.holds(), "{family:?}: {verdict:?}");
    }
}

#[test]
fn low_arity_monotone_classes_are_closed_for_near_unanimity() {
    // Binary downwards-monotone classes (arity 2 < 3, 4).
    let vocab = Vocabulary::new(vec![("R".into(), 2)]).unwrap();
    let top = Structure::from_parts(
        vocab,
        2,
        vec![vec![vec![0, 0], vec![0, 1], vec![1, 0]]],
    )
    .unwrap();
    let class = downward_closed_class(&top, "substructures of a binary top");
    for ell in [3usize, 4] {
        let family = Family::near_unanimity(ell).unwrap();
        let verdict = is_p_closed(&class, &family, 2, &Sampler::Exhaustive).unwrap();
        assert!(verdict.holds(), "nu:{ell}: {verdict:?}");
    }
}

#[test]
fn explicit_class_membership_is_isomorphism_invariant() {
    let vocab = Vocabulary::new(vec![("R".into(), 1)]).unwrap();
    let member = Structure::from_parts(vocab.clone(), 2, vec![vec![vec![0]]]).unwrap();
    let class = StructureClass::explicit(vocab.clone(), vec![member], "one marked point").unwrap();
    let relabeled = Structure::from_parts(vocab, 2, vec![vec![vec![1]]]).unwrap();
    assert!(class.contains(&relabeled).unwrap());
}

#[test]
fn predicate_class_closure_search_finds_shared_witnesses() {
    // A class defined by an arbitrary predicate goes through the generic
    // enumeration; the nonempty class fails both characterizations with the
    // same base structure.
    let vocab = Vocabulary::new(vec![("P".into(), 1)]).unwrap();
    let class = StructureClass::predicate(
        vocab,
        "nonempty P",
        Arc::new(|a: &Structure| Ok(!a.relation("P").unwrap().is_empty())),
    );
    let report =
        polyquant_core::closure::gamma_equivalence_check(&class, &Family::majority(), 2).unwrap();
    assert!(report.consistent);
    assert!(!report.one_step.holds() && !report.omega.holds());
    let one = report.one_step.counterexample().unwrap();
    let omega = report.omega.counterexample().unwrap();
    assert_eq!(one.base, omega.base, "both searches refute at the same base structure");
}

proptest! {
    #[test]
    fn random_relabelings_are_found_isomorphic(a in structure_strategy(), seed in any::<u64>()) {
        let mut rng = common::seeded_rng(seed);
        let n = a.universe_size();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rand::Rng::random_range(&mut rng, 0..=i);
            perm.swap(i, j);
        }
        let tuple_sets: Vec<Vec<Vec<usize>>> = a
            .relations()
            .iter()
            .map(|rel| rel.tuples().iter().map(|t| t.iter().map(|&x| perm[x]).collect()).collect())
            .collect();
        let b = Structure::from_parts(a.vocab().clone(), n, tuple_sets).unwrap();
        let iso = polyquant_core::search::find_isomorphism(&a, &b).unwrap();
        prop_assert!(iso.is_some());
    }
}

#[test]
fn maximal_member_census_matches_generic_enumeration() {
    // The fast exhaustive route for CSP classes only visits homomorphism
    // preimages; wrapping the same membership test in an opaque predicate
    // forces the generic full enumeration, and the verdicts must match.
    let targets = vec![build_hypergraph_target(2, 2, None).unwrap(), build_c_ell(2).unwrap()];
    let families = [Family::Nowhere, Family::majority(), Family::Maltsev];
    for target in targets {
        let fast_class = StructureClass::csp(target.clone());
        let slow_class = {
            let inner = StructureClass::csp(target.clone());
            StructureClass::predicate(
                target.vocab().clone(),
                "opaque membership",
                Arc::new(move |a: &Structure| inner.contains(a)),
            )
        };
        for family in &families {
            let fast = is_p_closed(&fast_class, family, 2, &Sampler::Exhaustive).unwrap();
            let slow = is_p_closed(&slow_class, family, 2, &Sampler::Exhaustive).unwrap();
            assert_eq!(
                fast.holds(),
                slow.holds(),
                "reduced vs generic census disagree for {family:?} on {}",
                fast_class.description()
            );
            let fast_omega =
                polyquant_core::closure::is_omega_closed(&fast_class, family, 2, &Sampler::Exhaustive)
                    .unwrap();
            let slow_omega =
                polyquant_core::closure::is_omega_closed(&slow_class, family, 2, &Sampler::Exhaustive)
                    .unwrap();
            assert_eq!(fast_omega.holds(), slow_omega.holds());
        }
    }
}

#[test]
fn restricted_duplicator_wins_are_sound_for_the_full_game() {
    // Whenever the solver restricted to a supplied bijection set reports a
    // Duplicator win, the unrestricted game is also a Duplicator win.
    let mut rng = common::seeded_rng(53);
    let mut restricted_wins = 0usize;
    for trial in 0..30 {
        let n = 3 + trial % 2;
        let a = common::random_binary_structure(n, &mut rng);
        let b = if trial % 2 == 0 { a.clone() } else { common::random_binary_structure(n, &mut rng) };
        let family = if trial % 3 == 0 { Family::majority() } else { Family::Nowhere };
        let full_cfg = PgConfig::new(2, family.clone());
        let full = solve_pebble_game(&a, &b, &full_cfg).unwrap();
        // An arbitrary sliver of the bijection space.
        let subset: Vec<Vec<usize>> = full
            .bijections
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 3 == 0)
            .map(|(_, f)| f.clone())
            .collect();
        let restricted_cfg = PgConfig::new(2, family)
            .with_bijections(polyquant_core::game::BijectionMode::Restricted(subset));
        let restricted = solve_pebble_game(&a, &b, &restricted_cfg).unwrap();
        if restricted.verdict == PgVerdict::DuplicatorWins {
            assert_eq!(full.verdict, PgVerdict::DuplicatorWins, "trial {trial}");
            restricted_wins += 1;
        }
    }
    assert!(restricted_wins > 0, "the census should include restricted wins");
}

#[test]
fn cfi_pair_is_duplicator_won_with_switch_set_bijections() {
    // The untwisted and twisted instances over the 4-vertex complete graph,
    // played with the edge-flip bijection family. One- and two-pebble games
    // cannot pin a full gadget tuple (relations are ternary over distinct
    // edges), and the solver certifies the Duplicator win through the
    // restricted-mode fixpoint.
    let g = complete_graph(4);
    let even = polyquant_core::cfi::build_even(&g).unwrap();
    let odd = polyquant_core::cfi::build_odd(&g).unwrap();
    let mut flips = Vec::new();
    for mask in 0u32..(1 << g.edge_count()) {
        let s = polyquant_core::cfi::SwitchSet::new(
            (0..g.edge_count()).filter(|e| mask >> e & 1 == 1),
        );
        let f = even.to_bijection(&s);
        flips.push((0..even.universe_size()).map(|x| f.get(x).unwrap()).collect::<Vec<_>>());
    }
    for family in [Family::Nowhere, Family::majority()] {
        let cfg = PgConfig::new(2, family.clone())
            .with_arities(vec![1])
            .with_bijections(polyquant_core::game::BijectionMode::Restricted(flips.clone()));
        let out = solve_pebble_game(even.structure(), odd.structure(), &cfg).unwrap();
        assert_eq!(out.verdict, PgVerdict::DuplicatorWins, "{family:?}");
    }
}

#[test]
fn two_pebble_strategy_survives_exhaustive_spoiler_on_k33() {
    // The bipartite 6-vertex cubic graph keeps every vertex robber-safe with
    // two pebbles, so the strategy engine must survive two exhaustive rounds
    // including two-element moves (which drive multi-path switching).
    let g = complete_bipartite(3);
    let out = polyquant_core::game::solve_cr_game(&g, 2, 3).unwrap();
    assert_eq!(out.safe_vertices_for_empty().len(), 6);
    let inst = polyquant_core::cfi::build_even(&g).unwrap();
    let report = polyquant_core::game::adversarial_verify(
        &inst,
        &polyquant_core::game::CrOracle::Exact(&out),
        2,
        2,
    )
    .unwrap();
    assert!(report.ok, "{:?}", report.failure);
    assert!(report.states_visited > 100);
}

#[test]
fn spoiler_depths_are_replayable() {
    // Every unsafe position admits a move such that, whatever bijection
    // Duplicator offers, some Spoiler tuple leaves no response inside the
    // higher-depth region: Spoiler makes strict progress each round.
    let path = OrderedGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap().to_structure();
    let star = OrderedGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap().to_structure();
    let cfg = PgConfig::new(2, Family::Nowhere).with_arities(vec![1]);
    let out = solve_pebble_game(&path, &star, &cfg).unwrap();
    assert_eq!(out.verdict, PgVerdict::SpoilerWins);

    let n = 4usize;
    for (pos, &depth) in &out.spoiler_depth {
        if depth == 0 {
            continue; // not a partial isomorphism: Spoiler has already won
        }
        // The region Duplicator would need to stay inside: safe positions
        // plus those that survive at least `depth` rounds.
        let mut region: std::collections::HashSet<Vec<Option<(usize, usize)>>> =
            out.safe.iter().cloned().collect();
        for (q, &d) in &out.spoiler_depth {
            if d >= depth {
                region.insert(q.clone());
            }
        }
        let mut progress_move = false;
        'shapes: for side in [Side::Left, Side::Right] {
            for vars in distinct_var_tuples(2, 1) {
                let mut all_bijections_fail = true;
                'bijections: for f in &out.bijections {
                    let response_map: Vec<usize> = match side {
                        Side::Left => {
                            let mut inv = vec![0usize; n];
                            for (x, &y) in f.iter().enumerate() {
                                inv[y] = x;
                            }
                            inv
                        }
                        Side::Right => f.clone(),
                    };
                    for spoiler in 0..n {
                        // Canonical response against the thresholded region.
                        let mut good = BTreeSet::new();
                        for val in 0..n {
                            let mut next = pos.clone();
                            next[vars[0] - 1] = match side {
                                Side::Left => Some((val, spoiler)),
                                Side::Right => Some((spoiler, val)),
                            };
                            if region.contains(&next) {
                                good.insert(vec![val]);
                            }
                        }
                        let closed =
                            polyquant_core::family::gamma_closure_tuples(&Family::Nowhere, n, &good)
                                .unwrap();
                        if !closed.contains(&vec![response_map[spoiler]]) {
                            continue 'bijections; // this f is beaten by `spoiler`
                        }
                    }
                    all_bijections_fail = false;
                    break;
                }
                if all_bijections_fail {
                    progress_move = true;
                    break 'shapes;
                }
            }
        }
        assert!(progress_move, "position {pos:?} at depth {depth} has no progress move");
    }
    // And the recorded witnesses replay cleanly for Duplicator on the safe side.
    let c6 = OrderedGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap().to_structure();
    let cfg6 = PgConfig::new(2, Family::Nowhere).with_arities(vec![1]);
    let out6 = solve_pebble_game(&c6, &c6, &cfg6).unwrap();
    assert_eq!(out6.verdict, PgVerdict::DuplicatorWins);
    let pos = vec![None, None];
    let fi = out6.duplicator_witness[&(pos.clone(), Side::Left, vec![1])];
    let f = &out6.bijections[fi];
    let mut inv = vec![0usize; 6];
    for (x, &y) in f.iter().enumerate() {
        inv[y] = x;
    }
    let served = canonical_response(&out6, &Family::Nowhere, 6, &pos, Side::Left, &[1], &[0], &inv)
        .unwrap()
        .expect("witness answers");
    assert!(!served.is_empty());
}
