//! Randomized checks of the solvers against brute-force references.

use ihs::fvs_random::{fvs_directed, grow_induced_bfs, grow_induced_bfs_with, prune_fvs, Depth};
use ihs::generic::{generic_solve, online_augment, pick_min, GenericSolverConfig, Optimality};
use ihs::hitting_set::{exact_min_hitting_set, gamma_feasible, greedy_hitting_set};
use ihs::oracle::{enumerate_k_cycle_sequences, BfsCycleOracle, ExplicitFamilyOracle, ShortestCycleOracle};
use ihs::planted::{recover_planted_fvs, DEFAULT_CYCLE_CAP};
use ihs::{Digraph, Graph, Oracle, OracleVerdict, SubsetFamily, VertexSet};
use proptest::prelude::*;

mod common;
use common::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..0.6f64, any::<u64>()).prop_map(|(n, p, seed)| {
        let mut state = seed | 1;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                if (state % 10_000) as f64 / 10_000.0 < p {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges).unwrap()
    })
}

fn digraph_strategy(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n, 0.0..0.6f64, any::<u64>()).prop_map(|(n, p, seed)| {
        let mut state = seed | 1;
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                if u != v && (state % 10_000) as f64 / 10_000.0 < p {
                    arcs.push((u, v));
                }
            }
        }
        Digraph::from_arcs(n, arcs).unwrap()
    })
}

fn subset_of(n: usize) -> impl Strategy<Value = VertexSet> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|bits| {
        bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    })
}

fn graph_and_subset(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), subset_of(n))
    })
}

fn digraph_and_subset(max_n: usize) -> impl Strategy<Value = (Digraph, VertexSet)> {
    digraph_strategy(max_n).prop_flat_map(|d| {
        let n = d.vertex_count();
        (Just(d), subset_of(n))
    })
}

fn family_strategy(max_universe: usize, max_subsets: usize, max_size: usize) -> impl Strategy<Value = SubsetFamily> {
    (1..=max_universe).prop_flat_map(move |u| {
        let subset = proptest::collection::btree_set(0..u, 1..=max_size.min(u));
        proptest::collection::vec(subset, 0..=max_subsets).prop_map(move |sets| {
            SubsetFamily::from_subsets(u, sets.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn acyclicity_matches_edge_and_component_count((g, h) in graph_and_subset(30)) {
        prop_assert_eq!(g.is_acyclic(&h).unwrap(), is_forest_brute(&g, &h));
    }

    #[test]
    fn directed_acyclicity_matches_sink_peeling((d, h) in digraph_and_subset(14)) {
        prop_assert_eq!(d.is_acyclic(&h).unwrap(), is_dag_brute(&d, &h));
    }

    #[test]
    fn induced_subgraph_keeps_exactly_inner_edges((g, keep) in graph_and_subset(25)) {
        let (sub, map) = g.induced_subgraph(&keep).unwrap();
        prop_assert_eq!(map.as_slice(), keep.as_slice());
        let mut expected: Vec<(usize, usize)> =
            g.edges().filter(|&(u, v)| keep.contains(u) && keep.contains(v)).collect();
        expected.sort();
        let mut got: Vec<(usize, usize)> = sub.edges().map(|(a, b)| (map[a], map[b])).collect();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn exact_hitting_set_is_lexicographic_optimum(family in family_strategy(16, 10, 4)) {
        prop_assume!(!family.is_empty());
        let exact = exact_min_hitting_set(&family);
        prop_assert_eq!(exact, brute_min_hitting_set(&family));
    }

    #[test]
    fn greedy_is_feasible_and_within_factor_k(family in family_strategy(14, 12, 4)) {
        prop_assume!(!family.is_empty());
        let greedy = greedy_hitting_set(family.subsets());
        prop_assert!(gamma_feasible(&greedy, &family));
        let opt = exact_min_hitting_set(&family).len();
        prop_assert!(greedy.len() <= family.max_subset_size() * opt);
    }

    #[test]
    fn generic_solver_matches_brute_force_on_families(family in family_strategy(12, 10, 4)) {
        prop_assume!(!family.is_empty());
        let oracle = ExplicitFamilyOracle::new(family.clone());
        let cert = generic_solve(&oracle, &GenericSolverConfig::default()).unwrap();
        prop_assert_eq!(cert.solution.len(), brute_min_hitting_set(&family).len());
        prop_assert!(gamma_feasible(&cert.solution, &family));
        prop_assert!(cert.gamma.subsets().iter().all(|s| family.contains(s)));
        let run = online_augment(&oracle, pick_min).unwrap();
        prop_assert!(gamma_feasible(&run.solution, &family));
        prop_assert!(run.solution.len() >= cert.solution.len());
    }

    #[test]
    fn bfs_oracle_is_sound((g, h) in graph_and_subset(60), root_pick in any::<usize>()) {
        let root = root_pick % g.vertex_count();
        let verdict = BfsCycleOracle::new(&g, root).unwrap().check(&h);
        prop_assert_eq!(verdict.is_feasible(), is_forest_brute(&g, &h));
        if let OracleVerdict::Missed(cycle) = verdict {
            prop_assert!(!cycle.intersects(&h));
            prop_assert!(cycle.len() >= 3);
            // Every vertex of a cycle's vertex set has two neighbors inside it.
            for v in cycle.iter() {
                prop_assert!(g.neighbors(v).filter(|&w| cycle.contains(w)).count() >= 2);
            }
        }
    }

    #[test]
    fn shortest_cycle_has_girth_length((g, h) in graph_and_subset(10)) {
        let n = g.vertex_count();
        let alive: Vec<bool> = (0..n).map(|v| !h.contains(v)).collect();
        let succ = |v: usize| g.neighbors(v).collect::<Vec<_>>();
        let girth = (3..=n).find(|&len| has_cycle_of_length(&succ, n, &alive, len, true));
        let oracle = ShortestCycleOracle::undirected(&g);
        let cycle = oracle.shortest_cycle(&h);
        prop_assert_eq!(cycle.as_ref().map(Vec::len), girth);
        if let Some(c) = cycle {
            for i in 0..c.len() {
                prop_assert!(g.has_edge(c[i], c[(i + 1) % c.len()]));
                prop_assert!(alive[c[i]]);
            }
        }
        prop_assert_eq!(oracle.check(&h).is_feasible(), is_forest_brute(&g, &h));
    }

    #[test]
    fn directed_shortest_cycle_has_girth_length((d, h) in digraph_and_subset(9)) {
        let n = d.vertex_count();
        let alive: Vec<bool> = (0..n).map(|v| !h.contains(v)).collect();
        let succ = |v: usize| d.out_neighbors(v).collect::<Vec<_>>();
        let girth = (2..=n).find(|&len| has_cycle_of_length(&succ, n, &alive, len, false));
        let oracle = ShortestCycleOracle::directed(&d);
        let cycle = oracle.shortest_cycle(&h);
        prop_assert_eq!(cycle.as_ref().map(Vec::len), girth);
        if let Some(c) = cycle {
            for i in 0..c.len() {
                prop_assert!(d.has_arc(c[i], c[(i + 1) % c.len()]));
            }
        }
        prop_assert_eq!(oracle.check(&h).is_feasible(), is_dag_brute(&d, &h));
    }

    #[test]
    fn k_cycle_enumeration_matches_permutations(d in digraph_strategy(8), k in 3usize..=5) {
        prop_assert_eq!(enumerate_k_cycle_sequences(&d, k), brute_k_cycles(&d, k));
    }

    #[test]
    fn generic_solver_finds_minimum_fvs(g in graph_strategy(9)) {
        let brute = brute_min_fvs_size(&g);
        for oracle in [
            Box::new(ShortestCycleOracle::undirected(&g)) as Box<dyn Oracle>,
            Box::new(BfsCycleOracle::new(&g, 0).unwrap()),
        ] {
            let cert = generic_solve(&oracle, &GenericSolverConfig::default()).unwrap();
            prop_assert_eq!(cert.solution.len(), brute);
            prop_assert!(g.is_acyclic(&cert.solution).unwrap());
            if cert.proof == Optimality::SizeMatch {
                prop_assert_eq!(exact_min_hitting_set(&cert.gamma).len(), cert.solution.len());
            }
        }
    }

    #[test]
    fn grow_induced_bfs_builds_an_induced_tree(
        g in graph_strategy(80),
        root_pick in any::<usize>(),
        depth_pick in 0usize..6,
    ) {
        let root = root_pick % g.vertex_count();
        let depth = if depth_pick == 0 { Depth::Exhaustive } else { Depth::Levels(depth_pick) };
        let res = grow_induced_bfs_with(&g, root, depth).unwrap();
        let n = g.vertex_count();
        prop_assert_eq!(res.fvs.len() + res.survivors.len(), n);
        prop_assert!(!res.fvs.intersects(&res.survivors));
        let keep = res.survivors.mask(n);
        prop_assert_eq!(induced_edge_count(&g, &keep), res.survivors.len() - 1);
        prop_assert_eq!(components(&g, &keep), 1);
        prop_assert!(is_forest_brute(&g, &res.fvs));
        prop_assert!(res.stats.is_consistent());
        prop_assert_eq!(res.stats.total_survivors(), res.survivors.len());
        for (i, layer) in res.layers.iter().enumerate().skip(1) {
            for v in layer.iter() {
                prop_assert_eq!(g.neighbors(v).filter(|&w| res.layers[i - 1].contains(w)).count(), 1);
                for (j, other) in res.layers.iter().enumerate() {
                    if j + 1 < i || j == i {
                        prop_assert!(g.neighbors(v).all(|w| !other.contains(w)));
                    }
                }
            }
        }
        let pruned = prune_fvs(&g, &res.fvs);
        prop_assert!(pruned.is_subset(&res.fvs));
        prop_assert!(is_forest_brute(&g, &pruned));
        prop_assert_eq!(grow_induced_bfs_with(&g, root, depth).unwrap(), res);
    }

    #[test]
    fn directed_fvs_is_valid(d in digraph_strategy(40), root_pick in any::<usize>()) {
        let root = root_pick % d.vertex_count();
        let res = fvs_directed(&d, root).unwrap();
        prop_assert!(is_dag_brute(&d, &res.fvs));
    }

    #[test]
    fn planted_recovery_invariants(d in digraph_strategy(10), k in 3usize..=4) {
        let report = recover_planted_fvs(&d, k, DEFAULT_CYCLE_CAP).unwrap();
        prop_assert!(report.recovered.is_subset(&report.greedy_set));
        let mut total = 0;
        for len in 2..=k {
            for cycle in enumerate_k_cycle_sequences(&d, len) {
                total += 1;
                prop_assert!(cycle.iter().any(|&v| report.greedy_set.contains(v)));
            }
        }
        prop_assert_eq!(report.cycles_found, total);
    }
}

#[test]
fn edgeless_graph_keeps_only_root() {
    let g = grow_induced_bfs(&Graph::empty(3), 1).unwrap();
    assert_eq!(g.survivors, [1].into());
}
