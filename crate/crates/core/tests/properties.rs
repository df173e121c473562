use proptest::prelude::*;

use kpath_core::circuit::{detect_multilinear, Circuit};
use kpath_core::graph::verify_path;
use kpath_core::held_karp::held_karp_path;
use kpath_core::oracle::{brute_force_kpath, count_k_walks, expand_circuit, has_multilinear_term};
use kpath_core::{generate, kpath, Graph, RngStream};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<bool>()).prop_flat_map(|(n, directed)| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut g = Graph::new(n, directed);
            for u in 0..n {
                for v in 0..n {
                    if u != v && bits[u * n + v] && (directed || u < v) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            g
        })
    })
}

/// Every undirected graph on `n` labelled vertices.
fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        Graph::from_edges(n, false, &edges).unwrap()
    })
}

#[test]
fn subset_dp_matches_exhaustive_search() {
    for n in 1..=5 {
        for g in all_graphs(n) {
            for k in 1..=n {
                let dp = held_karp_path(&g, k).unwrap();
                assert_eq!(dp.is_some(), brute_force_kpath(&g, k).is_some(), "n={n} k={k}");
                if let Some(p) = dp {
                    assert!(verify_path(&g, &p, k));
                }
            }
        }
    }
}

#[test]
fn detect_is_exact_on_all_small_graphs() {
    for n in 1..=5 {
        for (i, g) in all_graphs(n).enumerate() {
            for k in 1..=n {
                let exact = brute_force_kpath(&g, k).is_some();
                let d = kpath::detect(&g, k, kpath::DEFAULT_TRIALS, (i * 8 + k) as u64).unwrap();
                assert_eq!(d.answer, exact, "n={n} graph {i} k={k}");
            }
        }
    }
}

#[test]
fn walk_circuit_expansion_matches_paths_and_walks() {
    for n in 1..=4 {
        for g in all_graphs(n) {
            for k in 1..=n {
                let walks = count_k_walks(&g, k).unwrap();
                let Some(c) = kpath::walk_circuit(&g, k).unwrap() else {
                    assert_eq!(walks, 0);
                    continue;
                };
                assert_eq!(c.degree().unwrap(), k);
                let terms = expand_circuit(&c).unwrap();
                let total: u128 = terms.iter().map(|t| u128::from(t.coefficient)).sum();
                assert_eq!(total, walks);
                assert!(terms.iter().all(|t| t.degree() as usize == k));
                let path = brute_force_kpath(&g, k).is_some();
                assert_eq!(has_multilinear_term(&c, k).unwrap(), path);
                assert_eq!(detect_multilinear(&c, k, 64, &RngStream::new(k as u64)).unwrap(), path);
            }
        }
    }
}

#[test]
fn find_on_random_yes_instances() {
    let mut rng = RngStream::new(12);
    let mut done = 0;
    let mut seed = 0;
    while done < 100 {
        let g = generate::random(12, 0.4, &mut rng);
        if brute_force_kpath(&g, 6).is_none() {
            continue;
        }
        let p = kpath::find(&g, 6, seed).unwrap().expect("yes-instance");
        assert!(verify_path(&g, &p, 6));
        done += 1;
        seed += 1;
    }
}

#[test]
fn hamiltonian_instances_are_found_for_every_k() {
    let mut rng = RngStream::new(5);
    let g = generate::hampath(14, 0.05, &mut rng);
    for k in 1..=14 {
        assert!(kpath::detect(&g, k, 64, k as u64).unwrap().answer, "k={k}");
        let p = kpath::find(&g, k, k as u64).unwrap().unwrap();
        assert!(verify_path(&g, &p, k));
    }
}

#[test]
fn grids_have_long_paths() {
    let g = generate::grid(12, 4);
    let p = kpath::find(&g, 12, 1).unwrap().unwrap();
    assert!(verify_path(&g, &p, 12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn yes_answers_are_certified(g in graph_strategy(8), k in 1usize..=8, seed: u64) {
        let d = kpath::detect(&g, k, 4, seed).unwrap();
        if d.answer {
            prop_assert!(brute_force_kpath(&g, k).is_some());
        }
    }

    #[test]
    fn amplified_detection_is_exact(g in graph_strategy(7), k in 1usize..=7, seed: u64) {
        let d = kpath::detect(&g, k, kpath::DEFAULT_TRIALS, seed).unwrap();
        prop_assert_eq!(d.answer, brute_force_kpath(&g, k).is_some());
        prop_assert!(d.trials_used <= kpath::DEFAULT_TRIALS);
    }

    #[test]
    fn found_paths_verify(g in graph_strategy(8), k in 1usize..=6, seed: u64) {
        match kpath::find(&g, k, seed).unwrap() {
            Some(p) => prop_assert!(verify_path(&g, &p, k)),
            None => prop_assert!(brute_force_kpath(&g, k).is_none()),
        }
    }

    #[test]
    fn same_seed_same_answer(g in graph_strategy(8), k in 2usize..=6, seed: u64) {
        prop_assert_eq!(kpath::detect(&g, k, 3, seed).unwrap(), kpath::detect(&g, k, 3, seed).unwrap());
        prop_assert_eq!(kpath::find(&g, k, seed).unwrap(), kpath::find(&g, k, seed).unwrap());
    }

    #[test]
    fn graph_text_round_trips(g in graph_strategy(9)) {
        let back = Graph::parse(&g.to_text()).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.is_directed(), g.is_directed());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn circuit_text_round_trips(g in graph_strategy(5), k in 1usize..=4) {
        if let Some(c) = kpath::walk_circuit(&g, k).unwrap() {
            let back = Circuit::parse(&c.to_text()).unwrap();
            prop_assert_eq!(expand_circuit(&back).unwrap(), expand_circuit(&c).unwrap());
            prop_assert_eq!(back.size(), c.size());
        }
    }
}
