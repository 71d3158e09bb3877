//! Property tests over randomly generated graphs and orderings.

use proptest::prelude::*;

use orientable::chordality::{is_chordal, verify_peo, ChordalityVerdict, PeoCheck};
use orientable::graph::Graph;
use orientable::oracle::{chromatic_polynomial_eval, Oracle};
use orientable::orientation::{d_max, Orientation};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |mask| {
            let edges = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &keep)| keep)
                .map(|(&e, _)| e);
            Graph::new(n, edges).expect("generated edges are valid")
        })
    })
}

fn arb_graph_with_order(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.vertex_count();
        let order: Vec<usize> = (0..n).collect();
        (Just(g), Just(order).prop_shuffle())
    })
}

proptest! {
    #[test]
    fn edge_list_round_trip_is_identity(g in arb_graph(8)) {
        let (parsed, map) = Graph::parse_edge_list(&g.render_edge_list()).unwrap();
        prop_assert_eq!(&parsed, &g);
        prop_assert!(map.iter().all(|(old, new)| old == new));
    }

    #[test]
    fn orient_topo_orient_is_a_fixed_point((g, order) in arb_graph_with_order(8)) {
        let d = Orientation::by_ordering(g.clone(), &order).unwrap();
        let topo = d.topological_order().unwrap();
        let d2 = Orientation::by_ordering(g, &topo).unwrap();
        prop_assert_eq!(d, d2);
    }

    #[test]
    fn reversal_soundness((g, order) in arb_graph_with_order(7)) {
        // an arc is dependent exactly when reversing it creates a cycle
        let d = Orientation::by_ordering(g, &order).unwrap();
        for (tail, head) in d.arcs() {
            let reversed = d.with_arc_reversed(tail, head).unwrap();
            prop_assert_eq!(d.is_dependent(tail, head).unwrap(), !reversed.is_acyclic());
        }
    }

    #[test]
    fn dependent_count_is_bounded_by_d_max((g, order) in arb_graph_with_order(8)) {
        let d = Orientation::by_ordering(g.clone(), &order).unwrap();
        prop_assert!(d.dependent_arcs().unwrap().count() <= d_max(&g));
    }

    #[test]
    fn batch_and_single_dependence_agree((g, order) in arb_graph_with_order(7)) {
        let d = Orientation::by_ordering(g, &order).unwrap();
        let report = d.dependent_arcs().unwrap();
        for (tail, head) in d.arcs() {
            prop_assert_eq!(report.contains(tail, head), d.is_dependent(tail, head).unwrap());
        }
    }

    #[test]
    fn chordality_verdicts_are_internally_consistent(g in arb_graph(8)) {
        match is_chordal(&g) {
            ChordalityVerdict::Chordal(peo) => {
                prop_assert!(matches!(
                    verify_peo(&g, peo.order()).unwrap(),
                    PeoCheck::Valid(_)
                ));
            }
            ChordalityVerdict::NotChordal { witness } => {
                let k = witness.len();
                prop_assert!(k >= 4);
                for i in 0..k {
                    prop_assert!(g.has_edge(witness[i], witness[(i + 1) % k]));
                }
                for i in 0..k {
                    for j in i + 2..k {
                        if i == 0 && j == k - 1 {
                            continue;
                        }
                        prop_assert!(!g.has_edge(witness[i], witness[j]));
                    }
                }
            }
        }
    }

    #[test]
    fn spectrum_attains_the_formula_maximum(g in arb_graph(6)) {
        let spec = Oracle::new().spectrum(&g).unwrap();
        prop_assert_eq!(spec.d_max_observed, d_max(&g));
        prop_assert_eq!(spec.total_acyclic, Oracle::new().count_acyclic(&g).unwrap());
        prop_assert_eq!(
            spec.total_acyclic,
            chromatic_polynomial_eval(&g, -1).unsigned_abs()
        );
    }

    #[test]
    fn simplicial_growth_bookkeeping(g in arb_graph(7)) {
        // grow on a maximal clique found greedily from vertex 0
        let mut clique = vec![0usize];
        for v in 1..g.vertex_count() {
            if clique.iter().all(|&c| g.has_edge(c, v)) {
                clique.push(v);
            }
        }
        let q = clique.len();
        let grown = g.add_simplicial_vertex(&clique.iter().copied().collect()).unwrap();
        prop_assert_eq!(grown.vertex_count(), g.vertex_count() + 1);
        prop_assert_eq!(grown.edge_count(), g.edge_count() + q);
        prop_assert_eq!(grown.neighbors(g.vertex_count()), &clique[..]);
    }
}
