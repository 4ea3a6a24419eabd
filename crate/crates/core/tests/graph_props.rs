mod common;

use netident::Graph;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn whitney_chain(g in common::connected_graph(2, 10)) {
        for k in 1..=3 {
            if g.vertex_connectivity_at_least(k) {
                prop_assert!(g.edge_connectivity_at_least(k), "k={k}\n{g}");
            }
        }
    }

    #[test]
    fn predicates_are_monotone_in_k(g in common::connected_graph(2, 10)) {
        for k in 2..=3 {
            if g.vertex_connectivity_at_least(k) {
                prop_assert!(g.vertex_connectivity_at_least(k - 1));
            }
            if g.edge_connectivity_at_least(k) {
                prop_assert!(g.edge_connectivity_at_least(k - 1));
            }
        }
    }

    #[test]
    fn edge_list_round_trip(g in common::connected_graph(2, 10)) {
        let first = Graph::parse(&g.to_edge_list()).unwrap();
        let second = Graph::parse(&first.to_edge_list()).unwrap();
        prop_assert_eq!(second.names(), first.names());
        prop_assert_eq!(&second, &first);
        // Same labelled graph as the source, up to node order.
        let labelled = |h: &Graph| {
            let mut v: Vec<(String, String)> = h
                .links()
                .iter()
                .map(|l| {
                    let (a, b) = (h.name(l.u).to_string(), h.name(l.v).to_string());
                    if a < b { (a, b) } else { (b, a) }
                })
                .collect();
            v.sort();
            v
        };
        prop_assert_eq!(labelled(&first), labelled(&g));
    }

    #[test]
    fn extended_graph_adds_two_hubs(g in common::connected_graph(3, 9), k in 1usize..4) {
        let p = netident::Placement::new((0..k.min(g.node_count())).collect());
        let ex = g.extended_graph(&p).unwrap();
        prop_assert_eq!(ex.node_count(), g.node_count() + 2);
        prop_assert_eq!(ex.link_count(), g.link_count() + 2 * p.len() + 1);
        prop_assert_eq!(ex.real_link_count(), g.real_link_count());
    }
}
