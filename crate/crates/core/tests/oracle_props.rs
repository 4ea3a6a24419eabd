mod common;

use netident::oracle::{
    build_matrix, identifiable_links, identifiable_links_with, rank_mod_prime, solve_metrics,
    OracleOptions, Recovered,
};
use netident::Placement;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P61: u64 = (1 << 61) - 1;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn more_monitors_never_lose_links((g, p) in common::graph_with_monitors(3, 9, 1, 4), extra in any::<prop::sample::Index>()) {
        let v = extra.index(g.node_count());
        let small = identifiable_links(&g, &p).unwrap().identifiable;
        let big = identifiable_links(&g, &p.with(v)).unwrap().identifiable;
        prop_assert!(small.iter().all(|l| big.contains(l)), "{small:?} vs {big:?}");
    }

    #[test]
    fn recovery_matches_rank_verdict((g, p) in common::graph_with_monitors(3, 8, 2, 4), seed in any::<u64>()) {
        let verdict = identifiable_links(&g, &p).unwrap().identifiable;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..3 {
            let w: Vec<BigRational> = (0..g.real_link_count())
                .map(|_| BigRational::new(BigInt::from(rng.gen_range(1..100)), BigInt::from(rng.gen_range(1..10))))
                .collect();
            let got = solve_metrics(&g, &p, &w, OracleOptions::default()).unwrap();
            let mut recovered = Vec::new();
            for (pos, r) in got.iter().enumerate() {
                if let Recovered::Value(x) = r {
                    prop_assert_eq!(x, &w[pos]);
                    recovered.push(pos);
                }
            }
            prop_assert_eq!(&recovered, &verdict);
        }
    }

    #[test]
    fn direct_monitor_links_are_identifiable((g, p) in common::graph_with_monitors(2, 9, 2, 5)) {
        let got = identifiable_links(&g, &p).unwrap().identifiable;
        for (pos, l) in g.links().iter().enumerate() {
            if p.contains(l.u) && p.contains(l.v) {
                prop_assert!(got.contains(&pos));
            }
        }
    }

    #[test]
    fn rational_and_prime_field_ranks_agree((g, p) in common::graph_with_monitors(2, 9, 2, 4)) {
        let m = build_matrix(&g, &p, OracleOptions::default()).unwrap();
        let v = identifiable_links(&g, &p).unwrap();
        prop_assert_eq!(rank_mod_prime(&m.rows, P61), v.rank);
        prop_assert_eq!(m.row_count(), v.path_count);
    }

    #[test]
    fn interior_monitors_do_not_change_verdicts((g, p) in common::graph_with_monitors(3, 9, 2, 5)) {
        let strict = OracleOptions { monitor_interior: false, ..OracleOptions::default() };
        let a = identifiable_links(&g, &p).unwrap();
        let b = identifiable_links_with(&g, &p, strict).unwrap();
        prop_assert_eq!(a.identifiable, b.identifiable);
        prop_assert_eq!(a.rank, b.rank);
    }
}

#[test]
fn single_monitor_measures_nothing() {
    let g = netident::Graph::parse("1 2\n2 3\n3 1").unwrap();
    let v = identifiable_links(&g, &Placement::new(vec![0])).unwrap();
    assert_eq!((v.rank, v.path_count), (0, 0));
}
