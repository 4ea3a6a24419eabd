mod common;

use common::{connected_graph, two_connected_graph};
use netident::gen::{gen_random_graph, GraphModel};
use netident::oracle::{optimal_placement_in, OracleOptions, PathUniverse};
use netident::placement::{gmmp, rmp, score, select_candidates, Method};
use netident::Placement;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn candidates_hold_an_optimum(g in connected_graph(3, 8)) {
        let uni = PathUniverse::new(&g, OracleOptions::default()).unwrap();
        let all: Vec<usize> = (0..g.node_count()).collect();
        let s = select_candidates(&g);
        for kappa in 1..=3.min(s.len()) {
            let over_v = optimal_placement_in(&uni, kappa, &all).unwrap().best;
            let over_s = optimal_placement_in(&uni, kappa, &s).unwrap().best;
            prop_assert_eq!(over_s, over_v, "kappa {}", kappa);
        }
    }

    #[test]
    fn greedy_scores_never_drop(g in two_connected_graph(3, 9), budget in 1usize..6) {
        let all: Vec<usize> = (0..g.node_count()).collect();
        let r = gmmp(&g, budget.min(all.len()), &all).unwrap();
        prop_assert!(r.scores.windows(2).all(|w| w[0] <= w[1]), "{:?}", r.scores);
        prop_assert_eq!(r.final_score(), score(&g, &Placement::new(r.nodes.clone())));
    }
}

#[test]
fn greedy_against_random_mean() {
    let mut rows = vec![];
    for i in 0..10u64 {
        let n = 6 + (i % 4) as usize;
        let g = gen_random_graph(n, n + 3, GraphModel::TwoConnected, i).unwrap();
        let all: Vec<usize> = (0..n).collect();
        for kappa in 3..=4 {
            let greedy = gmmp(&g, kappa, &all).unwrap().final_score() as f64;
            let mean = (0..30)
                .map(|s| rmp(&g, kappa, &all, s, Method::RmpV).unwrap().final_score())
                .sum::<usize>() as f64
                / 30.0;
            rows.push((i, kappa, greedy, mean));
        }
    }
    let ahead = rows.iter().filter(|r| r.2 >= r.3).count();
    for (i, kappa, greedy, mean) in &rows {
        eprintln!("graph {i} kappa {kappa}: gmmp {greedy} rmp-v mean {mean:.2}");
    }
    eprintln!("gmmp at or above the rmp-v mean on {ahead}/{}", rows.len());
}
