#![allow(dead_code)]

use netident::gen::{gen_random_graph, GraphModel};
use netident::{Graph, Placement};
use proptest::prelude::*;

/// Connected graph on `lo..=hi` nodes with between n-1 and 2n links.
pub fn connected_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, t, seed)| {
        let max = n * (n - 1) / 2;
        let links = ((n - 1) as f64 + t * (n + 1) as f64).round() as usize;
        gen_random_graph(n, links.clamp(n - 1, max), GraphModel::Gnm, seed).unwrap()
    })
}

/// 2-vertex-connected graph on `lo..=hi` nodes.
pub fn two_connected_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi, 0.0f64..=1.0, any::<u64>()).prop_map(|(n, t, seed)| {
        let max = n * (n - 1) / 2;
        let links = (n as f64 + t * n as f64).round() as usize;
        gen_random_graph(n, links.clamp(n, max), GraphModel::TwoConnected, seed).unwrap()
    })
}

/// A graph together with a placement of `klo..=khi` distinct monitors.
pub fn graph_with_monitors(
    lo: usize,
    hi: usize,
    klo: usize,
    khi: usize,
) -> impl Strategy<Value = (Graph, Placement)> {
    connected_graph(lo, hi).prop_flat_map(move |g| {
        let n = g.node_count();
        let k = klo.min(n)..=khi.min(n);
        (
            Just(g),
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), k),
        )
            .prop_map(|(g, ms)| (g, Placement::new(ms)))
    })
}
