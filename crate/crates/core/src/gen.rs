//! Seeded random graphs.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, LinkKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphModel {
    /// Uniform links on top of a random spanning tree; always connected.
    Gnm,
    /// 2-vertex-connected; sampled, then repaired from a random cycle.
    TwoConnected,
}

impl FromStr for GraphModel {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gnm" => Ok(GraphModel::Gnm),
            "2-connected" | "two-connected" => Ok(GraphModel::TwoConnected),
            _ => Err(GenError::UnknownModel(s.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("{links} links cannot connect {nodes} nodes")]
    BelowSpanning { nodes: usize, links: usize },
    #[error("{links} links exceed the {max} possible on {nodes} nodes")]
    TooDense {
        nodes: usize,
        links: usize,
        max: usize,
    },
    #[error("a 2-connected graph needs at least 3 nodes and as many links")]
    NotTwoConnectable,
    #[error("unknown graph model {0:?}")]
    UnknownModel(String),
}

/// Random simple graph on nodes named `1..=n`.
pub fn gen_random_graph(
    n: usize,
    links: usize,
    model: GraphModel,
    seed: u64,
) -> Result<Graph, GenError> {
    let max = n * n.saturating_sub(1) / 2;
    if links > max {
        return Err(GenError::TooDense {
            nodes: n,
            links,
            max,
        });
    }
    if n == 0 || links + 1 < n {
        return Err(GenError::BelowSpanning { nodes: n, links });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match model {
        GraphModel::Gnm => Ok(connected_gnm(n, links, &mut rng)),
        GraphModel::TwoConnected => {
            if n < 3 || links < n {
                return Err(GenError::NotTwoConnectable);
            }
            for _ in 0..64 {
                let g = connected_gnm(n, links, &mut rng);
                if g.vertex_connectivity_at_least(2) {
                    return Ok(g);
                }
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let cycle: Vec<(usize, usize)> =
                (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
            Ok(fill(n, cycle, links, &mut rng))
        }
    }
}

fn connected_gnm(n: usize, links: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let tree: Vec<(usize, usize)> = (1..n)
        .map(|i| (order[rng.gen_range(0..i)], order[i]))
        .collect();
    fill(n, tree, links, rng)
}

fn fill(n: usize, mut chosen: Vec<(usize, usize)>, links: usize, rng: &mut ChaCha8Rng) -> Graph {
    let key = |(a, b): (usize, usize)| (a.min(b), a.max(b));
    let taken: std::collections::HashSet<(usize, usize)> = chosen.iter().map(|&e| key(e)).collect();
    let mut free: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|e| !taken.contains(e))
        .collect();
    free.shuffle(rng);
    chosen.extend(free.into_iter().take(links - chosen.len()));
    let mut g = Graph::new();
    for i in 1..=n {
        g.add_node(&i.to_string());
    }
    for (a, b) in chosen {
        g.add_link(a, b, LinkKind::Real).expect("fresh simple link");
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnm_is_connected_and_reproducible() {
        let g = gen_random_graph(5, 5, GraphModel::Gnm, 7).unwrap();
        assert_eq!((g.node_count(), g.link_count()), (5, 5));
        assert!(g.is_connected());
        assert_eq!(g, gen_random_graph(5, 5, GraphModel::Gnm, 7).unwrap());
    }

    #[test]
    fn two_connected_model() {
        let g = gen_random_graph(6, 9, GraphModel::TwoConnected, 1).unwrap();
        assert!(g.vertex_connectivity_at_least(2));
        for seed in 0..50 {
            let g = gen_random_graph(7, 7, GraphModel::TwoConnected, seed).unwrap();
            assert!(g.vertex_connectivity_at_least(2));
        }
    }

    #[test]
    fn infeasible_targets() {
        assert_eq!(
            gen_random_graph(4, 2, GraphModel::Gnm, 0),
            Err(GenError::BelowSpanning { nodes: 4, links: 2 })
        );
        assert!(matches!(
            gen_random_graph(4, 7, GraphModel::Gnm, 0),
            Err(GenError::TooDense { .. })
        ));
        assert_eq!(
            gen_random_graph(4, 3, GraphModel::TwoConnected, 0),
            Err(GenError::NotTwoConnectable)
        );
    }
}
