//! Monitor placement: candidate selection, greedy GMMP, the nested
//! construction for 2-connected graphs, and random baselines.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{all_blocks, triconnected_components, Tricomp};
use crate::graph::{Graph, NodeIx, Placement};
use crate::identifiability::dail;
use crate::oracle::{min_monitors_exhaustive, MinMonitors, OracleError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlacementError {
    #[error("budget {budget} exceeds the {pool} candidate nodes")]
    BudgetExceedsPool { budget: usize, pool: usize },
    #[error("the nested construction needs a 2-vertex-connected graph")]
    NotTwoConnected,
    #[error("the nested construction needs at least 4 monitors, got {0}")]
    TooFewMonitors(usize),
    #[error("unknown placement method {0:?}")]
    UnknownMethod(String),
    #[error("nested budget {budget} outside 3..={max}")]
    NestedBudget { budget: usize, max: usize },
    #[error("no placement identifies every link")]
    NoFullPlacement,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Gmmp,
    RmpV,
    RmpS,
    Nested,
}

impl FromStr for Method {
    type Err = PlacementError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gmmp" => Ok(Method::Gmmp),
            "rmp-v" | "rmp_v" => Ok(Method::RmpV),
            "rmp-s" | "rmp_s" => Ok(Method::RmpS),
            "nested" => Ok(Method::Nested),
            _ => Err(PlacementError::UnknownMethod(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlacementResult {
    pub order: Vec<String>,
    /// Identifiable-link count after each addition.
    pub scores: Vec<usize>,
    pub method: Method,
    #[serde(skip)]
    pub nodes: Vec<NodeIx>,
}

impl PlacementResult {
    fn new(g: &Graph, nodes: Vec<NodeIx>, scores: Vec<usize>, method: Method) -> Self {
        let order = nodes.iter().map(|&x| g.name(x).to_string()).collect();
        PlacementResult {
            order,
            scores,
            method,
            nodes,
        }
    }

    pub fn placement(&self) -> Placement {
        Placement::new(self.nodes.clone())
    }

    /// N of the full placement.
    pub fn final_score(&self) -> usize {
        self.scores.last().copied().unwrap_or(0)
    }
}

/// N(P): identifiable links under `p`, by DAIL.
pub fn score(g: &Graph, p: &Placement) -> usize {
    dail(g, p).count()
}

fn prefix_scores(g: &Graph, nodes: &[NodeIx]) -> Vec<usize> {
    (1..=nodes.len())
        .map(|i| score(g, &Placement::new(nodes[..i].to_vec())))
        .collect()
}

/// Candidate monitors, sorted by node order. A component with at most 3
/// nodes contributes all of them. A larger one contributes the pair leaving
/// the fewest of its real links unidentifiable, the lowest-degree remaining
/// node, and for each boundary pair the lowest-degree node off that pair.
pub fn select_candidates(g: &Graph) -> Vec<NodeIx> {
    let mut out = BTreeSet::new();
    for b in &all_blocks(g).blocks {
        for t in &triconnected_components(g, b, 0).comps {
            out.extend(component_candidates(t));
        }
    }
    out.into_iter().collect()
}

fn component_candidates(t: &Tricomp) -> Vec<NodeIx> {
    let mut nodes = t.nodes.clone();
    nodes.sort_unstable();
    if nodes.len() <= 3 {
        return nodes;
    }
    let d = |x: NodeIx| t.real_degree(x);
    let (v1, v2) = nodes
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| nodes[i + 1..].iter().map(move |&b| (a, b)))
        .min_by_key(|&(a, b)| (pair_cost(t, a, b), d(a).max(d(b)), a, b))
        .unwrap();
    let lowest_off = |skip: [NodeIx; 2]| {
        nodes
            .iter()
            .copied()
            .filter(|x| !skip.contains(x))
            .min_by_key(|&x| (d(x), x))
    };
    let mut out = vec![v1, v2];
    out.extend(lowest_off([v1, v2]));
    out.extend(
        t.boundary_pairs()
            .into_iter()
            .filter_map(|(a, b)| lowest_off([a, b])),
    );
    out
}

/// Links of `t` left unidentifiable by monitors at `a` and `b` alone: those
/// incident to either, less the direct link, which the pair measures.
fn pair_cost(t: &Tricomp, a: NodeIx, b: NodeIx) -> usize {
    let direct = t.real_links().any(|l| l.pair() == (a.min(b), a.max(b)));
    t.real_degree(a) + t.real_degree(b) - 2 * direct as usize
}

fn check_budget(budget: usize, pool: &[NodeIx]) -> Result<(), PlacementError> {
    if budget > pool.len() {
        return Err(PlacementError::BudgetExceedsPool {
            budget,
            pool: pool.len(),
        });
    }
    Ok(())
}

/// Greedy placement: the best `min(budget, 3)`-subset of the pool by
/// exhaustive search, then repeatedly the pool node that maximises N.
/// Ties go to the lowest nodes.
pub fn gmmp(g: &Graph, budget: usize, pool: &[NodeIx]) -> Result<PlacementResult, PlacementError> {
    let pool: BTreeSet<NodeIx> = pool.iter().copied().collect();
    let pool: Vec<NodeIx> = pool.into_iter().collect();
    check_budget(budget, &pool)?;
    let seed = best_subset(g, &pool, budget.min(3));
    let mut scores = prefix_scores(g, &seed);
    let mut current = Placement::new(seed);
    while current.len() < budget {
        let (best, n) = best_extension(g, &current, &pool);
        current.push(best);
        scores.push(n);
    }
    Ok(PlacementResult::new(
        g,
        current.monitors().to_vec(),
        scores,
        Method::Gmmp,
    ))
}

/// First `size`-subset of `pool` (lexicographic order) with maximum N.
fn best_subset(g: &Graph, pool: &[NodeIx], size: usize) -> Vec<NodeIx> {
    fn walk(
        g: &Graph,
        pool: &[NodeIx],
        size: usize,
        from: usize,
        cur: &mut Vec<NodeIx>,
        best: &mut Option<(Vec<NodeIx>, usize)>,
    ) {
        if cur.len() == size {
            let n = score(g, &Placement::new(cur.clone()));
            if best.as_ref().is_none_or(|(_, b)| n > *b) {
                *best = Some((cur.clone(), n));
            }
            return;
        }
        for i in from..pool.len() {
            cur.push(pool[i]);
            walk(g, pool, size, i + 1, cur, best);
            cur.pop();
        }
    }
    let mut best = None;
    walk(g, pool, size, 0, &mut Vec::with_capacity(size), &mut best);
    best.map(|(s, _)| s).unwrap_or_default()
}

fn best_extension(g: &Graph, current: &Placement, pool: &[NodeIx]) -> (NodeIx, usize) {
    let mut best: Option<(NodeIx, usize)> = None;
    for &v in pool.iter().filter(|&&v| !current.contains(v)) {
        let n = score(g, &current.with(v));
        if best.is_none_or(|(_, m)| n > m) {
            best = Some((v, n));
        }
    }
    best.expect("pool not exhausted")
}

/// Nested placements inside a full-identification placement `m`: the best
/// 3-subset of `m`, then one greedy addition from `m` at a time. Returns one
/// result per budget 3..=|m|.
pub fn nested_construction_2vc(
    g: &Graph,
    m: &Placement,
) -> Result<Vec<PlacementResult>, PlacementError> {
    if !g.vertex_connectivity_at_least(2) {
        return Err(PlacementError::NotTwoConnected);
    }
    if m.len() < 4 {
        return Err(PlacementError::TooFewMonitors(m.len()));
    }
    let pool: Vec<NodeIx> = m.monitors().to_vec();
    let mut current = Placement::new(best_subset(g, &pool, 3));
    let mut out = vec![PlacementResult::new(
        g,
        current.monitors().to_vec(),
        prefix_scores(g, current.monitors()),
        Method::Nested,
    )];
    while current.len() < pool.len() {
        let (v, n) = best_extension(g, &current, &pool);
        current.push(v);
        let mut scores = out.last().unwrap().scores.clone();
        scores.push(n);
        out.push(PlacementResult::new(
            g,
            current.monitors().to_vec(),
            scores,
            Method::Nested,
        ));
    }
    Ok(out)
}

/// A uniform random `budget`-subset of `pool`. Every score entry is the
/// final N.
pub fn rmp(
    g: &Graph,
    budget: usize,
    pool: &[NodeIx],
    seed: u64,
    method: Method,
) -> Result<PlacementResult, PlacementError> {
    check_budget(budget, pool)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: Vec<NodeIx> = pool.choose_multiple(&mut rng, budget).copied().collect();
    let n = score(g, &Placement::new(chosen.clone()));
    Ok(PlacementResult::new(g, chosen, vec![n; budget], method))
}

/// Runs `method` with the given budget. RMP-V draws from every node, RMP-S
/// and GMMP from the candidate set, or from every node once the budget
/// exceeds it. The nested construction takes M from the exhaustive
/// minimum-monitor search.
pub fn place(
    g: &Graph,
    method: Method,
    budget: usize,
    seed: u64,
) -> Result<PlacementResult, PlacementError> {
    let all: Vec<NodeIx> = (0..g.node_count()).collect();
    let candidates = || {
        let s = select_candidates(g);
        if budget > s.len() {
            all.clone()
        } else {
            s
        }
    };
    match method {
        Method::Gmmp => gmmp(g, budget, &candidates()),
        Method::RmpS => rmp(g, budget, &candidates(), seed, method),
        Method::RmpV => rmp(g, budget, &all, seed, method),
        Method::Nested => {
            let MinMonitors::Found { witnesses, .. } = min_monitors_exhaustive(g)? else {
                return Err(PlacementError::NoFullPlacement);
            };
            let m = Placement::new(witnesses[0].clone());
            if budget < 3 || budget > m.len() {
                return Err(PlacementError::NestedBudget {
                    budget,
                    max: m.len(),
                });
            }
            Ok(nested_construction_2vc(g, &m)?.swap_remove(budget - 3))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::oracle::optimal_placement_exhaustive;

    fn names(g: &Graph, xs: &[NodeIx]) -> Vec<String> {
        xs.iter().map(|&x| g.name(x).to_string()).collect()
    }

    fn all(g: &Graph) -> Vec<NodeIx> {
        (0..g.node_count()).collect()
    }

    #[test]
    fn candidate_examples() {
        let g = k4();
        assert_eq!(names(&g, &select_candidates(&g)), ["1", "2", "3"]);
        let g = tripend();
        assert_eq!(select_candidates(&g), all(&g));
        let g = cycle(5);
        assert_eq!(select_candidates(&g), all(&g));
    }

    #[test]
    fn candidates_contain_an_optimum_on_examples() {
        for g in [k4(), cycle(5), tripend(), bowtie()] {
            let s = select_candidates(&g);
            for kappa in 1..=3.min(s.len()) {
                let over_v = optimal_placement_exhaustive(&g, kappa, &all(&g))
                    .unwrap()
                    .best;
                let over_s = optimal_placement_exhaustive(&g, kappa, &s).unwrap().best;
                assert_eq!(over_s, over_v, "{g} kappa {kappa}");
            }
        }
    }

    #[test]
    fn gmmp_examples() {
        let g = k4();
        let r = gmmp(&g, 3, &select_candidates(&g)).unwrap();
        assert_eq!(r.final_score(), 6);
        assert_eq!(
            r.final_score(),
            optimal_placement_exhaustive(&g, 3, &all(&g)).unwrap().best
        );
        let g = tripend();
        assert_eq!(gmmp(&g, 3, &all(&g)).unwrap().final_score(), 6);
        let r = gmmp(&g, 1, &all(&g)).unwrap();
        assert_eq!(
            (r.scores.clone(), r.order),
            (vec![0], vec!["1".to_string()])
        );
        assert!(r.scores.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(
            gmmp(&g, 7, &all(&g)),
            Err(PlacementError::BudgetExceedsPool { budget: 7, pool: 6 })
        );
    }

    #[test]
    fn nested_examples() {
        let g = cycle(5);
        let m = match min_monitors_exhaustive(&g).unwrap() {
            MinMonitors::Found { witnesses, .. } => Placement::new(witnesses[0].clone()),
            MinMonitors::Impossible => panic!("C5 is fully identifiable with every node"),
        };
        assert_eq!(m.len(), 5);
        let out = nested_construction_2vc(&g, &m).unwrap();
        assert_eq!(out.len(), 3);
        for r in &out[..2] {
            let kappa = r.order.len();
            assert_eq!(
                r.final_score(),
                optimal_placement_exhaustive(&g, kappa, &all(&g))
                    .unwrap()
                    .best
            );
        }
        let g = bowtie();
        assert_eq!(
            nested_construction_2vc(&g, &Placement::new(all(&g))),
            Err(PlacementError::NotTwoConnected)
        );
    }

    #[test]
    fn candidate_rule_covers_adjacent_pairs_and_pair_sides() {
        // Optimal pairs here are adjacent; the direct link counts.
        let g = Graph::parse("2 4\n4 5\n2 3\n4 7\n4 6\n3 1\n1 5\n3 7\n3 6\n5 7\n1 6\n1 4\n2 5")
            .unwrap();
        let s = select_candidates(&g);
        assert_eq!(optimal_placement_exhaustive(&g, 2, &s).unwrap().best, 8);
        // The best single monitor off the separation pair {2,3} is 4.
        let g = Graph::parse("5 3\n3 1\n5 2\n2 4\n3 6\n1 6\n2 3\n2 6\n1 4\n1 2\n4 6").unwrap();
        let s = select_candidates(&g);
        assert!(s.contains(&g.node("4").unwrap()));
        assert_eq!(
            optimal_placement_exhaustive(&g, 2, &s).unwrap().best,
            optimal_placement_exhaustive(&g, 2, &all(&g)).unwrap().best
        );
    }

    #[test]
    fn rmp_examples() {
        let g = k4();
        let a = rmp(&g, 3, &all(&g), 9, Method::RmpV).unwrap();
        assert_eq!(a, rmp(&g, 3, &all(&g), 9, Method::RmpV).unwrap());
        assert_eq!(a.final_score(), score(&g, &a.placement()));
        assert_eq!(a.scores.len(), 3);
        assert_eq!(
            rmp(&g, 1, &[], 0, Method::RmpS),
            Err(PlacementError::BudgetExceedsPool { budget: 1, pool: 0 })
        );
    }

    #[test]
    fn place_dispatch() {
        let g = k4();
        assert_eq!(place(&g, Method::Gmmp, 3, 0).unwrap().final_score(), 6);
        assert_eq!(place(&g, Method::RmpV, 2, 5).unwrap().method, Method::RmpV);
        assert_eq!(
            place(&g, Method::Nested, 3, 0),
            Err(PlacementError::TooFewMonitors(3))
        );
        let g = cycle(5);
        assert_eq!(place(&g, Method::Nested, 4, 0).unwrap().order.len(), 4);
        assert_eq!(
            place(&g, Method::Nested, 6, 0),
            Err(PlacementError::NestedBudget { budget: 6, max: 5 })
        );
    }

    #[test]
    fn method_names() {
        assert_eq!("rmp-v".parse::<Method>(), Ok(Method::RmpV));
        assert!("best".parse::<Method>().is_err());
        assert_eq!(serde_json::to_string(&Method::RmpS).unwrap(), "\"rmp_s\"");
    }
}
