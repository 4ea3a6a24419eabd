//! Randomized DAIL-versus-oracle equivalence suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::gen::{gen_random_graph, GraphModel};
use crate::graph::{Graph, Placement};
use crate::identifiability::dail;
use crate::oracle::{identifiable_links, OracleError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub count: usize,
    pub nodes: (usize, usize),
    pub kappa: (usize, usize),
    /// Links per node, drawn uniformly from this range.
    pub density: (f64, f64),
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            count: 500,
            nodes: (4, 10),
            kappa: (2, 4),
            density: (1.2, 2.0),
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub placement: Placement,
}

/// The instances a suite run visits, in order.
pub fn suite_instances(cfg: &SuiteConfig) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.count)
        .map(|_| {
            let n = rng.gen_range(cfg.nodes.0..=cfg.nodes.1);
            let density = rng.gen_range(cfg.density.0..=cfg.density.1);
            let max = n * (n - 1) / 2;
            let links = ((density * n as f64).round() as usize).clamp(n - 1, max);
            let graph = gen_random_graph(n, links, GraphModel::Gnm, rng.gen())
                .expect("feasible by clamping");
            let kappa = rng.gen_range(cfg.kappa.0..=cfg.kappa.1.min(n));
            let mut nodes: Vec<usize> = (0..n).collect();
            nodes.shuffle(&mut rng);
            let mut monitors = nodes[..kappa].to_vec();
            monitors.sort_unstable();
            Instance {
                graph,
                placement: Placement::new(monitors),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub graph: String,
    pub monitors: Vec<String>,
    pub dail: Vec<String>,
    pub oracle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub first_counterexample: Option<Counterexample>,
}

impl SuiteSummary {
    pub fn pass(&self) -> bool {
        self.failed == 0
    }
}

pub fn run_equivalence_suite(cfg: &SuiteConfig) -> Result<SuiteSummary, OracleError> {
    run_suite_with(cfg, |g, p| dail(g, p).identifiable())
}

/// Runs the suite against an arbitrary engine; tests use this to inject
/// mutant rules.
pub fn run_suite_with(
    cfg: &SuiteConfig,
    engine: impl Fn(&Graph, &Placement) -> Vec<usize>,
) -> Result<SuiteSummary, OracleError> {
    let mut summary = SuiteSummary {
        instances: cfg.count,
        passed: 0,
        failed: 0,
        first_counterexample: None,
    };
    for (index, inst) in suite_instances(cfg).into_iter().enumerate() {
        let (g, p) = (&inst.graph, &inst.placement);
        let mut got = engine(g, p);
        got.sort_unstable();
        let want = identifiable_links(g, p)?.identifiable;
        if got == want {
            summary.passed += 1;
            continue;
        }
        summary.failed += 1;
        if summary.first_counterexample.is_none() {
            let labels = |ls: &[usize]| ls.iter().map(|&l| g.link_label(l)).collect();
            summary.first_counterexample = Some(Counterexample {
                index,
                graph: g.to_edge_list(),
                monitors: p.names(g).into_iter().map(String::from).collect(),
                dail: labels(&got),
                oracle: labels(&want),
            });
        }
    }
    Ok(summary)
}
