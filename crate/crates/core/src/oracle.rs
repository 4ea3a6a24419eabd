//! Ground-truth identifiability by exact rank analysis of the measurement
//! matrix built from every simple path between distinct monitors.
//!
//! A real link is identifiable iff appending its unit row leaves the rank of
//! the path-incidence matrix unchanged. All arithmetic is exact: ranks use
//! fraction-free integer elimination, metric recovery uses big rationals.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{for_each_subset, Graph, NodeIx, Placement};

pub const DEFAULT_NODE_CAP: usize = 14;
/// Upper bound on the number of placements an exhaustive search may visit.
pub const MAX_EXHAUSTIVE_PLACEMENTS: u128 = 1_000_000;
/// 2^61 - 1, the prime used for the modular rank cross-check.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {nodes} nodes, above the oracle cap of {cap}; the oracle is for desk-scale checks only")]
    NodeCapExceeded { nodes: usize, cap: usize },
    #[error("graph has {0} real links; the oracle supports at most 128")]
    TooManyLinks(usize),
    #[error("monitor index {0} is not a node of the graph")]
    UnknownMonitor(NodeIx),
    #[error("exhaustive search would visit {0} placements (limit {MAX_EXHAUSTIVE_PLACEMENTS})")]
    SearchTooLarge(u128),
    #[error("budget {kappa} exceeds pool size {pool}")]
    BudgetTooLarge { kappa: usize, pool: usize },
    #[error("metric assignment has {got} values for {want} links")]
    MetricCount { got: usize, want: usize },
    #[error("link metrics must be positive")]
    NonPositiveMetric,
    #[error("integer overflow during exact elimination")]
    Overflow,
}

/// Options for measurement-path enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub node_cap: usize,
    /// Whether monitors may appear as interior nodes of a measurement path.
    pub monitor_interior: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            node_cap: DEFAULT_NODE_CAP,
            monitor_interior: true,
        }
    }
}

/// Rows are 0/1 incidence vectors over the real links of the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementMatrix {
    /// Link positions (in the source graph) backing each column.
    pub columns: Vec<usize>,
    pub rows: Vec<Vec<u8>>,
    /// Node sequence of the first path that produced each row.
    pub paths: Vec<Vec<NodeIx>>,
}

impl MeasurementMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    /// Identifiable link positions, ascending.
    pub identifiable: Vec<usize>,
    pub rank: usize,
    pub path_count: usize,
}

/// A single simple path, stored as a link bitmask plus its node sequence.
#[derive(Clone, Debug)]
struct PathRecord {
    ends: (NodeIx, NodeIx),
    mask: u128,
    interior: u128,
    nodes: Vec<NodeIx>,
}

/// Every simple path between every node pair of a graph, enumerated once so
/// that many placements can be scored without re-walking the graph.
#[derive(Clone, Debug)]
pub struct PathUniverse {
    columns: Vec<usize>,
    node_count: usize,
    paths: Vec<PathRecord>,
    monitor_interior: bool,
}

fn check_size(g: &Graph, opts: &OracleOptions) -> Result<Vec<usize>, OracleError> {
    if g.node_count() > opts.node_cap {
        return Err(OracleError::NodeCapExceeded {
            nodes: g.node_count(),
            cap: opts.node_cap,
        });
    }
    let columns: Vec<usize> = (0..g.link_count())
        .filter(|&i| g.link(i).id.is_real())
        .collect();
    if columns.len() > 128 {
        return Err(OracleError::TooManyLinks(columns.len()));
    }
    Ok(columns)
}

/// Depth-first enumeration of the simple paths from `s` to every target node
/// with a larger index, visiting neighbors in index order. With
/// `stop_at_targets`, paths never pass through a target.
fn walk_paths(
    adj: &[Vec<(NodeIx, usize)>],
    s: NodeIx,
    is_target: &dyn Fn(NodeIx) -> bool,
    stop_at_targets: bool,
    out: &mut Vec<PathRecord>,
) {
    let n = adj.len();
    let mut on_path = vec![false; n];
    let mut nodes = vec![s];
    on_path[s] = true;
    // explicit stack of (node, next neighbor slot, mask so far)
    let mut stack: Vec<(NodeIx, usize, u128)> = vec![(s, 0, 0)];
    while let Some(&mut (x, ref mut slot, mask)) = stack.last_mut() {
        if *slot >= adj[x].len() {
            stack.pop();
            on_path[x] = false;
            nodes.pop();
            continue;
        }
        let (y, col) = adj[x][*slot];
        *slot += 1;
        if on_path[y] {
            continue;
        }
        let m = mask | (1u128 << col);
        if is_target(y) {
            if y > s {
                let interior = nodes[1..].iter().fold(0u128, |acc, &z| acc | (1u128 << z));
                let mut seq = nodes.clone();
                seq.push(y);
                out.push(PathRecord {
                    ends: (s, y),
                    mask: m,
                    interior,
                    nodes: seq,
                });
            }
            if stop_at_targets {
                continue;
            }
        }
        on_path[y] = true;
        nodes.push(y);
        stack.push((y, 0, m));
    }
}

/// Column-indexed adjacency over real links only.
fn real_adjacency(g: &Graph, columns: &[usize]) -> Vec<Vec<(NodeIx, usize)>> {
    let mut adj = vec![Vec::new(); g.node_count()];
    for (c, &pos) in columns.iter().enumerate() {
        let l = g.link(pos);
        adj[l.u].push((l.v, c));
        adj[l.v].push((l.u, c));
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    adj
}

impl PathUniverse {
    pub fn new(g: &Graph, opts: OracleOptions) -> Result<Self, OracleError> {
        let columns = check_size(g, &opts)?;
        let adj = real_adjacency(g, &columns);
        let mut paths = Vec::new();
        for s in 0..g.node_count() {
            walk_paths(&adj, s, &|_| true, false, &mut paths);
        }
        Ok(PathUniverse {
            columns,
            node_count: g.node_count(),
            paths,
            monitor_interior: opts.monitor_interior,
        })
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    fn rows_for(&self, p: &Placement) -> Result<Vec<(u128, &PathRecord)>, OracleError> {
        let mask = monitor_mask(self.node_count, p)?;
        let mut seen = HashSet::new();
        let mut rows = Vec::new();
        for rec in &self.paths {
            let (a, b) = rec.ends;
            if mask & (1 << a) == 0 || mask & (1 << b) == 0 {
                continue;
            }
            if !self.monitor_interior && rec.interior & mask != 0 {
                continue;
            }
            if seen.insert(rec.mask) {
                rows.push((rec.mask, rec));
            }
        }
        Ok(rows)
    }

    /// Identifiability verdict for one placement.
    pub fn verdict(&self, p: &Placement) -> Result<OracleVerdict, OracleError> {
        let rows = self.rows_for(p)?;
        let path_count = rows.len();
        let mut ech = Echelon::new(self.columns.len());
        for (mask, _) in &rows {
            if ech.is_full() {
                break;
            }
            ech.insert(mask_row(*mask, self.columns.len()))?;
        }
        let mut identifiable = Vec::new();
        for c in 0..self.columns.len() {
            if ech.contains_unit(c)? {
                identifiable.push(self.columns[c]);
            }
        }
        Ok(OracleVerdict {
            identifiable,
            rank: ech.rank(),
            path_count,
        })
    }

    pub fn identifiable_count(&self, p: &Placement) -> Result<usize, OracleError> {
        Ok(self.verdict(p)?.identifiable.len())
    }
}

fn monitor_mask(n: usize, p: &Placement) -> Result<u128, OracleError> {
    let mut mask = 0u128;
    for &m in p.monitors() {
        if m >= n {
            return Err(OracleError::UnknownMonitor(m));
        }
        mask |= 1 << m;
    }
    Ok(mask)
}

fn mask_row(mask: u128, width: usize) -> Vec<i128> {
    (0..width).map(|c| ((mask >> c) & 1) as i128).collect()
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Row-echelon basis over the integers, kept primitive (content 1) so
/// entries stay small. Each row is stored with its pivot column.
#[derive(Clone, Debug)]
struct Echelon {
    width: usize,
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    fn reduce(&self, mut r: Vec<i128>) -> Result<Vec<i128>, OracleError> {
        for (p, b) in &self.rows {
            let f = r[*p];
            if f == 0 {
                continue;
            }
            let bp = b[*p];
            for c in 0..self.width {
                let lhs = bp.checked_mul(r[c]).ok_or(OracleError::Overflow)?;
                let rhs = f.checked_mul(b[c]).ok_or(OracleError::Overflow)?;
                r[c] = lhs.checked_sub(rhs).ok_or(OracleError::Overflow)?;
            }
            let g = r.iter().fold(0, |acc, &x| gcd(acc, x));
            if g > 1 {
                for x in &mut r {
                    *x /= g;
                }
            }
        }
        Ok(r)
    }

    /// Adds `r` to the basis; returns whether it was independent.
    fn insert(&mut self, r: Vec<i128>) -> Result<bool, OracleError> {
        let r = self.reduce(r)?;
        match r.iter().position(|&x| x != 0) {
            Some(p) => {
                self.rows.push((p, r));
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn contains_unit(&self, c: usize) -> Result<bool, OracleError> {
        let mut e = vec![0i128; self.width];
        e[c] = 1;
        Ok(self.reduce(e)?.iter().all(|&x| x == 0))
    }
}

/// Builds the measurement matrix: one row per distinct incidence vector of a
/// simple path between two monitors, rows in lexicographic node-sequence order.
pub fn build_matrix(
    g: &Graph,
    p: &Placement,
    opts: OracleOptions,
) -> Result<MeasurementMatrix, OracleError> {
    let columns = check_size(g, &opts)?;
    let mask = monitor_mask(g.node_count(), p)?;
    let adj = real_adjacency(g, &columns);
    let mut recs = Vec::new();
    let is_monitor = |x: NodeIx| mask & (1 << x) != 0;
    for &s in p.monitors() {
        walk_paths(&adj, s, &is_monitor, !opts.monitor_interior, &mut recs);
    }
    recs.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    let mut paths = Vec::new();
    for rec in recs {
        if seen.insert(rec.mask) {
            rows.push(
                (0..columns.len())
                    .map(|c| ((rec.mask >> c) & 1) as u8)
                    .collect(),
            );
            paths.push(rec.nodes);
        }
    }
    Ok(MeasurementMatrix {
        columns,
        rows,
        paths,
    })
}

/// Exact identifiability verdict under the default options.
pub fn identifiable_links(g: &Graph, p: &Placement) -> Result<OracleVerdict, OracleError> {
    identifiable_links_with(g, p, OracleOptions::default())
}

pub fn identifiable_links_with(
    g: &Graph,
    p: &Placement,
    opts: OracleOptions,
) -> Result<OracleVerdict, OracleError> {
    let m = build_matrix(g, p, opts)?;
    let mut ech = Echelon::new(m.columns.len());
    for row in &m.rows {
        if ech.is_full() {
            break;
        }
        ech.insert(row.iter().map(|&x| x as i128).collect())?;
    }
    let mut identifiable = Vec::new();
    for c in 0..m.columns.len() {
        if ech.contains_unit(c)? {
            identifiable.push(m.columns[c]);
        }
    }
    Ok(OracleVerdict {
        identifiable,
        rank: ech.rank(),
        path_count: m.rows.len(),
    })
}

/// Rank of a 0/1 matrix over the field of integers modulo `prime`.
pub fn rank_mod_prime(rows: &[Vec<u8>], prime: u64) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % prime as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as u64 % prime).collect())
        .collect();
    let mut rank = 0;
    for c in 0..width {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow(m[rank][c], prime - 2);
        for x in &mut m[rank] {
            *x = mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..width {
                    let sub = mul(f, m[rank][j]);
                    m[i][j] = (m[i][j] + prime - sub) % prime;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Outcome of metric recovery for one link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recovered {
    Value(BigRational),
    Unidentifiable,
}

/// Synthesizes path measurements from `true_metrics` (one per real link, in
/// link-position order) and solves for every link whose value is forced.
///
/// A link is recovered when every null-space vector of the measurement
/// matrix vanishes on its column; its value is then read from a particular
/// solution.
pub fn solve_metrics(
    g: &Graph,
    p: &Placement,
    true_metrics: &[BigRational],
    opts: OracleOptions,
) -> Result<Vec<Recovered>, OracleError> {
    let m = build_matrix(g, p, opts)?;
    let width = m.columns.len();
    if true_metrics.len() != width {
        return Err(OracleError::MetricCount {
            got: true_metrics.len(),
            want: width,
        });
    }
    if true_metrics.iter().any(|w| !w.is_positive()) {
        return Err(OracleError::NonPositiveMetric);
    }
    // augmented rows [M | c]
    let mut a: Vec<Vec<BigRational>> = m
        .rows
        .iter()
        .map(|row| {
            let mut v: Vec<BigRational> = row
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect();
            let c = row
                .iter()
                .zip(true_metrics)
                .filter(|(&x, _)| x == 1)
                .fold(BigRational::zero(), |acc, (_, w)| acc + w);
            v.push(c);
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(piv) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let inv = BigRational::one() / a[r][c].clone();
        for x in &mut a[r] {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=width {
                    let sub = &f * &a[r][j];
                    a[i][j] = &a[i][j] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let pivot_row: Vec<Option<usize>> = {
        let mut pr = vec![None; width];
        for (i, &c) in pivots.iter().enumerate() {
            pr[c] = Some(i);
        }
        pr
    };
    let free: Vec<usize> = (0..width).filter(|&c| pivot_row[c].is_none()).collect();
    let mut out = Vec::with_capacity(width);
    for c in 0..width {
        let Some(i) = pivot_row[c] else {
            out.push(Recovered::Unidentifiable);
            continue;
        };
        // null-space vector for free column f has entry -a[i][f] at pivot c
        if free.iter().any(|&f| !a[i][f].is_zero()) {
            out.push(Recovered::Unidentifiable);
        } else {
            out.push(Recovered::Value(a[i][width].clone()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MinMonitors {
    /// Smallest full-identification size and every placement of that size.
    Found {
        kappa: usize,
        witnesses: Vec<Vec<NodeIx>>,
    },
    Impossible,
}

/// Smallest monitor count that makes every link identifiable, found by
/// exhaustive search over subsets in lexicographic order.
pub fn min_monitors_exhaustive(g: &Graph) -> Result<MinMonitors, OracleError> {
    let opts = OracleOptions {
        node_cap: 12.min(DEFAULT_NODE_CAP),
        ..OracleOptions::default()
    };
    let uni = PathUniverse::new(g, opts)?;
    let n = g.node_count();
    let total = uni.column_count();
    if total == 0 {
        return Ok(MinMonitors::Found {
            kappa: 0,
            witnesses: vec![vec![]],
        });
    }
    let all = Placement::new((0..n).collect());
    if uni.identifiable_count(&all)? < total {
        return Ok(MinMonitors::Impossible);
    }
    for kappa in 2..=n {
        let mut witnesses = Vec::new();
        let mut err = None;
        for_each_subset(n, kappa, |s| {
            match uni.identifiable_count(&Placement::new(s.to_vec())) {
                Ok(c) if c == total => witnesses.push(s.to_vec()),
                Ok(_) => {}
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
            true
        });
        if let Some(e) = err {
            return Err(e);
        }
        if !witnesses.is_empty() {
            return Ok(MinMonitors::Found { kappa, witnesses });
        }
    }
    Ok(MinMonitors::Impossible)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalPlacements {
    pub best: usize,
    /// Every maximizing placement, each listed in pool order.
    pub placements: Vec<Vec<NodeIx>>,
}

/// Maximum identifiable-link count over all `kappa`-subsets of `pool`.
pub fn optimal_placement_exhaustive(
    g: &Graph,
    kappa: usize,
    pool: &[NodeIx],
) -> Result<OptimalPlacements, OracleError> {
    let uni = PathUniverse::new(g, OracleOptions::default())?;
    optimal_placement_in(&uni, kappa, pool)
}

/// As [`optimal_placement_exhaustive`], reusing an enumerated path universe.
pub fn optimal_placement_in(
    uni: &PathUniverse,
    kappa: usize,
    pool: &[NodeIx],
) -> Result<OptimalPlacements, OracleError> {
    let pool: Vec<NodeIx> = {
        let mut seen = BTreeSet::new();
        pool.iter().copied().filter(|x| seen.insert(*x)).collect()
    };
    if kappa > pool.len() {
        return Err(OracleError::BudgetTooLarge {
            kappa,
            pool: pool.len(),
        });
    }
    let count = binomial(pool.len(), kappa);
    if count > MAX_EXHAUSTIVE_PLACEMENTS {
        return Err(OracleError::SearchTooLarge(count));
    }
    let mut best = 0;
    let mut placements = Vec::new();
    let mut err = None;
    for_each_subset(pool.len(), kappa, |s| {
        let chosen: Vec<NodeIx> = s.iter().map(|&i| pool[i]).collect();
        match uni.identifiable_count(&Placement::new(chosen.clone())) {
            Ok(c) => {
                if c > best || placements.is_empty() {
                    if c > best {
                        placements.clear();
                    }
                    best = best.max(c);
                    placements.push(chosen);
                } else if c == best {
                    placements.push(chosen);
                }
                true
            }
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(OptimalPlacements { best, placements }),
    }
}
