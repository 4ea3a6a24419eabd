//! The DAIL engine: vantages, cut classes, categories and the per-category
//! rules that decide which real links are identifiable.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{
    all_blocks, triconnected_components, BicompInfo, BlockDecomposition, CompLink, TricompKind,
    TriconnectedDecomposition,
};
use crate::graph::{Graph, LinkId, NodeIx, Placement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdentError {
    #[error("({0}, {1}) is not a boundary pair of the component")]
    NotABoundaryPair(NodeIx, NodeIx),
    #[error("component has {0} vantages; at least 2 are needed")]
    TooFewVantages(usize),
    #[error("expected a {expected} component, found {found:?}")]
    WrongCategory {
        expected: &'static str,
        found: Category,
    },
    #[error("component has no real link between its two vantages")]
    NoDirectLink,
    #[error("two-monitor precondition violated: {0}")]
    Precondition(&'static str),
}

/// A boundary pair with the number of agents behind it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CutClass {
    pub pair: (NodeIx, NodeIx),
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "partners")]
pub enum VantageStatus {
    Independent,
    Conjugate(Vec<NodeIx>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vantage {
    pub node: NodeIx,
    pub status: VantageStatus,
}

impl Vantage {
    pub fn is_independent(&self) -> bool {
        self.status == VantageStatus::Independent
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Category {
    #[serde(rename = "cat1")]
    Cat1,
    #[serde(rename = "cat2_1")]
    Cat2_1,
    #[serde(rename = "cat2_2")]
    Cat2_2,
    #[serde(rename = "cat2_3")]
    Cat2_3,
    #[serde(rename = "cat2_4")]
    Cat2_4,
    #[serde(rename = "cat3")]
    Cat3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    DirectMonitorLink,
    DeadComponent,
    Cat1,
    #[serde(rename = "cat2_1")]
    Cat2_1,
    #[serde(rename = "cat2_1-alg1")]
    Cat2_1Alg1,
    #[serde(rename = "cat2_2-interior")]
    Cat2_2Interior,
    #[serde(rename = "cat2_2-exterior")]
    Cat2_2Exterior,
    #[serde(rename = "cat2_3")]
    Cat2_3,
    #[serde(rename = "cat2_3-alg2")]
    Cat2_3Alg2,
    #[serde(rename = "cat2_4")]
    Cat2_4,
    #[serde(rename = "cat3-interior")]
    Cat3Interior,
    #[serde(rename = "cat3-incident")]
    Cat3Incident,
    #[serde(rename = "cat3-cut")]
    Cat3Cut,
    #[serde(rename = "algB-direct")]
    AlgBDirect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Judgement {
    pub identifiable: bool,
    pub reason: Reason,
}

impl Judgement {
    fn yes(reason: Reason) -> Self {
        Judgement {
            identifiable: true,
            reason,
        }
    }

    fn no(reason: Reason) -> Self {
        Judgement {
            identifiable: false,
            reason,
        }
    }
}

/// Verdicts keyed by the link's endpoint pair.
pub type LinkJudgements = Vec<((NodeIx, NodeIx), Judgement)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkVerdict {
    /// Position of the link in the graph.
    pub link: usize,
    pub u: String,
    pub v: String,
    pub identifiable: bool,
    pub reason: Reason,
}

/// One verdict per real link, in link order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentReport {
    pub links: Vec<LinkVerdict>,
}

impl IdentReport {
    pub fn identifiable(&self) -> Vec<usize> {
        self.links
            .iter()
            .filter(|l| l.identifiable)
            .map(|l| l.link)
            .collect()
    }

    pub fn count(&self) -> usize {
        self.links.iter().filter(|l| l.identifiable).count()
    }
}

/// Everything the rules need about one block under one placement.
#[derive(Clone, Debug)]
pub struct BlockAnalysis {
    pub block: BicompInfo,
    pub tricomps: TriconnectedDecomposition,
    /// Per component, one cut class per virtual link (link order).
    pub cuts: Vec<Vec<CutClass>>,
    pub vantages: Vec<Vec<Vantage>>,
    /// `None` for blocks with fewer than two agents.
    pub categories: Vec<Option<Category>>,
}

impl BlockAnalysis {
    pub fn new(g: &Graph, block: BicompInfo, seed: u64) -> Self {
        let tricomps = triconnected_components(g, &block, seed);
        let cuts: Vec<Vec<CutClass>> = (0..tricomps.len())
            .map(|c| {
                tricomps.comps[c]
                    .virtual_links()
                    .map(|l| CutClass {
                        pair: l.pair(),
                        k: agents_behind(&block, &tricomps, c, l),
                    })
                    .collect()
            })
            .collect();
        let vantages: Vec<Vec<Vantage>> = (0..tricomps.len())
            .map(|c| vantages_from(&block, &tricomps, c, &cuts[c]))
            .collect();
        let live = block.agents.len() >= 2;
        let categories = (0..tricomps.len())
            .map(|c| {
                if live {
                    categorize(tricomps.comps[c].kind, &vantages[c]).ok()
                } else {
                    None
                }
            })
            .collect();
        BlockAnalysis {
            block,
            tricomps,
            cuts,
            vantages,
            categories,
        }
    }

    fn is_agent(&self, x: NodeIx) -> bool {
        self.block.is_agent(x)
    }

    fn vantage_nodes(&self, c: usize) -> BTreeSet<NodeIx> {
        self.vantages[c].iter().map(|v| v.node).collect()
    }

    /// The cut class of `pair` seen from component `c`, summing over every
    /// virtual link of `c` on that pair.
    pub fn classify_cut(&self, c: usize, pair: (NodeIx, NodeIx)) -> Result<CutClass, IdentError> {
        let pair = (pair.0.min(pair.1), pair.0.max(pair.1));
        let matching: Vec<&CutClass> = self.cuts[c].iter().filter(|cc| cc.pair == pair).collect();
        if matching.is_empty() {
            return Err(IdentError::NotABoundaryPair(pair.0, pair.1));
        }
        Ok(CutClass {
            pair,
            k: matching.iter().map(|cc| cc.k).sum(),
        })
    }

    fn virtual_on(&self, c: usize, a: NodeIx, b: NodeIx) -> Option<CompLink> {
        let pair = (a.min(b), a.max(b));
        self.tricomps.comps[c]
            .virtual_links()
            .find(|l| l.pair() == pair)
            .copied()
    }

    /// Branches across the virtual link of `c` on `{a,b}`: the twin, or the
    /// twin bond's other branches. The flag reports a real link among them.
    fn across(&self, c: usize, a: NodeIx, b: NodeIx) -> (Vec<usize>, bool) {
        let Some(l) = self.virtual_on(c, a, b) else {
            return (vec![], false);
        };
        let vid = l.virtual_id().unwrap();
        let twin = self.tricomps.twin(c, vid);
        let t = &self.tricomps.comps[twin];
        if t.kind != TricompKind::Bond {
            return (vec![twin], false);
        }
        let comps = t
            .virtual_links()
            .filter(|m| m.virtual_id() != Some(vid))
            .map(|m| self.tricomps.twin(twin, m.virtual_id().unwrap()))
            .collect();
        (comps, t.real_links().next().is_some())
    }

    /// Identifiability of real link `l` placed in component `c`.
    fn judge(&self, c: usize, l: (NodeIx, NodeIx), ctx: &Neighbourhood) -> Judgement {
        let comp = &self.tricomps.comps[c];
        let Some(cat) = self.categories[c] else {
            return Judgement::no(Reason::DeadComponent);
        };
        if comp.kind == TricompKind::Bond || comp.kind == TricompKind::SingleLink {
            return self.alg_b(c, l, ctx);
        }
        let triangle = comp.kind == TricompKind::Triangle;
        match cat {
            Category::Cat1 => Judgement::yes(Reason::Cat1),
            Category::Cat3 => {
                let vs = self.vantage_nodes(c);
                if vs.contains(&l.0) && vs.contains(&l.1) {
                    self.alg_b(c, l, ctx)
                } else if vs.contains(&l.0) || vs.contains(&l.1) {
                    Judgement::no(Reason::Cat3Incident)
                } else if self.in_two_cut(c, l, &vs) {
                    Judgement::no(Reason::Cat3Cut)
                } else {
                    Judgement::yes(Reason::Cat3Interior)
                }
            }
            Category::Cat2_2 => self.cat2_2(c, l),
            Category::Cat2_1 if triangle => self.alg1(c, l),
            Category::Cat2_3 if triangle => self.alg2(c, l),
            Category::Cat2_1 => Judgement::yes(Reason::Cat2_1),
            Category::Cat2_3 => Judgement::yes(Reason::Cat2_3),
            Category::Cat2_4 => Judgement::yes(Reason::Cat2_4),
        }
    }

    /// Whether `l` lies in a 2-link cut of the region the two vantages of
    /// `c` measure, once every link between the vantages is dropped.
    fn in_two_cut(&self, c: usize, l: (NodeIx, NodeIx), vs: &BTreeSet<NodeIx>) -> bool {
        let mut pair = vs.iter().copied();
        let pair = (pair.next().unwrap(), pair.next().unwrap());
        let mut comps = vec![c];
        for v in self.tricomps.comps[c]
            .virtual_links()
            .filter(|v| v.pair() != pair)
        {
            comps.extend(self.tricomps.behind(c, v.virtual_id().unwrap()));
        }
        let region: Vec<(NodeIx, NodeIx)> = comps
            .into_iter()
            .flat_map(|t| {
                self.tricomps.comps[t]
                    .real_links()
                    .map(CompLink::pair)
                    .collect::<Vec<_>>()
            })
            .filter(|&e| e != pair)
            .collect();
        let at = region.iter().position(|&e| e == l).expect("link in region");
        (0..region.len()).any(|x| x != at && !links_connected(&region, &[at, x]))
    }

    fn expect(
        &self,
        c: usize,
        want: &[Category],
        expected: &'static str,
    ) -> Result<Category, IdentError> {
        let found = self.categories[c].ok_or(IdentError::TooFewVantages(self.vantages[c].len()))?;
        let triangle = self.tricomps.comps[c].kind == TricompKind::Triangle;
        if want.contains(&found) && (triangle || want == [Category::Cat3]) {
            Ok(found)
        } else {
            Err(IdentError::WrongCategory { expected, found })
        }
    }

    fn per_real_link(&self, c: usize, f: impl Fn((NodeIx, NodeIx)) -> Judgement) -> LinkJudgements {
        self.tricomps.comps[c]
            .real_links()
            .map(|l| (l.pair(), f(l.pair())))
            .collect()
    }

    /// The cross-pair rule over the real links of triangle `c`.
    pub fn alg1_triangle_cat21(&self, c: usize) -> Result<LinkJudgements, IdentError> {
        self.expect(c, &[Category::Cat2_1], "category-2.1 triangle")?;
        Ok(self.per_real_link(c, |l| self.alg1(c, l)))
    }

    /// The conjugate-hub rule over the real links of triangle `c`.
    pub fn alg2_triangle_cat23(&self, c: usize) -> Result<LinkJudgements, IdentError> {
        self.expect(c, &[Category::Cat2_3], "category-2.3 triangle")?;
        Ok(self.per_real_link(c, |l| self.alg2(c, l)))
    }

    /// Dispatch over the real links of a category-2 triangle.
    pub fn alg_a_triangle_cat2(&self, c: usize) -> Result<LinkJudgements, IdentError> {
        let cat2 = [
            Category::Cat2_1,
            Category::Cat2_2,
            Category::Cat2_3,
            Category::Cat2_4,
        ];
        let cat = self.expect(c, &cat2, "category-2 triangle")?;
        Ok(self.per_real_link(c, |l| match cat {
            Category::Cat2_1 => self.alg1(c, l),
            Category::Cat2_3 => self.alg2(c, l),
            Category::Cat2_4 => Judgement::yes(Reason::Cat2_4),
            _ => self.cat2_2(c, l),
        }))
    }

    fn cat2_2(&self, c: usize, l: (NodeIx, NodeIx)) -> Judgement {
        let ind = self.vantages[c]
            .iter()
            .find(|v| v.is_independent())
            .unwrap()
            .node;
        if l.0 == ind || l.1 == ind {
            Judgement::no(Reason::Cat2_2Exterior)
        } else {
            Judgement::yes(Reason::Cat2_2Interior)
        }
    }

    /// Cross-pair rule for real link `l` of a category-2.1 triangle.
    fn alg1(&self, c: usize, l: (NodeIx, NodeIx)) -> Judgement {
        let comp = &self.tricomps.comps[c];
        let v3 = *comp.nodes.iter().find(|&&x| x != l.0 && x != l.1).unwrap();
        let pair_is_type0 = match self.classify_cut(c, l) {
            Ok(cc) => cc.k == 0,
            Err(_) => true,
        };
        for vj in [l.0, l.1] {
            let Some(_) = self.virtual_on(c, vj, v3) else {
                continue;
            };
            let (branches, has_real) = self.across(c, vj, v3);
            let blocked = !self.is_agent(vj)
                && pair_is_type0
                && branches.len() + has_real as usize == 1
                && !self.t_star_exists(c, vj, v3);
            if blocked {
                return Judgement::no(Reason::Cat2_1Alg1);
            }
        }
        Judgement::yes(Reason::Cat2_1Alg1)
    }

    /// Whether the region behind `{vj,v3}` offers `vj` a replacement path to
    /// `v3` and, disjoint from it, a path to some agent.
    fn t_star_exists(&self, c: usize, vj: NodeIx, v3: NodeIx) -> bool {
        let vid = self.virtual_on(c, vj, v3).unwrap().virtual_id().unwrap();
        let region: Vec<(NodeIx, NodeIx)> = self
            .tricomps
            .behind(c, vid)
            .into_iter()
            .flat_map(|t| {
                self.tricomps.comps[t]
                    .real_links()
                    .map(CompLink::pair)
                    .collect::<Vec<_>>()
            })
            .collect();
        let nodes: BTreeSet<NodeIx> = region.iter().flat_map(|&(a, b)| [a, b]).collect();
        nodes
            .iter()
            .filter(|&&m| m != vj && m != v3 && self.is_agent(m))
            .any(|&m| two_disjoint_paths(&region, &nodes, vj, v3, m))
    }

    /// Conjugate-hub rule for real link `l` of a category-2.3 triangle.
    fn alg2(&self, c: usize, l: (NodeIx, NodeIx)) -> Judgement {
        let hub = self.conjugate_hub(c);
        if l.0 == hub || l.1 == hub {
            return Judgement::yes(Reason::Cat2_3Alg2);
        }
        let side_ok = |x: NodeIx| {
            if self.virtual_on(c, hub, x).is_none() {
                return true;
            }
            let (branches, has_real) = self.across(c, hub, x);
            has_real
                || branches.len() >= 2
                || branches
                    .iter()
                    .any(|&b| self.tricomps.comps[b].kind == TricompKind::ThreeConnected)
        };
        Judgement {
            identifiable: side_ok(l.0) && side_ok(l.1),
            reason: Reason::Cat2_3Alg2,
        }
    }

    /// The vantage conjugate with both others in a category-2.3 component.
    fn conjugate_hub(&self, c: usize) -> NodeIx {
        self.vantages[c]
            .iter()
            .find(|v| matches!(&v.status, VantageStatus::Conjugate(p) if p.len() == 2))
            .map(|v| v.node)
            .expect("category 2.3 has a hub")
    }

    /// The direct-link rule for link `l` between the two vantages.
    fn alg_b(&self, c: usize, l: (NodeIx, NodeIx), ctx: &Neighbourhood) -> Judgement {
        let pair = (l.0.min(l.1), l.0.max(l.1));
        let mut deferred: Option<Judgement> = None;
        for (nb, _) in self.pair_neighbours(c, pair) {
            if self.vantage_nodes(nb) != [pair.0, pair.1].into_iter().collect() {
                let j = self.judge(nb, pair, ctx);
                if j.identifiable {
                    return j;
                }
                deferred.get_or_insert(j);
            }
        }
        if let Some(j) = deferred {
            return j;
        }
        let ok = |x: NodeIx| ctx.is_monitor[x] || ctx.outside_agents(&self.block, x, pair) >= 2;
        Judgement {
            identifiable: ok(pair.0) && ok(pair.1),
            reason: Reason::AlgBDirect,
        }
    }

    /// Components sharing a virtual link on `pair` with `c`, seen through
    /// bonds: the twins of `c`'s virtual links on `pair`, and when `c` is a
    /// bond, its branches.
    fn pair_neighbours(&self, c: usize, pair: (NodeIx, NodeIx)) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for l in self.tricomps.comps[c]
            .virtual_links()
            .filter(|l| l.pair() == pair)
        {
            let vid = l.virtual_id().unwrap();
            let twin = self.tricomps.twin(c, vid);
            if self.tricomps.comps[twin].kind == TricompKind::Bond {
                for m in self.tricomps.comps[twin].virtual_links() {
                    let mv = m.virtual_id().unwrap();
                    if mv != vid {
                        out.push((self.tricomps.twin(twin, mv), mv));
                    }
                }
            } else {
                out.push((twin, vid));
            }
        }
        out
    }
}

/// Placement-wide facts the per-block rules consult.
struct Neighbourhood<'a> {
    is_monitor: &'a [bool],
    blocks: &'a BlockDecomposition,
}

impl Neighbourhood<'_> {
    /// Agents, other than the pair, of the blocks at `x` besides `home`.
    fn outside_agents(&self, home: &BicompInfo, x: NodeIx, pair: (NodeIx, NodeIx)) -> usize {
        self.blocks
            .blocks
            .iter()
            .filter(|b| b.contains(x) && b.links != home.links)
            .map(|b| {
                b.agents
                    .iter()
                    .filter(|&&a| a != pair.0 && a != pair.1)
                    .count()
            })
            .sum()
    }
}

/// Whether the links minus those at positions `drop` still connect every
/// node they touch.
fn links_connected(links: &[(NodeIx, NodeIx)], drop: &[usize]) -> bool {
    let nodes: BTreeSet<NodeIx> = links.iter().flat_map(|&(a, b)| [a, b]).collect();
    let Some(&start) = nodes.iter().next() else {
        return true;
    };
    let mut seen: BTreeSet<NodeIx> = [start].into();
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for (i, &(u, v)) in links.iter().enumerate() {
            if drop.contains(&i) {
                continue;
            }
            let y = if u == x {
                v
            } else if v == x {
                u
            } else {
                continue;
            };
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == nodes.len()
}

/// Two paths from `s`, one to `a` and one to `b`, sharing only `s`. By
/// Menger this holds iff no single node other than `s` cuts `s` off from
/// both targets at once after joining them to a common sink.
fn two_disjoint_paths(
    links: &[(NodeIx, NodeIx)],
    nodes: &BTreeSet<NodeIx>,
    s: NodeIx,
    a: NodeIx,
    b: NodeIx,
) -> bool {
    let reaches = |gone: Option<NodeIx>, target: NodeIx| {
        let mut seen: BTreeSet<NodeIx> = [s].into();
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            if x == target {
                return true;
            }
            for &(u, v) in links {
                let y = if u == x {
                    v
                } else if v == x {
                    u
                } else {
                    continue;
                };
                if Some(y) != gone && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        false
    };
    if !reaches(None, a) || !reaches(None, b) {
        return false;
    }
    nodes
        .iter()
        .filter(|&&x| x != s)
        .all(|&x| (x != a && reaches(Some(x), a)) || (x != b && reaches(Some(x), b)))
}

fn agents_behind(
    block: &BicompInfo,
    d: &TriconnectedDecomposition,
    c: usize,
    l: &CompLink,
) -> usize {
    d.nodes_behind(c, l.virtual_id().unwrap())
        .into_iter()
        .filter(|&x| x != l.u && x != l.v && block.is_agent(x))
        .count()
}

fn vantages_from(
    block: &BicompInfo,
    d: &TriconnectedDecomposition,
    c: usize,
    cuts: &[CutClass],
) -> Vec<Vantage> {
    let comp = &d.comps[c];
    let mut nodes: BTreeSet<NodeIx> = comp
        .nodes
        .iter()
        .copied()
        .filter(|&x| block.is_agent(x))
        .collect();
    for cc in cuts.iter().filter(|cc| cc.k >= 1) {
        nodes.insert(cc.pair.0);
        nodes.insert(cc.pair.1);
    }
    nodes
        .into_iter()
        .map(|x| {
            let partner = |cc: &CutClass| if cc.pair.0 == x { cc.pair.1 } else { cc.pair.0 };
            let mine = cuts.iter().filter(|cc| cc.pair.0 == x || cc.pair.1 == x);
            let independent = block.is_agent(x)
                || mine
                    .clone()
                    .any(|cc| cc.k >= 2 || (cc.k == 1 && block.is_agent(partner(cc))));
            let status = if independent {
                VantageStatus::Independent
            } else {
                let partners: BTreeSet<NodeIx> = mine.filter(|cc| cc.k == 1).map(partner).collect();
                VantageStatus::Conjugate(partners.into_iter().collect())
            };
            Vantage { node: x, status }
        })
        .collect()
}

/// Vantages of component `c` of a block analysis.
pub fn vantages_of(a: &BlockAnalysis, c: usize) -> &[Vantage] {
    &a.vantages[c]
}

/// Category from the vantage count and statuses. Bonds and single links
/// always have their two endpoints as vantages and fall in category 3.
pub fn categorize(kind: TricompKind, vs: &[Vantage]) -> Result<Category, IdentError> {
    if vs.len() < 2 {
        return Err(IdentError::TooFewVantages(vs.len()));
    }
    if matches!(kind, TricompKind::Bond | TricompKind::SingleLink) || vs.len() == 2 {
        return Ok(Category::Cat3);
    }
    if vs.len() >= 4 {
        return Ok(Category::Cat1);
    }
    let independent = vs.iter().filter(|v| v.is_independent()).count();
    let conjugate_links: usize = vs
        .iter()
        .map(|v| match &v.status {
            VantageStatus::Conjugate(p) => p.len(),
            VantageStatus::Independent => 0,
        })
        .sum();
    Ok(match independent {
        2.. => Category::Cat2_1,
        1 => Category::Cat2_2,
        _ if conjugate_links / 2 >= 3 => Category::Cat2_4,
        _ => Category::Cat2_3,
    })
}

/// Block decomposition with agents located, plus the per-block analyses.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub blocks: BlockDecomposition,
    pub analyses: Vec<BlockAnalysis>,
    is_monitor: Vec<bool>,
}

impl Analysis {
    fn context(&self) -> Neighbourhood<'_> {
        Neighbourhood {
            is_monitor: &self.is_monitor,
            blocks: &self.blocks,
        }
    }

    /// The direct-link rule for the real link of category-3 component `c` of
    /// block `b`.
    pub fn alg_b_direct_link(&self, b: usize, c: usize) -> Result<Judgement, IdentError> {
        let a = &self.analyses[b];
        a.expect(c, &[Category::Cat3], "category-3")?;
        let vs = a.vantage_nodes(c);
        let direct = a.tricomps.comps[c]
            .real_links()
            .find(|l| vs.contains(&l.u) && vs.contains(&l.v))
            .ok_or(IdentError::NoDirectLink)?;
        Ok(a.alg_b(c, direct.pair(), &self.context()))
    }

    pub fn report(&self, g: &Graph) -> IdentReport {
        let ctx = self.context();
        let mut verdicts: Vec<Option<Judgement>> = vec![None; g.link_count()];
        for a in &self.analyses {
            for (c, comp) in a.tricomps.comps.iter().enumerate() {
                for l in comp.real_links() {
                    let LinkId::Real(pos) = l.id else {
                        unreachable!()
                    };
                    verdicts[pos] = Some(if a.block.agents.len() < 2 {
                        Judgement::no(Reason::DeadComponent)
                    } else {
                        a.judge(c, l.pair(), &ctx)
                    });
                }
            }
        }
        let links = g
            .links()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.id.is_real())
            .map(|(pos, l)| {
                let direct = self.is_monitor[l.u] && self.is_monitor[l.v];
                let j = if direct {
                    Judgement::yes(Reason::DirectMonitorLink)
                } else {
                    verdicts[pos].unwrap_or(Judgement::no(Reason::DeadComponent))
                };
                LinkVerdict {
                    link: pos,
                    u: g.name(l.u).to_string(),
                    v: g.name(l.v).to_string(),
                    identifiable: j.identifiable,
                    reason: j.reason,
                }
            })
            .collect();
        IdentReport { links }
    }
}

pub fn analyze(g: &Graph, p: &Placement, seed: u64) -> Analysis {
    let mut blocks = all_blocks(g);
    blocks.locate_all_agents(g, p);
    let analyses = blocks
        .blocks
        .iter()
        .map(|b| BlockAnalysis::new(g, b.clone(), seed))
        .collect();
    Analysis {
        blocks,
        analyses,
        is_monitor: p.mask(g.node_count()),
    }
}

/// Identifiable links under placement `p`, with the default triangulation.
pub fn dail(g: &Graph, p: &Placement) -> IdentReport {
    dail_with_seed(g, p, 0)
}

/// As [`dail`], with the polygon triangulation drawn from `seed`.
pub fn dail_with_seed(g: &Graph, p: &Placement, seed: u64) -> IdentReport {
    analyze(g, p, seed).report(g)
}

/// The two conditions of the two-monitor interior criterion: every
/// one-interior-link deletion leaves `g` 2-edge-connected, and `g` plus the
/// link `m1m2` is 3-vertex-connected.
pub fn theorem2_conditions(g: &Graph, m1: NodeIx, m2: NodeIx) -> Result<(bool, bool), IdentError> {
    if m1 == m2 || m1.max(m2) >= g.node_count() {
        return Err(IdentError::Precondition(
            "exactly two distinct monitors of the graph",
        ));
    }
    if g.find_link(m1, m2).is_some() {
        return Err(IdentError::Precondition("no link between the monitors"));
    }
    let interior: Vec<usize> = g
        .links()
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.touches(m1) && !l.touches(m2))
        .map(|(pos, _)| pos)
        .collect();
    if interior.is_empty() {
        return Err(IdentError::Precondition("at least one interior link"));
    }
    // The interior graph is spanned by the interior links.
    let spanned: Vec<(NodeIx, NodeIx)> = interior
        .iter()
        .map(|&l| (g.link(l).u, g.link(l).v))
        .collect();
    if !links_connected(&spanned, &[]) {
        return Err(IdentError::Precondition("connected interior graph"));
    }
    let first = interior
        .iter()
        .all(|&l| g.without_links(&[l]).edge_connectivity_at_least(2));
    let mut plus = g.clone();
    plus.add_link(m1, m2, crate::graph::LinkKind::Real)
        .expect("checked absent");
    Ok((first, plus.vertex_connectivity_at_least(3)))
}

/// The full hypotheses under which the two conditions characterise
/// interior identifiability: besides the preconditions of
/// [`theorem2_conditions`], the graph on the non-monitor nodes must be
/// connected and carry more than one link.
pub fn two_monitor_hypotheses_hold(g: &Graph, m1: NodeIx, m2: NodeIx) -> bool {
    let inner: Vec<NodeIx> = (0..g.node_count())
        .filter(|&x| x != m1 && x != m2)
        .collect();
    let h = g.induced(&inner);
    m1 != m2 && g.find_link(m1, m2).is_none() && h.link_count() > 1 && h.is_connected()
}
