//! Triconnected components by recursive separation-pair splitting.
//!
//! A block is split along 2-cuts until every piece is 3-connected, a bond or
//! a triangle. Adjacent bonds and adjacent triangles are then merged into
//! maximal bonds and polygons, which is the unique form. Finally each polygon
//! is fan-triangulated.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::BicompInfo;
use crate::graph::{Graph, LinkId, NodeIx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TricompKind {
    ThreeConnected,
    Triangle,
    Polygon,
    Bond,
    SingleLink,
}

/// A link inside a component, endpoints ascending. Real links carry their
/// position in the decomposed graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompLink {
    pub u: NodeIx,
    pub v: NodeIx,
    pub id: LinkId,
}

impl CompLink {
    fn new(a: NodeIx, b: NodeIx, id: LinkId) -> Self {
        CompLink {
            u: a.min(b),
            v: a.max(b),
            id,
        }
    }

    pub fn pair(&self) -> (NodeIx, NodeIx) {
        (self.u, self.v)
    }

    pub fn touches(&self, x: NodeIx) -> bool {
        self.u == x || self.v == x
    }

    pub fn other(&self, x: NodeIx) -> NodeIx {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn virtual_id(&self) -> Option<usize> {
        match self.id {
            LinkId::Virtual(i) => Some(i),
            LinkId::Real(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tricomp {
    pub kind: TricompKind,
    /// Member nodes, ascending.
    pub nodes: Vec<NodeIx>,
    pub links: Vec<CompLink>,
}

impl Tricomp {
    fn from_links(kind: TricompKind, mut links: Vec<CompLink>) -> Self {
        links.sort();
        let nodes: BTreeSet<NodeIx> = links.iter().flat_map(|l| [l.u, l.v]).collect();
        Tricomp {
            kind,
            nodes: nodes.into_iter().collect(),
            links,
        }
    }

    pub fn contains(&self, x: NodeIx) -> bool {
        self.nodes.binary_search(&x).is_ok()
    }

    pub fn real_links(&self) -> impl Iterator<Item = &CompLink> {
        self.links.iter().filter(|l| l.id.is_real())
    }

    pub fn virtual_links(&self) -> impl Iterator<Item = &CompLink> {
        self.links.iter().filter(|l| !l.id.is_real())
    }

    /// One separation pair per virtual link, in link order.
    pub fn boundary_pairs(&self) -> Vec<(NodeIx, NodeIx)> {
        self.virtual_links().map(CompLink::pair).collect()
    }

    /// Real links of the component incident to `x`.
    pub fn real_degree(&self, x: NodeIx) -> usize {
        self.real_links().filter(|l| l.touches(x)).count()
    }

    /// The component as a standalone graph on the parent's node names.
    pub fn component(&self, parent: &Graph) -> Graph {
        let mut h = Graph::new();
        for &x in &self.nodes {
            h.add_node(parent.name(x));
        }
        for l in &self.links {
            let u = h.node(parent.name(l.u)).expect("component node");
            let v = h.node(parent.name(l.v)).expect("component node");
            h.add_link_with_id(u, v, l.id).expect("component links");
        }
        h
    }
}

/// Components of one block plus the tree formed by shared virtual links.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriconnectedDecomposition {
    pub comps: Vec<Tricomp>,
    /// Virtual id to the two components holding it.
    pub twins: BTreeMap<usize, [usize; 2]>,
}

impl TriconnectedDecomposition {
    fn new(comps: Vec<Tricomp>) -> Self {
        let mut owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, c) in comps.iter().enumerate() {
            for l in c.virtual_links() {
                owners.entry(l.virtual_id().unwrap()).or_default().push(i);
            }
        }
        let twins = owners
            .into_iter()
            .map(|(vid, o)| {
                assert_eq!(o.len(), 2, "virtual link {vid} must have exactly one twin");
                (vid, [o[0], o[1]])
            })
            .collect();
        TriconnectedDecomposition { comps, twins }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// The component on the other side of virtual link `vid` from `comp`.
    pub fn twin(&self, comp: usize, vid: usize) -> usize {
        let [a, b] = self.twins[&vid];
        if a == comp {
            b
        } else {
            a
        }
    }

    /// Components in the subtree reached from `comp` through `vid`.
    pub fn behind(&self, comp: usize, vid: usize) -> Vec<usize> {
        let mut seen = vec![false; self.comps.len()];
        seen[comp] = true;
        let start = self.twin(comp, vid);
        seen[start] = true;
        let mut stack = vec![start];
        let mut out = vec![];
        while let Some(c) = stack.pop() {
            out.push(c);
            for l in self.comps[c].virtual_links() {
                let next = self.twin(c, l.virtual_id().unwrap());
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Nodes of the components behind virtual link `vid` of `comp`.
    pub fn nodes_behind(&self, comp: usize, vid: usize) -> BTreeSet<NodeIx> {
        self.behind(comp, vid)
            .into_iter()
            .flat_map(|c| self.comps[c].nodes.iter().copied())
            .collect()
    }

    /// Index of the component holding real link `id`.
    pub fn comp_of_real(&self, id: usize) -> Option<usize> {
        self.comps
            .iter()
            .position(|c| c.links.iter().any(|l| l.id == LinkId::Real(id)))
    }

    pub fn count_kind(&self, kind: TricompKind) -> usize {
        self.comps.iter().filter(|c| c.kind == kind).count()
    }
}

fn block_links(g: &Graph, b: &BicompInfo) -> Vec<CompLink> {
    b.links
        .iter()
        .map(|&pos| {
            let l = g.link(pos);
            CompLink::new(l.u, l.v, LinkId::Real(pos))
        })
        .collect()
}

fn nodes_of(links: &[CompLink]) -> Vec<NodeIx> {
    let s: BTreeSet<NodeIx> = links.iter().flat_map(|l| [l.u, l.v]).collect();
    s.into_iter().collect()
}

/// Connected classes of `nodes ∖ {a,b}` under links avoiding a and b.
fn classes_without(nodes: &[NodeIx], links: &[CompLink], a: NodeIx, b: NodeIx) -> Vec<Vec<NodeIx>> {
    let pos: BTreeMap<NodeIx, usize> = nodes.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for l in links {
        if l.touches(a) || l.touches(b) {
            continue;
        }
        let (ru, rv) = (find(&mut parent, pos[&l.u]), find(&mut parent, pos[&l.v]));
        parent[ru] = rv;
    }
    let mut classes: BTreeMap<usize, Vec<NodeIx>> = BTreeMap::new();
    for (i, &x) in nodes.iter().enumerate() {
        if x != a && x != b {
            classes.entry(find(&mut parent, i)).or_default().push(x);
        }
    }
    let mut out: Vec<Vec<NodeIx>> = classes.into_values().collect();
    out.sort();
    out
}

fn split_piece(links: Vec<CompLink>, next_vid: &mut usize, out: &mut Vec<Vec<CompLink>>) {
    let nodes = nodes_of(&links);
    if nodes.len() <= 2 {
        out.push(links);
        return;
    }
    let mut bundles: BTreeMap<(NodeIx, NodeIx), Vec<usize>> = BTreeMap::new();
    for (i, l) in links.iter().enumerate() {
        bundles.entry(l.pair()).or_default().push(i);
    }
    if let Some((&(a, b), members)) = bundles.iter().find(|(_, m)| m.len() >= 2) {
        let vid = *next_vid;
        *next_vid += 1;
        let virt = CompLink::new(a, b, LinkId::Virtual(vid));
        let mut bond: Vec<CompLink> = members.iter().map(|&i| links[i]).collect();
        bond.push(virt);
        let mut rest: Vec<CompLink> = links
            .iter()
            .enumerate()
            .filter(|(i, _)| !members.contains(i))
            .map(|(_, l)| *l)
            .collect();
        rest.push(virt);
        out.push(bond);
        split_piece(rest, next_vid, out);
        return;
    }
    if nodes.len() == 3 {
        out.push(links);
        return;
    }
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            let classes = classes_without(&nodes, &links, a, b);
            if classes.len() < 2 {
                continue;
            }
            let first: BTreeSet<NodeIx> = classes[0].iter().copied().collect();
            let vid = *next_vid;
            *next_vid += 1;
            let virt = CompLink::new(a, b, LinkId::Virtual(vid));
            let (mut near, mut far): (Vec<CompLink>, Vec<CompLink>) = links
                .iter()
                .partition(|l| first.contains(&l.u) || first.contains(&l.v));
            near.push(virt);
            far.push(virt);
            split_piece(near, next_vid, out);
            split_piece(far, next_vid, out);
            return;
        }
    }
    out.push(links);
}

fn piece_kind(links: &[CompLink]) -> TricompKind {
    match nodes_of(links).len() {
        2 => TricompKind::Bond,
        3 if links.len() == 3 => TricompKind::Triangle,
        _ => TricompKind::ThreeConnected,
    }
}

/// Split components before any merging: bonds, triangles and 3-connected
/// pieces. Not unique.
fn split_components(g: &Graph, b: &BicompInfo) -> Vec<Tricomp> {
    let links = block_links(g, b);
    if b.is_single_link() {
        return vec![Tricomp::from_links(TricompKind::SingleLink, links)];
    }
    let mut raw = Vec::new();
    let mut next_vid = 0;
    split_piece(links, &mut next_vid, &mut raw);
    raw.into_iter()
        .map(|p| Tricomp::from_links(piece_kind(&p), p))
        .collect()
}

/// Merges every pair of same-family components sharing a virtual link, where
/// bonds merge with bonds and triangles or polygons with each other.
fn merge_same_family(comps: Vec<Tricomp>) -> Vec<Tricomp> {
    let family = |k: TricompKind| match k {
        TricompKind::Bond => Some(0),
        TricompKind::Triangle | TricompKind::Polygon => Some(1),
        _ => None,
    };
    let mut parent: Vec<usize> = (0..comps.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let d = TriconnectedDecomposition::new(comps);
    let mut absorbed: BTreeSet<usize> = BTreeSet::new();
    for (&vid, &[i, j]) in &d.twins {
        let (fi, fj) = (family(d.comps[i].kind), family(d.comps[j].kind));
        if fi.is_some() && fi == fj {
            absorbed.insert(vid);
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..d.comps.len() {
        groups.entry(find(&mut parent, i)).or_default().push(i);
    }
    groups
        .into_values()
        .map(|members| {
            let kind = d.comps[members[0]].kind;
            let links: Vec<CompLink> = members
                .iter()
                .flat_map(|&m| d.comps[m].links.iter().copied())
                .filter(|l| l.virtual_id().is_none_or(|v| !absorbed.contains(&v)))
                .collect();
            let kind = match kind {
                TricompKind::Triangle | TricompKind::Polygon if nodes_of(&links).len() > 3 => {
                    TricompKind::Polygon
                }
                TricompKind::Triangle | TricompKind::Polygon => TricompKind::Triangle,
                k => k,
            };
            Tricomp::from_links(kind, links)
        })
        .collect()
}

/// The unique decomposition: maximal bonds, polygons (triangles count as
/// 3-gons) and 3-connected components.
pub fn spqr_components(g: &Graph, b: &BicompInfo) -> TriconnectedDecomposition {
    TriconnectedDecomposition::new(merge_same_family(split_components(g, b)))
}

/// Nodes of a polygon in cyclic order starting at `apex`, stepping first to
/// its smaller neighbour.
fn polygon_cycle(p: &Tricomp, apex: NodeIx) -> Vec<NodeIx> {
    let mut cycle = vec![apex];
    let mut prev = usize::MAX;
    let mut cur = apex;
    loop {
        let next = p
            .links
            .iter()
            .filter(|l| l.touches(cur))
            .map(|l| l.other(cur))
            .filter(|&y| y != prev)
            .min()
            .expect("polygon node has two neighbours");
        if next == apex {
            return cycle;
        }
        cycle.push(next);
        prev = cur;
        cur = next;
    }
}

fn fan_triangulate(p: &Tricomp, apex: NodeIx, next_vid: &mut usize) -> Vec<Tricomp> {
    let c = polygon_cycle(p, apex);
    let tau = c.len();
    let side = |i: usize| -> CompLink {
        let (a, b) = (c[i], c[(i + 1) % tau]);
        *p.links
            .iter()
            .find(|l| l.pair() == (a.min(b), a.max(b)))
            .expect("polygon side")
    };
    let diag: Vec<Option<CompLink>> = (0..tau)
        .map(|i| {
            (2..=tau.saturating_sub(2)).contains(&i).then(|| {
                let vid = *next_vid;
                *next_vid += 1;
                CompLink::new(c[0], c[i], LinkId::Virtual(vid))
            })
        })
        .collect();
    (1..=tau - 2)
        .map(|i| {
            let left = if i == 1 { side(0) } else { diag[i].unwrap() };
            let right = if i + 1 == tau - 1 {
                side(tau - 1)
            } else {
                diag[i + 1].unwrap()
            };
            Tricomp::from_links(TricompKind::Triangle, vec![left, side(i), right])
        })
        .collect()
}

/// Triconnected components of block `b` with every polygon fan-triangulated.
/// Seed 0 puts each fan apex at the polygon's lowest node; any other seed
/// draws the apices from a seeded generator.
pub fn triconnected_components(g: &Graph, b: &BicompInfo, seed: u64) -> TriconnectedDecomposition {
    let spqr = spqr_components(g, b);
    let mut next_vid = spqr.twins.keys().next_back().map_or(0, |v| v + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comps = Vec::new();
    for c in spqr.comps {
        if c.kind != TricompKind::Polygon {
            comps.push(c);
            continue;
        }
        let apex = if seed == 0 {
            c.nodes[0]
        } else {
            c.nodes[rng.gen_range(0..c.nodes.len())]
        };
        comps.extend(fan_triangulate(&c, apex, &mut next_vid));
    }
    TriconnectedDecomposition::new(comps)
}

/// Merges triangles that share a virtual link until none do, restoring the
/// polygons.
pub fn merge_triangles(d: &TriconnectedDecomposition) -> TriconnectedDecomposition {
    let comps = d.comps.clone();
    let mut parent: Vec<usize> = (0..comps.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut absorbed = BTreeSet::new();
    for (&vid, &[i, j]) in &d.twins {
        let tri = |k: usize| matches!(comps[k].kind, TricompKind::Triangle | TricompKind::Polygon);
        if tri(i) && tri(j) {
            absorbed.insert(vid);
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..comps.len() {
        groups.entry(find(&mut parent, i)).or_default().push(i);
    }
    let merged = groups
        .into_values()
        .map(|members| {
            if members.len() == 1 {
                return comps[members[0]].clone();
            }
            let links: Vec<CompLink> = members
                .iter()
                .flat_map(|&m| comps[m].links.iter().copied())
                .filter(|l| l.virtual_id().is_none_or(|v| !absorbed.contains(&v)))
                .collect();
            Tricomp::from_links(TricompKind::Polygon, links)
        })
        .collect();
    TriconnectedDecomposition::new(merged)
}
