mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{connected_graph, two_connected_graph};
use netident::decomposition::{
    biconnected_components, merge_triangles, spqr_components, triconnected_components, BicompInfo,
    TricompKind, TriconnectedDecomposition,
};
use netident::gen::{gen_random_graph, GraphModel};
use netident::{Graph, LinkId, NodeIx};
use proptest::prelude::*;

/// Kind family, sorted real link positions, sorted virtual endpoint pairs.
type Canon = (u8, Vec<usize>, Vec<(NodeIx, NodeIx)>);

fn family(kind: TricompKind) -> u8 {
    match kind {
        TricompKind::Bond => 0,
        TricompKind::Triangle | TricompKind::Polygon => 1,
        TricompKind::ThreeConnected => 2,
        TricompKind::SingleLink => 3,
    }
}

fn canon(d: &TriconnectedDecomposition) -> Vec<Canon> {
    let mut out: Vec<Canon> = d
        .comps
        .iter()
        .map(|c| {
            let mut real: Vec<usize> = c
                .real_links()
                .map(|l| match l.id {
                    LinkId::Real(p) => p,
                    LinkId::Virtual(_) => unreachable!(),
                })
                .collect();
            real.sort_unstable();
            let mut virt: Vec<_> = c.virtual_links().map(|l| l.pair()).collect();
            virt.sort_unstable();
            (family(c.kind), real, virt)
        })
        .collect();
    out.sort();
    out
}

fn blocks(g: &Graph) -> Vec<BicompInfo> {
    biconnected_components(g).unwrap().blocks
}

fn cycle_graph(n: usize) -> Graph {
    let text: Vec<String> = (1..=n).map(|i| format!("{} {}", i, i % n + 1)).collect();
    Graph::parse(&text.join("\n")).unwrap()
}

/// Reference splitter. Separation pairs are tried from the highest pair down,
/// the last class is cut off, and the links joining the pair travel with it.
mod reference {
    use super::*;

    #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
    pub enum Id {
        Real(usize),
        Virt(usize),
    }

    pub type Piece = Vec<(NodeIx, NodeIx, Id)>;

    fn nodes(p: &Piece) -> Vec<NodeIx> {
        let s: BTreeSet<NodeIx> = p.iter().flat_map(|&(a, b, _)| [a, b]).collect();
        s.into_iter().collect()
    }

    fn classes(p: &Piece, a: NodeIx, b: NodeIx) -> Vec<BTreeSet<NodeIx>> {
        let rest: Vec<NodeIx> = nodes(p).into_iter().filter(|&x| x != a && x != b).collect();
        let mut seen = BTreeSet::new();
        let mut out = vec![];
        for &s in &rest {
            if seen.contains(&s) {
                continue;
            }
            let mut class = BTreeSet::from([s]);
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(x) = stack.pop() {
                for &(u, v, _) in p {
                    let y = if u == x {
                        v
                    } else if v == x {
                        u
                    } else {
                        continue;
                    };
                    if y != a && y != b && seen.insert(y) {
                        class.insert(y);
                        stack.push(y);
                    }
                }
            }
            out.push(class);
        }
        out
    }

    fn split(p: Piece, vid: &mut usize, out: &mut Vec<Piece>) {
        let ns = nodes(&p);
        if ns.len() <= 2 {
            out.push(p);
            return;
        }
        for i in (0..ns.len()).rev() {
            for j in (0..i).rev() {
                let (a, b) = (ns[j], ns[i]);
                let cs = classes(&p, a, b);
                if cs.len() < 2 {
                    continue;
                }
                let last = cs.last().unwrap();
                let v = Id::Virt(*vid);
                *vid += 1;
                let (mut side, mut rest): (Piece, Piece) = p.iter().partition(|&&(u, w, _)| {
                    last.contains(&u) || last.contains(&w) || (u.min(w), u.max(w)) == (a, b)
                });
                side.push((a, b, v));
                rest.push((a, b, v));
                split(side, vid, out);
                split(rest, vid, out);
                return;
            }
        }
        let mut count: BTreeMap<(NodeIx, NodeIx), usize> = BTreeMap::new();
        for &(u, w, _) in &p {
            *count.entry((u.min(w), u.max(w))).or_default() += 1;
        }
        if let Some((&(a, b), _)) = count.iter().rev().find(|(_, &c)| c >= 2) {
            let v = Id::Virt(*vid);
            *vid += 1;
            let (mut bond, mut rest): (Piece, Piece) = p
                .into_iter()
                .partition(|&(u, w, _)| (u.min(w), u.max(w)) == (a, b));
            bond.push((a, b, v));
            rest.push((a, b, v));
            out.push(bond);
            split(rest, vid, out);
            return;
        }
        out.push(p);
    }

    fn is_cycle(p: &Piece) -> bool {
        let ns = nodes(p);
        ns.len() >= 3
            && p.len() == ns.len()
            && ns
                .iter()
                .all(|&x| p.iter().filter(|&&(u, w, _)| u == x || w == x).count() == 2)
    }

    fn fam(p: &Piece) -> u8 {
        if nodes(p).len() == 2 {
            0
        } else if is_cycle(p) {
            1
        } else {
            2
        }
    }

    pub fn components(g: &Graph, b: &BicompInfo) -> Vec<Canon> {
        let piece: Piece = b
            .links
            .iter()
            .map(|&pos| {
                let l = g.link(pos);
                (l.u.min(l.v), l.u.max(l.v), Id::Real(pos))
            })
            .collect();
        if piece.len() == 1 {
            return vec![(3, vec![b.links[0]], vec![])];
        }
        let mut pieces = vec![];
        split(piece, &mut 0, &mut pieces);
        // Merge bonds with bonds and cycles with cycles across shared virtual links.
        loop {
            let mut hit = None;
            'search: for i in 0..pieces.len() {
                for j in i + 1..pieces.len() {
                    let fi = fam(&pieces[i]);
                    if fi == 2 || fi != fam(&pieces[j]) {
                        continue;
                    }
                    for e in &pieces[i] {
                        if matches!(e.2, Id::Virt(_)) && pieces[j].iter().any(|f| f.2 == e.2) {
                            hit = Some((i, j, e.2));
                            break 'search;
                        }
                    }
                }
            }
            let Some((i, j, shared)) = hit else { break };
            let pj = pieces.remove(j);
            let pi = &mut pieces[i];
            pi.retain(|e| e.2 != shared);
            pi.extend(pj.into_iter().filter(|e| e.2 != shared));
        }
        let mut out: Vec<Canon> = pieces
            .iter()
            .map(|p| {
                let mut real: Vec<usize> = p
                    .iter()
                    .filter_map(|e| match e.2 {
                        Id::Real(r) => Some(r),
                        Id::Virt(_) => None,
                    })
                    .collect();
                real.sort_unstable();
                let mut virt: Vec<_> = p
                    .iter()
                    .filter(|e| matches!(e.2, Id::Virt(_)))
                    .map(|e| (e.0, e.1))
                    .collect();
                virt.sort_unstable();
                (fam(p), real, virt)
            })
            .collect();
        out.sort();
        out
    }
}

fn separates(g: &Graph, b: &BicompInfo, a: NodeIx, c: NodeIx) -> bool {
    let rest: Vec<NodeIx> = b
        .nodes
        .iter()
        .copied()
        .filter(|&x| x != a && x != c)
        .collect();
    if rest.is_empty() {
        return false;
    }
    let mut seen = BTreeSet::from([rest[0]]);
    let mut stack = vec![rest[0]];
    while let Some(x) = stack.pop() {
        for &pos in &b.links {
            let l = g.link(pos);
            if !l.touches(x) {
                continue;
            }
            let y = l.other(x);
            if y != a && y != c && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() < rest.len()
}

#[test]
fn polygons_fan_into_tau_minus_two_triangles() {
    for tau in 3..=12 {
        let g = cycle_graph(tau);
        let b = &blocks(&g)[0];
        for seed in 0..50 {
            let d = triconnected_components(&g, b, seed);
            assert_eq!(d.len(), tau - 2, "tau {tau} seed {seed}");
            assert_eq!(d.count_kind(TricompKind::Triangle), tau - 2);
        }
    }
}

#[test]
fn triangle_count_is_seed_independent() {
    for i in 0..100u64 {
        let n = 4 + (i % 7) as usize;
        let links = n + (i as usize % n);
        let g =
            gen_random_graph(n, links.min(n * (n - 1) / 2), GraphModel::TwoConnected, i).unwrap();
        let b = &blocks(&g)[0];
        let base = triconnected_components(&g, b, 0);
        for seed in 1..10 {
            let d = triconnected_components(&g, b, seed);
            assert_eq!(
                d.count_kind(TricompKind::Triangle),
                base.count_kind(TricompKind::Triangle)
            );
            assert_eq!(d.len(), base.len());
        }
    }
}

#[test]
fn reference_splitter_agrees_on_examples() {
    let examples = [
        "1 2\n1 3\n1 4\n2 3\n2 4\n3 4",
        "s a\na t\ns b\nb t\ns c\nc t",
        "1 2\n2 3\n3 4\n4 5\n5 6\n6 1",
        "1 2\n2 3\n3 1\n3 4\n4 5\n5 3",
        "1 2\n2 3\n3 4\n4 1\n1 3\n2 4\n4 5\n5 6\n6 1",
    ];
    for text in examples {
        let g = Graph::parse(text).unwrap();
        for b in blocks(&g) {
            assert_eq!(
                canon(&spqr_components(&g, &b)),
                reference::components(&g, &b),
                "{text}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn unique_form_matches_reference(g in connected_graph(2, 10)) {
        for b in blocks(&g) {
            prop_assert_eq!(canon(&spqr_components(&g, &b)), reference::components(&g, &b));
        }
    }

    #[test]
    fn merging_recovers_the_unique_form(g in two_connected_graph(3, 10), seed in 0u64..1000) {
        let b = &blocks(&g)[0];
        let want = canon(&spqr_components(&g, b));
        prop_assert_eq!(canon(&merge_triangles(&triconnected_components(&g, b, seed))), want);
    }

    #[test]
    fn virtual_links_are_separation_pairs(g in connected_graph(3, 10), seed in 0u64..1000) {
        for b in blocks(&g) {
            let d = triconnected_components(&g, &b, seed);
            for c in &d.comps {
                for l in c.virtual_links() {
                    prop_assert!(separates(&g, &b, l.u, l.v), "{:?}", l);
                }
            }
        }
    }

    #[test]
    fn links_are_partitioned(g in connected_graph(2, 10), seed in 0u64..1000) {
        for b in blocks(&g) {
            let d = triconnected_components(&g, &b, seed);
            let mut real: Vec<usize> = vec![];
            let mut virt: BTreeMap<usize, usize> = BTreeMap::new();
            for c in &d.comps {
                for l in &c.links {
                    match l.id {
                        LinkId::Real(p) => real.push(p),
                        LinkId::Virtual(v) => *virt.entry(v).or_default() += 1,
                    }
                }
            }
            real.sort_unstable();
            let mut want = b.links.clone();
            want.sort_unstable();
            prop_assert_eq!(real, want);
            prop_assert!(virt.values().all(|&k| k == 2));
            prop_assert_eq!(d.twins.len(), virt.len());
            prop_assert_eq!(d.twins.len() + 1, d.len());
        }
    }
}
