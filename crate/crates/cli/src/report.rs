//! JSON shapes for `decompose` and `oracle`.

use netident::decomposition::{
    biconnected_components, spqr_components, triconnected_components, CompLink, TricompKind,
};
use netident::oracle::{OracleVerdict, Recovered};
use netident::{Graph, NodeIx, Placement};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Decomposition {
    pub components: Vec<ConnectedComponent>,
}

#[derive(Debug, Serialize)]
pub struct ConnectedComponent {
    pub nodes: Vec<String>,
    pub blocks: Vec<Block>,
}

#[derive(Debug, Serialize)]
pub struct Block {
    pub nodes: Vec<String>,
    pub links: Vec<[String; 2]>,
    pub cut_vertices: Vec<String>,
    /// Present only when monitors were given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agents: Option<Vec<String>>,
    pub triconnected: Vec<Component>,
}

#[derive(Debug, Serialize)]
pub struct Component {
    pub kind: TricompKind,
    pub nodes: Vec<String>,
    pub real_links: Vec<[String; 2]>,
    pub virtual_links: Vec<VirtualLink>,
    pub boundary_pairs: Vec<[String; 2]>,
}

#[derive(Debug, Serialize)]
pub struct VirtualLink {
    pub id: usize,
    pub u: String,
    pub v: String,
}

fn names(g: &Graph, xs: &[NodeIx]) -> Vec<String> {
    xs.iter().map(|&x| g.name(x).to_string()).collect()
}

fn pair(g: &Graph, (u, v): (NodeIx, NodeIx)) -> [String; 2] {
    [g.name(u).to_string(), g.name(v).to_string()]
}

pub fn decompose(g: &Graph, p: &Placement, seed: u64, polygons: bool) -> Decomposition {
    let components = g
        .connected_components()
        .into_iter()
        .map(|members| {
            let h = g.induced(&members);
            let monitors: Vec<NodeIx> = p
                .monitors()
                .iter()
                .filter_map(|&m| h.node(g.name(m)))
                .collect();
            let mut d = biconnected_components(&h).expect("induced on a connected component");
            if !p.is_empty() {
                d.locate_all_agents(&h, &Placement::new(monitors));
            }
            let blocks = d
                .blocks
                .iter()
                .map(|b| {
                    let t = if polygons {
                        spqr_components(&h, b)
                    } else {
                        triconnected_components(&h, b, seed)
                    };
                    Block {
                        nodes: names(&h, &b.nodes),
                        links: b
                            .links
                            .iter()
                            .map(|&l| pair(&h, (h.link(l).u, h.link(l).v)))
                            .collect(),
                        cut_vertices: names(&h, &b.cut_vertices),
                        agents: (!p.is_empty()).then(|| names(&h, &b.agents)),
                        triconnected: t
                            .comps
                            .iter()
                            .map(|c| Component {
                                kind: c.kind,
                                nodes: names(&h, &c.nodes),
                                real_links: c.real_links().map(|l| pair(&h, l.pair())).collect(),
                                virtual_links: c
                                    .virtual_links()
                                    .map(|l| virtual_link(&h, l))
                                    .collect(),
                                boundary_pairs: c
                                    .boundary_pairs()
                                    .into_iter()
                                    .map(|bp| pair(&h, bp))
                                    .collect(),
                            })
                            .collect(),
                    }
                })
                .collect();
            ConnectedComponent {
                nodes: names(&h, &(0..h.node_count()).collect::<Vec<_>>()),
                blocks,
            }
        })
        .collect();
    Decomposition { components }
}

fn virtual_link(g: &Graph, l: &CompLink) -> VirtualLink {
    VirtualLink {
        id: l.virtual_id().expect("virtual"),
        u: g.name(l.u).to_string(),
        v: g.name(l.v).to_string(),
    }
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub links: Vec<OracleLink>,
    pub rank: usize,
    pub path_count: usize,
}

#[derive(Debug, Serialize)]
pub struct OracleLink {
    pub link: usize,
    pub u: String,
    pub v: String,
    pub identifiable: bool,
    /// Recovered metric as "p/q", when solving.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

pub fn oracle(g: &Graph, verdict: &OracleVerdict, recovered: Option<&[Recovered]>) -> OracleReport {
    let links = g
        .links()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.id.is_real())
        .enumerate()
        .map(|(col, (pos, l))| OracleLink {
            link: pos,
            u: g.name(l.u).to_string(),
            v: g.name(l.v).to_string(),
            identifiable: verdict.identifiable.binary_search(&pos).is_ok(),
            value: recovered.and_then(|r| match &r[col] {
                Recovered::Value(v) => Some(v.to_string()),
                Recovered::Unidentifiable => None,
            }),
        })
        .collect();
    OracleReport {
        links,
        rank: verdict.rank,
        path_count: verdict.path_count,
    }
}
