//! Biconnected components, cut vertices, and agent location.

use std::collections::BTreeSet;

use serde::Serialize;

use super::DecompositionError;
use crate::graph::{Graph, NodeIx, Placement};

/// A biconnected component (block) of a connected graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BicompInfo {
    /// Member nodes, ascending.
    pub nodes: Vec<NodeIx>,
    /// Positions of the block's links in the parent graph, ascending.
    pub links: Vec<usize>,
    /// Cut vertices of the whole graph that lie in this block.
    pub cut_vertices: Vec<NodeIx>,
    /// Agents under the placement last passed to [`locate_agents`]; empty until then.
    pub agents: Vec<NodeIx>,
}

impl BicompInfo {
    pub fn contains(&self, x: NodeIx) -> bool {
        self.nodes.binary_search(&x).is_ok()
    }

    pub fn is_agent(&self, x: NodeIx) -> bool {
        self.agents.binary_search(&x).is_ok()
    }

    pub fn is_single_link(&self) -> bool {
        self.links.len() == 1
    }

    /// The block as a standalone graph; link ids are preserved.
    pub fn component(&self, g: &Graph) -> Graph {
        let mut h = Graph::new();
        for &x in &self.nodes {
            h.add_node(g.name(x));
        }
        for &pos in &self.links {
            let l = g.link(pos);
            let u = h.node(g.name(l.u)).expect("block node");
            let v = h.node(g.name(l.v)).expect("block node");
            h.add_link_with_id(u, v, l.id)
                .expect("block links are simple");
        }
        h
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<BicompInfo>,
    /// All cut vertices of the graph, ascending.
    pub cut_vertices: Vec<NodeIx>,
}

impl BlockDecomposition {
    /// Blocks containing `x`.
    pub fn blocks_at(&self, x: NodeIx) -> impl Iterator<Item = usize> + '_ {
        self.blocks
            .iter()
            .enumerate()
            .filter(move |(_, b)| b.contains(x))
            .map(|(i, _)| i)
    }

    /// Fills in the agents of every block.
    pub fn locate_all_agents(&mut self, g: &Graph, p: &Placement) {
        let located: Vec<Vec<NodeIx>> =
            self.blocks.iter().map(|b| locate_agents(g, p, b)).collect();
        for (b, a) in self.blocks.iter_mut().zip(located) {
            b.agents = a;
        }
    }
}

/// Splits a connected graph into blocks with the lowpoint method. Every link
/// lands in exactly one block; bridges form two-node blocks. Blocks are
/// ordered by their smallest link position.
pub fn biconnected_components(g: &Graph) -> Result<BlockDecomposition, DecompositionError> {
    if g.node_count() > 0 && !g.is_connected() {
        return Err(DecompositionError::Disconnected(
            g.connected_components().len(),
        ));
    }
    Ok(all_blocks(g))
}

/// Blocks of every connected component at once; isolated nodes get none.
pub(crate) fn all_blocks(g: &Graph) -> BlockDecomposition {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut link_stack: Vec<usize> = Vec::new();
    let mut raw_blocks: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (node, parent link, next adjacency slot)
        let mut stack: Vec<(NodeIx, Option<usize>, usize)> = vec![(root, None, 0)];
        lowpoint_walk(
            &adj,
            &mut stack,
            &mut disc,
            &mut low,
            &mut time,
            &mut link_stack,
            &mut raw_blocks,
        );
    }
    finish_blocks(g, raw_blocks)
}

fn lowpoint_walk(
    adj: &[Vec<(NodeIx, usize)>],
    stack: &mut Vec<(NodeIx, Option<usize>, usize)>,
    disc: &mut [usize],
    low: &mut [usize],
    time: &mut usize,
    link_stack: &mut Vec<usize>,
    raw_blocks: &mut Vec<Vec<usize>>,
) {
    while let Some(&mut (x, via, ref mut slot)) = stack.last_mut() {
        if *slot < adj[x].len() {
            let (y, li) = adj[x][*slot];
            *slot += 1;
            if Some(li) == via {
                continue;
            }
            if disc[y] == usize::MAX {
                disc[y] = *time;
                low[y] = *time;
                *time += 1;
                link_stack.push(li);
                stack.push((y, Some(li), 0));
            } else if disc[y] < disc[x] {
                low[x] = low[x].min(disc[y]);
                link_stack.push(li);
            }
            continue;
        }
        stack.pop();
        if let (Some(li), Some(&(parent, _, _))) = (via, stack.last()) {
            low[parent] = low[parent].min(low[x]);
            if low[x] >= disc[parent] {
                let mut block = Vec::new();
                while let Some(top) = link_stack.pop() {
                    block.push(top);
                    if top == li {
                        break;
                    }
                }
                raw_blocks.push(block);
            }
        }
    }
}

fn finish_blocks(g: &Graph, raw_blocks: Vec<Vec<usize>>) -> BlockDecomposition {
    let n = g.node_count();
    let mut blocks: Vec<BicompInfo> = raw_blocks
        .into_iter()
        .map(|mut links| {
            links.sort_unstable();
            let nodes: BTreeSet<NodeIx> = links
                .iter()
                .flat_map(|&i| [g.link(i).u, g.link(i).v])
                .collect();
            BicompInfo {
                nodes: nodes.into_iter().collect(),
                links,
                cut_vertices: vec![],
                agents: vec![],
            }
        })
        .collect();
    blocks.sort_by_key(|b| b.links[0]);
    let mut count = vec![0usize; n];
    for b in &blocks {
        for &x in &b.nodes {
            count[x] += 1;
        }
    }
    let cut_vertices: Vec<NodeIx> = (0..n).filter(|&x| count[x] >= 2).collect();
    for b in &mut blocks {
        b.cut_vertices = b.nodes.iter().copied().filter(|&x| count[x] >= 2).collect();
    }
    BlockDecomposition {
        blocks,
        cut_vertices,
    }
}

/// Agents of block `b`: its monitors, plus each of its cut vertices from
/// which a monitor outside the block is reachable without re-entering it.
pub fn locate_agents(g: &Graph, p: &Placement, b: &BicompInfo) -> Vec<NodeIx> {
    let n = g.node_count();
    let is_monitor = p.mask(n);
    let adj = g.adjacency();
    let mut agents = Vec::new();
    for &x in &b.nodes {
        if is_monitor[x] {
            agents.push(x);
            continue;
        }
        if b.cut_vertices.binary_search(&x).is_err() {
            continue;
        }
        let mut seen = vec![false; n];
        for &y in &b.nodes {
            seen[y] = true;
        }
        let mut stack = vec![x];
        let mut found = false;
        'search: while let Some(z) = stack.pop() {
            for &(w, _) in &adj[z] {
                if !seen[w] {
                    if is_monitor[w] {
                        found = true;
                        break 'search;
                    }
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if found {
            agents.push(x);
        }
    }
    agents
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn node_names(g: &Graph, xs: &[NodeIx]) -> Vec<String> {
        let mut v: Vec<String> = xs.iter().map(|&x| g.name(x).to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn bowtie_blocks() {
        let g = bowtie();
        let d = biconnected_components(&g).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(node_names(&g, &d.blocks[0].nodes), ["1", "2", "3"]);
        assert_eq!(node_names(&g, &d.blocks[1].nodes), ["3", "4", "5"]);
        assert_eq!(node_names(&g, &d.cut_vertices), ["3"]);
    }

    #[test]
    fn cycle_is_one_block() {
        let d = biconnected_components(&cycle(5)).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert!(d.cut_vertices.is_empty());
    }

    #[test]
    fn path_blocks_are_bridges() {
        let g = path4();
        let d = biconnected_components(&g).unwrap();
        assert_eq!(d.blocks.len(), 3);
        assert!(d.blocks.iter().all(|b| b.is_single_link()));
        assert_eq!(node_names(&g, &d.cut_vertices), ["2", "3"]);
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = Graph::parse("1 2\n3 4").unwrap();
        assert_eq!(
            biconnected_components(&g),
            Err(DecompositionError::Disconnected(2))
        );
    }

    #[test]
    fn agent_examples() {
        let g = bowtie();
        let d = biconnected_components(&g).unwrap();
        let p = placement(&g, &["1", "4"]);
        assert_eq!(
            node_names(&g, &locate_agents(&g, &p, &d.blocks[0])),
            ["1", "3"]
        );
        assert_eq!(
            node_names(&g, &locate_agents(&g, &p, &d.blocks[1])),
            ["3", "4"]
        );

        let g = tripend();
        let d = biconnected_components(&g).unwrap();
        let p = placement(&g, &["m1", "m2", "m3"]);
        let tri = d.blocks.iter().find(|b| b.nodes.len() == 3).unwrap();
        assert_eq!(node_names(&g, &locate_agents(&g, &p, tri)), ["1", "2", "3"]);
    }

    #[test]
    fn agents_need_a_monitor_beyond_the_cut() {
        let g = path4();
        let d = biconnected_components(&g).unwrap();
        let p = placement(&g, &["1"]);
        // 3 reaches monitor 1 through the other two blocks
        let last = d.blocks.iter().find(|b| b.contains(3)).unwrap();
        assert_eq!(node_names(&g, &locate_agents(&g, &p, last)), ["3"]);
        let p = placement(&g, &["4"]);
        let first = &d.blocks[0];
        assert_eq!(node_names(&g, &locate_agents(&g, &p, first)), ["2"]);
    }
}
