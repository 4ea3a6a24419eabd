//! Undirected multigraph with named nodes, real/virtual links, and the
//! small-cut connectivity predicates used throughout the crate.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Dense node index into a [`Graph`]'s node table.
pub type NodeIx = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: expected two node tokens, found {found}")]
    Malformed { line: usize, found: usize },
    #[error("line {line}: duplicate link {u}-{v}")]
    DuplicateLink { line: usize, u: String, v: String },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoopAt { line: usize, node: String },
    #[error("self-loop on node {0}")]
    SelfLoop(String),
    #[error("parallel real links between {0} and {1}")]
    ParallelReal(String, String),
    #[error("unknown node index {0}")]
    UnknownIndex(NodeIx),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("monitor {0:?} listed twice")]
    DuplicateMonitor(String),
    #[error("placement is empty")]
    EmptyPlacement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkKind {
    Real,
    Virtual,
}

/// Identity of a link that survives subgraph extraction. Real links keep the
/// index they had in the graph they were parsed into; virtual links carry an
/// id shared with their twin in a sibling component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkId {
    Real(usize),
    Virtual(usize),
}

impl LinkId {
    pub fn kind(self) -> LinkKind {
        match self {
            LinkId::Real(_) => LinkKind::Real,
            LinkId::Virtual(_) => LinkKind::Virtual,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, LinkId::Real(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Link {
    pub u: NodeIx,
    pub v: NodeIx,
    pub id: LinkId,
}

impl Link {
    pub fn kind(&self) -> LinkKind {
        self.id.kind()
    }

    pub fn other(&self, x: NodeIx) -> NodeIx {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: NodeIx) -> bool {
        self.u == x || self.v == x
    }

    /// Endpoints ordered low-high.
    pub fn key(&self) -> (NodeIx, NodeIx) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, NodeIx>,
    links: Vec<Link>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.links == other.links
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph of real links from name pairs, nodes in first-appearance order.
    pub fn from_links<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self, GraphError> {
        let mut g = Graph::new();
        for (a, b) in pairs {
            let u = g.add_node(a.as_ref());
            let v = g.add_node(b.as_ref());
            g.add_link(u, v, LinkKind::Real)?;
        }
        Ok(g)
    }

    /// Parses an edge-list document: one `u v` pair per line, `#` comments,
    /// blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut g = Graph::new();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            if tokens.len() != 2 {
                return Err(GraphError::Malformed {
                    line: line_no,
                    found: tokens.len(),
                });
            }
            let (a, b) = (tokens[0], tokens[1]);
            if a == b {
                return Err(GraphError::SelfLoopAt {
                    line: line_no,
                    node: a.to_string(),
                });
            }
            let u = g.add_node(a);
            let v = g.add_node(b);
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateLink {
                    line: line_no,
                    u: a.to_string(),
                    v: b.to_string(),
                });
            }
            g.add_link(u, v, LinkKind::Real)?;
        }
        Ok(g)
    }

    /// Serializes real and virtual links in index order, one pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for l in &self.links {
            out.push_str(&self.names[l.u]);
            out.push(' ');
            out.push_str(&self.names[l.v]);
            out.push('\n');
        }
        out
    }

    /// Returns the index of `name`, inserting it if absent.
    pub fn add_node(&mut self, name: &str) -> NodeIx {
        if let Some(&ix) = self.index.get(name) {
            return ix;
        }
        let ix = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), ix);
        ix
    }

    /// Adds a link; real links get the next real id (their index among real links).
    pub fn add_link(&mut self, u: NodeIx, v: NodeIx, kind: LinkKind) -> Result<usize, GraphError> {
        let id = match kind {
            LinkKind::Real => LinkId::Real(self.links.iter().filter(|l| l.id.is_real()).count()),
            LinkKind::Virtual => {
                LinkId::Virtual(self.links.iter().filter(|l| !l.id.is_real()).count())
            }
        };
        self.add_link_with_id(u, v, id)
    }

    pub fn add_link_with_id(
        &mut self,
        u: NodeIx,
        v: NodeIx,
        id: LinkId,
    ) -> Result<usize, GraphError> {
        let n = self.names.len();
        if u >= n {
            return Err(GraphError::UnknownIndex(u));
        }
        if v >= n {
            return Err(GraphError::UnknownIndex(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.names[u].clone()));
        }
        if id.is_real() {
            let key = (u.min(v), u.max(v));
            if self.links.iter().any(|l| l.id.is_real() && l.key() == key) {
                return Err(GraphError::ParallelReal(
                    self.names[u].clone(),
                    self.names[v].clone(),
                ));
            }
        }
        self.links.push(Link { u, v, id });
        Ok(self.links.len() - 1)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn real_link_count(&self) -> usize {
        self.links.iter().filter(|l| l.id.is_real()).count()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, ix: NodeIx) -> &str {
        &self.names[ix]
    }

    pub fn node(&self, name: &str) -> Option<NodeIx> {
        self.index.get(name).copied()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, pos: usize) -> &Link {
        &self.links[pos]
    }

    /// Position of the link between `u` and `v`, preferring a real one.
    pub fn find_link(&self, u: NodeIx, v: NodeIx) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        let mut found = None;
        for (i, l) in self.links.iter().enumerate() {
            if l.key() == key {
                if l.id.is_real() {
                    return Some(i);
                }
                found.get_or_insert(i);
            }
        }
        found
    }

    /// Incidence lists: for each node, `(neighbor, link position)` in link order.
    pub fn adjacency(&self) -> Vec<Vec<(NodeIx, usize)>> {
        let mut adj = vec![Vec::new(); self.names.len()];
        for (i, l) in self.links.iter().enumerate() {
            adj[l.u].push((l.v, i));
            adj[l.v].push((l.u, i));
        }
        adj
    }

    pub fn degree(&self, x: NodeIx) -> usize {
        self.links.iter().filter(|l| l.touches(x)).count()
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && connected_without(self.node_count(), &self.link_pairs(), &[], &[])
    }

    /// Node sets of the connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeIx>> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.node_count()];
        let mut out = Vec::new();
        for s in 0..self.node_count() {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![s];
            comp[s] = c;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &(y, _) in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = c;
                        members.push(y);
                        q.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Induced subgraph on `nodes` (kept in the given order) with link ids preserved.
    pub fn induced(&self, nodes: &[NodeIx]) -> Graph {
        let keep: HashMap<NodeIx, NodeIx> =
            nodes.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut g = Graph::new();
        for &x in nodes {
            g.add_node(&self.names[x]);
        }
        for l in &self.links {
            if let (Some(&a), Some(&b)) = (keep.get(&l.u), keep.get(&l.v)) {
                g.links.push(Link {
                    u: a,
                    v: b,
                    id: l.id,
                });
            }
        }
        g
    }

    fn link_pairs(&self) -> Vec<(NodeIx, NodeIx)> {
        self.links.iter().map(|l| (l.u, l.v)).collect()
    }

    /// True iff the graph has more than `k` nodes and no set of fewer than
    /// `k` nodes disconnects it. Virtual links count.
    pub fn vertex_connectivity_at_least(&self, k: usize) -> bool {
        vertex_connectivity_at_least(self.node_count(), &self.link_pairs(), k)
    }

    /// True iff the graph is connected and no set of fewer than `k` links
    /// disconnects it.
    pub fn edge_connectivity_at_least(&self, k: usize) -> bool {
        edge_connectivity_at_least(self.node_count(), &self.link_pairs(), k)
    }

    /// The graph plus two virtual nodes, each joined to every monitor and to
    /// each other, all by virtual links.
    pub fn extended_graph(&self, p: &Placement) -> Result<Graph, GraphError> {
        if p.is_empty() {
            return Err(GraphError::EmptyPlacement);
        }
        for &m in p.monitors() {
            if m >= self.node_count() {
                return Err(GraphError::UnknownIndex(m));
            }
        }
        let mut g = self.clone();
        let x = g.fresh_node("vm1");
        let y = g.fresh_node("vm2");
        for &m in p.monitors() {
            g.add_link(x, m, LinkKind::Virtual)?;
        }
        for &m in p.monitors() {
            g.add_link(y, m, LinkKind::Virtual)?;
        }
        g.add_link(x, y, LinkKind::Virtual)?;
        Ok(g)
    }

    fn fresh_node(&mut self, base: &str) -> NodeIx {
        let mut name = format!("__{base}");
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        self.add_node(&name)
    }

    /// Copy with the given link positions removed.
    pub fn without_links(&self, drop: &[usize]) -> Graph {
        let mut g = self.clone();
        g.links = self
            .links
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, l)| *l)
            .collect();
        g
    }

    /// Position of the real link with original id `id`.
    pub fn real_link_position(&self, id: usize) -> Option<usize> {
        self.links.iter().position(|l| l.id == LinkId::Real(id))
    }

    pub fn link_label(&self, pos: usize) -> String {
        let l = &self.links[pos];
        format!("{}-{}", self.names[l.u], self.names[l.v])
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Monitor set, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Placement {
    monitors: Vec<NodeIx>,
}

impl Placement {
    pub fn new(monitors: Vec<NodeIx>) -> Self {
        let mut seen = HashSet::new();
        let monitors = monitors.into_iter().filter(|m| seen.insert(*m)).collect();
        Placement { monitors }
    }

    pub fn from_names<S: AsRef<str>>(g: &Graph, names: &[S]) -> Result<Self, GraphError> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            let ix = g
                .node(n)
                .ok_or_else(|| GraphError::UnknownNode(n.to_string()))?;
            if out.contains(&ix) {
                return Err(GraphError::DuplicateMonitor(n.to_string()));
            }
            out.push(ix);
        }
        Ok(Placement { monitors: out })
    }

    pub fn monitors(&self) -> &[NodeIx] {
        &self.monitors
    }

    pub fn len(&self) -> usize {
        self.monitors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monitors.is_empty()
    }

    pub fn contains(&self, x: NodeIx) -> bool {
        self.monitors.contains(&x)
    }

    pub fn push(&mut self, x: NodeIx) {
        if !self.contains(x) {
            self.monitors.push(x);
        }
    }

    pub fn with(&self, x: NodeIx) -> Placement {
        let mut p = self.clone();
        p.push(x);
        p
    }

    /// Membership mask over `n` nodes.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.monitors {
            if x < n {
                m[x] = true;
            }
        }
        m
    }

    pub fn names<'a>(&self, g: &'a Graph) -> Vec<&'a str> {
        self.monitors.iter().map(|&m| g.name(m)).collect()
    }
}

/// Connectivity of the graph on `0..n` after deleting `gone` nodes and the
/// links at positions `cut`. Graphs with no surviving node count as disconnected.
pub(crate) fn connected_without(
    n: usize,
    links: &[(NodeIx, NodeIx)],
    gone: &[NodeIx],
    cut: &[usize],
) -> bool {
    let mut alive = vec![true; n];
    for &x in gone {
        alive[x] = false;
    }
    let Some(start) = (0..n).find(|&x| alive[x]) else {
        return false;
    };
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in links.iter().enumerate() {
        if cut.contains(&i) || !alive[u] || !alive[v] {
            continue;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == alive.iter().filter(|&&a| a).count()
}

/// Calls `f` on every `size`-subset of `0..n` in lexicographic order; stops
/// early when `f` returns false. Returns false iff stopped early.
pub(crate) fn for_each_subset(n: usize, size: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if size > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        let mut i = size;
        while i > 0 && idx[i - 1] == n - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return true;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn vertex_connectivity_at_least(n: usize, links: &[(NodeIx, NodeIx)], k: usize) -> bool {
    if n == 0 || n <= k {
        return false;
    }
    (0..k).all(|size| for_each_subset(n, size, |gone| connected_without(n, links, gone, &[])))
}

pub(crate) fn edge_connectivity_at_least(n: usize, links: &[(NodeIx, NodeIx)], k: usize) -> bool {
    if n == 0 {
        return false;
    }
    (0..k).all(|size| {
        for_each_subset(links.len(), size, |cut| {
            connected_without(n, links, &[], cut)
        })
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn path4() -> Graph {
        Graph::parse("1 2\n2 3\n3 4").unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        let pairs: Vec<(String, String)> = (1..=n)
            .map(|i| (i.to_string(), (i % n + 1).to_string()))
            .collect();
        Graph::from_links(&pairs).unwrap()
    }

    pub fn k4() -> Graph {
        Graph::parse("1 2\n1 3\n1 4\n2 3\n2 4\n3 4").unwrap()
    }

    pub fn bowtie() -> Graph {
        Graph::parse("1 2\n2 3\n3 1\n3 4\n4 5\n5 3").unwrap()
    }

    pub fn theta() -> Graph {
        Graph::parse("a c\nc b\na d\nd b\na e\ne b").unwrap()
    }

    pub fn tripend() -> Graph {
        Graph::parse("1 2\n2 3\n3 1\n1 m1\n2 m2\n3 m3").unwrap()
    }

    pub fn placement(g: &Graph, names: &[&str]) -> Placement {
        Placement::from_names(g, names).unwrap()
    }
}
