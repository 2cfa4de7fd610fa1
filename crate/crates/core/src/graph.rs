//! Simple undirected graphs on dense vertex ids, plus the graph-level
//! measurements used everywhere else (girth, degeneracy, components).

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple undirected graph. Vertices are `0..n`; every adjacency list is
/// sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, dropping duplicate edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            check_edge(n, u, v)?;
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Adds a vertex and returns its id.
    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Adds `count` vertices and returns the first new id.
    pub fn add_vertices(&mut self, count: usize) -> usize {
        let first = self.adj.len();
        self.adj.resize(first + count, Vec::new());
        first
    }

    /// Inserts the edge `uv`. Returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        check_edge(self.n(), u, v)?;
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        let pos = self.adj[u].binary_search(&v).unwrap();
        self.adj[u].remove(pos);
        let pos = self.adj[v].binary_search(&u).unwrap();
        self.adj[v].remove(pos);
        true
    }

    /// Removes every edge at `v`, leaving it isolated.
    pub fn isolate(&mut self, v: usize) {
        for u in std::mem::take(&mut self.adj[v]) {
            let pos = self.adj[u].binary_search(&v).unwrap();
            self.adj[u].remove(pos);
        }
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).unwrap()
    }

    /// Subgraph induced by `vertices`, relabelled in the given order.
    /// Returns the subgraph and the map from new ids to old ids.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<usize> = self.adj[v]
                    .iter()
                    .filter_map(|&u| (index[u] != usize::MAX).then_some(index[u]))
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        (Graph { adj }, vertices.to_vec())
    }

    /// Connected components restricted to vertices with `alive[v]`, each
    /// sorted, ordered by smallest member.
    pub fn components_within(&self, alive: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if !alive[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &u in &self.adj[v] {
                    if alive[u] && !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_within(&vec![true; self.n()])
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// BFS distances from `s`; `None` for unreachable vertices.
    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &u in &self.adj[v] {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn distance(&self, s: usize, t: usize) -> Option<usize> {
        self.distances_from(s)[t]
    }

    /// A proper 2-coloring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut side = vec![u8::MAX; self.n()];
        for s in 0..self.n() {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &u in &self.adj[v] {
                    if side[u] == u8::MAX {
                        side[u] = 1 - side[v];
                        queue.push_back(u);
                    } else if side[u] == side[v] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Length of a shortest cycle, `None` for forests.
    ///
    /// One BFS per root; a non-tree edge `(a, b)` closes a closed walk of
    /// length `d(a) + d(b) + 1` through the root, and the minimum of these over
    /// all roots is the girth. Each BFS stops once it can no longer improve the
    /// best cycle found so far.
    pub fn girth(&self) -> Option<usize> {
        let n = self.n();
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if self.adj[root].len() < 2 {
                continue;
            }
            for &v in &touched {
                dist[v] = usize::MAX;
                parent[v] = usize::MAX;
            }
            touched.clear();
            queue.clear();
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            'bfs: while let Some(v) = queue.pop_front() {
                if 2 * dist[v] + 1 >= best {
                    break;
                }
                for &u in &self.adj[v] {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        parent[u] = v;
                        touched.push(u);
                        queue.push_back(u);
                    } else if parent[v] != u {
                        let len = dist[u] + dist[v] + 1;
                        if len < best {
                            best = len;
                            if best == 3 {
                                break 'bfs;
                            }
                        }
                    }
                }
            }
            if best == 3 {
                break;
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Degeneracy and a witnessing elimination order: repeatedly remove a
    /// vertex of minimum remaining degree (smallest id on ties).
    pub fn degeneracy_order(&self) -> (usize, Vec<usize>) {
        let n = self.n();
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let max_deg = self.max_degree();
        let mut buckets: Vec<std::collections::BTreeSet<usize>> =
            vec![Default::default(); max_deg + 1];
        for v in 0..n {
            buckets[deg[v]].insert(v);
        }
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut degeneracy = 0;
        let mut low: usize = 0;
        for _ in 0..n {
            low = low.saturating_sub(1);
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop_first().unwrap();
            degeneracy = degeneracy.max(low);
            removed[v] = true;
            order.push(v);
            for &u in &self.adj[v] {
                if !removed[u] {
                    buckets[deg[u]].remove(&u);
                    deg[u] -= 1;
                    buckets[deg[u]].insert(u);
                }
            }
        }
        (degeneracy, order)
    }

    pub fn to_text(&self) -> String {
        self.to_text_with_terminals(&BTreeMap::new())
    }

    /// Graph file with `# terminal name id` comment lines ahead of the header.
    pub fn to_text_with_terminals(&self, terminals: &BTreeMap<String, usize>) -> String {
        let mut out = String::new();
        for (name, v) in terminals {
            writeln!(out, "# terminal {name} {v}").unwrap();
        }
        writeln!(out, "{} {}", self.n(), self.num_edges()).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

fn check_edge(n: usize, u: usize, v: usize) -> Result<()> {
    for w in [u, v] {
        if w >= n {
            return Err(Error::VertexOutOfRange { vertex: w, n });
        }
    }
    if u == v {
        return Err(Error::LoopEdge(u));
    }
    Ok(())
}

/// Non-comment, non-blank lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// `# terminal name id` comment lines.
pub fn parse_terminals(text: &str) -> BTreeMap<String, usize> {
    text.lines()
        .filter_map(|l| {
            let mut parts = l.trim().strip_prefix('#')?.split_whitespace();
            if parts.next()? != "terminal" {
                return None;
            }
            let name = parts.next()?.to_string();
            let id = parts.next()?.parse().ok()?;
            Some((name, id))
        })
        .collect()
}

pub(crate) fn parse_numbers<const N: usize>(line: usize, text: &str) -> Result<[usize; N]> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != N {
        return Err(Error::Parse {
            line,
            msg: format!("expected {N} integers, got {:?}", text),
        });
    }
    let mut out = [0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("not a non-negative integer: {p:?}"),
        })?;
    }
    Ok(out)
}

/// Reads the `n m` header and `m` edge lines from `lines`, leaving the
/// iterator positioned after the last edge.
pub(crate) fn parse_graph_section<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<Graph> {
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header \"n m\"".into(),
    })?;
    let [n, m] = parse_numbers::<2>(hl, header)?;
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let (line, text) = lines.next().ok_or(Error::Parse {
            line: hl + i + 1,
            msg: format!("expected {m} edge lines, found {i}"),
        })?;
        let [u, v] = parse_numbers::<2>(line, text)?;
        check_edge(n, u, v)?;
        edges.push((u, v));
    }
    Graph::from_edges(n, edges)
}

/// Parses a graph file: header `n m`, then `m` lines `u v`. Lines starting
/// with `#` are ignored; trailing sections (rotations) are ignored too.
pub fn parse_graph(text: &str) -> Result<Graph> {
    parse_graph_section(&mut content_lines(text))
}
