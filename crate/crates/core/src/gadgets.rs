//! Gadget graphs with named terminals, the two reductions from 3-uniform
//! hypergraph 2-coloring, and a brute-force 2-colorability oracle.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::drawing::{Drawing, Frame, GadgetCopy, LinkKind, Point};
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::graph::{content_lines, parse_numbers, Graph};
use crate::mc::{mc_decide, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph3 {
    pub n: usize,
    pub edges: Vec<[usize; 3]>,
}

impl Hypergraph3 {
    pub fn new(n: usize, edges: Vec<[usize; 3]>) -> Result<Self> {
        for e in &edges {
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if e[0] == e[1] || e[1] == e[2] || e[0] == e[2] {
                return Err(Error::Parameter(format!("hyperedge {e:?} repeats a vertex")));
            }
        }
        Ok(Hypergraph3 { n, edges })
    }

    /// Header `n m`, then `m` lines `a b c`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header \"n m\"".into(),
        })?;
        let [n, m] = parse_numbers::<2>(hl, header)?;
        let mut edges = Vec::with_capacity(m);
        for i in 0..m {
            let (line, text) = lines.next().ok_or(Error::Parse {
                line: hl + i + 1,
                msg: format!("expected {m} hyperedge lines, found {i}"),
            })?;
            edges.push(parse_numbers::<3>(line, text)?);
        }
        Hypergraph3::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for [a, b, c] in &self.edges {
            let _ = writeln!(s, "{a} {b} {c}");
        }
        s
    }

    /// First hyperedge whose three vertices share a color.
    pub fn monochromatic_edge(&self, coloring: &[u8]) -> Option<[usize; 3]> {
        self.edges
            .iter()
            .copied()
            .find(|&[a, b, c]| coloring[a] == coloring[b] && coloring[b] == coloring[c])
    }
}

/// A 2-coloring with no monochromatic hyperedge, by backtracking with the
/// first vertex fixed to color 0.
pub fn hyper2color(h: &Hypergraph3) -> Result<Option<Vec<u8>>> {
    if h.n > 30 {
        return Err(Error::Budget(format!("hyper2color supports n <= 30, got {}", h.n)));
    }
    // edges indexed by their largest vertex, checked once that vertex is set
    let mut closing = vec![Vec::new(); h.n];
    for e in &h.edges {
        closing[*e.iter().max().unwrap()].push(*e);
    }
    let mut col = vec![0u8; h.n];
    fn go(v: usize, col: &mut [u8], closing: &[Vec<[usize; 3]>]) -> bool {
        if v == col.len() {
            return true;
        }
        let choices: &[u8] = if v == 0 { &[0] } else { &[0, 1] };
        for &c in choices {
            col[v] = c;
            let ok = closing[v]
                .iter()
                .all(|&[a, b, d]| !(col[a] == col[b] && col[b] == col[d]));
            if ok && go(v + 1, col, closing) {
                return true;
            }
        }
        false
    }
    Ok(go(0, &mut col, &closing).then_some(col))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub terminals: BTreeMap<String, usize>,
    #[serde(skip)]
    pub embedding: Option<Embedding>,
    pub copies: Vec<GadgetCopy>,
    /// Uncrosser copies inserted by the planar reduction.
    pub uncrossers: usize,
}

impl GadgetGraph {
    fn plain(graph: Graph, terminals: BTreeMap<String, usize>) -> Self {
        GadgetGraph {
            graph,
            terminals,
            embedding: None,
            copies: Vec::new(),
            uncrossers: 0,
        }
    }

    pub fn terminal(&self, name: &str) -> Result<usize> {
        self.terminals
            .get(name)
            .copied()
            .ok_or_else(|| Error::Parameter(format!("no terminal named {name}")))
    }

    /// Graph file with terminal comments; includes rotations when embedded.
    pub fn to_text(&self) -> String {
        match &self.embedding {
            Some(e) => e.to_text_with_terminals(&self.terminals),
            None => self.graph.to_text_with_terminals(&self.terminals),
        }
    }

    /// Deletes every edge at the internal vertices of copy `index`.
    pub fn cut_copy(&mut self, index: usize) {
        for v in self.copies[index].internal.clone() {
            self.graph.isolate(v);
        }
        self.embedding = None;
    }
}

fn check_param(name: &str, value: usize) -> Result<()> {
    if value < 2 {
        return Err(Error::Parameter(format!("{name} must be at least 2, got {value}")));
    }
    Ok(())
}

fn terminals<const N: usize>(pairs: [(&str, usize); N]) -> BTreeMap<String, usize> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Vertex id of the leaf labelled `(l1, l2, l3)`, labels 1-based, in
/// [`build_tree`] numbering.
pub fn tree_leaf(t: usize, [l1, l2, l3]: [usize; 3]) -> usize {
    let b = 5 * t;
    1 + b + b * b + (l1 - 1) * b * b + (l2 - 1) * b + (l3 - 1)
}

/// Label of the leaf with index `i` (0-based, left to right).
pub fn tree_leaf_label(t: usize, i: usize) -> [usize; 3] {
    let b = 5 * t;
    [i / (b * b) + 1, (i / b) % b + 1, i % b + 1]
}

/// Complete rooted tree of height 3 with branching `5t`, numbered level by
/// level so that leaves appear in lexicographic label order.
pub fn build_tree(t: usize) -> Result<GadgetGraph> {
    check_param("t", t)?;
    let b = 5 * t;
    let n = 1 + b + b * b + b * b * b;
    let mut edges = Vec::with_capacity(n - 1);
    let mut level_start = 0;
    let mut level_len = 1;
    for _ in 0..3 {
        let next_start = level_start + level_len;
        for i in 0..level_len {
            for c in 0..b {
                edges.push((level_start + i, next_start + i * b + c));
            }
        }
        level_start = next_start;
        level_len *= b;
    }
    Ok(GadgetGraph::plain(Graph::from_edges(n, edges)?, terminals([("x", 0)])))
}

/// Two copies of [`build_tree`] with leaf `(l1,l2,l3)` of the `y`-tree
/// identified with leaf `(l3,l2,l1)` of the `z`-tree.
pub fn build_j(t: usize) -> Result<GadgetGraph> {
    let tree = build_tree(t)?;
    let b = 5 * t;
    let inner = 1 + b + b * b;
    let mut g = tree.graph;
    let z = g.add_vertices(inner);
    // z-tree root and its first two levels, numbered like the y-tree
    let zid = |i: usize| z + i;
    for i in 0..b {
        g.add_edge(zid(0), zid(1 + i))?;
        for j in 0..b {
            g.add_edge(zid(1 + i), zid(1 + b + i * b + j))?;
        }
    }
    for leaf in 0..b * b * b {
        let [_, l2, l3] = tree_leaf_label(t, leaf);
        // in the z-tree this leaf reads (l3, l2, l1); its parent is (l3, l2)
        let parent = zid(1 + b + (l3 - 1) * b + (l2 - 1));
        g.add_edge(inner + leaf, parent)?;
    }
    Ok(GadgetGraph::plain(g, terminals([("y", 0), ("z", z)])))
}

/// `(4t+1)^3` against `(5t)^3 / 2`, compared exactly as `2 (4t+1)^3 > (5t)^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingCheck {
    pub left: u128,
    /// Twice the right-hand side, `(5t)^3`.
    pub right_doubled: u128,
    pub holds: bool,
}

pub fn counting_check_j(t: u64) -> CountingCheck {
    let t = t as u128;
    let left = (4 * t + 1).pow(3);
    let right_doubled = (5 * t).pow(3);
    CountingCheck {
        left,
        right_doubled,
        holds: 2 * left > right_doubled,
    }
}

/// Path `v_1..v_{3k^4}` with `y` joined to even-indexed and `z` to
/// odd-indexed path vertices.
pub fn build_n(k: usize) -> Result<GadgetGraph> {
    check_param("k", k)?;
    let len = 3 * k.pow(4);
    let mut edges = Vec::with_capacity(2 * len);
    for i in 1..=len {
        let v = 1 + i;
        edges.push((if i % 2 == 0 { 0 } else { 1 }, v));
        if i > 1 {
            edges.push((v - 1, v));
        }
    }
    Ok(GadgetGraph::plain(
        Graph::from_edges(len + 2, edges)?,
        terminals([("y", 0), ("z", 1)]),
    ))
}

/// `K_{2, 2k(k-1)-1}` with `y`, `z` the two vertices of the small side.
pub fn build_equalizer(k: usize) -> Result<GadgetGraph> {
    check_param("k", k)?;
    let m = 2 * k * (k - 1) - 1;
    Ok(GadgetGraph::plain(
        Graph::complete_bipartite(2, m),
        terminals([("y", 0), ("z", 1)]),
    ))
}

/// Terminal ids of one uncrosser placed in a [`Drawing`].
#[derive(Debug, Clone)]
pub struct UncrosserTerminals {
    pub north: usize,
    pub south: usize,
    pub west: usize,
    pub east: usize,
    pub center: usize,
    pub chain: Vec<usize>,
}

/// Draws one uncrosser in the local frame where `x_W, x_E, x_N, x_S` sit at
/// `(-1,0), (1,0), (0,1), (0,-1)`.
pub fn draw_uncrosser(d: &mut Drawing, k: usize, frame: &Frame) -> UncrosserTerminals {
    let m = 2 * (k - 1);
    let at = |d: &mut Drawing, p: Point| d.add_vertex(frame.map(p));
    let west = at(d, (-1.0, 0.0));
    let east = at(d, (1.0, 0.0));
    let north = at(d, (0.0, 1.0));
    let south = at(d, (0.0, -1.0));
    let center = at(d, (0.0, -0.5));
    let step = 1.2 / (m + 1) as f64;
    let chain: Vec<usize> = (1..=m).map(|i| at(d, (-0.6 + step * i as f64, 0.0))).collect();
    let mut prev = west;
    for &y in &chain {
        d.add_link(LinkKind::Distinct, prev, y);
        d.add_edge(center, y);
        prev = y;
    }
    d.add_link(LinkKind::Equal, prev, east);
    let spread = 0.5 * step / k as f64;
    for (i, &y) in chain.iter().enumerate() {
        let x = -0.6 + step * (i + 1) as f64;
        for p in 0..k - 1 {
            let dx = (p as f64 - (k as f64 - 2.0) / 2.0) * spread;
            let pendant = at(d, (x + dx, 0.25));
            d.add_edge(y, pendant);
            d.add_link(LinkKind::Equal, pendant, north);
        }
    }
    d.add_link(LinkKind::Distinct, center, south);
    UncrosserTerminals {
        north,
        south,
        west,
        east,
        center,
        chain,
    }
}

fn from_drawing(d: &Drawing, terminals: BTreeMap<String, usize>, uncrossers: usize) -> Result<GadgetGraph> {
    let built = d.build()?;
    Ok(GadgetGraph {
        graph: built.embedding.graph().clone(),
        terminals,
        embedding: Some(built.embedding),
        copies: built.copies,
        uncrossers,
    })
}

/// The planarizing gadget: colors pass straight through from `x_W` to `x_E`
/// and from `x_N` to `x_S`.
pub fn build_uncrosser(k: usize) -> Result<GadgetGraph> {
    check_param("k", k)?;
    let mut d = Drawing::new(k);
    let u = draw_uncrosser(&mut d, k, &Frame::IDENTITY);
    let mut names = terminals([
        ("x_N", u.north),
        ("x_S", u.south),
        ("x_W", u.west),
        ("x_E", u.east),
        ("x_C", u.center),
    ]);
    for (i, &y) in u.chain.iter().enumerate() {
        names.insert(format!("y_{}", i + 1), y);
    }
    from_drawing(&d, names, 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PropertyCheck {
    Pass,
    /// A coloring breaking the property.
    Fail(Vec<u8>),
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UncrosserReport {
    /// No MC(k(k-1))-coloring separates `x_N` from `x_S` or `x_W` from `x_E`.
    pub transfer: PropertyCheck,
    /// MC(k)-colorings with `x_N = x_W` and with `x_N != x_W`.
    pub witness_equal: Option<Vec<u8>>,
    pub witness_distinct: Option<Vec<u8>>,
    pub inconclusive: bool,
    pub nodes_explored: u64,
}

impl UncrosserReport {
    pub fn passed(&self) -> bool {
        self.transfer == PropertyCheck::Pass
            && self.witness_equal.is_some()
            && self.witness_distinct.is_some()
    }
}

pub fn validate_uncrosser(u: &GadgetGraph, k: usize, budget: u64) -> Result<UncrosserReport> {
    let (n, s, w, e) = (u.terminal("x_N")?, u.terminal("x_S")?, u.terminal("x_W")?, u.terminal("x_E")?);
    let g = &u.graph;
    let mut nodes = 0;
    let mut inconclusive = false;
    let mut transfer = PropertyCheck::Pass;
    for (a, b) in [(n, s), (w, e)] {
        let r = mc_decide(g, k * (k - 1), &[(a, 0), (b, 1)], budget)?;
        nodes += r.nodes_explored;
        match r.verdict {
            Verdict::No => {}
            Verdict::Yes(c) => {
                transfer = PropertyCheck::Fail(c);
                break;
            }
            Verdict::Inconclusive => {
                inconclusive = true;
                transfer = PropertyCheck::Inconclusive;
            }
        }
    }
    let mut witness = |c: u8| -> Result<Option<Vec<u8>>> {
        let r = mc_decide(g, k, &[(n, 0), (w, c)], budget)?;
        nodes += r.nodes_explored;
        Ok(match r.verdict {
            Verdict::Yes(col) => Some(col),
            Verdict::No => None,
            Verdict::Inconclusive => {
                inconclusive = true;
                None
            }
        })
    };
    let witness_equal = witness(0)?;
    let witness_distinct = witness(1)?;
    Ok(UncrosserReport {
        transfer,
        witness_equal,
        witness_distinct,
        inconclusive,
        nodes_explored: nodes,
    })
}

/// Copies `template` into `g`, identifying its terminals `y`, `z` with
/// `y_at`, `z_at`; returns the range of fresh vertex ids.
fn glue(g: &mut Graph, template: &GadgetGraph, y_at: usize, z_at: usize) -> Result<std::ops::Range<usize>> {
    let (ty, tz) = (template.terminal("y")?, template.terminal("z")?);
    let fresh = template.graph.n() - 2;
    let first = g.add_vertices(fresh);
    let mut map = vec![0; template.graph.n()];
    let mut next = first;
    for (v, slot) in map.iter_mut().enumerate() {
        *slot = if v == ty {
            y_at
        } else if v == tz {
            z_at
        } else {
            next += 1;
            next - 1
        };
    }
    for (a, b) in template.graph.edges() {
        g.add_edge(map[a], map[b])?;
    }
    Ok(first..first + fresh)
}

/// Girth-8 reduction: each hyperedge `{u0,u1,u2}` gets a path
/// `e_1..e_{k+1}` and a copy of `J_{y,z,k}` joining `e_j` to `u_{j mod 3}`.
pub fn reduce_girth8(h: &Hypergraph3, k: usize) -> Result<GadgetGraph> {
    check_param("k", k)?;
    let j = build_j(k)?;
    let mut g = Graph::new(h.n);
    let mut names: BTreeMap<String, usize> = (0..h.n).map(|v| (format!("v{v}"), v)).collect();
    let mut copies = Vec::new();
    for (i, e) in h.edges.iter().enumerate() {
        let path = g.add_vertices(k + 1);
        for step in 1..=k + 1 {
            let ej = path + step - 1;
            names.insert(format!("e{i}_{step}"), ej);
            if step > 1 {
                g.add_edge(ej - 1, ej)?;
            }
            let target = e[step % 3];
            let internal = glue(&mut g, &j, ej, target)?;
            copies.push(GadgetCopy {
                kind: LinkKind::Junction,
                y: ej,
                z: target,
                internal,
            });
        }
    }
    Ok(GadgetGraph {
        graph: g,
        terminals: names,
        embedding: None,
        copies,
        uncrossers: 0,
    })
}

/// Colors primitives by `hcol`, then each `J` copy by the parity of the
/// distance to its `z` terminal.
pub fn forward_coloring_girth8(h: &Hypergraph3, hcol: &[u8], g: &GadgetGraph) -> Result<Vec<u8>> {
    if hcol.len() != h.n {
        return Err(Error::Parameter(format!(
            "hypergraph coloring has {} entries, expected {}",
            hcol.len(),
            h.n
        )));
    }
    if let Some(e) = h.monochromatic_edge(hcol) {
        return Err(Error::Precondition(format!("hyperedge {e:?} is monochromatic")));
    }
    let n = g.graph.n();
    let mut color = vec![u8::MAX; n];
    color[..h.n].copy_from_slice(hcol);
    let mut in_copy = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    for (ci, copy) in g.copies.iter().enumerate() {
        for v in copy.internal.clone().chain([copy.y, copy.z]) {
            in_copy[v] = ci;
            dist[v] = usize::MAX;
        }
        let mut queue = VecDeque::from([copy.z]);
        dist[copy.z] = 0;
        while let Some(v) = queue.pop_front() {
            color[v] = color[copy.z] ^ (dist[v] % 2) as u8;
            for &u in g.graph.neighbors(v) {
                if in_copy[u] == ci && dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
    }
    if let Some(v) = color.iter().position(|&c| c == u8::MAX) {
        return Err(Error::Precondition(format!("vertex {v} lies in no gadget copy")));
    }
    Ok(color)
}

/// Deterministic jitter in `[0, 1)` keeping the layout in general position.
fn jitter(i: usize, salt: u64) -> f64 {
    // splitmix64 finalizer; linear sequences here produced concurrent wires
    let mut z = (i as u64).wrapping_add(salt).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

struct Wire {
    from: Point,
    to: Point,
}

impl Wire {
    fn dir(&self) -> Point {
        let (dx, dy) = (self.to.0 - self.from.0, self.to.1 - self.from.1);
        let l = (dx * dx + dy * dy).sqrt();
        (dx / l, dy / l)
    }
}

/// Interior intersection parameters of two segments, if they properly cross.
fn crossing(a: &Wire, b: &Wire) -> Option<(f64, f64)> {
    let r = (a.to.0 - a.from.0, a.to.1 - a.from.1);
    let s = (b.to.0 - b.from.0, b.to.1 - b.from.1);
    let den = r.0 * s.1 - r.1 * s.0;
    if den.abs() < 1e-12 {
        return None;
    }
    let q = (b.from.0 - a.from.0, b.from.1 - a.from.1);
    let t = (q.0 * s.1 - q.1 * s.0) / den;
    let u = (q.0 * r.1 - q.1 * r.0) / den;
    let eps = 1e-9;
    (t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps).then_some((t, u))
}

fn point_segment_distance(p: Point, w: &Wire) -> f64 {
    let (dx, dy) = (w.to.0 - w.from.0, w.to.1 - w.from.1);
    let t = (((p.0 - w.from.0) * dx + (p.1 - w.from.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    let c = (w.from.0 + t * dx, w.from.1 + t * dy);
    ((p.0 - c.0).powi(2) + (p.1 - c.1).powi(2)).sqrt()
}

fn dist(a: Point, b: Point) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Primitive positions, path positions and connectors `(primitive, path
/// index)` of the fixed layout used by [`reduce_planar`].
fn layout(h: &Hypergraph3, k: usize) -> (Vec<Point>, Vec<Point>, Vec<(usize, usize)>) {
    let len = k * (k - 1) + 1;
    let width = h.n.max(2) as f64;
    let prim: Vec<Point> = (0..h.n).map(|v| (0.0, v as f64 + 0.1 * jitter(v, 1))).collect();
    let slots = (h.edges.len() * (len + 1)).max(1) as f64;
    let mut path = Vec::new();
    let mut wires = Vec::new();
    for (i, e) in h.edges.iter().enumerate() {
        let mut sorted = *e;
        sorted.sort_unstable();
        // heights u1 < u2 < u0 keep each hyperedge's own connectors apart
        let by_index = [sorted[2], sorted[0], sorted[1]];
        for step in 1..=len {
            let slot = (i * (len + 1) + step) as f64;
            let id = path.len();
            path.push((width, slot * width / slots + 0.05 * jitter(id, 1 << 32)));
            wires.push((by_index[step % 3], id));
        }
    }
    (prim, path, wires)
}

/// Number of connector crossings in the fixed layout for `h`.
pub fn planar_crossings(h: &Hypergraph3, k: usize) -> usize {
    let (prim, path, wires) = layout(h, k);
    let ws: Vec<Wire> = wires.iter().map(|&(u, e)| Wire { from: prim[u], to: path[e] }).collect();
    let mut count = 0;
    for a in 0..ws.len() {
        for b in a + 1..ws.len() {
            if wires[a].0 != wires[b].0 && crossing(&ws[a], &ws[b]).is_some() {
                count += 1;
            }
        }
    }
    count
}

/// Planar reduction: paths `e_1..e_{k(k-1)+1}` drawn on one vertical line,
/// primitives on another, equalizer connectors from `u_{j mod 3}` to `e_j`,
/// and an uncrosser at every connector crossing.
pub fn reduce_planar(h: &Hypergraph3, k: usize) -> Result<GadgetGraph> {
    check_param("k", k)?;
    let mut last = None;
    for (radius, width) in [(0.2, 0.1), (0.05, 0.02), (0.0125, 0.004)] {
        match reduce_planar_with(h, k, radius, width) {
            Ok(g) => return Ok(g),
            Err(e) => {
                log::debug!("planar layout attempt (radius {radius}, width {width}) failed: {e}");
                last = Some(e);
            }
        }
    }
    Err(last.expect("at least one attempt"))
}

fn reduce_planar_with(h: &Hypergraph3, k: usize, radius: f64, width: f64) -> Result<GadgetGraph> {
    let len = k * (k - 1) + 1;
    let (prim, path, wires) = layout(h, k);
    let ws: Vec<Wire> = wires.iter().map(|&(u, e)| Wire { from: prim[u], to: path[e] }).collect();
    let mut crossings = Vec::new();
    for a in 0..ws.len() {
        for b in a + 1..ws.len() {
            if wires[a].0 == wires[b].0 {
                continue;
            }
            if let Some((t, u)) = crossing(&ws[a], &ws[b]) {
                let p = (ws[a].from.0 + t * (ws[a].to.0 - ws[a].from.0), ws[a].from.1 + t * (ws[a].to.1 - ws[a].from.1));
                crossings.push((a, b, p, t, u));
            }
        }
    }
    crossings.sort_by(|x, y| x.2 .0.total_cmp(&y.2 .0).then(x.2 .1.total_cmp(&y.2 .1)));

    let mut d = Drawing::new(k);
    d.set_max_width(width);
    let prim_ids: Vec<usize> = prim.iter().map(|&p| d.add_vertex(p)).collect();
    let path_ids: Vec<usize> = path.iter().map(|&p| d.add_vertex(p)).collect();
    let mut names: BTreeMap<String, usize> = prim_ids.iter().enumerate().map(|(v, &id)| (format!("v{v}"), id)).collect();
    for i in 0..h.edges.len() {
        for step in 1..=len {
            let id = path_ids[i * len + step - 1];
            names.insert(format!("e{i}_{step}"), id);
            if step > 1 {
                d.add_edge(id - 1, id);
            }
        }
    }
    // per wire: (parameter, entry terminal, exit terminal) at each crossing
    let mut stops: Vec<Vec<(f64, usize, usize)>> = vec![Vec::new(); ws.len()];
    for (ci, &(a, b, p, t, u)) in crossings.iter().enumerate() {
        let mut clear = f64::INFINITY;
        for (cj, other) in crossings.iter().enumerate() {
            if cj != ci {
                clear = clear.min(dist(p, other.2));
            }
        }
        for (wi, w) in ws.iter().enumerate() {
            if wi != a && wi != b {
                clear = clear.min(point_segment_distance(p, w));
            }
        }
        for w in [&ws[a], &ws[b]] {
            clear = clear.min(dist(p, w.from)).min(dist(p, w.to));
        }
        if clear.is_nan() || clear <= 1e-9 {
            return Err(Error::Precondition("connector layout is not in general position".into()));
        }
        let (da, db) = (ws[a].dir(), ws[b].dir());
        let r = radius * clear;
        let frame = Frame {
            origin: p,
            ex: (r * da.0, r * da.1),
            ey: (r * db.0, r * db.1),
        };
        let tu = draw_uncrosser(&mut d, k, &frame);
        names.insert(format!("x{ci}_C"), tu.center);
        stops[a].push((t, tu.west, tu.east));
        stops[b].push((u, tu.south, tu.north));
    }
    for (wi, &(u, e)) in wires.iter().enumerate() {
        let mut s = std::mem::take(&mut stops[wi]);
        s.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut prev = prim_ids[u];
        for (_, entry, exit) in s {
            d.add_link(LinkKind::Equal, prev, entry);
            prev = exit;
        }
        d.add_link(LinkKind::Equal, prev, path_ids[e]);
    }
    from_drawing(&d, names, crossings.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peel::audit;

    fn fano() -> Hypergraph3 {
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        Hypergraph3::new(7, lines.to_vec()).unwrap()
    }

    fn complete3(n: usize) -> Hypergraph3 {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    e.push([a, b, c]);
                }
            }
        }
        Hypergraph3::new(n, e).unwrap()
    }

    fn brute_colorable(h: &Hypergraph3) -> bool {
        (0..1u32 << h.n).any(|mask| {
            let c: Vec<u8> = (0..h.n).map(|v| (mask >> v & 1) as u8).collect();
            h.monochromatic_edge(&c).is_none()
        })
    }

    #[test]
    fn hypergraph_io_and_validation() {
        let h = Hypergraph3::parse("4 2\n0 1 2\n1 2 3\n").unwrap();
        assert_eq!(h.edges.len(), 2);
        assert_eq!(Hypergraph3::parse(&h.to_text()).unwrap(), h);
        assert!(Hypergraph3::new(3, vec![[0, 0, 1]]).is_err());
        assert!(Hypergraph3::new(3, vec![[0, 1, 3]]).is_err());
        assert!(Hypergraph3::parse("3 2\n0 1 2\n").is_err());
    }

    #[test]
    fn hyper2color_examples() {
        let one = Hypergraph3::new(3, vec![[0, 1, 2]]).unwrap();
        let c = hyper2color(&one).unwrap().unwrap();
        assert!(one.monochromatic_edge(&c).is_none());
        assert_eq!(hyper2color(&complete3(5)).unwrap(), None);
        assert_eq!(hyper2color(&fano()).unwrap(), None);
        assert!(!brute_colorable(&fano()));
        assert!(hyper2color(&Hypergraph3::new(31, vec![]).unwrap()).is_err());
    }

    #[test]
    fn hyper2color_matches_brute_force() {
        for seed in 0..40 {
            let h = crate::generators::hypergraph3(7, 4 + (seed as usize % 8), seed).unwrap();
            let found = hyper2color(&h).unwrap();
            assert_eq!(found.is_some(), brute_colorable(&h), "seed {seed}");
            if let Some(c) = found {
                assert!(h.monochromatic_edge(&c).is_none());
            }
        }
    }

    #[test]
    fn tree_shape() {
        let t = build_tree(2).unwrap();
        assert_eq!(t.graph.n(), 1111);
        assert_eq!(t.graph.girth(), None);
        assert!(t.graph.is_connected());
        assert_eq!(tree_leaf_label(2, 0), [1, 1, 1]);
        assert_eq!(tree_leaf_label(2, 999), [10, 10, 10]);
        assert_eq!(tree_leaf(2, [1, 1, 1]), 111);
        assert_eq!(t.graph.distance(0, tree_leaf(2, [3, 7, 2])), Some(3));
        assert!(build_tree(1).is_err());
    }

    #[test]
    fn j_gadget_properties() {
        let j = build_j(2).unwrap();
        let g = &j.graph;
        assert_eq!(g.n(), 1222);
        assert!(g.is_bipartite());
        assert_eq!(g.degeneracy_order().0, 2);
        assert_eq!(g.distance(j.terminal("y").unwrap(), j.terminal("z").unwrap()), Some(6));
        assert_eq!(g.girth(), Some(8));
        assert_eq!(LinkKind::Junction.internal_count(2), 1220);
    }

    #[test]
    fn j_leaf_gluing_reverses_labels() {
        let j = build_j(2).unwrap();
        let z = j.terminal("z").unwrap();
        let b = 10;
        let leaf = tree_leaf(2, [2, 5, 9]);
        // z-side parent of (2,5,9) is node (9,5) of the z-tree
        let parent = z + 1 + b + 8 * b + 4;
        assert!(j.graph.has_edge(leaf, parent));
    }

    #[test]
    fn counting_inequality() {
        let c2 = counting_check_j(2);
        assert_eq!((c2.left, c2.right_doubled), (729, 1000));
        assert!(c2.holds);
        let c3 = counting_check_j(3);
        assert_eq!((c3.left, c3.right_doubled), (2197, 3375));
        assert!((2..1000).all(|t| counting_check_j(t).holds));
    }

    #[test]
    fn n_gadget_shape() {
        let g = build_n(2).unwrap();
        assert_eq!(g.graph.n(), 50);
        assert!(g.graph.is_bipartite());
        assert_eq!(g.graph.degree(0), 24);
        assert_eq!(g.graph.degree(1), 24);
        let g3 = build_n(3).unwrap();
        assert_eq!(g3.graph.degree(0), 243 / 2);
        assert_eq!(g3.graph.degree(1), 243 / 2 + 1);
    }

    #[test]
    fn equalizer_by_enumeration() {
        let eq = build_equalizer(2).unwrap();
        assert_eq!(eq.graph.n(), 5);
        assert_eq!(eq.graph.girth(), Some(4));
        for mask in 0u32..32 {
            let c: Vec<u8> = (0..5).map(|v| (mask >> v & 1) as u8).collect();
            let rep = audit(&eq.graph, None, &c.iter().map(|&x| x as u32).collect::<Vec<_>>(), 2).unwrap();
            if rep.max_component <= 2 {
                assert_eq!(c[0], c[1], "coloring {c:?}");
            }
        }
    }

    #[test]
    fn uncrosser_structure() {
        let u = build_uncrosser(2).unwrap();
        let names: Vec<&str> = u.terminals.keys().map(String::as_str).collect();
        assert_eq!(names, ["x_C", "x_E", "x_N", "x_S", "x_W", "y_1", "y_2"]);
        let e = u.embedding.as_ref().unwrap();
        assert_eq!(e.euler_characteristic().unwrap(), 2);
        assert!(u.graph.girth().unwrap() >= 4);
        let north = u.terminal("x_N").unwrap();
        for y in ["y_1", "y_2"] {
            let y = u.terminal(y).unwrap();
            let pendants: Vec<usize> = u
                .graph
                .neighbors(y)
                .iter()
                .copied()
                .filter(|&p| u.copies.iter().any(|c| c.kind == LinkKind::Equal && c.y == p && c.z == north))
                .collect();
            assert_eq!(pendants.len(), 1);
        }
        assert!(build_uncrosser(3).unwrap().embedding.is_some());
    }

    #[test]
    fn uncrosser_validates() {
        let u = build_uncrosser(2).unwrap();
        let rep = validate_uncrosser(&u, 2, 10_000_000).unwrap();
        assert!(rep.passed(), "{rep:?}");
        for c in [rep.witness_equal.unwrap(), rep.witness_distinct.unwrap()] {
            let c32: Vec<u32> = c.iter().map(|&x| x as u32).collect();
            assert!(audit(&u.graph, None, &c32, 2).unwrap().max_component <= 2);
        }
    }

    #[test]
    fn uncrosser_mutation_fails() {
        let mut u = build_uncrosser(2).unwrap();
        let (c, s) = (u.terminal("x_C").unwrap(), u.terminal("x_S").unwrap());
        let idx = u.copies.iter().position(|cp| cp.y == c && cp.z == s).unwrap();
        u.cut_copy(idx);
        let rep = validate_uncrosser(&u, 2, 10_000_000).unwrap();
        assert!(matches!(rep.transfer, PropertyCheck::Fail(_)));
    }

    #[test]
    fn uncrosser_zero_budget_inconclusive() {
        let u = build_uncrosser(2).unwrap();
        let rep = validate_uncrosser(&u, 2, 0).unwrap();
        assert!(rep.inconclusive);
        assert!(!rep.passed());
    }

    #[test]
    fn girth8_reduction_one_edge() {
        let h = Hypergraph3::new(3, vec![[0, 1, 2]]).unwrap();
        let g = reduce_girth8(&h, 2).unwrap();
        assert_eq!(g.graph.n(), 3666);
        assert_eq!(g.graph.girth(), Some(8));
        assert_eq!(g.graph.degeneracy_order().0, 2);
        let c = forward_coloring_girth8(&h, &[0, 0, 1], &g).unwrap();
        let c32: Vec<u32> = c.iter().map(|&x| x as u32).collect();
        assert!(audit(&g.graph, None, &c32, 2).unwrap().max_component <= 2);
        assert!(forward_coloring_girth8(&h, &[1, 1, 1], &g).is_err());
    }

    #[test]
    fn girth8_forward_two_edges_sharing_pair() {
        let h = Hypergraph3::new(4, vec![[0, 1, 2], [0, 1, 3]]).unwrap();
        let g = reduce_girth8(&h, 2).unwrap();
        let hc = hyper2color(&h).unwrap().unwrap();
        let c = forward_coloring_girth8(&h, &hc, &g).unwrap();
        let c32: Vec<u32> = c.iter().map(|&x| x as u32).collect();
        assert!(audit(&g.graph, None, &c32, 2).unwrap().max_component <= 2);
    }

    #[test]
    fn planar_reduction_single_edge() {
        let h = Hypergraph3::new(3, vec![[0, 1, 2]]).unwrap();
        assert_eq!(planar_crossings(&h, 2), 0);
        let g = reduce_planar(&h, 2).unwrap();
        assert_eq!(g.uncrossers, 0);
        assert_eq!(g.embedding.as_ref().unwrap().euler_characteristic().unwrap(), 2);
        assert!(g.graph.girth().unwrap() >= 4);
        assert_eq!(g.graph.degeneracy_order().0, 2);
    }

    #[test]
    fn planar_reduction_with_crossings() {
        let h = Hypergraph3::new(4, vec![[0, 1, 2], [0, 1, 3]]).unwrap();
        let g = reduce_planar(&h, 2).unwrap();
        assert!(g.uncrossers > 0);
        assert_eq!(g.uncrossers, planar_crossings(&h, 2));
        assert_eq!(g.embedding.as_ref().unwrap().euler_characteristic().unwrap(), 2);
        assert!(g.graph.girth().unwrap() >= 4);
        assert_eq!(g.graph.degeneracy_order().0, 2);
    }

    #[test]
    fn parameters_checked() {
        let h = Hypergraph3::new(3, vec![[0, 1, 2]]).unwrap();
        assert!(build_j(1).is_err());
        assert!(build_n(1).is_err());
        assert!(build_equalizer(0).is_err());
        assert!(build_uncrosser(1).is_err());
        assert!(reduce_girth8(&h, 1).is_err());
        assert!(reduce_planar(&h, 1).is_err());
    }
}
