//! 2-colorings whose monochromatic components have at most `k` vertices.
//!
//! [`mc_decide`] is an exact branch-and-bound search: components are tracked
//! by a union-find with an undo trail, a branch dies as soon as some vertex
//! has no color that keeps its component within `k`, and forced vertices are
//! colored before any real choice is made. Connected components of the input
//! are solved independently.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::peel::{audit, ColoringReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Yes(Vec<u8>),
    No,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McResult {
    pub verdict: Verdict,
    pub nodes_explored: u64,
    pub best_max_component: Option<usize>,
}

const NONE: u8 = 2;

struct Solver<'a> {
    g: &'a Graph,
    k: usize,
    color: Vec<u8>,
    parent: Vec<usize>,
    size: Vec<usize>,
    trail: Vec<usize>,
    colored_nbrs: Vec<usize>,
    nodes: u64,
    budget: u64,
}

enum Step {
    Done,
    Dead,
    Branch(usize, [u8; 2], usize),
}

struct Frame {
    v: usize,
    options: [u8; 2],
    count: usize,
    next: usize,
    mark: usize,
}

enum Outcome {
    Solved,
    Refuted,
    OutOfBudget,
}

impl<'a> Solver<'a> {
    fn new(g: &'a Graph, k: usize, budget: u64) -> Self {
        let n = g.n();
        Solver {
            g,
            k,
            color: vec![NONE; n],
            parent: (0..n).collect(),
            size: vec![1; n],
            trail: Vec::new(),
            colored_nbrs: vec![0; n],
            nodes: 0,
            budget,
        }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    /// Size of the component `v` would join with color `c`.
    fn merged_size(&self, v: usize, c: u8) -> usize {
        let mut roots: Vec<usize> = Vec::new();
        let mut total = 1;
        for &u in self.g.neighbors(v) {
            if self.color[u] == c {
                let r = self.find(u);
                if !roots.contains(&r) {
                    roots.push(r);
                    total += self.size[r];
                }
            }
        }
        total
    }

    fn assign(&mut self, v: usize, c: u8) {
        self.color[v] = c;
        for i in 0..self.g.degree(v) {
            let u = self.g.neighbors(v)[i];
            self.colored_nbrs[u] += 1;
            if self.color[u] == c {
                let (a, b) = (self.find(v), self.find(u));
                if a != b {
                    let (small, big) = if self.size[a] < self.size[b] { (a, b) } else { (b, a) };
                    self.parent[small] = big;
                    self.size[big] += self.size[small];
                    self.trail.push(small);
                }
            }
        }
    }

    fn unassign(&mut self, v: usize, mark: usize) {
        while self.trail.len() > mark {
            let small = self.trail.pop().unwrap();
            let big = self.parent[small];
            self.size[big] -= self.size[small];
            self.parent[small] = small;
        }
        for &u in self.g.neighbors(v) {
            self.colored_nbrs[u] -= 1;
        }
        self.color[v] = NONE;
    }

    fn options(&self, v: usize) -> ([u8; 2], usize) {
        let s0 = self.merged_size(v, 0);
        let s1 = self.merged_size(v, 1);
        match (s0 <= self.k, s1 <= self.k) {
            (true, true) if s1 < s0 => ([1, 0], 2),
            (true, true) => ([0, 1], 2),
            (true, false) => ([0, 0], 1),
            (false, true) => ([1, 1], 1),
            (false, false) => ([0, 0], 0),
        }
    }

    /// Forced vertices first, then vertices with no uncolored neighbor, then
    /// the highest degree; only vertices next to colored ones compete.
    fn select(&self, comp: &[usize], symmetric: bool) -> Step {
        let mut best: Option<((u8, u8, usize), usize, [u8; 2], usize)> = None;
        let mut any_uncolored = None;
        for &v in comp {
            if self.color[v] != NONE {
                continue;
            }
            if any_uncolored.is_none_or(|u: usize| self.g.degree(v) > self.g.degree(u)) {
                any_uncolored = Some(v);
            }
            if self.colored_nbrs[v] == 0 {
                continue;
            }
            let (opts, count) = self.options(v);
            if count == 0 {
                return Step::Dead;
            }
            let surrounded = self.colored_nbrs[v] == self.g.degree(v);
            let key = ((count == 1) as u8, surrounded as u8, self.g.degree(v));
            if best.as_ref().is_none_or(|b| key > b.0) {
                best = Some((key, v, opts, count));
            }
        }
        match (best, any_uncolored) {
            (Some((_, v, opts, count)), _) => Step::Branch(v, opts, count),
            (None, Some(v)) if symmetric => Step::Branch(v, [0, 0], 1),
            (None, Some(v)) => {
                let (opts, count) = self.options(v);
                Step::Branch(v, opts, count)
            }
            (None, None) => Step::Done,
        }
    }

    fn solve_component(&mut self, comp: &[usize], symmetric: bool) -> Outcome {
        let mut stack: Vec<Frame> = Vec::new();
        loop {
            let step = self.select(comp, symmetric);
            let mut dead = false;
            match step {
                Step::Done => return Outcome::Solved,
                Step::Dead => dead = true,
                Step::Branch(_, _, 0) => dead = true,
                Step::Branch(v, options, count) => {
                    if self.nodes >= self.budget {
                        return Outcome::OutOfBudget;
                    }
                    self.nodes += 1;
                    let mark = self.trail.len();
                    self.assign(v, options[0]);
                    stack.push(Frame {
                        v,
                        options,
                        count,
                        next: 1,
                        mark,
                    });
                }
            }
            if dead {
                loop {
                    let Some(mut f) = stack.pop() else {
                        return Outcome::Refuted;
                    };
                    self.unassign(f.v, f.mark);
                    if f.next < f.count {
                        if self.nodes >= self.budget {
                            return Outcome::OutOfBudget;
                        }
                        self.nodes += 1;
                        self.assign(f.v, f.options[f.next]);
                        f.next += 1;
                        stack.push(f);
                        break;
                    }
                }
            }
        }
    }
}

/// Decides whether `g` has a 2-coloring extending `pins` in which every
/// monochromatic component has at most `k` vertices, exploring at most
/// `budget` search nodes.
pub fn mc_decide(g: &Graph, k: usize, pins: &[(usize, u8)], budget: u64) -> Result<McResult> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    let n = g.n();
    let mut s = Solver::new(g, k, budget);
    for &(v, c) in pins {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if c > 1 {
            return Err(Error::Parameter(format!("pin color must be 0 or 1, got {c}")));
        }
        match s.color[v] {
            NONE => s.assign(v, c),
            old if old == c => {}
            _ => return Err(Error::InconsistentPins(format!("vertex {v} pinned to both colors"))),
        }
    }
    if let Some(v) = (0..n).find(|&v| s.color[v] != NONE && s.size[s.find(v)] > k) {
        return Err(Error::InconsistentPins(format!(
            "pinned vertices around {v} already form a monochromatic component larger than {k}"
        )));
    }
    let mut inconclusive = false;
    for comp in g.components() {
        let symmetric = comp.iter().all(|&v| s.color[v] == NONE);
        match s.solve_component(&comp, symmetric) {
            Outcome::Solved => {}
            Outcome::Refuted => {
                return Ok(McResult {
                    verdict: Verdict::No,
                    nodes_explored: s.nodes,
                    best_max_component: None,
                })
            }
            Outcome::OutOfBudget => {
                inconclusive = true;
                break;
            }
        }
    }
    if inconclusive {
        return Ok(McResult {
            verdict: Verdict::Inconclusive,
            nodes_explored: s.nodes,
            best_max_component: None,
        });
    }
    let coloring = s.color;
    let worst = max_component(g, &coloring);
    debug_assert!(worst <= k);
    Ok(McResult {
        verdict: Verdict::Yes(coloring),
        nodes_explored: s.nodes,
        best_max_component: Some(worst),
    })
}

/// Largest monochromatic component of a total 2-coloring.
pub fn max_component(g: &Graph, coloring: &[u8]) -> usize {
    component_sizes(g, coloring).into_iter().max().unwrap_or(0)
}

fn component_sizes(g: &Graph, coloring: &[u8]) -> Vec<usize> {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for (u, v) in g.edges() {
        if coloring[u] == coloring[v] {
            let (a, b) = (root(&mut parent, u), root(&mut parent, v));
            parent[a] = b;
        }
    }
    let mut size = vec![0; n];
    for v in 0..n {
        let r = root(&mut parent, v);
        size[r] += 1;
    }
    size.into_iter().filter(|&s| s > 0).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Optimum {
    pub k: usize,
    pub coloring: Vec<u8>,
    /// False when some smaller `k` was left undecided by the budget.
    pub exact: bool,
    pub nodes_explored: u64,
}

/// Smallest `k` admitting an MC(k)-coloring, trying `k = 1, 2, ...`.
pub fn mc_optimize(g: &Graph, budget: u64) -> Result<Optimum> {
    let mut exact = true;
    let mut nodes = 0;
    for k in 1..=g.n() {
        let r = mc_decide(g, k, &[], budget)?;
        nodes += r.nodes_explored;
        match r.verdict {
            Verdict::Yes(coloring) => {
                return Ok(Optimum {
                    k,
                    coloring,
                    exact,
                    nodes_explored: nodes,
                })
            }
            Verdict::No => {}
            Verdict::Inconclusive => exact = false,
        }
    }
    // only reachable when the budget cut every attempt; one color is an upper bound
    let coloring = vec![0; g.n()];
    Ok(Optimum {
        k: max_component(g, &coloring),
        coloring,
        exact: g.n() == 0,
        nodes_explored: nodes,
    })
}

fn excess(g: &Graph, coloring: &[u8], k: usize) -> usize {
    component_sizes(g, coloring)
        .into_iter()
        .map(|s| s.saturating_sub(k))
        .sum()
}

/// Randomized hill climbing on the total excess `sum max(0, size - k)`,
/// flipping vertices of oversized components. Never proves infeasibility.
pub fn mc_local_search(g: &Graph, k: usize, seed: u64, iterations: usize) -> Result<(Vec<u8>, ColoringReport)> {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let mut cur_cost = excess(g, &cur, k);
    let mut best = cur.clone();
    let mut best_cost = cur_cost;
    for _ in 0..iterations {
        if best_cost == 0 {
            break;
        }
        let bad = oversized_vertices(g, &cur, k);
        if bad.is_empty() {
            break;
        }
        let v = bad[rng.gen_range(0..bad.len())];
        cur[v] ^= 1;
        let cost = excess(g, &cur, k);
        if cost <= cur_cost || rng.gen_bool(0.05) {
            cur_cost = cost;
            if cost < best_cost {
                best_cost = cost;
                best.clone_from(&cur);
            }
        } else {
            cur[v] ^= 1;
        }
    }
    let colors: Vec<u32> = best.iter().map(|&c| c as u32).collect();
    let report = audit(g, None, &colors, k)?;
    Ok((best, report))
}

fn oversized_vertices(g: &Graph, coloring: &[u8], k: usize) -> Vec<usize> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut members = vec![s];
        comp[s] = s;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for &u in g.neighbors(v) {
                if comp[u] == usize::MAX && coloring[u] == coloring[v] {
                    comp[u] = s;
                    members.push(u);
                }
            }
        }
        if members.len() > k {
            out.extend(members);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_min(g: &Graph) -> usize {
        let n = g.n();
        if n == 0 {
            return 0;
        }
        (0..1u32 << n)
            .map(|mask| {
                let c: Vec<u8> = (0..n).map(|v| (mask >> v & 1) as u8).collect();
                max_component(g, &c)
            })
            .min()
            .unwrap()
    }

    fn brute_decide(g: &Graph, k: usize, pins: &[(usize, u8)]) -> bool {
        let n = g.n();
        (0..1u32 << n).any(|mask| {
            let c: Vec<u8> = (0..n).map(|v| (mask >> v & 1) as u8).collect();
            pins.iter().all(|&(v, p)| c[v] == p) && max_component(g, &c) <= k
        })
    }

    fn yes(r: &McResult) -> bool {
        matches!(r.verdict, Verdict::Yes(_))
    }

    #[test]
    fn small_examples() {
        assert!(yes(&mc_decide(&Graph::cycle(4), 1, &[], 100).unwrap()));
        assert_eq!(mc_decide(&Graph::complete(4), 1, &[], 100).unwrap().verdict, Verdict::No);
        assert!(yes(&mc_decide(&Graph::complete(4), 2, &[], 100).unwrap()));
        let k23 = Graph::complete_bipartite(2, 3);
        assert_eq!(mc_decide(&k23, 2, &[(0, 0), (1, 1)], 1000).unwrap().verdict, Verdict::No);
        assert!(yes(&mc_decide(&k23, 2, &[(0, 0), (1, 0)], 1000).unwrap()));
    }

    #[test]
    fn optimize_examples() {
        assert_eq!(mc_optimize(&Graph::complete(4), 1000).unwrap().k, 2);
        assert_eq!(mc_optimize(&Graph::cycle(5), 1000).unwrap().k, 2);
        assert_eq!(mc_optimize(&Graph::path(7), 1000).unwrap().k, 1);
        assert_eq!(mc_optimize(&Graph::new(0), 1000).unwrap().k, 0);
        assert_eq!(mc_optimize(&Graph::new(3), 1000).unwrap().k, 1);
    }

    #[test]
    fn bad_inputs() {
        let g = Graph::path(3);
        assert!(mc_decide(&g, 0, &[], 10).is_err());
        assert!(mc_decide(&g, 1, &[(5, 0)], 10).is_err());
        assert!(mc_decide(&g, 1, &[(0, 0), (0, 1)], 10).is_err());
        assert!(matches!(
            mc_decide(&g, 1, &[(0, 0), (1, 0)], 10),
            Err(Error::InconsistentPins(_))
        ));
    }

    #[test]
    fn zero_budget_is_inconclusive() {
        let r = mc_decide(&Graph::cycle(6), 1, &[], 0).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn n_gadget_at_two() {
        let n = crate::gadgets::build_n(2).unwrap();
        let r = mc_decide(&n.graph, 2, &[(0, 0), (1, 0)], 10_000_000).unwrap();
        assert_eq!(r.verdict, Verdict::No);
        let r = mc_decide(&n.graph, 2, &[(0, 0), (1, 1)], 10_000_000).unwrap();
        assert!(yes(&r));
    }

    #[test]
    fn local_search_path() {
        let g = Graph::path(10);
        for seed in 0..5 {
            let (c, rep) = mc_local_search(&g, 2, seed, 2000).unwrap();
            assert!(rep.max_component <= 2, "seed {seed}");
            assert_eq!(mc_local_search(&g, 2, seed, 2000).unwrap().0, c);
        }
    }

    #[test]
    fn local_search_grid_reports() {
        let mut edges = Vec::new();
        for r in 0..10 {
            for c in 0..10 {
                let v = r * 10 + c;
                if c + 1 < 10 {
                    edges.push((v, v + 1));
                }
                if r + 1 < 10 {
                    edges.push((v, v + 10));
                }
            }
        }
        let g = Graph::from_edges(100, edges).unwrap();
        let (c, rep) = mc_local_search(&g, 4, 1, 500).unwrap();
        assert_eq!(c.len(), 100);
        assert_eq!(rep.max_component, max_component(&g, &c));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(proptest::bool::weighted(0.4), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[i] {
                            edges.push((u, v));
                        }
                        i += 1;
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn optimize_matches_brute_force(g in arb_graph(10)) {
            let opt = mc_optimize(&g, 1_000_000).unwrap();
            prop_assert!(opt.exact);
            prop_assert_eq!(opt.k, brute_min(&g));
            prop_assert!(max_component(&g, &opt.coloring) <= opt.k);
        }

        #[test]
        fn decide_with_pins_matches_brute_force(g in arb_graph(9), k in 1usize..4, p0 in 0u8..2, p1 in 0u8..2) {
            let n = g.n();
            let pins: Vec<(usize, u8)> = if n >= 2 { vec![(0, p0), (n - 1, p1)] } else { vec![(0, p0)] };
            match mc_decide(&g, k, &pins, 1_000_000) {
                Ok(r) => {
                    prop_assert_eq!(yes(&r), brute_decide(&g, k, &pins));
                    if let Verdict::Yes(c) = r.verdict {
                        prop_assert!(max_component(&g, &c) <= k);
                        prop_assert!(pins.iter().all(|&(v, p)| c[v] == p));
                    }
                }
                Err(Error::InconsistentPins(_)) => prop_assert!(!brute_decide(&g, k, &pins)),
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }

        #[test]
        fn symmetry_pin_agrees(g in arb_graph(9), k in 1usize..4) {
            let free = yes(&mc_decide(&g, k, &[], 1_000_000).unwrap());
            let pinned = yes(&mc_decide(&g, k, &[(0, 0)], 1_000_000).unwrap());
            prop_assert_eq!(free, pinned);
        }
    }
}
