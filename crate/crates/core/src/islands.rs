//! k-islands: non-empty vertex sets whose members each have at most `k`
//! neighbors outside the set.
//!
//! [`find_island`] first looks for the small configurations whose absence the
//! discharging arguments rely on (a low-degree vertex, a short path of
//! mid-degree vertices between two `k + 1`-degree end-vertices, a light
//! triangle) and falls back to an exact violation-driven search otherwise.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// The three graph classes with their island guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Any graph: a 4-island of size at most 3 beyond `-72 chi` vertices.
    A,
    /// Triangle-free: a 2-island of size at most 10 beyond `-72 chi` vertices.
    B,
    /// Girth at least 6: a 1-island of size at most 16 beyond `-357 chi` vertices.
    C,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::A, Regime::B, Regime::C];

    pub fn k(self) -> usize {
        match self {
            Regime::A => 4,
            Regime::B => 2,
            Regime::C => 1,
        }
    }

    pub fn size(self) -> usize {
        match self {
            Regime::A => 3,
            Regime::B => 10,
            Regime::C => 16,
        }
    }

    /// The (positive) constant `c` in the threshold `-c * chi`.
    pub fn factor(self) -> i64 {
        match self {
            Regime::A | Regime::B => 72,
            Regime::C => 357,
        }
    }

    /// Smallest girth the regime assumes.
    pub fn min_girth(self) -> usize {
        match self {
            Regime::A => 3,
            Regime::B => 4,
            Regime::C => 6,
        }
    }

    /// The regime whose guarantee is exactly `(k, s)`.
    pub fn matching(k: usize, s: usize) -> Option<Regime> {
        Regime::ALL.into_iter().find(|r| r.k() == k && r.size() == s)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::A => "A",
            Regime::B => "B",
            Regime::C => "C",
        };
        f.write_str(s)
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Regime::A),
            "B" | "b" => Ok(Regime::B),
            "C" | "c" => Ok(Regime::C),
            _ => Err(Error::Parameter(format!("unknown regime {s:?} (expected A, B or C)"))),
        }
    }
}

/// Number of vertices the island theorem for `regime` needs to exceed.
pub fn guarantee_threshold(regime: Regime, chi: i64) -> i64 {
    -regime.factor() * chi
}

/// A certified k-island.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IslandWitness {
    /// Sorted members.
    pub members: Vec<usize>,
    /// `outside_degree[i]` is the number of neighbors of `members[i]` outside the set.
    pub outside_degree: Vec<usize>,
    pub k: usize,
}

impl IslandWitness {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

impl fmt::Display for IslandWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        write!(
            f,
            "island: {} ; outside-degrees: {}",
            join(&self.members),
            join(&self.outside_degree)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IslandCheck {
    Island(IslandWitness),
    /// `vertex` has `outside_degree > k` neighbors outside the set.
    Refused { vertex: usize, outside_degree: usize },
}

impl IslandCheck {
    pub fn witness(self) -> Option<IslandWitness> {
        match self {
            IslandCheck::Island(w) => Some(w),
            IslandCheck::Refused { .. } => None,
        }
    }
}

/// Checks whether `x` is a `k`-island of `g`.
pub fn is_island(g: &Graph, x: &[usize], k: usize) -> Result<IslandCheck> {
    let alive = vec![true; g.n()];
    is_island_within(g, &alive, x, k)
}

/// [`is_island`] inside the subgraph induced by `alive`.
pub fn is_island_within(g: &Graph, alive: &[bool], x: &[usize], k: usize) -> Result<IslandCheck> {
    if x.is_empty() {
        return Err(Error::Precondition("island candidate set is empty".into()));
    }
    let mut members = x.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut inside = vec![false; g.n()];
    for &v in &members {
        if v >= g.n() || !alive[v] {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
        inside[v] = true;
    }
    let mut outside_degree = Vec::with_capacity(members.len());
    for &v in &members {
        let out = g.neighbors(v).iter().filter(|&&u| alive[u] && !inside[u]).count();
        if out > k {
            return Ok(IslandCheck::Refused {
                vertex: v,
                outside_degree: out,
            });
        }
        outside_degree.push(out);
    }
    Ok(IslandCheck::Island(IslandWitness {
        members,
        outside_degree,
        k,
    }))
}

/// Which structural shortcut to try before the exact search, and the
/// largest path configuration it may return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FastPath {
    pub regime: Regime,
    pub max_path: usize,
}

impl FastPath {
    pub fn of(regime: Regime) -> Self {
        FastPath {
            regime,
            max_path: regime.size(),
        }
    }
}

/// The configurations whose absence each discharging argument assumes, returned
/// as a witness for the regime's `k`:
/// a vertex of degree at most `k`; a path of at most `size` vertices of degree
/// at most `k + 2` whose end-vertices have degree `k + 1` (for B and C the ends
/// may coincide, giving a cycle); and for A a triangle of degree-at-most-6
/// vertices.
pub fn forbidden_configuration(g: &Graph, regime: Regime) -> Option<IslandWitness> {
    let alive = vec![true; g.n()];
    let scope = Scope::new(g, &alive);
    scope.forbidden_configuration(FastPath::of(regime))
}

/// A `k`-island of size at most `s`, if one exists.
pub fn find_island(g: &Graph, k: usize, s: usize) -> Option<IslandWitness> {
    let alive = vec![true; g.n()];
    find_island_within(g, &alive, k, s, Regime::matching(k, s).map(FastPath::of))
}

/// A `k`-island of size at most `s` containing `v`, if one exists.
pub fn find_island_containing(g: &Graph, k: usize, s: usize, v: usize) -> Option<IslandWitness> {
    let alive = vec![true; g.n()];
    let scope = Scope::new(g, &alive);
    scope.search_from(v, k, s, false)
}

/// [`find_island`] inside the subgraph induced by `alive`, with an explicit
/// choice of structural shortcut.
pub fn find_island_within(
    g: &Graph,
    alive: &[bool],
    k: usize,
    s: usize,
    fast: Option<FastPath>,
) -> Option<IslandWitness> {
    if s == 0 {
        return None;
    }
    let scope = Scope::new(g, alive);
    if let Some(fast) = fast {
        if let Some(w) = scope.forbidden_configuration(fast) {
            debug_assert!(w.size() <= s);
            return Some(w);
        }
    }
    (0..g.n())
        .filter(|&v| alive[v] && scope.deg[v] < k + s)
        .find_map(|seed| scope.search_from(seed, k, s, true))
}

/// A graph restricted to its alive vertices, with cached degrees.
struct Scope<'a> {
    g: &'a Graph,
    alive: &'a [bool],
    deg: Vec<usize>,
}

impl<'a> Scope<'a> {
    fn new(g: &'a Graph, alive: &'a [bool]) -> Self {
        let deg = (0..g.n())
            .map(|v| {
                if alive[v] {
                    g.neighbors(v).iter().filter(|&&u| alive[u]).count()
                } else {
                    0
                }
            })
            .collect();
        Scope { g, alive, deg }
    }

    fn nbrs(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.g.neighbors(v).iter().copied().filter(|&u| self.alive[u])
    }

    fn certify(&self, set: &[usize], k: usize) -> IslandWitness {
        match is_island_within(self.g, self.alive, set, k) {
            Ok(IslandCheck::Island(w)) => w,
            other => panic!("internal island check failed for {set:?}: {other:?}"),
        }
    }

    fn forbidden_configuration(&self, fast: FastPath) -> Option<IslandWitness> {
        let k = fast.regime.k();
        let n = self.g.n();
        let alive = |v: usize| self.alive[v];
        if let Some(v) = (0..n).find(|&v| alive(v) && self.deg[v] <= k) {
            return Some(self.certify(&[v], k));
        }
        let max_path = match fast.regime {
            Regime::A => fast.max_path.min(3),
            _ => fast.max_path,
        };
        let closed = fast.regime != Regime::A;
        if let Some(path) = self.end_to_end_path(k + 2, k + 1, max_path, closed) {
            return Some(self.certify(&path, k));
        }
        if fast.regime == Regime::A {
            if let Some(t) = self.light_triangle(6) {
                return Some(self.certify(&t, k));
            }
        }
        None
    }

    /// First triangle (lexicographic) whose vertices all have degree <= `max_deg`.
    fn light_triangle(&self, max_deg: usize) -> Option<[usize; 3]> {
        let light = |v: usize| self.alive[v] && self.deg[v] <= max_deg;
        for a in (0..self.g.n()).filter(|&v| light(v)) {
            for b in self.nbrs(a).filter(|&b| b > a && light(b)) {
                for c in self.nbrs(a).filter(|&c| c > b && light(c)) {
                    if self.g.has_edge(b, c) {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }

    /// From each end-vertex seed (degree `end_deg`, ascending), the shortest
    /// path through vertices of degree <= `mid_max` to another end-vertex, or
    /// the shortest cycle back to the seed when `closed`, using at most
    /// `max_vertices` vertices.
    fn end_to_end_path(
        &self,
        mid_max: usize,
        end_deg: usize,
        max_vertices: usize,
        closed: bool,
    ) -> Option<Vec<usize>> {
        let n = self.g.n();
        if max_vertices < 2 {
            return None;
        }
        let low = |v: usize| self.alive[v] && self.deg[v] <= mid_max;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut branch = vec![usize::MAX; n];
        let mut touched = Vec::new();
        for seed in (0..n).filter(|&v| self.alive[v] && self.deg[v] == end_deg) {
            for &v in &touched {
                dist[v] = usize::MAX;
                parent[v] = usize::MAX;
                branch[v] = usize::MAX;
            }
            touched.clear();
            dist[seed] = 0;
            touched.push(seed);
            let mut queue = VecDeque::from([seed]);
            let mut best_path: Option<usize> = None;
            let mut order = Vec::new();
            while let Some(v) = queue.pop_front() {
                order.push(v);
                if v != seed && self.deg[v] == end_deg {
                    best_path = Some(v);
                    break;
                }
                if dist[v] + 2 > max_vertices {
                    continue;
                }
                for u in self.nbrs(v).filter(|&u| low(u)) {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        parent[u] = v;
                        branch[u] = if v == seed { u } else { branch[v] };
                        touched.push(u);
                        queue.push_back(u);
                    }
                }
            }
            let path_len = best_path.map(|t| dist[t] + 1);
            let mut best_cycle: Option<(usize, usize, usize)> = None;
            if closed {
                for &a in &touched {
                    if a == seed {
                        continue;
                    }
                    for b in self.nbrs(a) {
                        if b == seed || dist[b] == usize::MAX || branch[b] == branch[a] || a > b {
                            continue;
                        }
                        let len = dist[a] + dist[b] + 1;
                        if len <= max_vertices && best_cycle.is_none_or(|(l, _, _)| len < l) {
                            best_cycle = Some((len, a, b));
                        }
                    }
                }
            }
            let walk_up = |mut v: usize| {
                let mut out = Vec::new();
                while v != usize::MAX {
                    out.push(v);
                    v = parent[v];
                }
                out
            };
            match (path_len, best_cycle) {
                (Some(pl), Some((cl, a, b))) if cl < pl => {
                    let mut set = walk_up(a);
                    set.extend(walk_up(b));
                    return Some(set);
                }
                (Some(_), _) => return Some(walk_up(best_path.unwrap())),
                (None, Some((_, a, b))) => {
                    let mut set = walk_up(a);
                    set.extend(walk_up(b));
                    return Some(set);
                }
                (None, None) => {}
            }
        }
        None
    }

    /// Exact search for a k-island of size <= s containing `seed`. With
    /// `below_seed_forbidden`, vertices smaller than the seed may not join,
    /// so the seed is the island's minimum. Only vertices of degree < k + s
    /// may ever join.
    ///
    /// Invariant of the recursion: if some island Y with X ⊆ Y, |Y| <= s and
    /// Y disjoint from the forbidden set exists, it is found. A member u with
    /// more than k outside neighbors needs one of them, so branching over u's
    /// available neighbors (forbidding each after its branch fails) is
    /// complete.
    fn search_from(&self, seed: usize, k: usize, s: usize, below_seed_forbidden: bool) -> Option<IslandWitness> {
        let n = self.g.n();
        if !self.alive[seed] || self.deg[seed] >= k + s {
            return None;
        }
        let mut forbidden: Vec<bool> = (0..n)
            .map(|v| self.deg[v] >= k + s || (below_seed_forbidden && v < seed))
            .collect();
        let mut inside = vec![false; n];
        let mut members = vec![seed];
        inside[seed] = true;
        if self.grow(k, s, &mut members, &mut inside, &mut forbidden) {
            Some(self.certify(&members, k))
        } else {
            None
        }
    }

    fn grow(
        &self,
        k: usize,
        s: usize,
        members: &mut Vec<usize>,
        inside: &mut [bool],
        forbidden: &mut [bool],
    ) -> bool {
        let room = s - members.len();
        // pick the violating member with the fewest spare options
        let mut pick: Option<(usize, usize)> = None;
        for &u in members.iter() {
            let mut out = 0;
            let mut blocked = 0;
            for w in self.nbrs(u) {
                if !inside[w] {
                    out += 1;
                    if forbidden[w] {
                        blocked += 1;
                    }
                }
            }
            if blocked > k {
                return false;
            }
            if out > k {
                let need = out - k;
                if need > room {
                    return false;
                }
                let slack = out - blocked - need;
                if pick.is_none_or(|(_, best)| slack < best) {
                    pick = Some((u, slack));
                }
            }
        }
        let Some((u, _)) = pick else {
            return true;
        };
        let options: Vec<usize> = self.nbrs(u).filter(|&w| !inside[w] && !forbidden[w]).collect();
        let mut banned = Vec::new();
        let mut found = false;
        for w in options {
            members.push(w);
            inside[w] = true;
            if self.grow(k, s, members, inside, forbidden) {
                found = true;
                break;
            }
            members.pop();
            inside[w] = false;
            forbidden[w] = true;
            banned.push(w);
        }
        for w in banned {
            forbidden[w] = false;
        }
        found
    }
}
