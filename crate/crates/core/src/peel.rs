//! Island peeling and the list colorings it yields, plus the coloring
//! auditor.
//!
//! Peeling removes islands one at a time until nothing is left or no island
//! exists; the leftover must then be no larger than the guarantee threshold.
//! Coloring runs the removal order backwards, so each island vertex only has
//! to avoid its (at most `k`) already-colored neighbors outside the island.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TheoremViolation};
use crate::graph::{content_lines, Graph};
use crate::islands::{find_island_within, guarantee_threshold, FastPath, Regime};

/// One color per vertex.
pub type Coloring = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListAssignment {
    pub lists: Vec<Vec<u32>>,
}

impl ListAssignment {
    pub fn new(lists: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(v) = lists.iter().position(Vec::is_empty) {
            return Err(Error::ListTooSmall {
                vertex: v,
                size: 0,
                needed: 1,
            });
        }
        Ok(ListAssignment { lists })
    }

    /// The same list for every vertex.
    pub fn uniform(n: usize, colors: &[u32]) -> Self {
        ListAssignment {
            lists: vec![colors.to_vec(); n],
        }
    }

    /// Independent uniformly random `size`-subsets of `1..=palette`.
    pub fn random(n: usize, size: usize, palette: u32, seed: u64) -> Result<Self> {
        if size == 0 || size > palette as usize {
            return Err(Error::Parameter(format!("cannot pick {size} of {palette} colors")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all: Vec<u32> = (1..=palette).collect();
        let lists = (0..n)
            .map(|_| {
                let mut l: Vec<u32> = all.choose_multiple(&mut rng, size).copied().collect();
                l.sort_unstable();
                l
            })
            .collect();
        Ok(ListAssignment { lists })
    }

    pub fn min_size(&self) -> usize {
        self.lists.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Lines `v: c1 c2 ...`; every vertex `0..n` must appear.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut lists: Vec<Option<Vec<u32>>> = vec![None; n];
        for (line, l) in content_lines(text) {
            let (head, rest) = l.split_once(':').ok_or(Error::Parse {
                line,
                msg: "expected \"v: c1 c2 ...\"".into(),
            })?;
            let v: usize = head.trim().parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad vertex id {head:?}"),
            })?;
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            let colors = rest
                .split_whitespace()
                .map(|c| {
                    c.parse::<u32>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad color {c:?}"),
                    })
                })
                .collect::<Result<Vec<u32>>>()?;
            lists[v] = Some(colors);
        }
        let lists = lists
            .into_iter()
            .enumerate()
            .map(|(v, l)| {
                l.ok_or(Error::Parse {
                    line: 0,
                    msg: format!("no list for vertex {v}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ListAssignment::new(lists)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, l) in self.lists.iter().enumerate() {
            let _ = write!(s, "{v}:");
            for c in l {
                let _ = write!(s, " {c}");
            }
            s.push('\n');
        }
        s
    }
}

/// Lines `v c`; every vertex `0..n` must appear.
pub fn parse_coloring(text: &str, n: usize) -> Result<Coloring> {
    let mut out = vec![None; n];
    for (line, l) in content_lines(text) {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let bad = || Error::Parse {
            line,
            msg: format!("expected \"v c\", got {l:?}"),
        };
        if parts.len() != 2 {
            return Err(bad());
        }
        let v: usize = parts[0].parse().map_err(|_| bad())?;
        let c: u32 = parts[1].parse().map_err(|_| bad())?;
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        out[v] = Some(c);
    }
    out.into_iter()
        .enumerate()
        .map(|(v, c)| {
            c.ok_or(Error::Precondition(format!("vertex {v} is uncolored")))
        })
        .collect()
}

pub fn coloring_to_text(c: &[u32]) -> String {
    let mut s = String::new();
    for (v, col) in c.iter().enumerate() {
        let _ = writeln!(s, "{v} {col}");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelDecomposition {
    /// Islands in removal order.
    pub layers: Vec<Vec<usize>>,
    pub base: Vec<usize>,
    /// Islands found only after relaxing the size bound 12 to 16.
    pub fallbacks: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PeelOptions {
    /// Regime C only: look for 1-islands of size at most 12, as allowed for
    /// 2-edge-connected planar inputs of girth 6 (the caller vouches for
    /// that). Falls back to 16 with a warning.
    pub small_islands: bool,
}

pub fn peel(g: &Graph, regime: Regime, chi: i64) -> Result<PeelDecomposition> {
    peel_with(g, regime, chi, PeelOptions::default())
}

fn check_girth(g: &Graph, regime: Regime) -> Result<()> {
    if let Some(girth) = g.girth() {
        if girth < regime.min_girth() {
            return Err(Error::Precondition(format!(
                "regime {regime} needs girth at least {}, graph has girth {girth}",
                regime.min_girth()
            )));
        }
    }
    Ok(())
}

pub fn peel_with(g: &Graph, regime: Regime, chi: i64, opts: PeelOptions) -> Result<PeelDecomposition> {
    check_girth(g, regime)?;
    let k = regime.k();
    let threshold = guarantee_threshold(regime, chi);
    let small = opts.small_islands && regime == Regime::C;
    let mut alive = vec![true; g.n()];
    let mut remaining = g.n();
    let mut layers = Vec::new();
    let mut fallbacks = 0;
    while remaining > 0 {
        let found = if small {
            let tight = FastPath {
                regime,
                max_path: 12,
            };
            find_island_within(g, &alive, k, 12, Some(tight)).or_else(|| {
                let w = find_island_within(g, &alive, k, regime.size(), Some(FastPath::of(regime)));
                if w.is_some() {
                    log::warn!("no 1-island of size <= 12 left; using size <= 16");
                    fallbacks += 1;
                }
                w
            })
        } else {
            find_island_within(g, &alive, k, regime.size(), Some(FastPath::of(regime)))
        };
        match found {
            Some(w) => {
                for &v in &w.members {
                    alive[v] = false;
                }
                remaining -= w.size();
                layers.push(w.members);
            }
            None => break,
        }
    }
    let mut base = Vec::new();
    for comp in g.components_within(&alive) {
        if comp.len() as i64 > threshold.max(0) {
            let (residual, _) = g.induced(&comp);
            return Err(Error::TheoremViolation(Box::new(TheoremViolation {
                k,
                size: regime.size(),
                threshold,
                vertices: comp,
                residual,
            })));
        }
        base.extend(comp);
    }
    base.sort_unstable();
    Ok(PeelDecomposition {
        layers,
        base,
        fallbacks,
    })
}

#[derive(Debug, Clone)]
pub struct ColorOutcome {
    pub coloring: Coloring,
    pub decomposition: PeelDecomposition,
}

/// Colors the layers of `d` backwards; each vertex takes the smallest color
/// of `choices(v)` not used by a colored neighbor outside its own layer.
fn extend(g: &Graph, d: &PeelDecomposition, base_color: impl Fn(usize) -> u32, choices: impl Fn(usize) -> Vec<u32>) -> Result<Coloring> {
    let n = g.n();
    let mut color: Vec<Option<u32>> = vec![None; n];
    for &v in &d.base {
        color[v] = Some(base_color(v));
    }
    let mut layer_of = vec![usize::MAX; n];
    for (i, layer) in d.layers.iter().enumerate() {
        for &v in layer {
            layer_of[v] = i;
        }
    }
    for (i, layer) in d.layers.iter().enumerate().rev() {
        for &v in layer {
            let blocked: BTreeSet<u32> = g
                .neighbors(v)
                .iter()
                .filter(|&&u| layer_of[u] != i)
                .filter_map(|&u| color[u])
                .collect();
            let pick = choices(v).into_iter().filter(|c| !blocked.contains(c)).min().ok_or_else(|| {
                Error::Precondition(format!("vertex {v}: every color is blocked by outside neighbors"))
            })?;
            color[v] = Some(pick);
        }
    }
    Ok(color.into_iter().map(|c| c.expect("layers and base cover V")).collect())
}

pub fn color_from_lists(g: &Graph, lists: &ListAssignment, regime: Regime, chi: i64, opts: PeelOptions) -> Result<ColorOutcome> {
    if lists.lists.len() != g.n() {
        return Err(Error::Parameter(format!(
            "{} lists for {} vertices",
            lists.lists.len(),
            g.n()
        )));
    }
    let needed = regime.k() + 1;
    if let Some(v) = (0..g.n()).find(|&v| lists.lists[v].len() < needed) {
        return Err(Error::ListTooSmall {
            vertex: v,
            size: lists.lists[v].len(),
            needed,
        });
    }
    let d = peel_with(g, regime, chi, opts)?;
    let coloring = extend(g, &d, |v| lists.lists[v][0], |v| lists.lists[v].clone())?;
    Ok(ColorOutcome {
        coloring,
        decomposition: d,
    })
}

/// Colors 1 to 4 on island vertices, 5 on the base.
pub fn color_four_plus_sink(g: &Graph, chi: i64) -> Result<ColorOutcome> {
    let d = peel(g, Regime::A, chi)?;
    let coloring = extend(g, &d, |_| 5, |_| (1..=5).collect())?;
    Ok(ColorOutcome {
        coloring,
        decomposition: d,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringReport {
    pub max_component: usize,
    /// Sizes of all monochromatic components, largest first.
    pub component_sizes: Vec<usize>,
    pub list_violations: Vec<usize>,
    /// Components with more than `bound` vertices.
    pub oversized: Vec<Vec<usize>>,
    pub base_size: Option<usize>,
    /// Largest component per color.
    pub max_by_color: BTreeMap<u32, usize>,
    /// Vertices lying in oversized components.
    pub vertices_in_oversized: usize,
}

impl ColoringReport {
    /// Largest component among the given colors.
    pub fn max_over(&self, colors: impl IntoIterator<Item = u32>) -> usize {
        colors
            .into_iter()
            .filter_map(|c| self.max_by_color.get(&c).copied())
            .max()
            .unwrap_or(0)
    }
}

/// Monochromatic components of `c` via union-find, list violations against
/// `lists`, and the components exceeding `bound`.
pub fn audit(g: &Graph, lists: Option<&ListAssignment>, c: &[u32], bound: usize) -> Result<ColoringReport> {
    let n = g.n();
    if c.len() != n {
        return Err(Error::Precondition(format!(
            "coloring has {} entries for {n} vertices",
            c.len()
        )));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for (u, v) in g.edges() {
        if c[u] == c[v] {
            let (a, b) = (root(&mut parent, u), root(&mut parent, v));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = root(&mut parent, v);
        members.entry(r).or_default().push(v);
    }
    let mut component_sizes: Vec<usize> = members.values().map(Vec::len).collect();
    component_sizes.sort_unstable_by(|a, b| b.cmp(a));
    let mut max_by_color = BTreeMap::new();
    for comp in members.values() {
        let e = max_by_color.entry(c[comp[0]]).or_insert(0);
        *e = (*e).max(comp.len());
    }
    let oversized: Vec<Vec<usize>> = members.into_values().filter(|m| m.len() > bound).collect();
    let list_violations = match lists {
        Some(l) => (0..n).filter(|&v| !l.lists[v].contains(&c[v])).collect(),
        None => Vec::new(),
    };
    Ok(ColoringReport {
        max_component: component_sizes.first().copied().unwrap_or(0),
        vertices_in_oversized: oversized.iter().map(Vec::len).sum(),
        component_sizes,
        list_violations,
        oversized,
        base_size: None,
        max_by_color,
    })
}
