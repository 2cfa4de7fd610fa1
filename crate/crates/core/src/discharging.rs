//! Exact charge accounting for the three discharging arguments.
//!
//! Charges live on vertices (and on faces for regimes B and C), start from
//! the regime's degree formula, and move along the regime's rules. Every
//! move is logged; totals are compared as exact rationals.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::embedding::{Embedding, Face};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::islands::{find_island, find_island_containing, guarantee_threshold, IslandWitness, Regime};

pub type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Node {
    Vertex(usize),
    Face(usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Vertex(v) => write!(f, "v{v}"),
            Node::Face(i) => write!(f, "f{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// Degree >= 7 gives 1/4 to each degree-5 neighbor.
    R1,
    /// Degree >= 7 gives 1/12 to each degree-6 neighbor.
    R2,
    /// Degree 6 gives 1/6 to each degree-5 neighbor.
    R3,
    /// Face pays a walk start whose run of mid-degree vertices is long.
    WalkFace,
    /// Walk terminal pays a walk start whose run is short.
    WalkVertex,
    /// Degree >= 5 gives 1/18 to each incident face corner.
    CornerToFace,
    /// Face gives 1/54 to each occurrence of a degree-3 or degree-4 vertex.
    FaceToCorner,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::WalkFace => "walk-face",
            Rule::WalkVertex => "walk-vertex",
            Rule::CornerToFace => "corner-to-face",
            Rule::FaceToCorner => "face-to-corner",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub from: Node,
    pub to: Node,
    pub amount: Q,
    pub rule: Rule,
}

impl fmt::Display for Transfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule={} from={} to={} amount={}", self.rule, self.from, self.to, self.amount)
    }
}

/// The facial walk used by the walk rules: a start occurrence, the maximal
/// run of inner vertices of the mid degree after it, and the terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkContext {
    pub face: usize,
    pub start: usize,
    pub position: usize,
    pub forward: bool,
    pub inner_run: Vec<usize>,
    pub terminal: usize,
}

#[derive(Debug, Clone)]
pub struct ChargeState {
    pub regime: Regime,
    pub chi: i64,
    pub vertex_charge: Vec<Q>,
    /// Empty for regime A.
    pub face_charge: Vec<Q>,
    pub faces: Vec<Face>,
    pub transfer_log: Vec<Transfer>,
}

impl ChargeState {
    pub fn total(&self) -> Q {
        self.vertex_charge.iter().chain(&self.face_charge).fold(Q::zero(), |a, b| a + b)
    }

    pub fn charge(&self, node: Node) -> Q {
        match node {
            Node::Vertex(v) => self.vertex_charge[v],
            Node::Face(f) => self.face_charge[f],
        }
    }

    fn apply(&mut self, t: Transfer) {
        for (node, sign) in [(t.from, -1), (t.to, 1)] {
            let slot = match node {
                Node::Vertex(v) => &mut self.vertex_charge[v],
                Node::Face(f) => &mut self.face_charge[f],
            };
            *slot += t.amount * sign;
        }
        self.transfer_log.push(t);
    }

    pub fn log_text(&self) -> String {
        self.transfer_log.iter().map(|t| format!("{t}\n")).collect()
    }
}

/// Initial charges and the regime's sum identity: A at most `-6χ` (equal on
/// triangulations), B exactly `-4χ`, C exactly `-6χ`.
pub fn initial_charges(e: &Embedding, regime: Regime) -> Result<ChargeState> {
    let g = e.graph();
    let chi = e.euler_characteristic()?;
    let faces = if g.n() == 1 { Vec::new() } else { e.trace_faces()? };
    let d = |v: usize| g.degree(v) as i64;
    let (vertex_charge, face_charge): (Vec<Q>, Vec<Q>) = match regime {
        Regime::A => ((0..g.n()).map(|v| Q::from(d(v) - 6)).collect(), Vec::new()),
        Regime::B => (
            (0..g.n()).map(|v| Q::from(d(v) - 4)).collect(),
            faces.iter().map(|f| Q::from(f.degree() as i64 - 4)).collect(),
        ),
        Regime::C => (
            (0..g.n()).map(|v| Q::from(2 * d(v) - 6)).collect(),
            faces.iter().map(|f| Q::from(f.degree() as i64 - 6)).collect(),
        ),
    };
    let state = ChargeState {
        regime,
        chi,
        vertex_charge,
        face_charge,
        faces,
        transfer_log: Vec::new(),
    };
    let total = state.total();
    let ok = match regime {
        Regime::A => total <= Q::from(-6 * chi),
        Regime::B => total == Q::from(-4 * chi),
        Regime::C => total == Q::from(-6 * chi),
    };
    if !ok {
        return Err(Error::IdentityViolation(format!(
            "regime {regime}: total charge {total} against chi = {chi}"
        )));
    }
    Ok(state)
}

fn conserve(state: ChargeState, before: Q) -> Result<ChargeState> {
    let after = state.total();
    if after != before {
        return Err(Error::IdentityViolation(format!(
            "charge not conserved: {before} before, {after} after"
        )));
    }
    Ok(state)
}

pub fn discharge_a(e: &Embedding) -> Result<ChargeState> {
    let g = e.graph();
    let mut s = initial_charges(e, Regime::A)?;
    let before = s.total();
    for v in 0..g.n() {
        let dv = g.degree(v);
        for &u in g.neighbors(v) {
            let du = g.degree(u);
            let rule = match (dv, du) {
                (7.., 5) => Some((Rule::R1, q(1, 4))),
                (7.., 6) => Some((Rule::R2, q(1, 12))),
                (6, 5) => Some((Rule::R3, q(1, 6))),
                _ => None,
            };
            if let Some((rule, amount)) = rule {
                s.apply(Transfer {
                    from: Node::Vertex(v),
                    to: Node::Vertex(u),
                    amount,
                    rule,
                });
            }
        }
    }
    conserve(s, before)
}

/// The maximal walk from occurrence `pos` of `face` whose inner vertices
/// all have degree `mid`. A run that wraps all the way ends back at the start.
pub fn walk_context(g: &Graph, faces: &[Face], face: usize, pos: usize, forward: bool, mid: usize) -> WalkContext {
    let f = &faces[face];
    let d = f.degree();
    let at = |step: usize| {
        let p = if forward { (pos + step) % d } else { (pos + d - step % d) % d };
        f.vertex_at(p)
    };
    let mut inner_run = Vec::new();
    let mut step = 1;
    while step < d && g.degree(at(step)) == mid {
        inner_run.push(at(step));
        step += 1;
    }
    WalkContext {
        face,
        start: f.vertex_at(pos),
        position: pos,
        forward,
        inner_run,
        terminal: at(step),
    }
}

/// The walk rule shared by B and C: for every face, both orientations and
/// every occurrence of a `start_deg` vertex, pay `amount` from the face when
/// the run has at least `long` inner vertices, else from the terminal.
fn walk_phase(g: &Graph, s: &mut ChargeState, start_deg: usize, mid: usize, long: usize, amount: Q) {
    for fi in 0..s.faces.len() {
        for forward in [true, false] {
            for pos in 0..s.faces[fi].degree() {
                let v = s.faces[fi].vertex_at(pos);
                if g.degree(v) != start_deg {
                    continue;
                }
                let w = walk_context(g, &s.faces, fi, pos, forward, mid);
                let (from, rule) = if w.inner_run.len() >= long {
                    (Node::Face(fi), Rule::WalkFace)
                } else {
                    (Node::Vertex(w.terminal), Rule::WalkVertex)
                };
                s.apply(Transfer {
                    from,
                    to: Node::Vertex(v),
                    amount,
                    rule,
                });
            }
        }
    }
}

fn require_girth(g: &Graph, at_least: usize) -> Result<()> {
    match g.girth() {
        Some(girth) if girth < at_least => Err(Error::Precondition(format!(
            "girth {girth} is below the required {at_least}"
        ))),
        _ => Ok(()),
    }
}

pub fn discharge_b(e: &Embedding) -> Result<ChargeState> {
    let g = e.graph();
    require_girth(g, 4)?;
    let mut s = initial_charges(e, Regime::B)?;
    let before = s.total();
    walk_phase(g, &mut s, 3, 4, 3, q(1, 6));
    // second phase, on the positive boundary walk of every face
    for fi in 0..s.faces.len() {
        for pos in 0..s.faces[fi].degree() {
            let v = s.faces[fi].vertex_at(pos);
            if g.degree(v) >= 5 {
                s.apply(Transfer {
                    from: Node::Vertex(v),
                    to: Node::Face(fi),
                    amount: q(1, 18),
                    rule: Rule::CornerToFace,
                });
            }
        }
    }
    for fi in 0..s.faces.len() {
        for pos in 0..s.faces[fi].degree() {
            let v = s.faces[fi].vertex_at(pos);
            if matches!(g.degree(v), 3 | 4) {
                s.apply(Transfer {
                    from: Node::Face(fi),
                    to: Node::Vertex(v),
                    amount: q(1, 54),
                    rule: Rule::FaceToCorner,
                });
            }
        }
    }
    conserve(s, before)
}

pub fn discharge_c(e: &Embedding) -> Result<ChargeState> {
    let g = e.graph();
    require_girth(g, 6)?;
    let mut s = initial_charges(e, Regime::C)?;
    let before = s.total();
    walk_phase(g, &mut s, 2, 3, 5, q(1, 2));
    conserve(s, before)
}

pub fn discharge(e: &Embedding, regime: Regime) -> Result<ChargeState> {
    match regime {
        Regime::A => discharge_a(e),
        Regime::B => discharge_b(e),
        Regime::C => discharge_c(e),
    }
}

/// Re-checks one logged transfer against its rule's degree conditions.
pub fn transfer_is_lawful(g: &Graph, s: &ChargeState, t: &Transfer) -> bool {
    let deg = |n: Node| match n {
        Node::Vertex(v) => Some(g.degree(v)),
        Node::Face(_) => None,
    };
    let on_face = |f: usize, v: usize| s.faces.get(f).is_some_and(|face| face.walk().any(|u| u == v));
    let (start, mid) = match s.regime {
        Regime::C => (2, 3),
        _ => (3, 4),
    };
    match (t.rule, t.from, t.to) {
        (Rule::R1, Node::Vertex(a), Node::Vertex(b)) => g.has_edge(a, b) && g.degree(a) >= 7 && g.degree(b) == 5 && t.amount == q(1, 4),
        (Rule::R2, Node::Vertex(a), Node::Vertex(b)) => g.has_edge(a, b) && g.degree(a) >= 7 && g.degree(b) == 6 && t.amount == q(1, 12),
        (Rule::R3, Node::Vertex(a), Node::Vertex(b)) => g.has_edge(a, b) && g.degree(a) == 6 && g.degree(b) == 5 && t.amount == q(1, 6),
        (Rule::WalkFace, Node::Face(f), Node::Vertex(v)) => deg(t.to) == Some(start) && on_face(f, v),
        (Rule::WalkVertex, Node::Vertex(u), Node::Vertex(_)) => deg(t.to) == Some(start) && g.degree(u) != mid,
        (Rule::CornerToFace, Node::Vertex(v), Node::Face(f)) => g.degree(v) >= 5 && on_face(f, v) && t.amount == q(1, 18),
        (Rule::FaceToCorner, Node::Face(f), Node::Vertex(v)) => matches!(g.degree(v), 3 | 4) && on_face(f, v) && t.amount == q(1, 54),
        _ => false,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BelowBound {
    pub node: Node,
    pub charge: Q,
    /// An island of the regime's shape containing the element or one of
    /// its vertices or neighbors.
    pub witness: Option<IslandWitness>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsReport {
    pub regime: Regime,
    pub entries: Vec<BelowBound>,
    pub global_witness: Option<IslandWitness>,
    /// A below-bound element with no island anywhere in a graph above the
    /// threshold: the charge argument would be wrong.
    pub contradiction: bool,
}

fn vertex_bound(regime: Regime) -> Q {
    match regime {
        Regime::A => q(1, 12),
        Regime::B => q(1, 18),
        Regime::C => Q::zero(),
    }
}

fn witness_near(g: &Graph, regime: Regime, seeds: &[usize]) -> Option<IslandWitness> {
    let (k, s) = (regime.k(), regime.size());
    seeds
        .iter()
        .find_map(|&v| find_island_containing(g, k, s, v))
        .or_else(|| {
            seeds
                .iter()
                .flat_map(|&v| g.neighbors(v).iter().copied())
                .find_map(|u| find_island_containing(g, k, s, u))
        })
}

/// Elements whose final charge is below the bound the charge argument establishes,
/// each paired with a nearby island if there is one.
pub fn charge_bounds_report(s: &ChargeState, g: &Graph) -> BoundsReport {
    let regime = s.regime;
    let bound = vertex_bound(regime);
    let mut entries = Vec::new();
    for (v, &c) in s.vertex_charge.iter().enumerate() {
        if c < bound {
            entries.push(BelowBound {
                node: Node::Vertex(v),
                charge: c,
                witness: witness_near(g, regime, &[v]),
            });
        }
    }
    for (fi, &c) in s.face_charge.iter().enumerate() {
        if c.is_negative() {
            let mut seeds: Vec<usize> = s.faces[fi].walk().collect();
            seeds.sort_unstable();
            seeds.dedup();
            entries.push(BelowBound {
                node: Node::Face(fi),
                charge: c,
                witness: witness_near(g, regime, &seeds),
            });
        }
    }
    let global_witness = if entries.is_empty() {
        None
    } else {
        find_island(g, regime.k(), regime.size())
    };
    let threshold = guarantee_threshold(regime, s.chi);
    let contradiction = entries.iter().any(|e| e.witness.is_none())
        && global_witness.is_none()
        && g.n() as i64 > threshold;
    BoundsReport {
        regime,
        entries,
        global_witness,
        contradiction,
    }
}
