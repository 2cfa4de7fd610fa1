//! Straight-line drawings with two-terminal gadget links.
//!
//! A link between `a` and `b` is expanded into a gadget copy drawn inside a
//! thin rhombus around the segment `ab`: its internal vertices sit on the
//! perpendicular bisector, so the copy is planar and stays clear of the other
//! segments at `a` and `b`. The rotation system comes from sorting by angle
//! and the result is accepted only if face tracing gives χ = 2.

use std::f64::consts::PI;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Point = (f64, f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinkKind {
    /// Path gadget forcing distinct colors.
    Distinct,
    /// Complete-bipartite gadget forcing equal colors.
    Equal,
    /// Two leaf-glued trees forcing equal colors with girth 8; not drawable.
    Junction,
}

impl LinkKind {
    /// Internal vertex count of one copy at parameter `k`.
    pub fn internal_count(self, k: usize) -> usize {
        match self {
            LinkKind::Distinct => 3 * k.pow(4),
            LinkKind::Equal => 2 * k * (k - 1) - 1,
            LinkKind::Junction => 2 * (1 + 5 * k + 25 * k * k) + 125 * k.pow(3) - 2,
        }
    }
}

/// One expanded link: terminals `y`, `z` and its internal vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetCopy {
    pub kind: LinkKind,
    pub y: usize,
    pub z: usize,
    pub internal: Range<usize>,
}

/// Affine placement of a local coordinate frame.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub origin: Point,
    pub ex: Point,
    pub ey: Point,
}

impl Frame {
    pub const IDENTITY: Frame = Frame {
        origin: (0.0, 0.0),
        ex: (1.0, 0.0),
        ey: (0.0, 1.0),
    };

    pub fn map(&self, (a, b): Point) -> Point {
        (
            self.origin.0 + a * self.ex.0 + b * self.ey.0,
            self.origin.1 + a * self.ex.1 + b * self.ey.1,
        )
    }
}

#[derive(Debug, Clone)]
pub struct Drawing {
    k: usize,
    pos: Vec<Point>,
    edges: Vec<(usize, usize)>,
    links: Vec<(LinkKind, usize, usize)>,
    max_rel: f64,
}

#[derive(Debug, Clone)]
pub struct BuiltDrawing {
    pub embedding: Embedding,
    pub positions: Vec<Point>,
    pub copies: Vec<GadgetCopy>,
}

impl Drawing {
    pub fn new(k: usize) -> Self {
        Drawing {
            k,
            pos: Vec::new(),
            edges: Vec::new(),
            links: Vec::new(),
            max_rel: 0.1,
        }
    }

    /// Caps each lens half-width at `rel` times the link length.
    pub fn set_max_width(&mut self, rel: f64) {
        self.max_rel = rel;
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    pub fn add_vertex(&mut self, p: Point) -> usize {
        self.pos.push(p);
        self.pos.len() - 1
    }

    pub fn position(&self, v: usize) -> Point {
        self.pos[v]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    /// Link with `y = u`, `z = v`; for [`LinkKind::Distinct`], `y` is joined
    /// to the even-indexed path vertices and `z` to the odd ones.
    pub fn add_link(&mut self, kind: LinkKind, u: usize, v: usize) {
        self.links.push((kind, u, v));
    }

    /// Smallest angle between the direction `from -> to` and any other
    /// segment leaving `from`.
    fn gap(&self, out: &[Vec<f64>], from: usize, to: usize) -> f64 {
        let a = angle(self.pos[from], self.pos[to]);
        let mut best = 2.0 * PI;
        let mut seen_self = false;
        for &b in &out[from] {
            let d = (a - b).abs();
            let d = d.min(2.0 * PI - d);
            if d == 0.0 && !seen_self {
                seen_self = true;
                continue;
            }
            best = best.min(d);
        }
        best
    }

    pub fn build(&self) -> Result<BuiltDrawing> {
        let mut out = vec![Vec::new(); self.n()];
        let segments = self.edges.iter().copied().chain(self.links.iter().map(|&(_, u, v)| (u, v)));
        for (u, v) in segments
        {
            out[u].push(angle(self.pos[u], self.pos[v]));
            out[v].push(angle(self.pos[v], self.pos[u]));
        }
        let mut positions = self.pos.clone();
        let mut edges = self.edges.clone();
        let mut copies = Vec::with_capacity(self.links.len());
        for &(kind, y, z) in &self.links {
            let (py, pz) = (self.pos[y], self.pos[z]);
            let len = ((pz.0 - py.0).powi(2) + (pz.1 - py.1).powi(2)).sqrt();
            if len == 0.0 {
                return Err(Error::Precondition(format!("link {y}-{z} has zero length")));
            }
            let delta = self.gap(&out, y, z).min(self.gap(&out, z, y));
            let rel = (0.9 * (delta / 4.0).tan() / 2.0).min(self.max_rel);
            let half = rel * len;
            let mid = ((py.0 + pz.0) / 2.0, (py.1 + pz.1) / 2.0);
            let normal = (-(pz.1 - py.1) / len, (pz.0 - py.0) / len);
            if kind == LinkKind::Junction {
                return Err(Error::Precondition("junction links have no drawing".into()));
            }
            let count = kind.internal_count(self.k);
            let first = positions.len();
            for i in 1..=count {
                let t = half * (-1.0 + 2.0 * i as f64 / (count + 1) as f64);
                positions.push((mid.0 + t * normal.0, mid.1 + t * normal.1));
            }
            let internal = first..first + count;
            match kind {
                LinkKind::Equal | LinkKind::Junction => {
                    for w in internal.clone() {
                        edges.push((y, w));
                        edges.push((z, w));
                    }
                }
                LinkKind::Distinct => {
                    for (i, w) in internal.clone().enumerate() {
                        edges.push((if (i + 1) % 2 == 0 { y } else { z }, w));
                        if i > 0 {
                            edges.push((w - 1, w));
                        }
                    }
                }
            }
            copies.push(GadgetCopy { kind, y, z, internal });
        }
        let graph = Graph::from_edges(positions.len(), edges)?;
        let embedding = Embedding::from_positions(graph, &positions)?;
        if let Some(chi) = embedding.component_euler_characteristics()?.into_iter().find(|&c| c != 2) {
            return Err(Error::Precondition(format!(
                "drawing is not plane: a component has traced Euler characteristic {chi}"
            )));
        }
        Ok(BuiltDrawing {
            embedding,
            positions,
            copies,
        })
    }
}

fn angle(from: Point, to: Point) -> f64 {
    (to.1 - from.1).atan2(to.0 - from.0)
}
