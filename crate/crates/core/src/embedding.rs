//! Rotation systems, face tracing and Euler characteristic.
//!
//! A rotation system gives every vertex a cyclic order of its neighbors;
//! optional edge signs (`-1`) describe non-orientable embeddings. Faces are
//! traced on states `(vertex, rotation index, local orientation)`: leaving
//! `u` along `uv` with orientation `o`, the orientation becomes `o * sign(uv)`
//! and the walk continues at `v` with the successor (orientation `+1`) or the
//! predecessor (orientation `-1`) of `u` in the rotation at `v`. Every face is
//! found twice, once per traversal direction; each mirror pair is kept once.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{content_lines, parse_graph_section, parse_numbers, Graph};

/// A cellular embedding of a graph, given as a rotation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    graph: Graph,
    rotations: Vec<Vec<usize>>,
    /// Edges (u < v) with sign -1. All others are +1.
    negative: BTreeMap<(usize, usize), ()>,
}

/// One face: its boundary walk as a cyclic sequence of darts `(u, v)`.
/// The traced direction is the face's positive orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<(usize, usize)>,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.darts.len()
    }

    /// Vertex occurrences along the positive orientation.
    pub fn walk(&self) -> impl Iterator<Item = usize> + '_ {
        self.darts.iter().map(|&(u, _)| u)
    }

    pub fn vertex_at(&self, pos: usize) -> usize {
        self.darts[pos].0
    }
}

fn edge_key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl Embedding {
    /// Checks that every rotation is a permutation of the vertex's neighbors
    /// and every signed edge exists.
    pub fn new(graph: Graph, rotations: Vec<Vec<usize>>, negative_edges: &[(usize, usize)]) -> Result<Self> {
        if rotations.len() != graph.n() {
            return Err(Error::InvalidRotation(format!(
                "{} rotations for {} vertices",
                rotations.len(),
                graph.n()
            )));
        }
        for (v, rot) in rotations.iter().enumerate() {
            let mut sorted = rot.clone();
            sorted.sort_unstable();
            if sorted != graph.neighbors(v) {
                return Err(Error::InvalidRotation(format!(
                    "rotation at {v} is not a permutation of its neighbors"
                )));
            }
        }
        let mut negative = BTreeMap::new();
        for &(u, v) in negative_edges {
            if !graph.has_edge(u, v) {
                return Err(Error::InvalidRotation(format!("signed edge {u} {v} is not an edge")));
            }
            negative.insert(edge_key(u, v), ());
        }
        Ok(Embedding {
            graph,
            rotations,
            negative,
        })
    }

    /// Builds the rotation system from oriented face boundaries in which every
    /// dart occurs exactly once: face `(.., a, b, c, ..)` means `c` follows
    /// `a` in the rotation at `b`.
    pub fn from_oriented_faces(n: usize, faces: &[Vec<usize>]) -> Result<Self> {
        let mut succ: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
        let mut edges = Vec::new();
        for face in faces {
            let d = face.len();
            for i in 0..d {
                let (a, b, c) = (face[i], face[(i + 1) % d], face[(i + 2) % d]);
                if succ[b].insert(a, c).is_some() {
                    return Err(Error::InvalidRotation(format!("dart {a}->{b} occurs twice")));
                }
                edges.push((a, b));
            }
        }
        let graph = Graph::from_edges(n, edges)?;
        let mut rotations = Vec::with_capacity(n);
        for v in 0..n {
            let Some(&start) = graph.neighbors(v).first() else {
                rotations.push(Vec::new());
                continue;
            };
            let mut rot = vec![start];
            let mut cur = start;
            loop {
                cur = *succ[v].get(&cur).ok_or_else(|| {
                    Error::InvalidRotation(format!("no successor of {cur} at {v}"))
                })?;
                if cur == start {
                    break;
                }
                rot.push(cur);
                if rot.len() > graph.degree(v) {
                    return Err(Error::InvalidRotation(format!("rotation at {v} does not close")));
                }
            }
            rotations.push(rot);
        }
        Embedding::new(graph, rotations, &[])
    }

    /// Rotation system of a straight-line drawing: neighbors sorted
    /// counterclockwise by angle. Planar iff the drawing has no crossings.
    pub fn from_positions(graph: Graph, positions: &[(f64, f64)]) -> Result<Self> {
        let rotations = (0..graph.n())
            .map(|v| {
                let (x, y) = positions[v];
                let mut rot = graph.neighbors(v).to_vec();
                rot.sort_by(|&a, &b| {
                    let ta = (positions[a].1 - y).atan2(positions[a].0 - x);
                    let tb = (positions[b].1 - y).atan2(positions[b].0 - x);
                    ta.total_cmp(&tb)
                });
                rot
            })
            .collect();
        Embedding::new(graph, rotations, &[])
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotations[v]
    }

    pub fn sign(&self, u: usize, v: usize) -> i8 {
        if self.negative.contains_key(&edge_key(u, v)) {
            -1
        } else {
            1
        }
    }

    pub fn is_orientable_signs(&self) -> bool {
        self.negative.is_empty()
    }

    /// Boundary walks of all faces, in order of their first state.
    pub fn trace_faces(&self) -> Result<Vec<Face>> {
        let n = self.graph.n();
        // position of each neighbor inside the rotation
        let index: Vec<BTreeMap<usize, usize>> = self
            .rotations
            .iter()
            .map(|rot| rot.iter().enumerate().map(|(i, &u)| (u, i)).collect())
            .collect();
        let mut offset = vec![0; n + 1];
        for v in 0..n {
            offset[v + 1] = offset[v] + self.rotations[v].len();
        }
        let state_id = |v: usize, i: usize, o: i8| 2 * (offset[v] + i) + usize::from(o < 0);
        let mut visited = vec![false; 2 * offset[n]];
        let mut faces = Vec::new();

        for v in 0..n {
            for i in 0..self.rotations[v].len() {
                for o in [1i8, -1] {
                    if visited[state_id(v, i, o)] {
                        continue;
                    }
                    let mut darts = Vec::new();
                    let (mut cv, mut ci, mut co) = (v, i, o);
                    loop {
                        let sid = state_id(cv, ci, co);
                        if visited[sid] {
                            if (cv, ci, co) != (v, i, o) {
                                return Err(Error::InvalidRotation(
                                    "face tracing revisited a state".into(),
                                ));
                            }
                            break;
                        }
                        visited[sid] = true;
                        let w = self.rotations[cv][ci];
                        let no = co * self.sign(cv, w);
                        let j = index[w][&cv];
                        // the mirror state traverses the same side from w back to cv
                        let mirror = state_id(w, j, -no);
                        if visited[mirror] && mirror != sid {
                            return Err(Error::InvalidRotation(
                                "face orbit meets its own mirror".into(),
                            ));
                        }
                        visited[mirror] = true;
                        darts.push((cv, w));
                        let d = self.rotations[w].len();
                        let nj = if no > 0 { (j + 1) % d } else { (j + d - 1) % d };
                        (cv, ci, co) = (w, nj, no);
                    }
                    faces.push(Face { darts });
                }
            }
        }
        let total: usize = faces.iter().map(Face::degree).sum();
        if total != 2 * self.graph.num_edges() {
            return Err(Error::InvalidRotation(format!(
                "face degrees sum to {total}, expected {}",
                2 * self.graph.num_edges()
            )));
        }
        Ok(faces)
    }

    /// `|V| - |E| + |F|` for a connected graph.
    pub fn euler_characteristic(&self) -> Result<i64> {
        if !self.graph.is_connected() {
            return Err(Error::Disconnected);
        }
        let f = if self.graph.n() == 1 {
            1
        } else {
            self.trace_faces()?.len()
        };
        Ok(self.graph.n() as i64 - self.graph.num_edges() as i64 + f as i64)
    }

    /// Euler characteristic of every connected component, in the order of
    /// [`Graph::components`]. An isolated vertex counts as a sphere.
    pub fn component_euler_characteristics(&self) -> Result<Vec<i64>> {
        let comps = self.graph.components();
        let mut which = vec![0; self.graph.n()];
        for (c, vs) in comps.iter().enumerate() {
            for &v in vs {
                which[v] = c;
            }
        }
        let mut chi: Vec<i64> = comps.iter().map(|vs| vs.len() as i64).collect();
        for (u, _) in self.graph.edges() {
            chi[which[u]] -= 1;
        }
        let mut has_face = vec![false; comps.len()];
        for f in self.trace_faces()? {
            let c = which[f.darts[0].0];
            chi[c] += 1;
            has_face[c] = true;
        }
        for (c, seen) in has_face.into_iter().enumerate() {
            if !seen {
                chi[c] += 1;
            }
        }
        Ok(chi)
    }

    pub fn to_text(&self) -> String {
        self.to_text_with_terminals(&BTreeMap::new())
    }

    pub fn to_text_with_terminals(&self, terminals: &BTreeMap<String, usize>) -> String {
        let mut out = self.graph.to_text_with_terminals(terminals);
        for (v, rot) in self.rotations.iter().enumerate() {
            write!(out, "{v}:").unwrap();
            for u in rot {
                write!(out, " {u}").unwrap();
            }
            out.push('\n');
        }
        if !self.negative.is_empty() {
            out.push_str("signs:\n");
            for &(u, v) in self.negative.keys() {
                writeln!(out, "{u} {v} -1").unwrap();
            }
        }
        out
    }
}

/// Does the file carry rotation lines after the graph section?
pub fn has_rotations(text: &str) -> bool {
    content_lines(text).any(|(_, l)| l.contains(':') && !l.starts_with("signs"))
}

/// Parses an embedding file: the graph section, one line `v: a b c ...` per
/// vertex, then an optional `signs:` section of `u v -1` lines.
pub fn parse_embedding(text: &str) -> Result<Embedding> {
    let mut lines = content_lines(text).peekable();
    let graph = parse_graph_section(&mut lines)?;
    let n = graph.n();
    let mut rotations: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut negative = Vec::new();
    let mut in_signs = false;
    for (line, text) in lines {
        if text == "signs:" {
            in_signs = true;
            continue;
        }
        if in_signs {
            let parts: Vec<&str> = text.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse {
                    line,
                    msg: "expected \"u v -1\"".into(),
                });
            }
            let [u, v] = parse_numbers::<2>(line, &parts[..2].join(" "))?;
            match parts[2] {
                "-1" | "−1" => negative.push((u, v)),
                "1" | "+1" => {}
                other => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("sign must be +1 or -1, got {other:?}"),
                    })
                }
            }
            continue;
        }
        let (head, rest) = text.split_once(':').ok_or(Error::Parse {
            line,
            msg: "expected rotation line \"v: a b c ...\"".into(),
        })?;
        let [v] = parse_numbers::<1>(line, head)?;
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        let rot = rest
            .split_whitespace()
            .map(|p| {
                p.parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("not a vertex id: {p:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rotations[v] = Some(rot);
    }
    let rotations = rotations
        .into_iter()
        .enumerate()
        .map(|(v, r)| match r {
            Some(r) => Ok(r),
            None if graph.degree(v) == 0 => Ok(Vec::new()),
            None => Err(Error::InvalidRotation(format!("missing rotation for vertex {v}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Embedding::new(graph, rotations, &negative)
}
