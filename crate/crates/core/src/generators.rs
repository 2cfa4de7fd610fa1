//! Seeded instance generators for the three graph classes and for
//! 3-uniform hypergraphs, with the class predicate re-checked on output.
//!
//! The face-insertion triangulations and quadrangulations cover only a
//! subfamily of planar graphs; they are test instances, not uniform samples.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::gadgets::Hypergraph3;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GenSpec {
    Triangulation { n: usize, seed: u64 },
    Quadrangulation { n: usize, seed: u64 },
    HexPatch { rows: usize, cols: usize, deletions: usize, seed: u64 },
    HexTorus { rows: usize, cols: usize },
    TriangulatedTorus { rows: usize, cols: usize },
    Hypergraph3 { n: usize, m: usize, seed: u64 },
    /// Fixed solids.
    K4,
    Icosahedron,
    Cube,
}

#[derive(Debug, Clone)]
pub enum Generated {
    Embedding(Embedding),
    Hypergraph(Hypergraph3),
}

impl Generated {
    pub fn to_text(&self) -> String {
        match self {
            Generated::Embedding(e) => e.to_text(),
            Generated::Hypergraph(h) => h.to_text(),
        }
    }
}

pub fn gen(spec: &GenSpec) -> Result<Generated> {
    Ok(match *spec {
        GenSpec::Triangulation { n, seed } => Generated::Embedding(triangulation(n, seed)?),
        GenSpec::Quadrangulation { n, seed } => Generated::Embedding(quadrangulation(n, seed)?),
        GenSpec::HexPatch {
            rows,
            cols,
            deletions,
            seed,
        } => Generated::Embedding(hex_patch(rows, cols, deletions, seed)?),
        GenSpec::HexTorus { rows, cols } => Generated::Embedding(hex_torus(rows, cols)?),
        GenSpec::TriangulatedTorus { rows, cols } => {
            Generated::Embedding(triangulated_torus(rows, cols)?)
        }
        GenSpec::Hypergraph3 { n, m, seed } => Generated::Hypergraph(hypergraph3(n, m, seed)?),
        GenSpec::K4 => Generated::Embedding(k4()),
        GenSpec::Icosahedron => Generated::Embedding(icosahedron()),
        GenSpec::Cube => Generated::Embedding(cube()),
    })
}

fn class_check(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("generated instance failed its class check: {}", what())))
    }
}

/// Planar embedding of K4 as four oriented triangles.
pub fn k4() -> Embedding {
    Embedding::from_oriented_faces(4, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]])
        .expect("K4 faces are consistent")
}

pub fn icosahedron() -> Embedding {
    let up = |i: usize| 1 + i % 5;
    let low = |i: usize| 6 + i % 5;
    let mut faces = Vec::new();
    for i in 0..5 {
        faces.push(vec![0, up(i), up(i + 1)]);
        faces.push(vec![up(i + 1), up(i), low(i)]);
        faces.push(vec![up(i + 1), low(i), low(i + 1)]);
        faces.push(vec![low(i + 1), low(i), 11]);
    }
    Embedding::from_oriented_faces(12, &faces).expect("icosahedron faces are consistent")
}

/// Planar cube graph `Q3`.
pub fn cube() -> Embedding {
    // outer square 0..4 counterclockwise, inner square 4..8
    let faces = vec![
        vec![0, 3, 2, 1],
        vec![4, 5, 6, 7],
        vec![0, 1, 5, 4],
        vec![1, 2, 6, 5],
        vec![2, 3, 7, 6],
        vec![3, 0, 4, 7],
    ];
    Embedding::from_oriented_faces(8, &faces).expect("cube faces are consistent")
}

/// Cycle `C_n` drawn in the plane.
pub fn cycle_embedding(n: usize) -> Embedding {
    let g = Graph::cycle(n);
    let rot = (0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect();
    Embedding::new(g, rot, &[]).expect("cycle rotation is valid")
}

/// Maximal planar graph: start from K4 and repeatedly put a new vertex in a
/// uniformly chosen face, joined to its three corners.
pub fn triangulation(n: usize, seed: u64) -> Result<Embedding> {
    if n < 4 {
        return Err(Error::Parameter(format!("triangulation needs n >= 4, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];
    for w in 4..n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[i];
        faces[i] = [a, b, w];
        faces.push([b, c, w]);
        faces.push([c, a, w]);
    }
    let faces: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
    let e = Embedding::from_oriented_faces(n, &faces)?;
    let traced = e.trace_faces()?;
    class_check(
        e.euler_characteristic()? == 2
            && traced.iter().all(|f| f.degree() == 3)
            && e.graph().num_edges() == 3 * n - 6,
        || "triangulation is not maximal planar".into(),
    )?;
    Ok(e)
}

/// Planar quadrangulation: start from a 4-cycle and repeatedly put a new
/// vertex in a uniformly chosen face, joined to two opposite corners.
pub fn quadrangulation(n: usize, seed: u64) -> Result<Embedding> {
    if n < 4 {
        return Err(Error::Parameter(format!("quadrangulation needs n >= 4, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut faces: Vec<[usize; 4]> = vec![[0, 1, 2, 3], [0, 3, 2, 1]];
    for w in 4..n {
        let i = rng.gen_range(0..faces.len());
        let mut f = faces[i];
        if rng.gen_bool(0.5) {
            f.rotate_left(1);
        }
        let [a, b, c, d] = f;
        faces[i] = [a, b, c, w];
        faces.push([a, w, c, d]);
    }
    let faces: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
    let e = Embedding::from_oriented_faces(n, &faces)?;
    class_check(
        e.euler_characteristic()? == 2 && e.graph().is_bipartite() && e.graph().girth() == Some(4),
        || "quadrangulation is not a bipartite planar graph".into(),
    )?;
    Ok(e)
}

/// A `rows x cols` patch of hexagons drawn as a brick wall, with up to
/// `deletions` random vertex deletions that keep the patch connected.
pub fn hex_patch(rows: usize, cols: usize, deletions: usize, seed: u64) -> Result<Embedding> {
    if rows < 1 || cols < 1 {
        return Err(Error::Parameter("hex patch needs rows, cols >= 1".into()));
    }
    let (grid_rows, grid_cols) = (rows + 1, 2 * cols + 2);
    let id = |r: usize, c: usize| r * grid_cols + c;
    let mut keep = vec![false; grid_rows * grid_cols];
    // brick-wall hexagon with lower-left corner (r, c), r + c even
    for r in 0..rows {
        for j in 0..cols {
            let c = r % 2 + 2 * j;
            for dc in 0..3 {
                keep[id(r, c + dc)] = true;
                keep[id(r + 1, c + dc)] = true;
            }
        }
    }
    let mut edges = Vec::new();
    for r in 0..grid_rows {
        for c in 0..grid_cols {
            if !keep[id(r, c)] {
                continue;
            }
            if c + 1 < grid_cols && keep[id(r, c + 1)] {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if (r + c) % 2 == 0 && r + 1 < grid_rows && keep[id(r + 1, c)] {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    let full = Graph::from_edges(grid_rows * grid_cols, edges)?;
    let mut alive: Vec<bool> = keep.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<usize> = (0..alive.len()).filter(|&v| alive[v]).collect();
    candidates.shuffle(&mut rng);
    let mut done = 0;
    for v in candidates {
        if done == deletions {
            break;
        }
        alive[v] = false;
        let comps = full.components_within(&alive);
        let alive_count = alive.iter().filter(|&&a| a).count();
        if comps.len() != 1 || alive_count < 6 {
            alive[v] = true;
            continue;
        }
        let kept: Vec<usize> = (0..alive.len()).filter(|&u| alive[u]).collect();
        if full.induced(&kept).0.girth().is_some_and(|g| g < 6) {
            alive[v] = true;
            continue;
        }
        done += 1;
    }
    let kept: Vec<usize> = (0..alive.len()).filter(|&u| alive[u]).collect();
    let (g, old) = full.induced(&kept);
    let positions: Vec<(f64, f64)> = old
        .iter()
        .map(|&v| ((v % grid_cols) as f64, (v / grid_cols) as f64))
        .collect();
    let e = Embedding::from_positions(g, &positions)?;
    class_check(
        e.graph().is_connected()
            && e.euler_characteristic()? == 2
            && e.graph().girth().is_none_or(|g| g >= 6),
        || "hex patch lost planarity, connectivity or girth 6".into(),
    )?;
    Ok(e)
}

/// Honeycomb on the torus: `rows x cols` cells, sublattices `A(i,j)` and
/// `B(i,j)`, edges `A(i,j)B(i,j)`, `A(i,j)B(i-1,j)`, `A(i,j)B(i,j-1)`.
/// Cubic, `2 rows cols` vertices, every face a hexagon.
pub fn hex_torus(rows: usize, cols: usize) -> Result<Embedding> {
    if rows < 3 || cols < 3 {
        return Err(Error::Parameter(format!(
            "hex torus needs rows, cols >= 3, got {rows}x{cols}"
        )));
    }
    let a = |i: usize, j: usize| 2 * ((i % rows) * cols + j % cols);
    let b = |i: usize, j: usize| a(i, j) + 1;
    let n = 2 * rows * cols;
    let mut edges = Vec::new();
    let mut rotations = vec![Vec::new(); n];
    for i in 0..rows {
        for j in 0..cols {
            let (im, jm) = (i + rows - 1, j + cols - 1);
            edges.push((a(i, j), b(i, j)));
            edges.push((a(i, j), b(im, j)));
            edges.push((a(i, j), b(i, jm)));
            rotations[a(i, j)] = vec![b(i, j), b(im, j), b(i, jm)];
            rotations[b(i, j)] = vec![a(i + 1, j), a(i, j + 1), a(i, j)];
        }
    }
    let g = Graph::from_edges(n, edges)?;
    class_check(g.num_edges() == 3 * rows * cols, || "wrap too tight: parallel edges".into())?;
    let e = Embedding::new(g, rotations, &[])?;
    class_check(
        e.euler_characteristic()? == 0
            && (0..n).all(|v| e.graph().degree(v) == 3)
            && e.graph().girth() == Some(6),
        || format!("hex torus {rows}x{cols} is not a cubic girth-6 torus graph"),
    )?;
    Ok(e)
}

/// Triangular lattice on the torus; 6-regular, `rows cols` vertices.
pub fn triangulated_torus(rows: usize, cols: usize) -> Result<Embedding> {
    if rows < 3 || cols < 3 {
        return Err(Error::Parameter(format!(
            "triangulated torus needs rows, cols >= 3, got {rows}x{cols}"
        )));
    }
    let id = |i: usize, j: usize| (i % rows) * cols + j % cols;
    let n = rows * cols;
    let mut edges = Vec::new();
    let mut rotations = vec![Vec::new(); n];
    for i in 0..rows {
        for j in 0..cols {
            let (ip, jp, im, jm) = (i + 1, j + 1, i + rows - 1, j + cols - 1);
            let rot = vec![id(ip, j), id(i, jp), id(im, jp), id(im, j), id(i, jm), id(ip, jm)];
            for &u in &rot {
                edges.push((id(i, j), u));
            }
            rotations[id(i, j)] = rot;
        }
    }
    let g = Graph::from_edges(n, edges)?;
    class_check(g.num_edges() == 3 * n, || "wrap too tight: parallel edges".into())?;
    let e = Embedding::new(g, rotations, &[])?;
    let faces = e.trace_faces()?;
    class_check(
        e.euler_characteristic()? == 0 && faces.iter().all(|f| f.degree() == 3),
        || "triangulated torus is not a torus triangulation".into(),
    )?;
    Ok(e)
}

/// `m` uniformly random triples of distinct vertices.
pub fn hypergraph3(n: usize, m: usize, seed: u64) -> Result<Hypergraph3> {
    if n < 3 {
        return Err(Error::Parameter(format!("hypergraph needs n >= 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices: Vec<usize> = (0..n).collect();
    let edges = (0..m)
        .map(|_| {
            let pick: Vec<usize> = vertices.choose_multiple(&mut rng, 3).copied().collect();
            [pick[0], pick[1], pick[2]]
        })
        .collect();
    Hypergraph3::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_solids() {
        let ico = icosahedron();
        assert!((0..12).all(|v| ico.graph().degree(v) == 5));
        assert_eq!(ico.euler_characteristic().unwrap(), 2);
        let q3 = cube();
        assert!((0..8).all(|v| q3.graph().degree(v) == 3));
        assert_eq!(q3.euler_characteristic().unwrap(), 2);
        assert_eq!(k4().euler_characteristic().unwrap(), 2);
    }

    #[test]
    fn triangulation_counts() {
        let e = triangulation(12, 7).unwrap();
        assert_eq!(e.graph().num_edges(), 30);
        let faces = e.trace_faces().unwrap();
        assert_eq!(faces.len(), 2 * 12 - 4);
        assert!(faces.iter().all(|f| f.degree() == 3));
    }

    #[test]
    fn quadrangulation_class() {
        let e = quadrangulation(20, 1).unwrap();
        let g = e.graph();
        assert!(g.is_bipartite());
        assert!(g.girth().unwrap() >= 4);
        assert_eq!(e.euler_characteristic().unwrap(), 2);
        assert_eq!(g.num_edges(), 2 * 20 - 4);
    }

    #[test]
    fn hex_torus_counts() {
        let e = hex_torus(4, 4).unwrap();
        assert_eq!(e.graph().n(), 32);
        assert_eq!(e.graph().num_edges(), 48);
        let faces = e.trace_faces().unwrap();
        assert!(faces.iter().all(|f| f.degree() == 6));
        assert_eq!(faces.len(), 48 * 2 / 6);
        assert_eq!(e.euler_characteristic().unwrap(), 0);
        assert_eq!(e.graph().girth(), Some(6));
    }

    #[test]
    fn hex_torus_rejects_tight_wrap() {
        assert!(hex_torus(2, 5).is_err());
    }

    #[test]
    fn hex_patch_class_and_determinism() {
        let e = hex_patch(4, 5, 6, 3).unwrap();
        assert_eq!(e.euler_characteristic().unwrap(), 2);
        assert!(e.graph().girth().unwrap() >= 6);
        assert!(e.graph().max_degree() <= 3);
        assert_eq!(e.to_text(), hex_patch(4, 5, 6, 3).unwrap().to_text());
        let plain = hex_patch(1, 1, 0, 0).unwrap();
        assert_eq!(plain.graph().n(), 6);
        assert_eq!(plain.graph().girth(), Some(6));
    }

    #[test]
    fn triangulated_torus_class() {
        let e = triangulated_torus(4, 5).unwrap();
        assert!((0..20).all(|v| e.graph().degree(v) == 6));
        assert_eq!(e.trace_faces().unwrap().len(), 40);
    }

    #[test]
    fn seed_determinism() {
        let spec = GenSpec::Triangulation { n: 40, seed: 11 };
        assert_eq!(gen(&spec).unwrap().to_text(), gen(&spec).unwrap().to_text());
        let h = GenSpec::Hypergraph3 { n: 9, m: 5, seed: 2 };
        assert_eq!(gen(&h).unwrap().to_text(), gen(&h).unwrap().to_text());
    }

    #[test]
    fn parameter_errors() {
        assert!(triangulation(3, 0).is_err());
        assert!(quadrangulation(2, 0).is_err());
        assert!(triangulated_torus(2, 4).is_err());
        assert!(hypergraph3(2, 1, 0).is_err());
    }
}
