//! The square-octagon (4.8.8) 2-colex on a torus and its inflation into the
//! subsystem-code hypergraph.
//!
//! The torus has `L = d / 2` unit cells per side. Cell `(r, c)` holds one
//! square centred at `(c + 1/2, r + 1/2)` with corners W, N, E, S (site
//! indices 0..4) and one octagon centred at `(c, r)`. Squares are green;
//! octagons are red on even `r + c` and blue on odd, which needs `L` even,
//! hence `d` a multiple of 4.
//!
//! Inflation replaces colex vertex `v` by a triangle whose corner of color
//! `c` is qubit `3 v + c`. The flattened index therefore runs over
//! (cell row, cell column, site, color) in row-major order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Face color, which doubles as the stack label of a qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    #[inline]
    pub fn idx(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_idx(i: usize) -> Color {
        Color::ALL[i]
    }

    /// Cyclic successor r → g → b → r.
    #[inline]
    pub fn next(self) -> Color {
        Color::from_idx((self.idx() + 1) % 3)
    }

    #[inline]
    pub fn prev(self) -> Color {
        Color::from_idx((self.idx() + 2) % 3)
    }

    /// The color distinct from both arguments, which must differ.
    pub fn third(a: Color, b: Color) -> Color {
        debug_assert_ne!(a, b);
        Color::from_idx(3 - a.idx() - b.idx())
    }

    pub fn letter(self) -> char {
        match self {
            Color::Red => 'r',
            Color::Green => 'g',
            Color::Blue => 'b',
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Square,
    Octagon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColexEdge {
    pub u: usize,
    pub v: usize,
    /// Color shared by the faces at the two ends; absent from `faces`.
    pub color: Color,
    pub faces: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColexFace {
    pub color: Color,
    pub shape: Shape,
    pub cell: (usize, usize),
    /// Boundary vertices in cyclic order.
    pub vertices: Vec<usize>,
    /// `edges[i]` joins `vertices[i]` and `vertices[i + 1]` (cyclically).
    pub edges: Vec<usize>,
}

/// Periodic square-octagon 2-colex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colex {
    pub d: usize,
    pub cells_per_side: usize,
    pub num_vertices: usize,
    pub edges: Vec<ColexEdge>,
    pub faces: Vec<ColexFace>,
    pub vertex_edges: Vec<[usize; 3]>,
    /// `vertex_faces[v][c]` is the face of color `c` at `v`.
    pub vertex_faces: Vec<[usize; 3]>,
}

const W: usize = 0;
const N: usize = 1;
const E: usize = 2;
const S: usize = 3;

pub fn check_distance(d: usize) -> Result<()> {
    if d == 0 || d % 4 != 0 {
        return Err(Error::InvalidDistance(d));
    }
    Ok(())
}

impl Colex {
    pub fn cell_index(&self, r: isize, c: isize) -> usize {
        let l = self.cells_per_side as isize;
        (r.rem_euclid(l) * l + c.rem_euclid(l)) as usize
    }

    pub fn faces_of_color(&self, color: Color) -> impl Iterator<Item = usize> + '_ {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.color == color)
            .map(|(i, _)| i)
    }

    /// Index of the vertex, edge or face obtained by shifting cell coordinates.
    pub fn translate_vertex(&self, v: usize, dr: isize, dc: isize) -> usize {
        let l = self.cells_per_side;
        let cell = v / 4;
        self.cell_index((cell / l) as isize + dr, (cell % l) as isize + dc) * 4 + v % 4
    }

    pub fn translate_face(&self, f: usize, dr: isize, dc: isize) -> usize {
        let l = self.cells_per_side;
        let cell = f / 2;
        self.cell_index((cell / l) as isize + dr, (cell % l) as isize + dc) * 2 + f % 2
    }
}

/// Builds the torus 4.8.8 lattice of distance `d`.
pub fn build_colex(d: usize) -> Result<Colex> {
    check_distance(d)?;
    let l = d / 2;
    let cells = l * l;
    let num_vertices = 4 * cells;
    let li = l as isize;
    let cell = |r: isize, c: isize| (r.rem_euclid(li) * li + c.rem_euclid(li)) as usize;
    let vtx = |r: isize, c: isize, k: usize| cell(r, c) * 4 + k;

    let mut pairs = Vec::with_capacity(6 * cells);
    for r in 0..li {
        for c in 0..li {
            pairs.push((vtx(r, c, W), vtx(r, c, N)));
            pairs.push((vtx(r, c, N), vtx(r, c, E)));
            pairs.push((vtx(r, c, E), vtx(r, c, S)));
            pairs.push((vtx(r, c, S), vtx(r, c, W)));
            pairs.push((vtx(r, c, E), vtx(r, c + 1, W)));
            pairs.push((vtx(r, c, N), vtx(r + 1, c, S)));
        }
    }
    let mut edge_of = std::collections::HashMap::with_capacity(pairs.len());
    for (i, &(a, b)) in pairs.iter().enumerate() {
        if edge_of.insert((a.min(b), a.max(b)), i).is_some() {
            return Err(Error::Lattice(format!("duplicate edge {a}-{b}")));
        }
    }

    let mut faces = Vec::with_capacity(2 * cells);
    for r in 0..li {
        for c in 0..li {
            let square = vec![vtx(r, c, W), vtx(r, c, N), vtx(r, c, E), vtx(r, c, S)];
            let octagon = vec![
                vtx(r - 1, c, N),
                vtx(r, c, S),
                vtx(r, c, W),
                vtx(r, c - 1, E),
                vtx(r, c - 1, S),
                vtx(r - 1, c - 1, N),
                vtx(r - 1, c - 1, E),
                vtx(r - 1, c, W),
            ];
            let oct_color = if (r + c) % 2 == 0 { Color::Red } else { Color::Blue };
            let at = (r as usize, c as usize);
            for (shape, color, vertices) in [
                (Shape::Square, Color::Green, square),
                (Shape::Octagon, oct_color, octagon),
            ] {
                let m = vertices.len();
                let edges = (0..m)
                    .map(|i| {
                        let (a, b) = (vertices[i], vertices[(i + 1) % m]);
                        edge_of
                            .get(&(a.min(b), a.max(b)))
                            .copied()
                            .ok_or_else(|| Error::Lattice(format!("face boundary step {a}-{b} is not an edge")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                faces.push(ColexFace {
                    color,
                    shape,
                    cell: at,
                    vertices,
                    edges,
                });
            }
        }
    }

    let mut edge_faces: Vec<Vec<usize>> = vec![Vec::new(); pairs.len()];
    for (fi, f) in faces.iter().enumerate() {
        for &e in &f.edges {
            edge_faces[e].push(fi);
        }
    }
    let mut edges = Vec::with_capacity(pairs.len());
    for (i, &(u, v)) in pairs.iter().enumerate() {
        let fs = &edge_faces[i];
        if fs.len() != 2 || faces[fs[0]].color == faces[fs[1]].color {
            return Err(Error::Lattice(format!(
                "edge {i} must border two faces of distinct colors, found {fs:?}"
            )));
        }
        edges.push(ColexEdge {
            u,
            v,
            color: Color::third(faces[fs[0]].color, faces[fs[1]].color),
            faces: [fs[0], fs[1]],
        });
    }

    let mut vertex_edges: Vec<Vec<usize>> = vec![Vec::new(); num_vertices];
    for (i, e) in edges.iter().enumerate() {
        vertex_edges[e.u].push(i);
        vertex_edges[e.v].push(i);
    }
    let mut vertex_faces: Vec<[Option<usize>; 3]> = vec![[None; 3]; num_vertices];
    for (fi, f) in faces.iter().enumerate() {
        for &v in &f.vertices {
            let slot = &mut vertex_faces[v][f.color.idx()];
            if slot.replace(fi).is_some() {
                return Err(Error::Lattice(format!("vertex {v} has two {} faces", f.color)));
            }
        }
    }

    let colex = Colex {
        d,
        cells_per_side: l,
        num_vertices,
        edges,
        faces,
        vertex_edges: vertex_edges
            .into_iter()
            .enumerate()
            .map(|(v, es)| {
                <[usize; 3]>::try_from(es.as_slice())
                    .map_err(|_| Error::Lattice(format!("vertex {v} has degree {}", es.len())))
            })
            .collect::<Result<_>>()?,
        vertex_faces: vertex_faces
            .into_iter()
            .enumerate()
            .map(|(v, fs)| match fs {
                [Some(a), Some(b), Some(c)] => Ok([a, b, c]),
                _ => Err(Error::Lattice(format!("vertex {v} misses a face color"))),
            })
            .collect::<Result<_>>()?,
    };
    let euler = colex.num_vertices as isize - colex.edges.len() as isize + colex.faces.len() as isize;
    if euler != 0 {
        return Err(Error::Lattice(format!("Euler characteristic {euler}, expected 0")));
    }
    Ok(colex)
}

/// Two-body gauge edge flavor. Solid edges carry `YY`, dashed edges `XX`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Solid,
    Dashed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank2Edge {
    pub qubits: [usize; 2],
    pub kind: EdgeKind,
    /// The colex edge this edge was split from.
    pub colex_edge: usize,
    /// Colored face whose boundary cycle contains this edge.
    pub face: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperFace {
    pub color: Color,
    /// Corner qubits on the face, in boundary order.
    pub corners: Vec<usize>,
    /// Rank-2 boundary cycle; `sigma1[i]` joins `corners[i]` and `corners[i + 1]`.
    pub sigma1: Vec<usize>,
    /// The rank-2 edges across each boundary edge, on the neighboring faces.
    pub outer: Vec<usize>,
    /// Colex vertices whose triangles touch the face.
    pub triangles: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectFace {
    /// Corners in the order `u` side A, `v` side A, `v` side B, `u` side B.
    pub qubits: [usize; 4],
    /// Colors of the two colored faces it separates, ascending.
    pub colors: [Color; 2],
    pub colex_edge: usize,
    pub rank2: [usize; 2],
}

/// The inflated hypergraph. Face indices agree with the colex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub colex: Colex,
    pub n: usize,
    pub rank2: Vec<Rank2Edge>,
    /// One triangle per colex vertex, corners ordered r, g, b.
    pub rank3: Vec<[usize; 3]>,
    pub faces: Vec<HyperFace>,
    pub rects: Vec<RectFace>,
}

impl Hypergraph {
    #[inline]
    pub fn qubit(v: usize, color: Color) -> usize {
        3 * v + color.idx()
    }

    #[inline]
    pub fn parent_vertex(q: usize) -> usize {
        q / 3
    }

    #[inline]
    pub fn stack_of(q: usize) -> Color {
        Color::from_idx(q % 3)
    }

    pub fn d(&self) -> usize {
        self.colex.d
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// The colored face that contains qubit `q`.
    #[inline]
    pub fn face_of_qubit(&self, q: usize) -> usize {
        self.colex.vertex_faces[q / 3][q % 3]
    }

    /// The three faces meeting at the parent vertex of `q`, indexed by color.
    #[inline]
    pub fn faces_at(&self, q: usize) -> [usize; 3] {
        self.colex.vertex_faces[q / 3]
    }

    pub fn faces_of_color(&self, color: Color) -> impl Iterator<Item = usize> + '_ {
        self.colex.faces_of_color(color)
    }

    /// Index of the rectangle set `F_{ab}`, with `a < b`.
    pub fn rects_between(&self, a: Color, b: Color) -> impl Iterator<Item = usize> + '_ {
        let want = if a < b { [a, b] } else { [b, a] };
        self.rects
            .iter()
            .enumerate()
            .filter(move |(_, r)| r.colors == want)
            .map(|(i, _)| i)
    }
}

/// Splits each colex vertex into a triangle and each colex edge into a
/// solid/dashed pair.
///
/// The pair's two sides sit on the two faces the colex edge borders. The side
/// lying on the face of color `edge.color.next()` is solid; the other is
/// dashed. Around every triangle this leaves each corner with exactly one
/// solid and one dashed edge, so the two kinds alternate.
pub fn inflate(colex: &Colex) -> Hypergraph {
    let n = 3 * colex.num_vertices;
    let q = Hypergraph::qubit;

    let mut rank2 = Vec::with_capacity(2 * colex.edges.len());
    let mut rects = Vec::with_capacity(colex.edges.len());
    for (ei, e) in colex.edges.iter().enumerate() {
        for &f in &e.faces {
            let side = colex.faces[f].color;
            let kind = if side == e.color.next() {
                EdgeKind::Solid
            } else {
                EdgeKind::Dashed
            };
            rank2.push(Rank2Edge {
                qubits: [q(e.u, side), q(e.v, side)],
                kind,
                colex_edge: ei,
                face: f,
            });
        }
        let (ca, cb) = (colex.faces[e.faces[0]].color, colex.faces[e.faces[1]].color);
        let colors = if ca < cb { [ca, cb] } else { [cb, ca] };
        rects.push(RectFace {
            qubits: [q(e.u, ca), q(e.v, ca), q(e.v, cb), q(e.u, cb)],
            colors,
            colex_edge: ei,
            rank2: [2 * ei, 2 * ei + 1],
        });
    }

    let rank2_on = |ei: usize, f: usize| {
        let side = if colex.edges[ei].faces[0] == f { 0 } else { 1 };
        2 * ei + side
    };
    let faces = colex
        .faces
        .iter()
        .enumerate()
        .map(|(fi, f)| {
            let other = |ei: usize| {
                let fs = colex.edges[ei].faces;
                if fs[0] == fi {
                    fs[1]
                } else {
                    fs[0]
                }
            };
            HyperFace {
                color: f.color,
                corners: f.vertices.iter().map(|&v| q(v, f.color)).collect(),
                sigma1: f.edges.iter().map(|&e| rank2_on(e, fi)).collect(),
                outer: f.edges.iter().map(|&e| rank2_on(e, other(e))).collect(),
                triangles: f.vertices.clone(),
            }
        })
        .collect();

    let rank3 = (0..colex.num_vertices)
        .map(|v| [q(v, Color::Red), q(v, Color::Green), q(v, Color::Blue)])
        .collect();

    Hypergraph {
        colex: colex.clone(),
        n,
        rank2,
        rank3,
        faces,
        rects,
    }
}

/// Convenience: build and inflate in one step.
pub fn hypergraph(d: usize) -> Result<Hypergraph> {
    Ok(inflate(&build_colex(d)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_cycle() {
        for c in Color::ALL {
            assert_eq!(c.next().prev(), c);
            assert_eq!(Color::third(c, c.next()), c.prev());
        }
    }

    #[test]
    fn rejects_bad_distances() {
        for d in [0, 1, 2, 3, 6, 10] {
            assert_eq!(build_colex(d), Err(Error::InvalidDistance(d)));
        }
    }

    #[test]
    fn translations_permute_faces_by_shape() {
        let c = build_colex(8).unwrap();
        for (fi, f) in c.faces.iter().enumerate() {
            let mut orbit: Vec<usize> = (0..4)
                .flat_map(|dr| (0..4).map(move |dc| (dr, dc)))
                .map(|(dr, dc)| c.translate_face(fi, dr, dc))
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            let same_shape = c.faces.iter().filter(|g| g.shape == f.shape).count();
            assert_eq!(orbit.len(), same_shape);
            // Translating the boundary lands on the translated face's boundary.
            let g = &c.faces[c.translate_face(fi, 1, 1)];
            let moved: Vec<usize> = f.vertices.iter().map(|&v| c.translate_vertex(v, 1, 1)).collect();
            assert_eq!(moved, g.vertices);
        }
    }
}
