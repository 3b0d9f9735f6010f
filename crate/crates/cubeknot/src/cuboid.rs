//! Cuboid complexes: lattice boxes with all unit squares as faces, their
//! bipartite 2-coloring, slabs, and the diagonal-edge graphs used to grow
//! spanning trees.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{EdgeId, FaceId, Step, TwoComplex, VertexId};
use crate::graph::Multigraph;
use crate::{Error, Result};

pub type Coord = [i64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// The proper 2-coloring of the (bipartite) 1-skeleton.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Coloring {
    colors: BTreeMap<VertexId, Color>,
}

impl Coloring {
    pub fn color(&self, v: VertexId) -> Color {
        self.colors[&v]
    }

    pub fn vertices_of(&self, color: Color) -> impl Iterator<Item = VertexId> + '_ {
        self.colors
            .iter()
            .filter(move |&(_, &c)| c == color)
            .map(|(&v, _)| v)
    }
}

/// A diagonal of a square face. Not an edge of the complex until the face
/// is subdivided; until then it is carried as this record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagonalEdge {
    pub a: VertexId,
    pub b: VertexId,
    pub host: FaceId,
}

impl DiagonalEdge {
    pub fn new(a: VertexId, b: VertexId, host: FaceId) -> Self {
        let (a, b) = (a.min(b), a.max(b));
        DiagonalEdge { a, b, host }
    }
}

/// A lattice box complex with coordinates as the source of truth. `x_range`
/// is the full `[0, n1]` for freshly built cuboids and narrows under `slab`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CuboidComplex {
    pub complex: TwoComplex,
    pub coords: BTreeMap<VertexId, Coord>,
    pub dims: (i64, i64, i64),
    pub x_range: (i64, i64),
    index: BTreeMap<Coord, VertexId>,
    edge_index: BTreeMap<(VertexId, VertexId), EdgeId>,
}

impl CuboidComplex {
    pub fn vertex_at(&self, p: Coord) -> Option<VertexId> {
        self.index.get(&p).copied()
    }

    pub fn coord(&self, v: VertexId) -> Result<Coord> {
        self.coords.get(&v).copied().ok_or(Error::UnknownVertex(v.0))
    }

    /// The lattice edge between two unit-distance vertices, if present.
    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edge_index
            .get(&(u.min(v), u.max(v)))
            .copied()
            .filter(|e| self.complex.has_edge(*e))
    }
}

/// All integer triples of the box as vertices, unit-distance pairs as edges
/// and unit squares as faces. Ids are lexicographic in (x, y, z).
pub fn build_cuboid(n1: i64, n2: i64, n3: i64) -> Result<CuboidComplex> {
    if n1 < 1 || n2 < 1 || n3 < 1 {
        return Err(Error::InvalidDimension("cuboid sides must be at least 1".into()));
    }
    let mut complex = TwoComplex::new();
    let mut coords = BTreeMap::new();
    let mut index = BTreeMap::new();
    for x in 0..=n1 {
        for y in 0..=n2 {
            for z in 0..=n3 {
                let v = complex.add_vertex();
                coords.insert(v, [x, y, z]);
                index.insert([x, y, z], v);
            }
        }
    }
    let at = |p: Coord| -> Option<VertexId> { index.get(&p).copied() };
    const AXES: [Coord; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut edge_of: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
    for (&p, &v) in &index {
        for d in AXES {
            if let Some(w) = at([p[0] + d[0], p[1] + d[1], p[2] + d[2]]) {
                let e = complex.add_edge(v, w)?;
                edge_of.insert((v.min(w), v.max(w)), e);
            }
        }
    }
    for (&p, &v) in &index {
        // one square per axis pair, anchored at its minimal corner
        for (d1, d2) in [(AXES[0], AXES[1]), (AXES[0], AXES[2]), (AXES[1], AXES[2])] {
            let q = [p[0] + d1[0], p[1] + d1[1], p[2] + d1[2]];
            let r = [q[0] + d2[0], q[1] + d2[1], q[2] + d2[2]];
            let s = [p[0] + d2[0], p[1] + d2[1], p[2] + d2[2]];
            if let (Some(b), Some(c), Some(d)) = (at(q), at(r), at(s)) {
                complex.add_face(vec![
                    Step::fwd(edge_of[&(v, b)]),
                    Step::fwd(edge_of[&(b, c)]),
                    Step::bwd(edge_of[&(d, c)]),
                    Step::bwd(edge_of[&(v, d)]),
                ])?;
            }
        }
    }
    Ok(CuboidComplex {
        complex,
        coords,
        dims: (n1, n2, n3),
        x_range: (0, n1),
        index,
        edge_index: edge_of,
    })
}

/// Colors every vertex by coordinate-sum parity relative to the anchor.
pub fn two_color(c: &CuboidComplex, anchor: VertexId, anchor_color: Color) -> Result<Coloring> {
    let ap = c.coord(anchor)?;
    let a_parity = (ap[0] + ap[1] + ap[2]).rem_euclid(2);
    let colors = c
        .coords
        .iter()
        .map(|(&v, p)| {
            let color = if (p[0] + p[1] + p[2]).rem_euclid(2) == a_parity {
                anchor_color
            } else {
                anchor_color.flip()
            };
            (v, color)
        })
        .collect();
    Ok(Coloring { colors })
}

/// Intersection with the strip `a ≤ x ≤ b`, keeping ids and coordinates.
pub fn slab(c: &CuboidComplex, a: i64, b: i64) -> Result<CuboidComplex> {
    if a > b || a < c.x_range.0 || b > c.x_range.1 {
        return Err(Error::SlabBounds(a, b));
    }
    let keep: BTreeSet<VertexId> = c
        .coords
        .iter()
        .filter(|(_, p)| (a..=b).contains(&p[0]))
        .map(|(&v, _)| v)
        .collect();
    let complex = c.complex.induced_subcomplex(&keep);
    let coords: BTreeMap<_, _> = c.coords.iter().filter(|(v, _)| keep.contains(v)).map(|(&v, &p)| (v, p)).collect();
    let index = coords.iter().map(|(&v, &p)| (p, v)).collect();
    let edge_index = complex
        .edges()
        .map(|(e, (u, v))| ((u.min(v), u.max(v)), e))
        .collect();
    Ok(CuboidComplex {
        complex,
        coords,
        dims: c.dims,
        x_range: (a, b),
        index,
        edge_index,
    })
}

/// The two diagonals of a square face, as opposite corner pairs.
pub fn face_diagonals(c: &CuboidComplex, f: FaceId) -> Result<(DiagonalEdge, DiagonalEdge)> {
    let corners = c.complex.face_corners(f)?;
    if corners.len() != 4 {
        return Err(Error::InvalidWalk(format!("face {} is not a square", f.0)));
    }
    Ok((
        DiagonalEdge::new(corners[0], corners[2], f),
        DiagonalEdge::new(corners[1], corners[3], f),
    ))
}

/// The diagonal of `f` whose endpoints carry `color`.
pub fn diagonal_of(c: &CuboidComplex, coloring: &Coloring, f: FaceId, color: Color) -> Result<DiagonalEdge> {
    let (d1, d2) = face_diagonals(c, f)?;
    if coloring.color(d1.a) == color {
        Ok(d1)
    } else {
        debug_assert_eq!(coloring.color(d2.a), color);
        Ok(d2)
    }
}

/// Graph on the vertices of one color whose edges are the same-colored
/// diagonals, one per square face; the edge id is the host face id.
pub fn diagonal_graph(c: &CuboidComplex, coloring: &Coloring, color: Color) -> Result<Multigraph> {
    let mut g = Multigraph::new();
    for v in c.complex.vertices() {
        if coloring.color(v) == color {
            g.insert_vertex(v.0);
        }
    }
    for (f, _) in c.complex.faces() {
        let d = diagonal_of(c, coloring, f, color)?;
        g.insert_edge(f.0, d.a.0, d.b.0)?;
    }
    Ok(g)
}

/// The crossing set I: for every host face of a given diagonal, the opposite
/// diagonal of the same square (the two cross in its interior).
pub fn crossing_set(c: &CuboidComplex, diagonals: &BTreeSet<DiagonalEdge>) -> Result<BTreeSet<DiagonalEdge>> {
    let mut out = BTreeSet::new();
    for d in diagonals {
        let (d1, d2) = face_diagonals(c, d.host)?;
        if *d == d1 {
            out.insert(d2);
        } else if *d == d2 {
            out.insert(d1);
        } else {
            return Err(Error::ConstructionFailure(format!(
                "diagonal ({}, {}) does not belong to face {}",
                d.a.0, d.b.0, d.host.0
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(n1: i64, n2: i64, n3: i64) -> (usize, usize, usize) {
        let v = ((n1 + 1) * (n2 + 1) * (n3 + 1)) as usize;
        let e = (n1 * (n2 + 1) * (n3 + 1) + n2 * (n1 + 1) * (n3 + 1) + n3 * (n1 + 1) * (n2 + 1)) as usize;
        let f = (n1 * n2 * (n3 + 1) + n1 * n3 * (n2 + 1) + n2 * n3 * (n1 + 1)) as usize;
        (v, e, f)
    }

    #[test]
    fn unit_cube_counts() {
        let c = build_cuboid(1, 1, 1).unwrap();
        assert_eq!(c.complex.vertex_count(), 8);
        assert_eq!(c.complex.edge_count(), 12);
        assert_eq!(c.complex.face_count(), 6);
        c.complex.validate().unwrap();
    }

    #[test]
    fn closed_forms_match_enumeration_up_to_four() {
        for (n1, n2, n3) in [(1, 1, 1), (2, 2, 2), (3, 2, 1), (4, 4, 4), (4, 1, 3)] {
            let c = build_cuboid(n1, n2, n3).unwrap();
            let (v, e, f) = counts(n1, n2, n3);
            assert_eq!(c.complex.vertex_count(), v);
            assert_eq!(c.complex.edge_count(), e);
            assert_eq!(c.complex.face_count(), f);
            // brute: every edge is unit distance, every face a unit square
            for (_, (a, b)) in c.complex.edges() {
                let (pa, pb) = (c.coord(a).unwrap(), c.coord(b).unwrap());
                let d: i64 = (0..3).map(|i| (pa[i] - pb[i]).abs()).sum();
                assert_eq!(d, 1);
            }
        }
    }

    #[test]
    fn degrees_lie_between_three_and_six() {
        let c = build_cuboid(2, 2, 2).unwrap();
        for v in c.complex.vertices() {
            let d = c.complex.degree(v);
            assert!((3..=6).contains(&d), "degree {d}");
        }
    }

    #[test]
    fn coloring_is_proper_and_flip_symmetric() {
        let c = build_cuboid(2, 2, 2).unwrap();
        let anchor = c.vertex_at([1, 0, 0]).unwrap();
        let col = two_color(&c, anchor, Color::White).unwrap();
        for (_, (u, v)) in c.complex.edges() {
            assert_ne!(col.color(u), col.color(v));
        }
        let flipped = two_color(&c, anchor, Color::Black).unwrap();
        for v in c.complex.vertices() {
            assert_eq!(col.color(v).flip(), flipped.color(v));
        }
        assert_eq!(col.color(c.vertex_at([0, 0, 0]).unwrap()), Color::Black);
    }

    #[test]
    fn middle_slab_of_222_is_one_plane() {
        let c = build_cuboid(2, 2, 2).unwrap();
        let s = slab(&c, 1, 1).unwrap();
        assert_eq!(s.complex.vertex_count(), 9);
        assert_eq!(s.complex.edge_count(), 12);
        assert_eq!(s.complex.face_count(), 4);
        // ids are inherited from the parent
        for v in s.complex.vertices() {
            assert_eq!(s.coord(v).unwrap(), c.coord(v).unwrap());
        }
        // idempotent / monotone
        let s2 = slab(&s, 1, 1).unwrap();
        assert_eq!(s2.complex, s.complex);
        assert!(slab(&s, 0, 1).is_err());
    }

    #[test]
    fn full_slab_is_identity() {
        let c = build_cuboid(2, 1, 1).unwrap();
        let s = slab(&c, 0, 2).unwrap();
        assert_eq!(s.complex, c.complex);
    }

    #[test]
    fn one_black_and_one_white_diagonal_per_face() {
        let c = build_cuboid(2, 2, 2).unwrap();
        let anchor = c.vertex_at([1, 0, 0]).unwrap();
        let col = two_color(&c, anchor, Color::White).unwrap();
        for (f, _) in c.complex.faces() {
            let (d1, d2) = face_diagonals(&c, f).unwrap();
            for d in [d1, d2] {
                assert_eq!(col.color(d.a), col.color(d.b));
            }
            assert_ne!(col.color(d1.a), col.color(d2.a));
        }
        let gb = diagonal_graph(&c, &col, Color::Black).unwrap();
        let gw = diagonal_graph(&c, &col, Color::White).unwrap();
        assert_eq!(gb.edge_count(), c.complex.face_count());
        assert_eq!(gw.edge_count(), c.complex.face_count());
        assert!(gb.is_connected());
        assert!(gw.is_connected());
    }

    #[test]
    fn crossing_set_is_the_opposite_diagonals() {
        let c = build_cuboid(2, 2, 2).unwrap();
        let anchor = c.vertex_at([1, 0, 0]).unwrap();
        let col = two_color(&c, anchor, Color::White).unwrap();
        let f = c.complex.faces().next().unwrap().0;
        let d = diagonal_of(&c, &col, f, Color::Black).unwrap();
        let set: BTreeSet<_> = [d].into_iter().collect();
        let i = crossing_set(&c, &set).unwrap();
        assert_eq!(i.len(), 1);
        let opp = i.iter().next().unwrap();
        assert_eq!(opp.host, f);
        assert_eq!(col.color(opp.a), Color::White);
    }
}
