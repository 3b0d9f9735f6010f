//! 2-dimensional CW complexes and their contraction calculus.
//!
//! A complex is a vertex set, edges with (possibly equal) endpoints and
//! faces attached along closed edge walks. Faces are stored as walks of
//! directed edge traversals rather than vertex lists so that contraction
//! never ambiguates repeated vertices.

mod contract;
mod homology;
mod link;
mod rotation;

pub use contract::{contract_edge, contract_edge_set};
pub use homology::{h1_rank, H1Certificate};
pub use link::{link_graph, loop_pairing, non_loop_pairing, EdgeEnd, LinkGraphResult};
pub use rotation::{
    genus_of_rotation, induced_link_rotation, rotation_from_geometry, GenusReport, GraphRotation,
    RotationSystem,
};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaceId(pub u32);

/// One traversal of an edge inside a face walk. `forward` means the edge is
/// traversed from its first endpoint towards its second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub edge: EdgeId,
    pub forward: bool,
}

impl Step {
    pub fn fwd(edge: EdgeId) -> Self {
        Step { edge, forward: true }
    }

    pub fn bwd(edge: EdgeId) -> Self {
        Step { edge, forward: false }
    }
}

/// A 2-complex: vertices, edges (loops allowed) and faces attached along
/// closed walks. Ids are stable under contraction: the smaller id of two
/// merged vertices survives.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoComplex {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    faces: BTreeMap<FaceId, Vec<Step>>,
    next_vertex: u32,
    next_edge: u32,
    next_face: u32,
}

impl TwoComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.next_vertex);
        self.insert_vertex(id);
        id
    }

    pub fn insert_vertex(&mut self, id: VertexId) {
        self.vertices.insert(id);
        self.next_vertex = self.next_vertex.max(id.0 + 1);
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        if !self.vertices.contains(&u) {
            return Err(Error::UnknownVertex(u.0));
        }
        if !self.vertices.contains(&v) {
            return Err(Error::UnknownVertex(v.0));
        }
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(id, (u, v));
        Ok(id)
    }

    /// Inserts an edge under an explicit id (used when reloading a complex).
    pub fn insert_edge(&mut self, id: EdgeId, u: VertexId, v: VertexId) -> Result<()> {
        if !self.vertices.contains(&u) {
            return Err(Error::UnknownVertex(u.0));
        }
        if !self.vertices.contains(&v) {
            return Err(Error::UnknownVertex(v.0));
        }
        if self.edges.contains_key(&id) {
            return Err(Error::InvalidWalk(format!("edge id {} already present", id.0)));
        }
        self.edges.insert(id, (u, v));
        self.next_edge = self.next_edge.max(id.0 + 1);
        Ok(())
    }

    /// Attaches a face under an explicit id, validating closure.
    pub fn insert_face(&mut self, id: FaceId, walk: Vec<Step>) -> Result<()> {
        if self.faces.contains_key(&id) {
            return Err(Error::InvalidWalk(format!("face id {} already present", id.0)));
        }
        let assigned = self.add_face(walk)?;
        let walk = self.faces.remove(&assigned).expect("just added");
        self.faces.insert(id, walk);
        self.next_face = self.next_face.max(id.0 + 1);
        Ok(())
    }

    /// Tail vertex of a step (where the traversal starts).
    pub fn step_tail(&self, s: Step) -> Result<VertexId> {
        let (u, v) = self.endpoints(s.edge)?;
        Ok(if s.forward { u } else { v })
    }

    /// Head vertex of a step (where the traversal ends).
    pub fn step_head(&self, s: Step) -> Result<VertexId> {
        let (u, v) = self.endpoints(s.edge)?;
        Ok(if s.forward { v } else { u })
    }

    /// Attaches a face along `walk`, validating closure.
    pub fn add_face(&mut self, walk: Vec<Step>) -> Result<FaceId> {
        if walk.is_empty() {
            return Err(Error::InvalidWalk("empty walk".into()));
        }
        for i in 0..walk.len() {
            let head = self.step_head(walk[i])?;
            let tail = self.step_tail(walk[(i + 1) % walk.len()])?;
            if head != tail {
                return Err(Error::InvalidWalk(format!(
                    "steps {i} and {} do not share a vertex consistently",
                    (i + 1) % walk.len()
                )));
            }
        }
        let id = FaceId(self.next_face);
        self.next_face += 1;
        self.faces.insert(id, walk);
        Ok(id)
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId)> {
        self.edges.get(&e).copied().ok_or(Error::UnknownEdge(e.0))
    }

    pub fn is_loop(&self, e: EdgeId) -> Result<bool> {
        let (u, v) = self.endpoints(e)?;
        Ok(u == v)
    }

    pub fn face_walk(&self, f: FaceId) -> Result<&[Step]> {
        self.faces.get(&f).map(|w| w.as_slice()).ok_or(Error::UnknownFace(f.0))
    }

    /// Corner vertices of a face, in walk order: corner `i` is the head of
    /// step `i` (shared with the tail of step `i + 1`).
    pub fn face_corners(&self, f: FaceId) -> Result<Vec<VertexId>> {
        let walk = self.face_walk(f)?;
        walk.iter().map(|&s| self.step_head(s)).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, (VertexId, VertexId))> + '_ {
        self.edges.iter().map(|(id, uv)| (*id, *uv))
    }

    pub fn faces(&self) -> impl Iterator<Item = (FaceId, &[Step])> + '_ {
        self.faces.iter().map(|(id, w)| (*id, w.as_slice()))
    }

    /// Edges incident to `v` (loops listed once).
    pub fn edges_at(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(id, _)| *id)
            .collect()
    }

    /// Number of edge ends at `v` (loops count twice).
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Faces traversing edge `e`, with the step index of each traversal.
    pub fn face_incidences(&self, e: EdgeId) -> Vec<(FaceId, usize)> {
        let mut out = Vec::new();
        for (&f, walk) in &self.faces {
            for (i, s) in walk.iter().enumerate() {
                if s.edge == e {
                    out.push((f, i));
                }
            }
        }
        out
    }

    /// Checks all structural invariants; returns a description of the first
    /// violation found.
    pub fn validate(&self) -> Result<()> {
        for (&e, &(u, v)) in &self.edges {
            if !self.vertices.contains(&u) || !self.vertices.contains(&v) {
                return Err(Error::InvalidWalk(format!("edge {} has missing endpoint", e.0)));
            }
        }
        for (&f, walk) in &self.faces {
            if walk.is_empty() {
                return Err(Error::InvalidWalk(format!("face {} has empty walk", f.0)));
            }
            for i in 0..walk.len() {
                let head = self.step_head(walk[i])?;
                let tail = self.step_tail(walk[(i + 1) % walk.len()])?;
                if head != tail {
                    return Err(Error::InvalidWalk(format!("face {} walk broken at step {i}", f.0)));
                }
            }
        }
        Ok(())
    }

    /// Induced subcomplex on `keep`: edges with both endpoints kept, faces
    /// all of whose boundary edges survive. Ids are preserved.
    pub fn induced_subcomplex(&self, keep: &BTreeSet<VertexId>) -> TwoComplex {
        let mut out = TwoComplex::new();
        for &v in keep {
            if self.vertices.contains(&v) {
                out.insert_vertex(v);
            }
        }
        for (&e, &(u, v)) in &self.edges {
            if out.has_vertex(u) && out.has_vertex(v) {
                out.edges.insert(e, (u, v));
            }
        }
        for (&f, walk) in &self.faces {
            if walk.iter().all(|s| out.has_edge(s.edge)) {
                out.faces.insert(f, walk.clone());
            }
        }
        out.next_vertex = self.next_vertex;
        out.next_edge = self.next_edge;
        out.next_face = self.next_face;
        out
    }

    /// Splits face `f` along the chord `u`-`w`, where `u` and `w` are
    /// non-adjacent corners of the walk. Returns the new complex, the new
    /// edge id and the two replacement face ids.
    pub fn subdivide_face(
        &self,
        f: FaceId,
        u: VertexId,
        w: VertexId,
    ) -> Result<(TwoComplex, EdgeId, (FaceId, FaceId))> {
        let walk = self.face_walk(f)?.to_vec();
        if u == w {
            return Err(Error::InvalidSubdivision("u and w coincide".into()));
        }
        let corners = self.face_corners(f)?;
        let len = walk.len();
        let iu = corners
            .iter()
            .position(|&c| c == u)
            .ok_or_else(|| Error::InvalidSubdivision(format!("vertex {} not on face {}", u.0, f.0)))?;
        let iw = corners
            .iter()
            .position(|&c| c == w)
            .ok_or_else(|| Error::InvalidSubdivision(format!("vertex {} not on face {}", w.0, f.0)))?;
        if (iu + 1) % len == iw || (iw + 1) % len == iu {
            return Err(Error::InvalidSubdivision("u and w are adjacent on the walk".into()));
        }
        let mut out = self.clone();
        out.faces.remove(&f);
        let chord = out.add_edge(u, w)?;
        // steps from u (exclusive corner iu) around to w, then the chord back
        let take = |from: usize, to: usize| -> Vec<Step> {
            let mut v = Vec::new();
            let mut i = (from + 1) % len;
            loop {
                v.push(walk[i]);
                if i == to {
                    break;
                }
                i = (i + 1) % len;
            }
            v
        };
        let mut w1 = take(iu, iw); // u -> w
        w1.push(Step::bwd(chord)); // w -> u
        let mut w2 = take(iw, iu); // w -> u
        w2.push(Step::fwd(chord)); // u -> w
        let f1 = out.add_face(w1)?;
        let f2 = out.add_face(w2)?;
        Ok((out, chord, (f1, f2)))
    }

    /// Subdivides many faces in one pass (each by a single chord). Faces may
    /// appear at most once; chord insertion order follows the input slice,
    /// so the returned edge ids line up with it.
    pub fn subdivide_faces(
        &self,
        chords: &[(FaceId, VertexId, VertexId)],
    ) -> Result<(TwoComplex, Vec<EdgeId>)> {
        let mut hosts: Vec<FaceId> = chords.iter().map(|&(f, _, _)| f).collect();
        hosts.sort_unstable();
        hosts.dedup();
        if hosts.len() != chords.len() {
            return Err(Error::InvalidSubdivision(
                "a face is subdivided by two chords".into(),
            ));
        }
        let mut out = self.clone();
        let mut ids = Vec::with_capacity(chords.len());
        for &(f, u, w) in chords {
            let walk = out.face_walk(f)?.to_vec();
            if u == w {
                return Err(Error::InvalidSubdivision("u and w coincide".into()));
            }
            let corners = out.face_corners(f)?;
            let len = walk.len();
            let pos = |x: VertexId| {
                corners.iter().position(|&c| c == x).ok_or_else(|| {
                    Error::InvalidSubdivision(format!("vertex {} not on face {}", x.0, f.0))
                })
            };
            let iu = pos(u)?;
            let iw = pos(w)?;
            if (iu + 1) % len == iw || (iw + 1) % len == iu {
                return Err(Error::InvalidSubdivision("u and w are adjacent on the walk".into()));
            }
            out.faces.remove(&f);
            let chord = out.add_edge(u, w)?;
            let take = |from: usize, to: usize| -> Vec<Step> {
                let mut v = Vec::new();
                let mut i = (from + 1) % len;
                loop {
                    v.push(walk[i]);
                    if i == to {
                        break;
                    }
                    i = (i + 1) % len;
                }
                v
            };
            let mut w1 = take(iu, iw);
            w1.push(Step::bwd(chord));
            let mut w2 = take(iw, iu);
            w2.push(Step::fwd(chord));
            out.add_face(w1)?;
            out.add_face(w2)?;
            ids.push(chord);
        }
        Ok((out, ids))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn square_complex() -> (TwoComplex, [VertexId; 4], [EdgeId; 4], FaceId) {
        let mut c = TwoComplex::new();
        let vs = [c.add_vertex(), c.add_vertex(), c.add_vertex(), c.add_vertex()];
        let es = [
            c.add_edge(vs[0], vs[1]).unwrap(),
            c.add_edge(vs[1], vs[2]).unwrap(),
            c.add_edge(vs[2], vs[3]).unwrap(),
            c.add_edge(vs[3], vs[0]).unwrap(),
        ];
        let f = c
            .add_face(vec![Step::fwd(es[0]), Step::fwd(es[1]), Step::fwd(es[2]), Step::fwd(es[3])])
            .unwrap();
        (c, vs, es, f)
    }

    #[test]
    fn face_walk_must_close() {
        let mut c = TwoComplex::new();
        let a = c.add_vertex();
        let b = c.add_vertex();
        let d = c.add_vertex();
        let e1 = c.add_edge(a, b).unwrap();
        let e2 = c.add_edge(b, d).unwrap();
        assert!(c.add_face(vec![Step::fwd(e1), Step::fwd(e2)]).is_err());
    }

    #[test]
    fn subdivide_square_along_diagonal() {
        let (c, vs, _, f) = square_complex();
        let (out, chord, (f1, f2)) = c.subdivide_face(f, vs[0], vs[2]).unwrap();
        assert_eq!(out.face_count(), 2);
        assert_eq!(out.face_walk(f1).unwrap().len(), 3);
        assert_eq!(out.face_walk(f2).unwrap().len(), 3);
        assert_eq!(out.endpoints(chord).unwrap(), (vs[0], vs[2]));
        out.validate().unwrap();
        // corner sets are {a,b,c} and {a,c,d}
        let c1: BTreeSet<_> = out.face_corners(f1).unwrap().into_iter().collect();
        let c2: BTreeSet<_> = out.face_corners(f2).unwrap().into_iter().collect();
        assert_eq!(c1, [vs[0], vs[1], vs[2]].into_iter().collect());
        assert_eq!(c2, [vs[0], vs[2], vs[3]].into_iter().collect());
    }

    #[test]
    fn subdivide_rejects_adjacent_corners() {
        let (c, vs, _, f) = square_complex();
        assert!(c.subdivide_face(f, vs[0], vs[1]).is_err());
    }

    #[test]
    fn subdivide_rejects_vanished_face() {
        let (c, vs, _, f) = square_complex();
        let (out, _, _) = c.subdivide_face(f, vs[0], vs[2]).unwrap();
        assert!(matches!(out.subdivide_face(f, vs[1], vs[3]), Err(Error::UnknownFace(_))));
    }
}
