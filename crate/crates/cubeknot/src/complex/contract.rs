//! Edge contraction in 2-complexes.
//!
//! Contracting a non-loop edge identifies its endpoints (the smaller id
//! survives) and erases the edge from every face walk; contracting a loop
//! just erases it. The induced effect on the link of the merged vertex is a
//! vertex sum (or internal vertex sum for loops) over the face-induced end
//! pairing, which the verification layer checks independently.

use std::collections::{BTreeMap, BTreeSet};

use crate::Result;

use super::{EdgeId, TwoComplex, VertexId};

pub fn contract_edge(c: &TwoComplex, e: EdgeId) -> Result<TwoComplex> {
    let mut set = BTreeSet::new();
    set.insert(e);
    contract_edge_set(c, &set)
}

/// Contracts every edge in `set` simultaneously. Each resulting vertex class
/// is represented by its minimum original id, so sequential one-at-a-time
/// contraction in any order yields a literally equal complex.
pub fn contract_edge_set(c: &TwoComplex, set: &BTreeSet<EdgeId>) -> Result<TwoComplex> {
    // union-find over vertices, min id as representative
    let mut parent: BTreeMap<VertexId, VertexId> = c.vertices().map(|v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
        let mut root = v;
        while parent[&root] != root {
            root = parent[&root];
        }
        let mut cur = v;
        while cur != root {
            cur = parent.insert(cur, root).expect("visited");
        }
        root
    }
    for &e in set {
        let (u, v) = c.endpoints(e)?;
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            let (lo, hi) = (ru.min(rv), ru.max(rv));
            parent.insert(hi, lo);
        }
    }

    let mut out = TwoComplex::new();
    for v in c.vertices() {
        if find(&mut parent, v) == v {
            out.insert_vertex(v);
        }
    }
    for (e, (u, v)) in c.edges() {
        if set.contains(&e) {
            continue;
        }
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        out.insert_edge_raw(e, ru, rv);
    }
    for (f, walk) in c.faces() {
        let new_walk: Vec<_> = walk.iter().copied().filter(|s| !set.contains(&s.edge)).collect();
        // a face whose entire boundary is contracted disappears
        if !new_walk.is_empty() {
            out.insert_face_raw(f, new_walk);
        }
    }
    out.bump_counters(c);
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

impl TwoComplex {
    pub(super) fn insert_edge_raw(&mut self, e: EdgeId, u: VertexId, v: VertexId) {
        debug_assert!(self.has_vertex(u) && self.has_vertex(v));
        self.edges.insert(e, (u, v));
    }

    pub(super) fn insert_face_raw(&mut self, f: super::FaceId, walk: Vec<super::Step>) {
        self.faces.insert(f, walk);
    }

    /// Keeps id allocation monotone across derived complexes.
    pub(super) fn bump_counters(&mut self, src: &TwoComplex) {
        self.next_vertex = self.next_vertex.max(src.next_vertex);
        self.next_edge = self.next_edge.max(src.next_edge);
        self.next_face = self.next_face.max(src.next_face);
    }
}

#[cfg(test)]
mod tests {
    use super::super::{link_graph, non_loop_pairing, Step};
    use super::*;
    use crate::graph::vertex_sum;

    fn square() -> (TwoComplex, [VertexId; 4], [EdgeId; 4]) {
        let mut c = TwoComplex::new();
        let vs = [c.add_vertex(), c.add_vertex(), c.add_vertex(), c.add_vertex()];
        let es = [
            c.add_edge(vs[0], vs[1]).unwrap(),
            c.add_edge(vs[1], vs[2]).unwrap(),
            c.add_edge(vs[2], vs[3]).unwrap(),
            c.add_edge(vs[3], vs[0]).unwrap(),
        ];
        c.add_face(vec![Step::fwd(es[0]), Step::fwd(es[1]), Step::fwd(es[2]), Step::fwd(es[3])])
            .unwrap();
        (c, vs, es)
    }

    #[test]
    fn contracting_a_square_edge_gives_a_triangle() {
        let (c, vs, es) = square();
        let out = contract_edge(&c, es[0]).unwrap();
        assert_eq!(out.vertex_count(), 3);
        assert_eq!(out.edge_count(), 3);
        assert_eq!(out.face_count(), 1);
        assert!(out.has_vertex(vs[0]));
        assert!(!out.has_vertex(vs[1]));
        assert_eq!(out.face_walk(out.faces().next().unwrap().0).unwrap().len(), 3);
        out.validate().unwrap();
    }

    #[test]
    fn batch_equals_any_sequential_order() {
        let (c, _, es) = square();
        let set: BTreeSet<_> = [es[0], es[2], es[3]].into_iter().collect();
        let batch = contract_edge_set(&c, &set).unwrap();
        for order in [
            [es[0], es[2], es[3]],
            [es[2], es[3], es[0]],
            [es[3], es[0], es[2]],
        ] {
            let mut cur = c.clone();
            for e in order {
                cur = contract_edge(&cur, e).unwrap();
            }
            assert_eq!(cur, batch);
        }
        // all four corners merged into vertex 0; the surviving edge is a loop
        assert_eq!(batch.vertex_count(), 1);
        assert!(batch.is_loop(es[1]).unwrap());
        assert_eq!(batch.face_walk(batch.faces().next().unwrap().0).unwrap().len(), 1);
    }

    #[test]
    fn link_of_contraction_is_the_vertex_sum() {
        // Cross-check the two routes on the square: contract e0 = v0v1 and
        // compare the link at the merged vertex with the vertex sum of the
        // endpoint links over the face-induced pairing.
        let (c, vs, es) = square();
        let lk_u = link_graph(&c, vs[0]).unwrap();
        let lk_v = link_graph(&c, vs[1]).unwrap();
        let pairing = non_loop_pairing(&c, es[0], &lk_u, &lk_v).unwrap();
        let x = lk_u.link_vertex[&(es[0], 0)];
        let y = lk_v.link_vertex[&(es[0], 1)];
        let (summed, _) = vertex_sum(&lk_u.graph, x, &lk_v.graph, y, &pairing).unwrap();

        let contracted = contract_edge(&c, es[0]).unwrap();
        let lk_w = link_graph(&contracted, vs[0]).unwrap();
        assert_eq!(summed.vertex_count(), lk_w.graph.vertex_count());
        assert_eq!(summed.edge_count(), lk_w.graph.edge_count());
        // both are two ends joined by a single corner path
        assert!(summed.is_connected() && lk_w.graph.is_connected());
    }
}
