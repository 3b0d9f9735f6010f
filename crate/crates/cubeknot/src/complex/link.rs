//! Link graphs of vertices in a 2-complex.
//!
//! The link of a vertex `v` has one vertex per edge end at `v` and one edge
//! per face corner at `v`: a corner is a pair of consecutive walk steps whose
//! shared vertex is `v`, and it joins the two edge ends it travels through.

use std::collections::BTreeMap;

use crate::graph::{EndPairing, Multigraph};
use crate::{Error, Result};

use super::{EdgeId, FaceId, Step, TwoComplex, VertexId};

/// An edge end: 0 is the first endpoint of the edge, 1 the second. A loop
/// has both ends at the same vertex but they remain distinct ends.
pub type EdgeEnd = (EdgeId, u8);

/// Link graph of a vertex together with the correspondence back to the
/// complex: which edge end each link vertex is, and which face corner each
/// link edge is. Corner `(f, i)` sits between steps `i` and `i + 1` of `f`.
#[derive(Debug, Clone)]
pub struct LinkGraphResult {
    pub graph: Multigraph,
    pub end_of: BTreeMap<u32, EdgeEnd>,
    pub link_vertex: BTreeMap<EdgeEnd, u32>,
    pub corner_of: BTreeMap<u32, (FaceId, usize)>,
    pub link_edge: BTreeMap<(FaceId, usize), u32>,
}

fn tail_end(s: Step) -> u8 {
    if s.forward {
        0
    } else {
        1
    }
}

fn head_end(s: Step) -> u8 {
    if s.forward {
        1
    } else {
        0
    }
}

pub fn link_graph(c: &TwoComplex, v: VertexId) -> Result<LinkGraphResult> {
    if !c.has_vertex(v) {
        return Err(Error::UnknownVertex(v.0));
    }
    let mut graph = Multigraph::new();
    let mut end_of = BTreeMap::new();
    let mut link_vertex = BTreeMap::new();
    for (e, (a, b)) in c.edges() {
        for (end, at) in [(0u8, a), (1u8, b)] {
            if at == v {
                let lv = graph.add_vertex();
                graph.set_label(lv, format!("e{}.{end}", e.0));
                end_of.insert(lv, (e, end));
                link_vertex.insert((e, end), lv);
            }
        }
    }
    let mut corner_of = BTreeMap::new();
    let mut link_edge = BTreeMap::new();
    for (f, walk) in c.faces() {
        let len = walk.len();
        for i in 0..len {
            let s = walk[i];
            let t = walk[(i + 1) % len];
            if c.step_head(s)? != v {
                continue;
            }
            let a = link_vertex[&(s.edge, head_end(s))];
            let b = link_vertex[&(t.edge, tail_end(t))];
            let le = graph.add_edge(a, b)?;
            corner_of.insert(le, (f, i));
            link_edge.insert((f, i), le);
        }
    }
    Ok(LinkGraphResult {
        graph,
        end_of,
        link_vertex,
        corner_of,
        link_edge,
    })
}

/// Face-induced end pairing for contracting the non-loop edge `e = uv`.
///
/// Every face traversal of `e` is flanked by two corners, one at each
/// endpoint; the pairing matches the corner on the `u` side with the corner
/// on the `v` side, as link edges of `lk_u` and `lk_v` respectively. Walks
/// that traverse `e` twice in a row have no well-defined flanking corners
/// and are rejected.
pub fn non_loop_pairing(
    c: &TwoComplex,
    e: EdgeId,
    lk_u: &LinkGraphResult,
    lk_v: &LinkGraphResult,
) -> Result<EndPairing> {
    let (u, v) = c.endpoints(e)?;
    if u == v {
        return Err(Error::InvalidPairing(format!("edge {} is a loop", e.0)));
    }
    let mut pairing = Vec::new();
    for (f, walk) in c.faces() {
        let len = walk.len();
        for i in 0..len {
            if walk[i].edge != e {
                continue;
            }
            if walk[(i + 1) % len].edge == e || walk[(i + len - 1) % len].edge == e {
                return Err(Error::InvalidPairing(format!(
                    "face {} traverses edge {} twice in a row",
                    f.0, e.0
                )));
            }
            let prev = (i + len - 1) % len;
            // corner `prev` sits at the tail of step i, corner `i` at its head
            let (tail_corner, head_corner) = ((f, prev), (f, i));
            let (u_corner, v_corner) = if c.step_tail(walk[i])? == u {
                (tail_corner, head_corner)
            } else {
                (head_corner, tail_corner)
            };
            pairing.push((lk_u.link_edge[&u_corner], lk_v.link_edge[&v_corner]));
        }
    }
    Ok(pairing)
}

/// Face-induced end pairing for contracting the loop `e` at its vertex, for
/// use with `internal_vertex_sum` at `x = (e, 0)` and `y = (e, 1)`.
///
/// Maximal runs of consecutive `e`-steps in a walk contribute one pair: the
/// corner just before the run against the corner just after it. Corners
/// interior to a run are x-y link edges and are consumed by the sum's
/// deletion step. Degenerate attachments (a run entering and leaving through
/// the same end, an interior corner joining an end to itself, or a walk that
/// consists of `e` alone) are rejected.
pub fn loop_pairing(c: &TwoComplex, e: EdgeId, lk: &LinkGraphResult) -> Result<EndPairing> {
    let (u, v) = c.endpoints(e)?;
    if u != v {
        return Err(Error::InvalidPairing(format!("edge {} is not a loop", e.0)));
    }
    let mut pairing = Vec::new();
    for (f, walk) in c.faces() {
        let len = walk.len();
        if walk.iter().all(|s| s.edge == e) {
            return Err(Error::InvalidPairing(format!(
                "face {} is attached along edge {} alone",
                f.0, e.0
            )));
        }
        let mut i = 0;
        while i < len {
            if walk[i].edge != e || walk[(i + len - 1) % len].edge == e {
                // not the start of a run (runs starting before index 0 are
                // picked up when the scan reaches their circular start)
                i += 1;
                continue;
            }
            let mut j = i;
            while walk[(j + 1) % len].edge == e {
                // interior corner between two e-steps: must be an x-y edge
                if head_end(walk[j % len]) == tail_end(walk[(j + 1) % len]) {
                    return Err(Error::InvalidPairing(format!(
                        "face {} has a same-end corner on edge {}",
                        f.0, e.0
                    )));
                }
                j += 1;
            }
            let first = walk[i];
            let last = walk[j % len];
            if tail_end(first) == head_end(last) {
                return Err(Error::InvalidPairing(format!(
                    "face {} enters and leaves edge {} through the same end",
                    f.0, e.0
                )));
            }
            let before = lk.link_edge[&(f, (i + len - 1) % len)];
            let after = lk.link_edge[&(f, j % len)];
            let (at_x, at_y) = if tail_end(first) == 0 {
                (before, after)
            } else {
                (after, before)
            };
            pairing.push((at_x, at_y));
            i = j + 1;
        }
    }
    Ok(pairing)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two squares glued along one edge, like an open book with two pages.
    fn book() -> (TwoComplex, VertexId, EdgeId) {
        let mut c = TwoComplex::new();
        let vs: Vec<_> = (0..6).map(|_| c.add_vertex()).collect();
        let spine = c.add_edge(vs[0], vs[1]).unwrap();
        let mut square = |a: usize, b: usize| {
            let e1 = c.add_edge(vs[1], vs[a]).unwrap();
            let e2 = c.add_edge(vs[a], vs[b]).unwrap();
            let e3 = c.add_edge(vs[b], vs[0]).unwrap();
            c.add_face(vec![Step::fwd(spine), Step::fwd(e1), Step::fwd(e2), Step::fwd(e3)])
                .unwrap();
        };
        square(2, 3);
        square(4, 5);
        (c, vs[0], spine)
    }

    #[test]
    fn link_of_book_corner() {
        let (c, v0, spine) = book();
        let lk = link_graph(&c, v0).unwrap();
        // ends at v0: spine end 0 plus one end of each page-closing edge
        assert_eq!(lk.graph.vertex_count(), 3);
        assert_eq!(lk.graph.edge_count(), 2);
        let e_vertex = lk.link_vertex[&(spine, 0)];
        assert_eq!(lk.graph.degree(e_vertex), 2);
        assert!(lk.graph.is_connected());
    }

    #[test]
    fn non_loop_pairing_covers_each_traversal() {
        let (c, _, spine) = book();
        let (u, v) = c.endpoints(spine).unwrap();
        let lk_u = link_graph(&c, u).unwrap();
        let lk_v = link_graph(&c, v).unwrap();
        let pairing = non_loop_pairing(&c, spine, &lk_u, &lk_v).unwrap();
        assert_eq!(pairing.len(), 2);
        // the paired link edges exist on the right sides
        for &(a, b) in &pairing {
            assert!(lk_u.corner_of.contains_key(&a));
            assert!(lk_v.corner_of.contains_key(&b));
        }
    }

    #[test]
    fn loop_pairing_on_a_wedge() {
        // one vertex, a loop e and a loop g, one square face e g e^-1 g^-1
        let mut c = TwoComplex::new();
        let v = c.add_vertex();
        let e = c.add_edge(v, v).unwrap();
        let g = c.add_edge(v, v).unwrap();
        c.add_face(vec![Step::fwd(e), Step::fwd(g), Step::bwd(e), Step::bwd(g)])
            .unwrap();
        let lk = link_graph(&c, v).unwrap();
        assert_eq!(lk.graph.vertex_count(), 4);
        assert_eq!(lk.graph.edge_count(), 4);
        let pairing = loop_pairing(&c, e, &lk).unwrap();
        // two runs of length one, one pair each
        assert_eq!(pairing.len(), 2);
    }
}
