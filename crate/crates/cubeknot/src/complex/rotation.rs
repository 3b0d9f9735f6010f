//! Rotation systems: cyclic face orders around complex edges, the rotations
//! they induce on link graphs, and genus computation by face tracing.

use std::collections::BTreeMap;

use crate::graph::Multigraph;
use crate::{Error, Result};

use super::{EdgeId, FaceId, LinkGraphResult, TwoComplex, VertexId};

/// σ_e for every edge: the cyclic order in which faces (as traversals
/// `(face, step index)`) are arranged around the edge in an embedding.
pub type RotationSystem = BTreeMap<EdgeId, Vec<(FaceId, usize)>>;

/// A dart is an edge end; `(e, 0)` sits at the first endpoint.
pub type Dart = (u32, u8);

/// Cyclic order of darts around each vertex of a multigraph.
pub type GraphRotation = BTreeMap<u32, Vec<Dart>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusReport {
    pub faces: usize,
    /// (vertices, edges, traced faces) per connected component.
    pub components: Vec<(usize, usize, usize)>,
    pub planar: bool,
}

type Vec3 = [i64; 3];

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: Vec3, b: Vec3) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn scale(k: i64, a: Vec3) -> Vec3 {
    [k * a[0], k * a[1], k * a[2]]
}

/// Exact circular comparison of nonzero plane vectors, angles measured from
/// the positive x-axis. Returns `None` when the vectors point the same way.
fn circular_cmp(a: (i128, i128), b: (i128, i128)) -> Option<std::cmp::Ordering> {
    use std::cmp::Ordering;
    // half-plane 0: angle in [0, π), half-plane 1: [π, 2π)
    let half = |(x, y): (i128, i128)| u8::from(!(y > 0 || (y == 0 && x > 0)));
    match half(a).cmp(&half(b)) {
        Ordering::Equal => {}
        ord => return Some(ord),
    }
    let crossz = a.0 * b.1 - a.1 * b.0;
    match crossz.cmp(&0) {
        Ordering::Greater => Some(Ordering::Less),
        Ordering::Less => Some(Ordering::Greater),
        Ordering::Equal => None,
    }
}

/// Reads a rotation system off an embedded complex with straight edges and
/// planar faces: incidences around each edge are sorted by exact dihedral
/// angle. Two faces at the same angle around an edge are rejected.
pub fn rotation_from_geometry(
    c: &TwoComplex,
    coords: &BTreeMap<VertexId, Vec3>,
) -> Result<RotationSystem> {
    let mut out = RotationSystem::new();
    for (e, (a, b)) in c.edges() {
        let (pa, pb) = (coords[&a], coords[&b]);
        let d = sub(pb, pa);
        if d == [0, 0, 0] {
            return Err(Error::DegenerateGeometry(format!("edge {} has zero length", e.0)));
        }
        // integer basis of the plane orthogonal to d; q = d × p, so the
        // (·p, ·q) coordinates are an orientation-preserving skewing of the
        // orthogonal frame and circular order is unaffected
        let p = if d[0] == 0 && d[1] == 0 {
            [1, 0, 0]
        } else {
            [-d[1], d[0], 0]
        };
        let q = cross(d, p);
        let mut incidences: Vec<((i128, i128), (FaceId, usize))> = Vec::new();
        for (f, i) in c.face_incidences(e) {
            // perpendicular part of the corner sum, cleared of denominators:
            // (d·d)·Σ(v − a) − (Σ(v − a)·d)·d
            let mut s = [0i64; 3];
            let mut sd = 0i64;
            for v in c.face_corners(f)? {
                let u = sub(coords[&v], pa);
                s = [s[0] + u[0], s[1] + u[1], s[2] + u[2]];
                sd += dot(u, d);
            }
            let w = sub(scale(dot(d, d), s), scale(sd, d));
            let xy = (i128::from(dot(w, p)), i128::from(dot(w, q)));
            if xy == (0, 0) {
                return Err(Error::DegenerateGeometry(format!(
                    "face {} is balanced around edge {}",
                    f.0, e.0
                )));
            }
            incidences.push((xy, (f, i)));
        }
        for i in 0..incidences.len() {
            for j in i + 1..incidences.len() {
                if circular_cmp(incidences[i].0, incidences[j].0).is_none() {
                    return Err(Error::DegenerateGeometry(format!(
                        "faces {} and {} coincide in angle around edge {}",
                        (incidences[i].1).0 .0,
                        (incidences[j].1).0 .0,
                        e.0
                    )));
                }
            }
        }
        incidences.sort_by(|x, y| circular_cmp(x.0, y.0).expect("distinct angles"));
        out.insert(e, incidences.into_iter().map(|(_, inc)| inc).collect());
    }
    Ok(out)
}

/// Restricts a rotation system to the link graph at `v`: every link vertex
/// (an edge end at `v`) receives its incident corners in σ_e order.
pub fn induced_link_rotation(
    c: &TwoComplex,
    lk: &LinkGraphResult,
    sigma: &RotationSystem,
    v: VertexId,
) -> Result<GraphRotation> {
    let mut rot = GraphRotation::new();
    for lv in lk.graph.vertices() {
        rot.insert(lv, Vec::new());
    }
    // loops in the link would be visited twice; hand out their two darts in
    // encounter order
    let mut seen: BTreeMap<u32, u8> = BTreeMap::new();
    for (&lv, &(e, end)) in &lk.end_of {
        let (a, b) = c.endpoints(e)?;
        if (if end == 0 { a } else { b }) != v {
            return Err(Error::MalformedRotation(format!(
                "link vertex {lv} does not originate at vertex {}",
                v.0
            )));
        }
        let order = sigma
            .get(&e)
            .ok_or_else(|| Error::MalformedRotation(format!("edge {} missing from rotation", e.0)))?;
        if c.face_incidences(e).len() != order.len() {
            return Err(Error::MalformedRotation(format!(
                "σ at edge {} does not list every incidence once",
                e.0
            )));
        }
        let darts = rot.get_mut(&lv).expect("inserted above");
        // σ_e is circular as seen looking along the edge from its tail;
        // from the head the same order appears reversed
        let oriented: Vec<(FaceId, usize)> = if end == 0 {
            order.clone()
        } else {
            order.iter().rev().copied().collect()
        };
        for &(f, i) in &oriented {
            let steps = c.face_walk(f)?;
            let len = steps.len();
            let s = steps[i];
            let tail_end = u8::from(!s.forward);
            // the corner flanking this traversal on the side of our end
            let corner = if tail_end == end { (f, (i + len - 1) % len) } else { (f, i) };
            let le = *lk
                .link_edge
                .get(&corner)
                .ok_or_else(|| Error::MalformedRotation(format!("corner of face {} not in link", f.0)))?;
            let n = seen.entry(le).or_insert(0);
            let (a, b) = lk.graph.endpoints(le)?;
            let dart_end = if a == b {
                let d = *n;
                *n += 1;
                d
            } else if a == lv {
                0
            } else {
                1
            };
            darts.push((le, dart_end));
        }
    }
    Ok(rot)
}

/// Traces the faces of the ribbon graph `(g, rot)` and reports Euler
/// characteristic per connected component. Edgeless components are planar.
pub fn genus_of_rotation(g: &Multigraph, rot: &GraphRotation) -> Result<GenusReport> {
    // validate: darts at each vertex are exactly its edge ends
    let mut expected: BTreeMap<u32, Vec<Dart>> = g.vertices().map(|v| (v, Vec::new())).collect();
    for (e, (u, v)) in g.edges() {
        expected.get_mut(&u).ok_or(Error::UnknownVertex(u))?.push((e, 0));
        expected.get_mut(&v).ok_or(Error::UnknownVertex(v))?.push((e, 1));
    }
    let mut position: BTreeMap<Dart, (u32, usize)> = BTreeMap::new();
    for (&v, want) in &expected {
        let got = rot
            .get(&v)
            .ok_or_else(|| Error::MalformedRotation(format!("vertex {v} missing")))?;
        let mut a = want.clone();
        let mut b = got.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::MalformedRotation(format!("wrong dart set at vertex {v}")));
        }
        for (i, &d) in got.iter().enumerate() {
            position.insert(d, (v, i));
        }
    }

    // next dart on a face boundary: σ-successor of the reversal
    let next = |d: Dart| -> Dart {
        let rev = (d.0, 1 - d.1);
        let (v, i) = position[&rev];
        let order = &rot[&v];
        order[(i + 1) % order.len()]
    };
    let mut face_of: BTreeMap<Dart, usize> = BTreeMap::new();
    let mut faces = 0usize;
    for &d0 in position.keys() {
        if face_of.contains_key(&d0) {
            continue;
        }
        let mut d = d0;
        loop {
            face_of.insert(d, faces);
            d = next(d);
            if d == d0 {
                break;
            }
        }
        faces += 1;
    }

    let mut components = Vec::new();
    let mut planar = true;
    for comp in g.connected_components() {
        let vcount = comp.len();
        let edges: Vec<u32> = g
            .edges()
            .filter(|&(_, (u, _))| comp.contains(&u))
            .map(|(id, _)| id)
            .collect();
        let ecount = edges.len();
        let mut fids: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
        for &e in &edges {
            fids.insert(face_of[&(e, 0)]);
            fids.insert(face_of[&(e, 1)]);
        }
        let fcount = if ecount == 0 { 1 } else { fids.len() };
        let comp_planar = vcount as i64 - ecount as i64 + fcount as i64 == 2;
        planar &= comp_planar;
        components.push((vcount, ecount, fcount));
    }
    Ok(GenusReport { faces, components, planar })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot_of(entries: &[(u32, &[Dart])]) -> GraphRotation {
        entries.iter().map(|&(v, ds)| (v, ds.to_vec())).collect()
    }

    #[test]
    fn single_loop_traces_two_faces() {
        let mut g = Multigraph::new();
        let v = g.add_vertex();
        let e = g.add_edge(v, v).unwrap();
        let rot = rot_of(&[(v, &[(e, 0), (e, 1)])]);
        let report = genus_of_rotation(&g, &rot).unwrap();
        assert_eq!(report.faces, 2);
        assert!(report.planar);
    }

    #[test]
    fn k4_planar_and_twisted_rotations() {
        let mut g = Multigraph::new();
        let vs: Vec<_> = (0..4).map(|_| g.add_vertex()).collect();
        let mut es = BTreeMap::new();
        for i in 0..4u32 {
            for j in i + 1..4 {
                es.insert((i, j), g.add_edge(vs[i as usize], vs[j as usize]).unwrap());
            }
        }
        let dart = |i: u32, j: u32| -> Dart {
            if i < j {
                (es[&(i, j)], 0)
            } else {
                (es[&(j, i)], 1)
            }
        };
        // planar embedding: 0 outer, 3 in the middle
        let planar = rot_of(&[
            (0, &[dart(0, 1), dart(0, 3), dart(0, 2)]),
            (1, &[dart(1, 2), dart(1, 3), dart(1, 0)]),
            (2, &[dart(2, 0), dart(2, 3), dart(2, 1)]),
            (3, &[dart(3, 0), dart(3, 1), dart(3, 2)]),
        ]);
        let report = genus_of_rotation(&g, &planar).unwrap();
        assert_eq!(report.faces, 4);
        assert!(report.planar);
        // swapping two darts at vertex 3 forces genus 1
        let twisted = rot_of(&[
            (0, &[dart(0, 1), dart(0, 3), dart(0, 2)]),
            (1, &[dart(1, 2), dart(1, 3), dart(1, 0)]),
            (2, &[dart(2, 0), dart(2, 3), dart(2, 1)]),
            (3, &[dart(3, 1), dart(3, 0), dart(3, 2)]),
        ]);
        assert!(!genus_of_rotation(&g, &twisted).unwrap().planar);
    }

    #[test]
    fn k5_admits_no_planar_rotation() {
        let mut g = Multigraph::new();
        let vs: Vec<_> = (0..5).map(|_| g.add_vertex()).collect();
        let mut incident: BTreeMap<u32, Vec<Dart>> = vs.iter().map(|&v| (v, Vec::new())).collect();
        for i in 0..5usize {
            for j in i + 1..5 {
                let e = g.add_edge(vs[i], vs[j]).unwrap();
                incident.get_mut(&vs[i]).unwrap().push((e, 0));
                incident.get_mut(&vs[j]).unwrap().push((e, 1));
            }
        }
        // exhaust rotations at vertices 1..4 with vertex 0 fixed (rotations
        // are cyclic orders, so fixing one vertex's order fully is safe only
        // up to reflection; we simply try everything at the others)
        fn perms(items: &[Dart]) -> Vec<Vec<Dart>> {
            if items.len() <= 1 {
                return vec![items.to_vec()];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.to_vec();
                let x = rest.remove(i);
                for mut p in perms(&rest) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        let choices: Vec<Vec<Vec<Dart>>> = vs.iter().map(|v| perms(&incident[v])).collect();
        let mut any_planar = false;
        // fix vertex 0's rotation; 24^4 at the rest is too many, so fix the
        // first dart of each rotation too (cyclic symmetry): iterate
        // permutations whose first element is the original first dart
        let filtered: Vec<Vec<Vec<Dart>>> = choices
            .iter()
            .enumerate()
            .map(|(i, ps)| {
                if i == 0 {
                    vec![ps[0].clone()]
                } else {
                    ps.iter().filter(|p| p[0] == incident[&vs[i]][0]).cloned().collect()
                }
            })
            .collect();
        let mut idx = [0usize; 5];
        'outer: loop {
            let rot: GraphRotation = (0..5).map(|i| (vs[i], filtered[i][idx[i]].clone())).collect();
            if genus_of_rotation(&g, &rot).unwrap().planar {
                any_planar = true;
                break;
            }
            for i in (0..5).rev() {
                idx[i] += 1;
                if idx[i] < filtered[i].len() {
                    continue 'outer;
                }
                idx[i] = 0;
                if i == 0 {
                    break 'outer;
                }
            }
        }
        assert!(!any_planar);
    }

    #[test]
    fn handshake_holds_for_traced_faces() {
        // sum of traced face degrees equals the dart count 2|E|
        let mut g = Multigraph::new();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let e1 = g.add_edge(a, b).unwrap();
        let e2 = g.add_edge(a, b).unwrap();
        let rot = rot_of(&[(a, &[(e1, 0), (e2, 0)]), (b, &[(e1, 1), (e2, 1)])]);
        let report = genus_of_rotation(&g, &rot).unwrap();
        assert_eq!(report.faces, 2);
        assert!(report.planar);
    }
}
