//! Kuratowski-subdivision extraction from a nonplanar graph by deletion
//! minimization: an edge whose removal keeps the graph nonplanar is
//! discarded; once every edge is necessary, the remainder is a subdivision
//! of K₅ or K₃,₃.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::Multigraph;
use crate::{Error, Result};

use super::{is_planar_bool, KuratowskiKind, KuratowskiSubdivision};

/// Extracts a Kuratowski subdivision from a simple nonplanar graph. Larger
/// chunks of edges are tried first so the number of planarity calls stays
/// near `O(|witness| · log |E|)`.
pub fn find_kuratowski(g: &Multigraph) -> Result<KuratowskiSubdivision> {
    if is_planar_bool(g) {
        return Err(Error::ConstructionFailure("find_kuratowski called on a planar graph".into()));
    }
    let mut cur = g.clone();
    let mut chunk = (cur.edge_count() / 2).max(1);
    loop {
        let edges: Vec<u32> = cur.edges().map(|(e, _)| e).collect();
        let mut removed_any = false;
        for group in edges.chunks(chunk) {
            let mut trial = cur.clone();
            for &e in group {
                if trial.has_edge_loose(e) {
                    trial.remove_edge(e)?;
                }
            }
            if !is_planar_bool(&trial) {
                cur = trial;
                removed_any = true;
            }
        }
        if chunk == 1 && !removed_any {
            break;
        }
        if chunk > 1 {
            chunk /= 2;
        }
    }
    // minimal nonplanar graph: strip vertices left isolated
    let keep: BTreeSet<u32> = cur.edges().flat_map(|(_, (u, v))| [u, v]).collect();
    let cur = cur.induced_subgraph(&keep);
    classify(&cur)
}

/// Suppress degree-2 vertices of a minimal nonplanar graph: branch vertices
/// are those of degree ≥ 3; each incident edge starts a path threaded
/// through degree-2 vertices to the next branch vertex.
fn classify(g: &Multigraph) -> Result<KuratowskiSubdivision> {
    let mut inc: BTreeMap<u32, Vec<(u32, u32)>> = g.vertices().map(|v| (v, Vec::new())).collect();
    for (e, (u, v)) in g.edges() {
        inc.get_mut(&u).expect("vertex").push((e, v));
        inc.get_mut(&v).expect("vertex").push((e, u));
    }
    let branch_vertices: Vec<u32> = g.vertices().filter(|&v| inc[&v].len() >= 3).collect();
    let branches: BTreeSet<u32> = branch_vertices.iter().copied().collect();
    let mut paths: Vec<Vec<u32>> = Vec::new();
    let mut used_edges: BTreeSet<u32> = BTreeSet::new();
    for &b in &branch_vertices {
        for &(e0, w0) in &inc[&b] {
            if used_edges.contains(&e0) {
                continue;
            }
            let mut path = vec![b];
            let (mut e, mut w) = (e0, w0);
            loop {
                used_edges.insert(e);
                path.push(w);
                if branches.contains(&w) {
                    break;
                }
                let &(ne, nw) = inc[&w]
                    .iter()
                    .find(|&&(e2, _)| e2 != e)
                    .ok_or_else(|| Error::ConstructionFailure("degree-1 vertex in minimal nonplanar graph".into()))?;
                e = ne;
                w = nw;
            }
            paths.push(path);
        }
    }
    let kind = match (branch_vertices.len(), paths.len()) {
        (5, 10) => KuratowskiKind::K5,
        (6, 9) => KuratowskiKind::K33,
        (b, p) => {
            return Err(Error::ConstructionFailure(format!(
                "minimal nonplanar graph with {b} branch vertices and {p} paths"
            )))
        }
    };
    Ok(KuratowskiSubdivision { kind, branch_vertices, paths })
}

impl Multigraph {
    fn has_edge_loose(&self, e: u32) -> bool {
        self.endpoints(e).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdivided_k5_is_recovered() {
        let mut g = Multigraph::new();
        for _ in 0..5 {
            g.add_vertex();
        }
        for i in 0..5u32 {
            for j in i + 1..5 {
                if (i, j) == (0, 1) {
                    // subdivide this edge twice
                    let a = g.add_vertex();
                    let b = g.add_vertex();
                    g.add_edge(i, a).unwrap();
                    g.add_edge(a, b).unwrap();
                    g.add_edge(b, j).unwrap();
                } else {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        // plus some noise that must be pruned away
        let x = g.add_vertex();
        g.add_edge(0, x).unwrap();
        g.add_edge(x, 3).unwrap();
        let sub = find_kuratowski(&g).unwrap();
        assert_eq!(sub.kind, KuratowskiKind::K5);
        assert_eq!(sub.branch_vertices.len(), 5);
        assert!(sub.paths.iter().any(|p| p.len() == 4));
    }

    #[test]
    fn dense_nonplanar_graph_yields_some_witness() {
        let mut g = Multigraph::new();
        for _ in 0..8 {
            g.add_vertex();
        }
        for i in 0..8u32 {
            for j in i + 1..8 {
                g.add_edge(i, j).unwrap();
            }
        }
        let sub = find_kuratowski(&g).unwrap();
        assert!(matches!(sub.kind, KuratowskiKind::K5 | KuratowskiKind::K33));
    }
}
