//! Planarity with self-certifying verdicts, the named graphs G₁₄/G₁₃/W²,
//! K₃,₃-minor certificates, and small-graph isomorphism.
//!
//! The boolean test is the left-right algorithm (via `rustworkx-core`); every
//! verdict carries a witness that is re-verified independently: a rotation
//! system passing the Euler check for planar graphs, or a Kuratowski
//! subdivision for nonplanar ones.

mod embed;
mod iso;
mod kuratowski;
mod minor;
mod named;

pub use embed::dmp_embedding;
pub use iso::{find_isomorphism, is_isomorphic};
pub use kuratowski::find_kuratowski;
pub use minor::{
    find_k33_minor, has_k33_minor_via, k33_subdivision_from_branch_sets, verify_k33_branch_sets,
    ContractionScript, MinorCertificate,
};
pub use named::{make_double_wheel, make_g13, make_g14};

use std::collections::{BTreeMap, BTreeSet};

use rustworkx_core::petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::complex::{genus_of_rotation, GraphRotation};
use crate::graph::Multigraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// A subdivision of K₅ or K₃,₃ inside the tested graph: branch vertices plus
/// internally disjoint connecting paths (as vertex sequences).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KuratowskiSubdivision {
    pub kind: KuratowskiKind,
    pub branch_vertices: Vec<u32>,
    pub paths: Vec<Vec<u32>>,
}

#[derive(Debug, Clone)]
pub enum Witness {
    Embedding(GraphRotation),
    Kuratowski(KuratowskiSubdivision),
}

#[derive(Debug, Clone)]
pub struct PlanarityVerdict {
    pub planar: bool,
    pub witness: Witness,
}

/// Loops dropped, parallel classes collapsed onto their smallest edge id.
/// Returns the simple graph, the extra edges of each parallel class keyed by
/// representative, and the loops per vertex.
fn simplify(g: &Multigraph) -> (Multigraph, BTreeMap<u32, Vec<u32>>, BTreeMap<u32, Vec<u32>>) {
    let mut simple = Multigraph::new();
    for v in g.vertices() {
        simple.insert_vertex(v);
    }
    let mut rep: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let mut parallels: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut loops: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (e, (u, v)) in g.edges() {
        if u == v {
            loops.entry(u).or_default().push(e);
            continue;
        }
        let key = (u.min(v), u.max(v));
        match rep.get(&key) {
            None => {
                rep.insert(key, e);
                simple.insert_edge(e, u, v).expect("vertices inserted");
            }
            Some(&r) => parallels.entry(r).or_default().push(e),
        }
    }
    (simple, parallels, loops)
}

/// Boolean left-right planarity of the underlying simple graph.
pub fn is_planar_bool(g: &Multigraph) -> bool {
    let (simple, _, _) = simplify(g);
    let index: BTreeMap<u32, usize> = simple.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let mut pg: UnGraph<(), ()> = UnGraph::with_capacity(index.len(), simple.edge_count());
    let nodes: Vec<_> = (0..index.len()).map(|_| pg.add_node(())).collect();
    for (_, (u, v)) in simple.edges() {
        pg.add_edge(nodes[index[&u]], nodes[index[&v]], ());
    }
    rustworkx_core::planar::is_planar(&pg)
}

/// Splices the loops and parallel edges stripped by `simplify` back into a
/// rotation of the simple graph, preserving planarity: parallel edges are
/// nested (inserted in opposite orders at the two endpoints) and loops become
/// trivial bigons at the end of their vertex's rotation.
fn restore_rotation(
    g: &Multigraph,
    simple_rot: &GraphRotation,
    parallels: &BTreeMap<u32, Vec<u32>>,
    loops: &BTreeMap<u32, Vec<u32>>,
) -> Result<GraphRotation> {
    let mut rot = GraphRotation::new();
    for v in g.vertices() {
        let base = simple_rot.get(&v).cloned().unwrap_or_default();
        let mut darts = Vec::new();
        for (rep, end) in base {
            // nest parallels: ascending after the representative at its
            // smaller endpoint, descending before it at the larger one, so
            // each adjacent pair of arcs bounds a bigon
            let (u, w) = g.endpoints(rep)?;
            let here = if end == 0 { u } else { w };
            let at_min = here == u.min(w);
            let mut extras = parallels.get(&rep).cloned().unwrap_or_default();
            if !at_min {
                extras.reverse();
            }
            let extra_darts: Vec<_> = extras
                .into_iter()
                .map(|e| {
                    let (a, _) = g.endpoints(e)?;
                    Ok((e, u8::from(a != here)))
                })
                .collect::<Result<_>>()?;
            if at_min {
                darts.push((rep, end));
                darts.extend(extra_darts);
            } else {
                darts.extend(extra_darts);
                darts.push((rep, end));
            }
        }
        if let Some(ls) = loops.get(&v) {
            for &l in ls {
                darts.push((l, 0));
                darts.push((l, 1));
            }
        }
        rot.insert(v, darts);
    }
    Ok(rot)
}

/// Planarity with a verified witness. The witness is checked before the
/// verdict is returned; an unverifiable witness is an internal error.
pub fn is_planar(g: &Multigraph) -> Result<PlanarityVerdict> {
    let (simple, parallels, loops) = simplify(g);
    let verdict = if is_planar_bool(&simple) {
        let simple_rot = dmp_embedding(&simple)?;
        let rot = restore_rotation(g, &simple_rot, &parallels, &loops)?;
        PlanarityVerdict { planar: true, witness: Witness::Embedding(rot) }
    } else {
        let sub = find_kuratowski(&simple)?;
        PlanarityVerdict { planar: false, witness: Witness::Kuratowski(sub) }
    };
    check_witness(g, &verdict)?;
    Ok(verdict)
}

/// Independent witness verification: embeddings must trace to genus zero,
/// subdivisions must consist of internally disjoint paths over existing
/// edges and suppress to K₅ or K₃,₃.
pub fn check_witness(g: &Multigraph, verdict: &PlanarityVerdict) -> Result<()> {
    match (&verdict.witness, verdict.planar) {
        (Witness::Embedding(rot), true) => {
            let report = genus_of_rotation(g, rot)?;
            if !report.planar {
                return Err(Error::ConstructionFailure("embedding witness fails Euler check".into()));
            }
            Ok(())
        }
        (Witness::Kuratowski(sub), false) => check_kuratowski(g, sub),
        _ => Err(Error::ConstructionFailure("witness kind contradicts verdict".into())),
    }
}

fn check_kuratowski(g: &Multigraph, sub: &KuratowskiSubdivision) -> Result<()> {
    let fail = |msg: &str| Err(Error::ConstructionFailure(format!("kuratowski witness: {msg}")));
    let branches: BTreeSet<u32> = sub.branch_vertices.iter().copied().collect();
    if branches.len() != sub.branch_vertices.len() {
        return fail("repeated branch vertex");
    }
    let (want_branches, want_paths, want_deg) = match sub.kind {
        KuratowskiKind::K5 => (5, 10, 4),
        KuratowskiKind::K33 => (6, 9, 3),
    };
    if branches.len() != want_branches || sub.paths.len() != want_paths {
        return fail("wrong branch/path counts");
    }
    // adjacency of the simple underlying graph
    let mut adj: BTreeSet<(u32, u32)> = BTreeSet::new();
    for (_, (u, v)) in g.edges() {
        adj.insert((u.min(v), u.max(v)));
    }
    let mut interior_seen: BTreeSet<u32> = BTreeSet::new();
    let mut quotient: Vec<(u32, u32)> = Vec::new();
    for path in &sub.paths {
        if path.len() < 2 {
            return fail("path too short");
        }
        let (a, b) = (path[0], *path.last().unwrap());
        if !branches.contains(&a) || !branches.contains(&b) || a == b {
            return fail("path endpoints are not distinct branch vertices");
        }
        for w in path.windows(2) {
            if w[0] == w[1] || !adj.contains(&(w[0].min(w[1]), w[0].max(w[1]))) {
                return fail("path uses a missing edge");
            }
        }
        for &x in &path[1..path.len() - 1] {
            if branches.contains(&x) || !interior_seen.insert(x) {
                return fail("paths are not internally disjoint");
            }
        }
        quotient.push((a.min(b), a.max(b)));
    }
    quotient.sort_unstable();
    quotient.dedup();
    if quotient.len() != want_paths {
        return fail("two paths join the same branch pair");
    }
    for &b in &branches {
        let d = quotient.iter().filter(|&&(x, y)| x == b || y == b).count();
        if d != want_deg {
            return fail("wrong branch degree");
        }
    }
    if sub.kind == KuratowskiKind::K33 {
        // the quotient must be bipartite 3+3: two-color it
        let mut color: BTreeMap<u32, bool> = BTreeMap::new();
        let start = *branches.iter().next().unwrap();
        let mut stack = vec![(start, false)];
        while let Some((v, c)) = stack.pop() {
            match color.insert(v, c) {
                Some(prev) if prev != c => return fail("quotient is not bipartite"),
                Some(_) => continue,
                None => {}
            }
            for &(x, y) in &quotient {
                if x == v {
                    stack.push((y, !c));
                } else if y == v {
                    stack.push((x, !c));
                }
            }
        }
        if color.values().filter(|&&c| c).count() != 3 {
            return fail("quotient sides are not 3 + 3");
        }
    }
    Ok(())
}

/// Vertex 2-connectivity: connected, at least 3 vertices, no cutvertex.
/// Loops are ignored; parallel edges do not create 2-connectivity.
pub fn is_2_connected(g: &Multigraph) -> Result<bool> {
    if g.vertex_count() < 3 {
        return Err(Error::TooSmall(g.vertex_count(), 3));
    }
    if !g.is_connected() {
        return Ok(false);
    }
    let (simple, _, _) = simplify(g);
    // iterative DFS articulation detection (Hopcroft–Tarjan low-points)
    let vs: Vec<u32> = simple.vertices().collect();
    let idx: BTreeMap<u32, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = vs.len();
    let mut adj = vec![Vec::new(); n];
    for (_, (u, v)) in simple.edges() {
        adj[idx[&u]].push(idx[&v]);
        adj[idx[&v]].push(idx[&u]);
    }
    let mut num = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut root_children = 0usize;
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    num[0] = 0;
    low[0] = 0;
    let mut counter = 1usize;
    while let Some(&(v, i)) = stack.last() {
        if i < adj[v].len() {
            stack.last_mut().expect("nonempty").1 += 1;
            let w = adj[v][i];
            if num[w] == usize::MAX {
                parent[w] = v;
                num[w] = counter;
                low[w] = counter;
                counter += 1;
                if v == 0 {
                    root_children += 1;
                }
                stack.push((w, 0));
            } else if w != parent[v] {
                low[v] = low[v].min(num[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if p != 0 && low[v] >= num[p] {
                    return Ok(false); // p is a cutvertex
                }
            }
        }
    }
    Ok(root_children <= 1)
}
