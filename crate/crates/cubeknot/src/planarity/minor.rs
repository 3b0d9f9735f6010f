//! K₃,₃-minor certificates: branch-set verification, conversion of a minor
//! into a subdivision (possible because K₃,₃ is subcubic), execution of
//! label-level contraction scripts, and a brute-force search for small
//! graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::Multigraph;
use crate::{Error, Result};

use super::{KuratowskiKind, KuratowskiSubdivision};

/// Branch sets for a K₃,₃ minor: the first three model one side, the last
/// three the other.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinorCertificate {
    pub branch_sets: [BTreeSet<u32>; 6],
}

/// A contraction script stated in vertex labels: each step absorbs the
/// listed vertices into the surviving labeled vertex along existing edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContractionScript {
    pub steps: Vec<(String, Vec<String>)>,
    /// the two sides of the expected K₃,₃, by label
    pub sides: ([String; 3], [String; 3]),
}

/// Checks that the branch sets are disjoint, each induces a connected
/// subgraph, and every one of the 9 cross pairs is joined by an edge.
pub fn verify_k33_branch_sets(g: &Multigraph, cert: &MinorCertificate) -> Result<bool> {
    let sets = &cert.branch_sets;
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Ok(false);
        }
        for v in s {
            if !g.has_vertex(*v) {
                return Err(Error::UnknownVertex(*v));
            }
        }
        for t in &sets[i + 1..] {
            if s.intersection(t).next().is_some() {
                return Ok(false);
            }
        }
        if g.induced_subgraph(s).connected_components().len() != 1 {
            return Ok(false);
        }
    }
    let touches = |s: &BTreeSet<u32>, t: &BTreeSet<u32>| {
        g.edges()
            .any(|(_, (u, v))| (s.contains(&u) && t.contains(&v)) || (s.contains(&v) && t.contains(&u)))
    };
    for i in 0..3 {
        for j in 3..6 {
            if !touches(&sets[i], &sets[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Converts a verified K₃,₃ minor into a subdivision witness. Each branch
/// set is reduced to a tripod (three arms meeting at a center) joining its
/// three attachment vertices; this is always possible because every model
/// vertex of K₃,₃ has degree 3.
pub fn k33_subdivision_from_branch_sets(
    g: &Multigraph,
    cert: &MinorCertificate,
) -> Result<KuratowskiSubdivision> {
    if !verify_k33_branch_sets(g, cert)? {
        return Err(Error::InvalidScript("branch sets do not certify a K3,3 minor".into()));
    }
    let sets = &cert.branch_sets;
    // one connecting edge per cross pair, smallest edge id for determinism
    let mut cross: BTreeMap<(usize, usize), (u32, u32)> = BTreeMap::new();
    for i in 0..3 {
        for j in 3..6 {
            let (e, (u, v)) = g
                .edges()
                .find(|&(_, (u, v))| {
                    (sets[i].contains(&u) && sets[j].contains(&v))
                        || (sets[i].contains(&v) && sets[j].contains(&u))
                })
                .expect("verified above");
            let _ = e;
            let (a, b) = if sets[i].contains(&u) { (u, v) } else { (v, u) };
            cross.insert((i, j), (a, b));
        }
    }
    // per set: attachments in a fixed (side, partner) order
    let mut centers = [0u32; 6];
    let mut arms: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new(); // center..attachment
    for s in 0..6 {
        let partners: Vec<usize> = if s < 3 { vec![3, 4, 5] } else { vec![0, 1, 2] };
        let atts: Vec<u32> = partners
            .iter()
            .map(|&p| {
                let k = if s < 3 { (s, p) } else { (p, s) };
                let (a, b) = cross[&k];
                if s < 3 {
                    a
                } else {
                    b
                }
            })
            .collect();
        let (center, tripod) = tripod_in(g, &sets[s], &atts)?;
        centers[s] = center;
        for (i, &p) in partners.iter().enumerate() {
            arms.insert((s, p), tripod[i].clone());
        }
    }
    let mut paths = Vec::new();
    for i in 0..3 {
        for j in 3..6 {
            let mut path: Vec<u32> = arms[&(i, j)].clone(); // center_i .. attachment
            let back = &arms[&(j, i)]; // center_j .. attachment
            path.extend(back.iter().rev());
            dedupe_consecutive(&mut path);
            paths.push(path);
        }
    }
    Ok(KuratowskiSubdivision {
        kind: KuratowskiKind::K33,
        branch_vertices: centers.to_vec(),
        paths,
    })
}

fn dedupe_consecutive(path: &mut Vec<u32>) {
    path.dedup();
}

/// Finds a center vertex and three arms (vertex paths center → attachment,
/// pairwise disjoint except at the center) inside the connected set `s`.
fn tripod_in(g: &Multigraph, s: &BTreeSet<u32>, atts: &[u32]) -> Result<(u32, Vec<Vec<u32>>)> {
    let bfs_path = |from: u32, targets: &BTreeSet<u32>, allowed: &BTreeSet<u32>| -> Option<Vec<u32>> {
        let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        parent.insert(from, from);
        while let Some(x) = queue.pop_front() {
            if targets.contains(&x) {
                let mut path = vec![x];
                let mut cur = x;
                while cur != from {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for y in g.neighbors(x) {
                if allowed.contains(&y) && !parent.contains_key(&y) {
                    parent.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        None
    };
    let fail = || Error::InvalidScript("branch set is not connected to its attachments".into());
    let (a0, a1, a2) = (atts[0], atts[1], atts[2]);
    // spine a0 → a1 inside s, then hang a2 onto the spine
    let spine = bfs_path(a0, &BTreeSet::from([a1]), s).ok_or_else(fail)?;
    let spine_set: BTreeSet<u32> = spine.iter().copied().collect();
    let hang = bfs_path(a2, &spine_set, s).ok_or_else(fail)?;
    let center = *hang.last().expect("non-empty");
    let ci = spine.iter().position(|&x| x == center).expect("on spine");
    let arm0: Vec<u32> = spine[..=ci].iter().rev().copied().collect(); // center..a0
    let arm1: Vec<u32> = spine[ci..].to_vec(); // center..a1
    let arm2: Vec<u32> = hang.iter().rev().copied().collect(); // center..a2
    Ok((center, vec![arm0, arm1, arm2]))
}

/// Executes a labeled contraction script and certifies the resulting K₃,₃:
/// the 9 cross edges must exist after contraction, and the induced branch
/// sets are re-verified against the original graph.
pub fn has_k33_minor_via(g: &Multigraph, script: &ContractionScript) -> Result<MinorCertificate> {
    let mut work = g.clone();
    // track which original vertices each survivor has absorbed
    let mut absorbed: BTreeMap<u32, BTreeSet<u32>> =
        g.vertices().map(|v| (v, BTreeSet::from([v]))).collect();
    for (survivor_label, absorbees) in &script.steps {
        for label in absorbees {
            // the survivor's id can shrink as it absorbs smaller ids
            let survivor = work
                .vertex_by_label(survivor_label)
                .ok_or_else(|| Error::InvalidScript(format!("no vertex labeled {survivor_label}")))?;
            let v = work
                .vertex_by_label(label)
                .ok_or_else(|| Error::InvalidScript(format!("no vertex labeled {label}")))?;
            if !work.neighbors(survivor).contains(&v) {
                return Err(Error::InvalidScript(format!(
                    "{survivor_label} and {label} are not adjacent"
                )));
            }
            let merged = absorbed.remove(&v).expect("tracked");
            // keep the survivor's id and label
            let keep_label = work.label(survivor).expect("labeled").to_string();
            work.identify(survivor.min(v), survivor.max(v))?;
            let kept = survivor.min(v);
            work.set_label(kept, keep_label);
            let entry = if kept == survivor {
                absorbed.get_mut(&survivor).expect("tracked")
            } else {
                // survivor id changed: move its history under the kept id
                let old = absorbed.remove(&survivor).expect("tracked");
                absorbed.entry(kept).or_default().extend(old);
                absorbed.get_mut(&kept).expect("inserted")
            };
            entry.extend(merged);
        }
    }
    let side = |labels: &[String; 3]| -> Result<Vec<u32>> {
        labels
            .iter()
            .map(|l| {
                work.vertex_by_label(l)
                    .ok_or_else(|| Error::InvalidScript(format!("no vertex labeled {l}")))
            })
            .collect()
    };
    let left = side(&script.sides.0)?;
    let right = side(&script.sides.1)?;
    for &x in &left {
        for &y in &right {
            if !work.neighbors(x).contains(&y) {
                return Err(Error::InvalidScript(format!(
                    "contracted graph lacks the {x}-{y} cross edge"
                )));
            }
        }
    }
    let branch_sets: Vec<BTreeSet<u32>> = left
        .iter()
        .chain(right.iter())
        .map(|v| absorbed[v].clone())
        .collect();
    let cert = MinorCertificate { branch_sets: branch_sets.try_into().expect("six sides") };
    if !verify_k33_branch_sets(g, &cert)? {
        return Err(Error::InvalidScript("script executed but branch sets fail verification".into()));
    }
    Ok(cert)
}

/// Exhaustive K₃,₃-minor search for graphs with at most 16 vertices:
/// recursively contract edges, testing for a K₃,₃ subgraph at each stage.
pub fn find_k33_minor(g: &Multigraph) -> Result<Option<MinorCertificate>> {
    if g.vertex_count() > 16 {
        return Err(Error::TooLarge(g.vertex_count(), 16));
    }
    // state: current partition of original vertices (branch-set candidates)
    // encoded as a simple quotient graph plus the absorbed sets
    let mut absorbed: BTreeMap<u32, BTreeSet<u32>> =
        g.vertices().map(|v| (v, BTreeSet::from([v]))).collect();
    let simple = simple_adjacency(g);
    let mut seen: BTreeSet<Vec<(u32, u32)>> = BTreeSet::new();
    Ok(search_k33(g, &simple, &mut absorbed, &mut seen))
}

fn simple_adjacency(g: &Multigraph) -> BTreeMap<u32, BTreeSet<u32>> {
    let mut adj: BTreeMap<u32, BTreeSet<u32>> = g.vertices().map(|v| (v, BTreeSet::new())).collect();
    for (_, (u, v)) in g.edges() {
        if u != v {
            adj.get_mut(&u).expect("vertex").insert(v);
            adj.get_mut(&v).expect("vertex").insert(u);
        }
    }
    adj
}

fn search_k33(
    g: &Multigraph,
    adj: &BTreeMap<u32, BTreeSet<u32>>,
    absorbed: &mut BTreeMap<u32, BTreeSet<u32>>,
    seen: &mut BTreeSet<Vec<(u32, u32)>>,
) -> Option<MinorCertificate> {
    if let Some(sides) = k33_subgraph(adj) {
        let branch_sets: Vec<BTreeSet<u32>> = sides.iter().map(|v| absorbed[v].clone()).collect();
        let cert = MinorCertificate { branch_sets: branch_sets.try_into().expect("six") };
        if verify_k33_branch_sets(g, &cert).unwrap_or(false) {
            return Some(cert);
        }
    }
    if adj.len() <= 6 {
        return None;
    }
    let mut edge_list: Vec<(u32, u32)> = Vec::new();
    for (&u, ns) in adj {
        for &v in ns {
            if u < v {
                edge_list.push((u, v));
            }
        }
    }
    if !seen.insert(edge_list.clone()) {
        return None;
    }
    for (u, v) in edge_list {
        // contract v into u
        let mut next = adj.clone();
        let nv = next.remove(&v).expect("vertex");
        for &w in &nv {
            next.get_mut(&w).expect("vertex").remove(&v);
            if w != u {
                next.get_mut(&w).expect("vertex").insert(u);
                next.get_mut(&u).expect("vertex").insert(w);
            }
        }
        let moved = absorbed.remove(&v).expect("tracked");
        absorbed.get_mut(&u).expect("tracked").extend(moved.iter().copied());
        let found = search_k33(g, &next, absorbed, seen);
        for w in &moved {
            absorbed.get_mut(&u).expect("tracked").remove(w);
        }
        absorbed.insert(v, moved);
        if found.is_some() {
            return found;
        }
    }
    None
}

/// A K₃,₃ subgraph on the given simple adjacency, if any: returns the six
/// vertices, first side then second.
fn k33_subgraph(adj: &BTreeMap<u32, BTreeSet<u32>>) -> Option<[u32; 6]> {
    let vs: Vec<u32> = adj.keys().copied().filter(|v| adj[v].len() >= 3).collect();
    let n = vs.len();
    if n < 6 {
        return None;
    }
    // all 6-subsets, then all 3+3 splits
    let mut pick = [0usize; 6];
    fn subsets(n: usize, k: usize, start: usize, pick: &mut [usize; 6], depth: usize, f: &mut impl FnMut(&[usize; 6]) -> bool) -> bool {
        if depth == k {
            return f(pick);
        }
        for i in start..n {
            pick[depth] = i;
            if subsets(n, k, i + 1, pick, depth + 1, f) {
                return true;
            }
        }
        false
    }
    let mut result = None;
    subsets(n, 6, 0, &mut pick, 0, &mut |p| {
        let six: Vec<u32> = p.iter().map(|&i| vs[i]).collect();
        // choose which two join index 0 on its side
        for a in 1..6 {
            for b in a + 1..6 {
                let left: Vec<u32> = vec![six[0], six[a], six[b]];
                let right: Vec<u32> = (1..6).filter(|&i| i != a && i != b).map(|i| six[i]).collect();
                if left
                    .iter()
                    .all(|l| right.iter().all(|r| adj[l].contains(r)))
                {
                    result = Some([left[0], left[1], left[2], right[0], right[1], right[2]]);
                    return true;
                }
            }
        }
        false
    });
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k33_itself_certifies() {
        let mut g = Multigraph::new();
        for _ in 0..6 {
            g.add_vertex();
        }
        for i in 0..3 {
            for j in 3..6 {
                g.add_edge(i, j).unwrap();
            }
        }
        let cert = find_k33_minor(&g).unwrap().expect("minor");
        assert!(verify_k33_branch_sets(&g, &cert).unwrap());
        let sub = k33_subdivision_from_branch_sets(&g, &cert).unwrap();
        assert_eq!(sub.paths.len(), 9);
    }

    #[test]
    fn k4_has_no_k33_minor() {
        let mut g = Multigraph::new();
        for _ in 0..4 {
            g.add_vertex();
        }
        for i in 0..4u32 {
            for j in i + 1..4 {
                g.add_edge(i, j).unwrap();
            }
        }
        assert!(find_k33_minor(&g).unwrap().is_none());
    }

    #[test]
    fn subdivided_k33_found_by_search_and_converted() {
        let mut g = Multigraph::new();
        for _ in 0..6 {
            g.add_vertex();
        }
        for i in 0..3u32 {
            for j in 3..6 {
                if (i, j) == (0, 3) {
                    let m = g.add_vertex();
                    g.add_edge(i, m).unwrap();
                    g.add_edge(m, j).unwrap();
                } else {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        let cert = find_k33_minor(&g).unwrap().expect("minor");
        let sub = k33_subdivision_from_branch_sets(&g, &cert).unwrap();
        assert_eq!(sub.kind, KuratowskiKind::K33);
        super::super::check_witness(
            &g,
            &super::super::PlanarityVerdict {
                planar: false,
                witness: super::super::Witness::Kuratowski(sub),
            },
        )
        .unwrap();
    }
}
