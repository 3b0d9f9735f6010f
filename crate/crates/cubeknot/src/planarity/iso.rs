//! Exact multigraph isomorphism for small graphs (≤ 64 vertices), by
//! refinement of neighborhood signatures plus backtracking.

use std::collections::BTreeMap;

use crate::graph::Multigraph;
use crate::{Error, Result};

const LIMIT: usize = 64;

struct Encoded {
    n: usize,
    /// multiplicity matrix; `m[i][i]` counts loops
    m: Vec<Vec<u32>>,
}

fn encode(g: &Multigraph) -> Encoded {
    let idx: BTreeMap<u32, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let n = idx.len();
    let mut m = vec![vec![0u32; n]; n];
    for (_, (u, v)) in g.edges() {
        let (i, j) = (idx[&u], idx[&v]);
        if i == j {
            m[i][i] += 1;
        } else {
            m[i][j] += 1;
            m[j][i] += 1;
        }
    }
    Encoded { n, m }
}

/// Iterated 1-dimensional refinement: a vertex's color is the multiset of
/// (neighbor color, edge multiplicity) pairs plus its loop count.
fn refine(e: &Encoded) -> Vec<u64> {
    let mut color: Vec<u64> = (0..e.n)
        .map(|i| {
            let deg: u32 = e.m[i].iter().sum::<u32>() + e.m[i][i];
            (u64::from(deg) << 8) | u64::from(e.m[i][i].min(255))
        })
        .collect();
    for _ in 0..e.n {
        let mut sigs: Vec<(u64, Vec<(u64, u32)>)> = Vec::with_capacity(e.n);
        for i in 0..e.n {
            let mut s: Vec<(u64, u32)> = (0..e.n)
                .filter(|&j| j != i && e.m[i][j] > 0)
                .map(|j| (color[j], e.m[i][j]))
                .collect();
            s.sort_unstable();
            sigs.push((color[i], s));
        }
        let mut sorted: Vec<&(u64, Vec<(u64, u32)>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let new_color: Vec<u64> = sigs
            .iter()
            .map(|s| sorted.binary_search(&s).expect("present") as u64)
            .collect();
        if new_color == color {
            break;
        }
        color = new_color;
    }
    color
}

/// Exact isomorphism (respecting loop and parallel multiplicities).
pub fn is_isomorphic(g1: &Multigraph, g2: &Multigraph) -> Result<bool> {
    Ok(find_isomorphism(g1, g2)?.is_some())
}

/// Like [`is_isomorphic`], but returns one witnessing vertex bijection
/// (g1 id → g2 id) when the graphs are isomorphic.
pub fn find_isomorphism(g1: &Multigraph, g2: &Multigraph) -> Result<Option<BTreeMap<u32, u32>>> {
    let big = g1.vertex_count().max(g2.vertex_count());
    if big > LIMIT {
        return Err(Error::TooLarge(big, LIMIT));
    }
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let ids1: Vec<u32> = g1.vertices().collect();
    let ids2: Vec<u32> = g2.vertices().collect();
    let e1 = encode(g1);
    let e2 = encode(g2);
    let c1 = refine(&e1);
    let c2 = refine(&e2);
    let mut h1 = c1.clone();
    let mut h2 = c2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return Ok(None);
    }
    // assign rarest colors first
    let mut count: BTreeMap<u64, usize> = BTreeMap::new();
    for &c in &c1 {
        *count.entry(c).or_insert(0) += 1;
    }
    let mut order: Vec<usize> = (0..e1.n).collect();
    order.sort_by_key(|&i| (count[&c1[i]], c1[i], i));

    let mut map = vec![usize::MAX; e1.n]; // g1 index -> g2 index
    let mut used = vec![false; e2.n];
    fn backtrack(
        depth: usize,
        order: &[usize],
        e1: &Encoded,
        e2: &Encoded,
        c1: &[u64],
        c2: &[u64],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let i = order[depth];
        for j in 0..e2.n {
            if used[j] || c2[j] != c1[i] || e2.m[j][j] != e1.m[i][i] {
                continue;
            }
            let ok = order[..depth].iter().all(|&k| e1.m[i][k] == e2.m[j][map[k]]);
            if !ok {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if backtrack(depth + 1, order, e1, e2, c1, c2, map, used) {
                return true;
            }
            used[j] = false;
            map[i] = usize::MAX;
        }
        false
    }
    if backtrack(0, &order, &e1, &e2, &c1, &c2, &mut map, &mut used) {
        Ok(Some(
            map.iter().enumerate().map(|(i, &j)| (ids1[i], ids2[j])).collect(),
        ))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{make_double_wheel, make_g14};
    use super::*;

    #[test]
    fn relabeled_g14_is_isomorphic() {
        let g1 = make_g14();
        // rebuild with shuffled ids
        let mut g2 = Multigraph::new();
        let ids: Vec<u32> = (0..14).map(|i| (i * 5 + 3) % 14 + 100).collect();
        for &id in &ids {
            g2.insert_vertex(id);
        }
        for (_, (u, v)) in g1.edges() {
            g2.add_edge(ids[u as usize], ids[v as usize]).unwrap();
        }
        assert!(is_isomorphic(&g1, &g2).unwrap());
    }

    #[test]
    fn w2_vs_k33_differ() {
        let w2 = make_double_wheel(false);
        let mut k33 = Multigraph::new();
        for _ in 0..6 {
            k33.add_vertex();
        }
        for i in 0..3 {
            for j in 3..6 {
                k33.add_edge(i, j).unwrap();
            }
        }
        assert!(!is_isomorphic(&w2, &k33).unwrap());
    }

    #[test]
    fn multiplicities_matter() {
        let mut a = Multigraph::new();
        let mut b = Multigraph::new();
        for g in [&mut a, &mut b] {
            g.add_vertex();
            g.add_vertex();
            g.add_vertex();
        }
        // a: double edge + single; b: triangle... same degrees except shape
        a.add_edge(0, 1).unwrap();
        a.add_edge(0, 1).unwrap();
        a.add_edge(1, 2).unwrap();
        b.add_edge(0, 1).unwrap();
        b.add_edge(1, 2).unwrap();
        b.add_edge(2, 0).unwrap();
        assert!(!is_isomorphic(&a, &b).unwrap());
        assert!(is_isomorphic(&a, &a.clone()).unwrap());
    }

    #[test]
    fn loops_are_respected() {
        let mut a = Multigraph::new();
        let va = a.add_vertex();
        a.add_edge(va, va).unwrap();
        let mut b = Multigraph::new();
        b.add_vertex();
        assert!(!is_isomorphic(&a, &b).unwrap());
    }
}
