//! First homology rank over the rationals, by exact integer elimination on
//! the sparse boundary matrices. No floating point.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use serde::{Deserialize, Serialize};

use crate::Result;

use super::TwoComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Certificate {
    pub rank: usize,
    pub d1_rank: usize,
    pub d2_rank: usize,
}

type SparseRow = BTreeMap<u32, BigInt>;

/// Rank of a sparse integer matrix by fraction-free row elimination. Each
/// update is `row ← row·p − pivot·a` followed by a gcd normalization, so all
/// intermediate values stay integral.
fn sparse_rank(mut rows: Vec<SparseRow>) -> usize {
    let mut rank = 0;
    loop {
        rows.retain(|r| !r.is_empty());
        if rows.is_empty() {
            return rank;
        }
        // sparsest row as pivot, smallest leading column breaking ties
        let (pi, _) = rows
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| (r.len(), *r.keys().next().unwrap()))
            .expect("nonempty");
        let pivot = rows.swap_remove(pi);
        let (&col, p) = pivot.iter().next().expect("nonempty row");
        let p = p.clone();
        rank += 1;
        for row in rows.iter_mut() {
            let a = match row.get(&col) {
                Some(a) => a.clone(),
                None => continue,
            };
            let mut g = BigInt::zero();
            let mut next: SparseRow = BTreeMap::new();
            // union of supports: pivot columns absent from the row still
            // contribute −pivot·a
            let cols: BTreeSet<u32> = row.keys().chain(pivot.keys()).copied().collect();
            for c in cols {
                let mut v = match row.get(&c) {
                    Some(val) => val * &p,
                    None => BigInt::zero(),
                };
                if let Some(pv) = pivot.get(&c) {
                    v -= pv * &a;
                }
                if !v.is_zero() {
                    g = g.gcd(&v);
                    next.insert(c, v);
                }
            }
            if !g.is_zero() && g != BigInt::from(1) {
                for v in next.values_mut() {
                    *v = &*v / &g;
                }
            }
            *row = next;
        }
    }
}

/// rank H₁(C; ℚ) = dim ker ∂₁ − rank ∂₂ = |E| − rank ∂₁ − rank ∂₂.
pub fn h1_rank(c: &TwoComplex) -> Result<H1Certificate> {
    // ∂₁: one row per edge, columns indexed by vertex ids; loops vanish
    let mut d1: Vec<SparseRow> = Vec::new();
    for (_, (u, v)) in c.edges() {
        let mut row = SparseRow::new();
        if u != v {
            row.insert(u.0, BigInt::from(-1));
            row.insert(v.0, BigInt::from(1));
        }
        d1.push(row);
    }
    // ∂₂: one row per face, columns indexed by edge ids; each traversal
    // contributes ±1 and opposite traversals cancel
    let mut d2: Vec<SparseRow> = Vec::new();
    for (_, walk) in c.faces() {
        let mut row: BTreeMap<u32, i64> = BTreeMap::new();
        for s in walk {
            *row.entry(s.edge.0).or_insert(0) += if s.forward { 1 } else { -1 };
        }
        d2.push(
            row.into_iter()
                .filter(|&(_, v)| v != 0)
                .map(|(c, v)| (c, BigInt::from(v)))
                .collect(),
        );
    }
    let d1_rank = sparse_rank(d1);
    let d2_rank = sparse_rank(d2);
    let rank = c.edge_count() - d1_rank - d2_rank;
    Ok(H1Certificate { rank, d1_rank, d2_rank })
}

#[cfg(test)]
mod tests {
    use super::super::Step;
    use super::*;

    #[test]
    fn single_loop_without_face_has_rank_one() {
        let mut c = TwoComplex::new();
        let v = c.add_vertex();
        c.add_edge(v, v).unwrap();
        let cert = h1_rank(&c).unwrap();
        assert_eq!(cert.rank, 1);
        assert_eq!(cert.d1_rank, 0);
        assert_eq!(cert.d2_rank, 0);
    }

    #[test]
    fn disk_on_a_loop_has_rank_zero() {
        let mut c = TwoComplex::new();
        let v = c.add_vertex();
        let e = c.add_edge(v, v).unwrap();
        c.add_face(vec![Step::fwd(e)]).unwrap();
        assert_eq!(h1_rank(&c).unwrap().rank, 0);
    }

    #[test]
    fn tree_has_rank_zero_and_full_d1() {
        let mut c = TwoComplex::new();
        let vs: Vec<_> = (0..5).map(|_| c.add_vertex()).collect();
        for i in 1..5 {
            c.add_edge(vs[0], vs[i]).unwrap();
        }
        let cert = h1_rank(&c).unwrap();
        assert_eq!(cert.rank, 0);
        assert_eq!(cert.d1_rank, 4);
    }

    #[test]
    fn circle_has_rank_one_torus_walk_has_rank_two() {
        // wedge of two loops with the commutator square is the torus: rank 2
        let mut c = TwoComplex::new();
        let v = c.add_vertex();
        let a = c.add_edge(v, v).unwrap();
        let b = c.add_edge(v, v).unwrap();
        c.add_face(vec![Step::fwd(a), Step::fwd(b), Step::bwd(a), Step::bwd(b)])
            .unwrap();
        let cert = h1_rank(&c).unwrap();
        // the commutator boundary cancels: ∂₂ = 0
        assert_eq!(cert.d2_rank, 0);
        assert_eq!(cert.rank, 2);
    }
}
