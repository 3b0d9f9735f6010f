//! The named graphs appearing in the contraction analysis: G₁₄ (the link at
//! the merged vertex after contracting the middle diagonal of a collinear
//! triple), G₁₃ (its quotient identifying Y₃,₁ and Y₃,₂), and the double
//! wheel W² with its one-edge-deleted variant.

use crate::graph::Multigraph;

const G14_VERTICES: [&str; 14] = [
    "X1", "X2", "X3", "Y1", "Y2", "Y31", "Y32", "K", "L", "M", "N", "Q", "R", "S",
];

const G14_EDGES: [(&str, &str); 26] = [
    ("X1", "Y1"),
    ("X1", "Y2"),
    ("X2", "Y1"),
    ("X2", "Y2"),
    ("X3", "Y1"),
    ("X3", "Y2"),
    ("X1", "Y31"),
    ("X3", "K"),
    ("K", "Y31"),
    ("X2", "L"),
    ("L", "M"),
    ("M", "Y32"),
    ("Y2", "K"),
    ("Y1", "K"),
    ("X1", "X2"),
    ("X3", "S"),
    ("L", "Q"),
    ("L", "N"),
    ("M", "Q"),
    ("M", "N"),
    ("R", "Y32"),
    ("R", "Q"),
    ("R", "N"),
    ("R", "S"),
    ("S", "Q"),
    ("S", "N"),
];

/// G₁₄: 14 labeled vertices, 26 edges.
pub fn make_g14() -> Multigraph {
    let mut g = Multigraph::new();
    for name in G14_VERTICES {
        let v = g.add_vertex();
        g.set_label(v, name);
    }
    for (a, b) in G14_EDGES {
        let u = g.vertex_by_label(a).expect("named vertex");
        let v = g.vertex_by_label(b).expect("named vertex");
        g.add_edge(u, v).expect("vertices exist");
    }
    g
}

/// G₁₃: G₁₄ with Y₃,₁ and Y₃,₂ identified into a vertex labeled Y3.
pub fn make_g13() -> Multigraph {
    let mut g = make_g14();
    let y31 = g.vertex_by_label("Y31").expect("named vertex");
    let y32 = g.vertex_by_label("Y32").expect("named vertex");
    let keep = y31.min(y32);
    g.identify(keep, y31.max(y32)).expect("both exist");
    g.set_label(keep, "Y3");
    g
}

/// The double wheel W² (octahedron: complement of a perfect matching on six
/// vertices); with `modified` one edge between two degree-4 hub vertices is
/// removed, giving W²∖e.
pub fn make_double_wheel(modified: bool) -> Multigraph {
    let mut g = Multigraph::new();
    for i in 0..6u32 {
        let v = g.add_vertex();
        g.set_label(v, format!("w{i}"));
    }
    // matching 0-1, 2-3, 4-5 removed from K6
    for i in 0..6u32 {
        for j in i + 1..6 {
            if j == i + 1 && i % 2 == 0 {
                continue;
            }
            if modified && (i, j) == (0, 2) {
                continue;
            }
            g.add_edge(i, j).unwrap();
        }
    }
    g
}
