//! The pipeline's centerpiece: build the spine P1–P5 through the box,
//! extend it to the entangled spanning tree T′, subdivide to get C′ and
//! contract to get the one-vertex complex C″.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{EdgeId, FaceId, TwoComplex, VertexId};
use crate::cuboid::{
    crossing_set, diagonal_of, face_diagonals, two_color, Color, Coloring, Coord, CuboidComplex,
    DiagonalEdge,
};
use crate::graph::Multigraph;
use crate::knots::{self, Certification, PLCycle};
use crate::{Error, Result};

pub const MIN_N: i64 = 20;

/// One step of a facial path: either a diagonal across a face or an actual
/// edge of the complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PathStep {
    Diagonal(DiagonalEdge),
    Complex(EdgeId),
}

/// A facial path: diagonal edges (each a single segment inside a single
/// face) and occasional complex edges, with no repeated vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacialPath {
    pub vertices: Vec<VertexId>,
    pub steps: Vec<PathStep>,
}

impl FacialPath {
    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn diagonals(&self) -> impl Iterator<Item = DiagonalEdge> + '_ {
        self.steps.iter().filter_map(|s| match s {
            PathStep::Diagonal(d) => Some(*d),
            PathStep::Complex(_) => None,
        })
    }

    pub fn coords(&self, c: &CuboidComplex) -> Result<Vec<Coord>> {
        self.vertices.iter().map(|&v| c.coord(v)).collect()
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn join(mut self, other: &FacialPath) -> Result<FacialPath> {
        if self.last() != other.first() {
            return Err(Error::ConstructionFailure(
                "facial paths do not share an endpoint".into(),
            ));
        }
        self.vertices.extend(other.vertices.iter().skip(1).copied());
        self.steps.extend(other.steps.iter().copied());
        Ok(self)
    }
}

/// Checks the facial-path conditions: steps match consecutive vertex pairs,
/// no vertex repeats, diagonal endpoints are non-adjacent in the 1-skeleton
/// and opposite corners of their host face, and no two steps share a host
/// face (two diagonals of one square would cross internally).
pub fn validate_facial_path(c: &CuboidComplex, path: &FacialPath) -> Result<()> {
    if path.vertices.len() != path.steps.len() + 1 || path.steps.is_empty() {
        return Err(Error::ConstructionFailure("malformed facial path".into()));
    }
    let mut seen = BTreeSet::new();
    for &v in &path.vertices {
        if !seen.insert(v) {
            return Err(Error::ConstructionFailure("facial path repeats a vertex".into()));
        }
        c.coord(v)?;
    }
    let mut hosts = BTreeSet::new();
    for (i, step) in path.steps.iter().enumerate() {
        let (u, v) = (path.vertices[i], path.vertices[i + 1]);
        match step {
            PathStep::Diagonal(d) => {
                if DiagonalEdge::new(u, v, d.host) != *d {
                    return Err(Error::ConstructionFailure("step does not match vertices".into()));
                }
                if c.edge_between(u, v).is_some() {
                    return Err(Error::ConstructionFailure(
                        "diagonal endpoints adjacent in 1-skeleton".into(),
                    ));
                }
                let (d1, d2) = face_diagonals(c, d.host)?;
                if *d != d1 && *d != d2 {
                    return Err(Error::ConstructionFailure("diagonal not hosted by its face".into()));
                }
                if !hosts.insert(d.host) {
                    return Err(Error::ConstructionFailure("two steps share a host face".into()));
                }
            }
            PathStep::Complex(e) => {
                if c.edge_between(u, v) != Some(*e) {
                    return Err(Error::ConstructionFailure("complex step is not an edge".into()));
                }
            }
        }
    }
    Ok(())
}

/// Host-face lookup for diagonals, built once per complex.
pub struct DiagonalIndex {
    map: BTreeMap<(VertexId, VertexId), FaceId>,
}

impl DiagonalIndex {
    pub fn build(c: &CuboidComplex) -> Result<DiagonalIndex> {
        let mut map = BTreeMap::new();
        for (f, _) in c.complex.faces() {
            let (d1, d2) = face_diagonals(c, f)?;
            map.insert((d1.a, d1.b), f);
            map.insert((d2.a, d2.b), f);
        }
        Ok(DiagonalIndex { map })
    }

    pub fn diagonal(&self, a: VertexId, b: VertexId) -> Result<DiagonalEdge> {
        let key = (a.min(b), a.max(b));
        let host = self
            .map
            .get(&key)
            .copied()
            .ok_or_else(|| Error::ConstructionFailure(format!("no face hosts ({}, {})", a.0, b.0)))?;
        Ok(DiagonalEdge::new(a, b, host))
    }
}

fn path_from_coords(
    c: &CuboidComplex,
    idx: &DiagonalIndex,
    coords: &[Coord],
    complex_steps: &[usize],
) -> Result<FacialPath> {
    let mut vertices = Vec::with_capacity(coords.len());
    for &p in coords {
        vertices.push(
            c.vertex_at(p)
                .ok_or_else(|| Error::ConstructionFailure(format!("{p:?} outside the box")))?,
        );
    }
    let mut steps = Vec::with_capacity(coords.len() - 1);
    for i in 0..vertices.len() - 1 {
        let (u, v) = (vertices[i], vertices[i + 1]);
        if complex_steps.contains(&i) {
            let e = c
                .edge_between(u, v)
                .ok_or_else(|| Error::ConstructionFailure("expected a complex edge".into()))?;
            steps.push(PathStep::Complex(e));
        } else {
            steps.push(PathStep::Diagonal(idx.diagonal(u, v)?));
        }
    }
    let path = FacialPath { vertices, steps };
    validate_facial_path(c, &path)?;
    Ok(path)
}

/// Starting segment at `v`: three diagonals and one complex edge through
/// (v, v+(1,1,0), v+(1,0,1), v+(2,0,1), v+(3,1,1)); the complex edge is the
/// third step.
pub fn starting_segment(c: &CuboidComplex, idx: &DiagonalIndex, v: Coord) -> Result<FacialPath> {
    let [x, y, z] = v;
    let coords = [
        [x, y, z],
        [x + 1, y + 1, z],
        [x + 1, y, z + 1],
        [x + 2, y, z + 1],
        [x + 3, y + 1, z + 1],
    ];
    path_from_coords(c, idx, &coords, &[2])
}

/// Ending segment at `v`: (v, v+(1,1,0), v+(2,1,0), v+(2,0,1), v+(3,1,1));
/// the complex edge is the second step.
pub fn ending_segment(c: &CuboidComplex, idx: &DiagonalIndex, v: Coord) -> Result<FacialPath> {
    let [x, y, z] = v;
    let coords = [
        [x, y, z],
        [x + 1, y + 1, z],
        [x + 2, y + 1, z],
        [x + 2, y, z + 1],
        [x + 3, y + 1, z + 1],
    ];
    path_from_coords(c, idx, &coords, &[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Right,
    Left,
}

/// The two overhand waypoint polylines: axis-aligned paths through the
/// right box half (A to B) and left box half (A′ to B′).
pub fn overhand_waypoints(side: Side, n: i64) -> Result<Vec<Coord>> {
    if n < MIN_N {
        return Err(Error::NTooSmall(n));
    }
    let pts: Vec<Coord> = match side {
        Side::Right => vec![
            [n + 2, 1, 1],
            [n + 6, 1, 1],
            [n + 6, 5, 1],
            [n + 10, 5, 1],
            [n + 10, 5, 13],
            [n + 10, 13, 13],
            [n + 6, 13, 13],
            [n + 6, 13, 5],
            [n + 6, 1, 5],
            [n + 14, 1, 5],
            [n + 14, 1, 9],
            [n + 14, 9, 9],
            [n + 2, 9, 9],
        ],
        Side::Left => vec![
            [n - 1, 9, 6],
            [n - 13, 9, 6],
            [n - 13, 17, 6],
            [n - 13, 17, 10],
            [n - 5, 17, 10],
            [n - 5, 5, 10],
            [n - 5, 5, 2],
            [n - 9, 5, 2],
            [n - 9, 13, 2],
            [n - 9, 13, 14],
            [n - 5, 13, 14],
            [n - 5, 17, 14],
            [n - 1, 17, 14],
        ],
    };
    for w in pts.windows(2) {
        let moved = (0..3).filter(|&i| w[0][i] != w[1][i]).count();
        debug_assert_eq!(moved, 1, "waypoints must be axis-aligned");
    }
    Ok(pts)
}

/// Checkpoint list steering the facial-path approximation: the waypoints
/// with two extra checkpoints near the start that force a straight run of
/// three collinear diagonals (the run the knot verification later cuts at).
fn overhand_checkpoints(side: Side, n: i64) -> Result<Vec<Coord>> {
    let mut pts = overhand_waypoints(side, n)?;
    match side {
        Side::Right => {
            // A, (n+3,0,1), (n+6,3,1), then the remaining waypoints
            pts.splice(1..2, [[n + 3, 0, 1], [n + 6, 3, 1], [n + 6, 1, 1]]);
            pts.remove(3); // drop the detour back to (n+6,1,1)
        }
        Side::Left => {
            pts.splice(1..2, [[n - 10, 8, 6], [n - 13, 11, 6], [n - 13, 9, 6]]);
            pts.remove(3);
        }
    }
    Ok(pts)
}

/// Exact test: is `p` within Chebyshev distance 1 of the segment [a, b]?
fn near_segment(a: Coord, b: Coord, p: Coord) -> bool {
    // intersect per-axis constraints |p_i - a_i - t d_i| <= 1 over t in [0,1],
    // kept as exact fractions lo/den, hi/den with den > 0
    let mut lo: (i64, i64) = (0, 1);
    let mut hi: (i64, i64) = (1, 1);
    for i in 0..3 {
        let d = b[i] - a[i];
        let off = p[i] - a[i];
        if d == 0 {
            if off.abs() > 1 {
                return false;
            }
            continue;
        }
        let (mut l, mut h, mut den) = (off - 1, off + 1, d);
        if den < 0 {
            (l, h, den) = (-h, -l, -den);
        }
        // t in [l/den, h/den]
        if l * lo.1 > lo.0 * den {
            lo = (l, den);
        }
        if h * hi.1 < hi.0 * den {
            hi = (h, den);
        }
    }
    lo.0 * hi.1 <= hi.0 * lo.1
}

const DIAGONAL_MOVES: [[i64; 3]; 12] = [
    [-1, -1, 0],
    [-1, 0, -1],
    [-1, 0, 1],
    [-1, 1, 0],
    [0, -1, -1],
    [0, -1, 1],
    [0, 1, -1],
    [0, 1, 1],
    [1, -1, 0],
    [1, 0, -1],
    [1, 0, 1],
    [1, 1, 0],
];

/// Deterministic facial path through same-colored vertices visiting the
/// checkpoints in order: per leg, a breadth-first search over diagonal
/// moves inside the Chebyshev-1 tube of the leg segment, with lexicographic
/// neighbor expansion.
pub fn approximate_facial_path(
    c: &CuboidComplex,
    coloring: &Coloring,
    idx: &DiagonalIndex,
    checkpoints: &[Coord],
    interior_ok: &dyn Fn(Coord) -> bool,
) -> Result<FacialPath> {
    if checkpoints.len() < 2 {
        return Err(Error::ConstructionFailure("need at least two checkpoints".into()));
    }
    let color_of = |p: Coord| -> Result<Color> {
        let v = c
            .vertex_at(p)
            .ok_or_else(|| Error::ConstructionFailure(format!("checkpoint {p:?} outside box")))?;
        Ok(coloring.color(v))
    };
    let color = color_of(checkpoints[0])?;
    for &p in checkpoints {
        if color_of(p)? != color {
            return Err(Error::ConstructionFailure("checkpoints are not all one color".into()));
        }
    }
    let mut route: Vec<Coord> = vec![checkpoints[0]];
    let mut used: BTreeSet<Coord> = BTreeSet::new();
    used.insert(checkpoints[0]);
    let ends = (checkpoints[0], *checkpoints.last().unwrap());
    for leg in checkpoints.windows(2) {
        let (from, to) = (leg[0], leg[1]);
        let admissible = |q: Coord| -> bool {
            c.vertex_at(q).is_some()
                && near_segment(from, to, q)
                && !used.contains(&q)
                && (q == ends.0 || q == ends.1 || interior_ok(q))
        };
        // BFS with lexicographically ordered expansion
        let mut parent: BTreeMap<Coord, Coord> = BTreeMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(from);
        let mut found = from == to;
        while let Some(p) = queue.pop_front() {
            if found {
                break;
            }
            let mut next: Vec<Coord> = DIAGONAL_MOVES
                .iter()
                .map(|m| [p[0] + m[0], p[1] + m[1], p[2] + m[2]])
                .filter(|&q| admissible(q) && !parent.contains_key(&q))
                .collect();
            next.sort_unstable();
            for q in next {
                parent.insert(q, p);
                if q == to {
                    found = true;
                    break;
                }
                queue.push_back(q);
            }
        }
        if !found {
            return Err(Error::NoFacialPath(format!("no facial path from {from:?} to {to:?}")));
        }
        let mut seg = vec![to];
        while *seg.last().unwrap() != from {
            seg.push(parent[seg.last().unwrap()]);
        }
        seg.reverse();
        for &q in seg.iter().skip(1) {
            used.insert(q);
            route.push(q);
        }
    }
    path_from_coords(c, idx, &route, &[])
}

/// The three collinear diagonals from B to A′ in direction (−1, 0, −1).
pub fn build_p3(c: &CuboidComplex, idx: &DiagonalIndex, n: i64) -> Result<FacialPath> {
    if n < MIN_N {
        return Err(Error::NTooSmall(n));
    }
    let coords = [
        [n + 2, 9, 9],
        [n + 1, 9, 8],
        [n, 9, 7],
        [n - 1, 9, 6],
    ];
    path_from_coords(c, idx, &coords, &[])
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spine {
    pub p1: FacialPath,
    pub p2: FacialPath,
    pub p3: FacialPath,
    pub p4: FacialPath,
    pub p5: FacialPath,
    pub a: VertexId,
    pub b: VertexId,
    pub a_prime: VertexId,
    pub b_prime: VertexId,
    pub o: VertexId,
    pub o_prime: VertexId,
}

impl Spine {
    /// The full concatenation P1 P2 P3 P4 P5.
    pub fn full(&self) -> Result<FacialPath> {
        self.p1
            .clone()
            .join(&self.p2)?
            .join(&self.p3)?
            .join(&self.p4)?
            .join(&self.p5)
    }

    /// The doubly knotted middle part P2 P3 P4 from A to B′.
    pub fn middle(&self) -> Result<FacialPath> {
        self.p2.clone().join(&self.p3)?.join(&self.p4)
    }

    /// The two complex edges of the spine (in P1 and P5).
    pub fn complex_edges(&self) -> [EdgeId; 2] {
        let pick = |p: &FacialPath| {
            p.steps
                .iter()
                .find_map(|s| match s {
                    PathStep::Complex(e) => Some(*e),
                    PathStep::Diagonal(_) => None,
                })
                .unwrap()
        };
        [pick(&self.p1), pick(&self.p5)]
    }
}

/// The half-box parameter of a pipeline complex of size (2n+1) × n × n.
pub fn half_width(c: &CuboidComplex) -> Result<i64> {
    let (n1, n2, n3) = c.dims;
    if n1 != 2 * n2 + 1 || n2 != n3 {
        return Err(Error::InvalidDimension(format!(
            "expected a (2n+1) x n x n box, got {n1} x {n2} x {n3}"
        )));
    }
    Ok(n2)
}

/// The pipeline coloring: (n−1, 0, 0) is white.
pub fn pipeline_coloring(c: &CuboidComplex) -> Result<Coloring> {
    let n = half_width(c)?;
    let anchor = c
        .vertex_at([n - 1, 0, 0])
        .ok_or_else(|| Error::ConstructionFailure("anchor outside box".into()))?;
    two_color(c, anchor, Color::White)
}

fn scan_collinear_run(c: &CuboidComplex, path: &FacialPath) -> Result<bool> {
    let coords = path.coords(c)?;
    Ok(coords.windows(4).any(|w| {
        let d1 = [w[1][0] - w[0][0], w[1][1] - w[0][1], w[1][2] - w[0][2]];
        let d2 = [w[2][0] - w[1][0], w[2][1] - w[1][1], w[2][2] - w[1][2]];
        let d3 = [w[3][0] - w[2][0], w[3][1] - w[2][1], w[3][2] - w[2][2]];
        d1 == d2 && d2 == d3
    }))
}

fn certify_overhand(c: &CuboidComplex, path: &FacialPath) -> Result<()> {
    // closing the path with the straight last-to-first segment must give a
    // nontrivially knotted cycle with exactly 9 Fox 3-colorings (a trefoil)
    let cycle = PLCycle::new(path.coords(c)?)?;
    let d = knots::choose_generic_direction(&cycle, 0)?;
    let diagram = knots::project(&cycle, d)?;
    if knots::fox_colorings(&diagram, 3)? != 9 {
        return Err(Error::ConstructionFailure(
            "overhand path closure is not a trefoil by the coloring count".into(),
        ));
    }
    Ok(())
}

/// Builds and validates the spine for the (2n+1) × n × n box, n ≥ 20.
pub fn build_spine(
    c: &CuboidComplex,
    coloring: &Coloring,
    idx: &DiagonalIndex,
    n: i64,
) -> Result<Spine> {
    if n < MIN_N {
        return Err(Error::NTooSmall(n));
    }
    let p1 = starting_segment(c, idx, [n - 1, 0, 0])?;
    let right = overhand_checkpoints(Side::Right, n)?;
    let p2 = approximate_facial_path(c, coloring, idx, &right, &|q| q[0] >= n + 3)?;
    let p3 = build_p3(c, idx, n)?;
    let left = overhand_checkpoints(Side::Left, n)?;
    let p4 = approximate_facial_path(c, coloring, idx, &left, &|q| q[0] <= n - 2)?;
    let p5 = ending_segment(c, idx, [n - 1, 17, 14])?;
    let at = |p: Coord| {
        c.vertex_at(p)
            .ok_or_else(|| Error::ConstructionFailure(format!("{p:?} outside box")))
    };
    let spine = Spine {
        a: at([n + 2, 1, 1])?,
        b: at([n + 2, 9, 9])?,
        a_prime: at([n - 1, 9, 6])?,
        b_prime: at([n - 1, 17, 14])?,
        o: at([n, 0, 1])?,
        o_prime: at([n + 1, 18, 14])?,
        p1,
        p2,
        p3,
        p4,
        p5,
    };
    validate_spine(c, coloring, &spine, n)?;
    Ok(spine)
}

fn validate_spine(c: &CuboidComplex, coloring: &Coloring, spine: &Spine, n: i64) -> Result<()> {
    let full = spine.full()?;
    validate_facial_path(c, &full)?;
    let fail = |msg: &str| Err(Error::ConstructionFailure(format!("spine invalid: {msg}")));
    // marker wiring
    if spine.p1.last() != spine.a
        || spine.p2.first() != spine.a
        || spine.p2.last() != spine.b
        || spine.p3.first() != spine.b
        || spine.p3.last() != spine.a_prime
        || spine.p4.first() != spine.a_prime
        || spine.p4.last() != spine.b_prime
        || spine.p5.first() != spine.b_prime
    {
        return fail("marker vertices out of place");
    }
    if coloring.color(spine.a) != Color::Black || coloring.color(spine.o) != Color::White {
        return fail("marker colors wrong");
    }
    // no two non-consecutive spine vertices at Euclidean distance 1
    let coords = full.coords(c)?;
    for i in 0..coords.len() {
        for j in i + 2..coords.len() {
            let d: i64 = (0..3).map(|k| (coords[i][k] - coords[j][k]).pow(2)).sum();
            if d == 1 {
                return fail("two non-consecutive vertices at distance 1");
            }
        }
    }
    // doubly knotted conditions for the middle path P2 P3 P4:
    // 1. APB and A'PB' are disjoint with overhand structure
    let s2: BTreeSet<VertexId> = spine.p2.vertices.iter().copied().collect();
    let s4: BTreeSet<VertexId> = spine.p4.vertices.iter().copied().collect();
    if !s2.is_disjoint(&s4) {
        return fail("APB and A'PB' intersect");
    }
    certify_overhand(c, &spine.p2)?;
    certify_overhand(c, &spine.p4)?;
    // 2. each side contains three consecutive collinear diagonals
    if !scan_collinear_run(c, &spine.p2)? || !scan_collinear_run(c, &spine.p4)? {
        return fail("missing collinear diagonal triple");
    }
    // 3-5. slab memberships of the middle path
    let middle = spine.middle()?;
    for &v in &middle.vertices {
        let x = c.coord(v)?[0];
        let in_p2 = s2.contains(&v);
        let in_p4 = s4.contains(&v);
        if (x >= n + 2) != in_p2 {
            return fail("half-space x >= n+2 is not exactly APB");
        }
        if (x <= n - 1) != in_p4 {
            return fail("half-space x <= n-1 is not exactly A'PB'");
        }
        let strict_middle = x > n - 1 && x < n + 2;
        let in_p3_interior = !in_p2 && !in_p4;
        if strict_middle != in_p3_interior {
            return fail("strip n-1 < x < n+2 is not exactly the interior of BPA'");
        }
    }
    Ok(())
}

/// Greedy seeded extension of a forest to a spanning tree: remaining edge
/// ids are shuffled by the seed and added whenever they join two distinct
/// components.
pub fn extend_forest_to_spanning_tree(
    g: &crate::Multigraph,
    forest: &BTreeSet<u32>,
    seed: u64,
) -> Result<BTreeSet<u32>> {
    let verts: Vec<u32> = g.vertices().collect();
    let index: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf: Vec<usize> = (0..verts.len()).collect();
    fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut tree = BTreeSet::new();
    let join = |uf: &mut Vec<usize>, e: u32, uv: (u32, u32), tree: &mut BTreeSet<u32>| -> Result<bool> {
        let (ru, rv) = (find(uf, index[&uv.0]), find(uf, index[&uv.1]));
        if ru == rv {
            return Ok(false);
        }
        uf[ru] = rv;
        tree.insert(e);
        Ok(true)
    };
    for &e in forest {
        let uv = g.endpoints(e)?;
        if !join(&mut uf, e, uv, &mut tree)? {
            return Err(Error::ConstructionFailure("forest contains a cycle".into()));
        }
    }
    let mut rest: Vec<(u32, (u32, u32))> = g.edges().filter(|(e, _)| !forest.contains(e)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rest.shuffle(&mut rng);
    for (e, uv) in rest {
        join(&mut uf, e, uv, &mut tree)?;
    }
    if tree.len() + 1 != verts.len() {
        return Err(Error::ConstructionFailure("graph is disconnected".into()));
    }
    Ok(tree)
}

/// Graph of same-colored diagonals over the vertices passing `keep`, minus
/// the diagonals whose host face is banned. Edge ids are host face ids.
pub fn diagonal_subgraph(
    c: &CuboidComplex,
    coloring: &Coloring,
    color: Color,
    keep: &dyn Fn(Coord) -> bool,
    banned_hosts: &BTreeSet<FaceId>,
) -> Result<crate::Multigraph> {
    let mut g = crate::Multigraph::new();
    for v in c.complex.vertices() {
        if coloring.color(v) == color && keep(c.coord(v)?) {
            g.insert_vertex(v.0);
        }
    }
    for (f, _) in c.complex.faces() {
        if banned_hosts.contains(&f) {
            continue;
        }
        let d = diagonal_of(c, coloring, f, color)?;
        if keep(c.coord(d.a)?) && keep(c.coord(d.b)?) {
            g.insert_edge(f.0, d.a.0, d.b.0)?;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpanningTreePlan {
    pub spine: Spine,
    pub tb1: BTreeSet<DiagonalEdge>,
    pub tb2: BTreeSet<DiagonalEdge>,
    pub tb3: BTreeSet<DiagonalEdge>,
    pub tw1: BTreeSet<DiagonalEdge>,
    pub tw2: BTreeSet<DiagonalEdge>,
    /// I: white diagonals crossing an edge of the black tree
    pub crossing: BTreeSet<DiagonalEdge>,
    /// all diagonal edges of T′
    pub diagonals: BTreeSet<DiagonalEdge>,
    /// the two complex edges of T′ (in P1 and P5)
    pub complex_edges: [EdgeId; 2],
    /// rooted tree structure: child -> (parent, connecting step)
    pub parent: BTreeMap<VertexId, (VertexId, PathStep)>,
    pub root: VertexId,
    depth: BTreeMap<VertexId, u32>,
}

impl SpanningTreePlan {
    pub fn edge_count(&self) -> usize {
        self.diagonals.len() + 2
    }

    pub fn contains_complex_edge(&self, e: EdgeId) -> bool {
        self.complex_edges.contains(&e)
    }

    /// The unique tree path between two vertices, as vertices and steps.
    pub fn tree_path(&self, x: VertexId, y: VertexId) -> Result<(Vec<VertexId>, Vec<PathStep>)> {
        let d = |v: VertexId| self.depth.get(&v).copied().ok_or(Error::UnknownVertex(v.0));
        let (mut dx, mut dy) = (d(x)?, d(y)?);
        let (mut up_x, mut up_y) = (vec![x], vec![y]);
        let (mut sx, mut sy) = (Vec::new(), Vec::new());
        let (mut cx, mut cy) = (x, y);
        while dx > dy {
            let (p, s) = self.parent[&cx];
            up_x.push(p);
            sx.push(s);
            cx = p;
            dx -= 1;
        }
        while dy > dx {
            let (p, s) = self.parent[&cy];
            up_y.push(p);
            sy.push(s);
            cy = p;
            dy -= 1;
        }
        while cx != cy {
            let (px, stx) = self.parent[&cx];
            let (py, sty) = self.parent[&cy];
            up_x.push(px);
            sx.push(stx);
            up_y.push(py);
            sy.push(sty);
            cx = px;
            cy = py;
        }
        // up_x ends at the meeting vertex; append the reversed y side
        let mut vertices = up_x;
        vertices.pop();
        vertices.extend(up_y.into_iter().rev());
        sx.extend(sy.into_iter().rev());
        Ok((vertices, sx))
    }
}

/// G_b,centre: the black diagonal graph of the centre slab C_[n, n+1], minus
/// the first and last black spine vertices and minus the two faces whose
/// white diagonal crosses the 2nd or 2nd-to-last spine edge.
pub fn centre_black_graph(
    c: &CuboidComplex,
    coloring: &Coloring,
    spine: &Spine,
) -> Result<Multigraph> {
    let n = half_width(c)?;
    let x_of = |v: VertexId| -> i64 { c.coords[&v][0] };
    let full = spine.full()?;
    let blacks: Vec<VertexId> = full
        .vertices
        .iter()
        .copied()
        .filter(|&v| coloring.color(v) == Color::Black)
        .collect();
    let first_black = *blacks.first().unwrap();
    let last_black = *blacks.last().unwrap();
    let white_spine_diagonals: BTreeSet<DiagonalEdge> = full
        .diagonals()
        .filter(|d| coloring.color(d.a) == Color::White)
        .collect();
    let white_crossers = crossing_set(c, &white_spine_diagonals)?;
    let banned_centre: BTreeSet<FaceId> = white_crossers
        .iter()
        .filter(|d| x_of(d.a) >= n && x_of(d.a) <= n + 1 && x_of(d.b) >= n && x_of(d.b) <= n + 1)
        .map(|d| d.host)
        .collect();
    if banned_centre.len() != 2 {
        return Err(Error::ConstructionFailure(format!(
            "expected exactly 2 banned centre edges, found {}",
            banned_centre.len()
        )));
    }
    let keep_centre = |q: Coord| {
        (n..=n + 1).contains(&q[0])
            && c.vertex_at(q) != Some(first_black)
            && c.vertex_at(q) != Some(last_black)
    };
    diagonal_subgraph(c, coloring, Color::Black, &keep_centre, &banned_centre)
}

/// Builds T′ per the spanning-tree extension lemma: spanning trees of the
/// black right/left/centre diagonal graphs seeded with P2, P4 and the
/// middle P3 diagonal, then white spanning trees of the two halves avoiding
/// every diagonal that crosses the black tree.
pub fn build_t_prime(
    c: &CuboidComplex,
    coloring: &Coloring,
    idx: &DiagonalIndex,
    spine: &Spine,
    seed: u64,
) -> Result<SpanningTreePlan> {
    let n = half_width(c)?;
    let hosts = |it: &mut dyn Iterator<Item = DiagonalEdge>| -> BTreeSet<u32> {
        it.map(|d| d.host.0).collect()
    };

    // black spanning trees of the three slabs
    let g_b_right = diagonal_subgraph(c, coloring, Color::Black, &|q| q[0] >= n + 2, &BTreeSet::new())?;
    let tb1_ids = extend_forest_to_spanning_tree(
        &g_b_right,
        &hosts(&mut spine.p2.diagonals()),
        seed.wrapping_add(1),
    )?;
    let g_b_left = diagonal_subgraph(c, coloring, Color::Black, &|q| q[0] <= n - 1, &BTreeSet::new())?;
    let tb2_ids = extend_forest_to_spanning_tree(
        &g_b_left,
        &hosts(&mut spine.p4.diagonals()),
        seed.wrapping_add(2),
    )?;

    let full = spine.full()?;
    let g_b_centre = centre_black_graph(c, coloring, spine)?;
    let p3_middle: BTreeSet<u32> = spine
        .p3
        .diagonals()
        .nth(1)
        .map(|d| d.host.0)
        .into_iter()
        .collect();
    let tb3_ids = extend_forest_to_spanning_tree(&g_b_centre, &p3_middle, seed.wrapping_add(3))?;

    let to_diagonals = |ids: &BTreeSet<u32>| -> Result<BTreeSet<DiagonalEdge>> {
        ids.iter()
            .map(|&f| diagonal_of(c, coloring, FaceId(f), Color::Black))
            .collect()
    };
    let tb1 = to_diagonals(&tb1_ids)?;
    let tb2 = to_diagonals(&tb2_ids)?;
    let tb3 = to_diagonals(&tb3_ids)?;

    // T^b: the three trees plus the black diagonals of the spine
    let mut tb: BTreeSet<DiagonalEdge> = tb1.union(&tb2).copied().collect();
    tb.extend(tb3.iter().copied());
    tb.extend(full.diagonals().filter(|d| coloring.color(d.a) == Color::Black));

    // I and the two white spanning trees
    let crossing = crossing_set(c, &tb)?;
    let banned_white: BTreeSet<FaceId> = crossing.iter().map(|d| d.host).collect();
    let g_w_right = diagonal_subgraph(c, coloring, Color::White, &|q| q[0] >= n + 1, &banned_white)?;
    let p5_last_two: BTreeSet<u32> = spine.p5.diagonals().skip(1).map(|d| d.host.0).collect();
    let tw1_ids = extend_forest_to_spanning_tree(&g_w_right, &p5_last_two, seed.wrapping_add(4))?;
    let g_w_left = diagonal_subgraph(c, coloring, Color::White, &|q| q[0] <= n, &banned_white)?;
    let p1_first_two: BTreeSet<u32> = spine.p1.diagonals().take(2).map(|d| d.host.0).collect();
    let tw2_ids = extend_forest_to_spanning_tree(&g_w_left, &p1_first_two, seed.wrapping_add(5))?;
    let to_white = |ids: &BTreeSet<u32>| -> Result<BTreeSet<DiagonalEdge>> {
        ids.iter()
            .map(|&f| diagonal_of(c, coloring, FaceId(f), Color::White))
            .collect()
    };
    let tw1 = to_white(&tw1_ids)?;
    let tw2 = to_white(&tw2_ids)?;
    for d in tw1.iter().chain(tw2.iter()) {
        if crossing.contains(d) {
            return Err(Error::ConstructionFailure("white tree edge lies in I".into()));
        }
    }

    // assemble T′
    let mut diagonals = tb;
    diagonals.extend(tw1.iter().copied());
    diagonals.extend(tw2.iter().copied());
    diagonals.extend(full.diagonals());
    let complex_edges = spine.complex_edges();
    let vertex_count = c.complex.vertices().count();
    if diagonals.len() + 2 != vertex_count - 1 {
        return Err(Error::ConstructionFailure(format!(
            "T' has {} edges, expected {}",
            diagonals.len() + 2,
            vertex_count - 1
        )));
    }

    // root the tree at A and verify it spans without cycles
    let mut adjacency: BTreeMap<VertexId, Vec<(VertexId, PathStep)>> = BTreeMap::new();
    for &d in &diagonals {
        adjacency.entry(d.a).or_default().push((d.b, PathStep::Diagonal(d)));
        adjacency.entry(d.b).or_default().push((d.a, PathStep::Diagonal(d)));
    }
    for &e in &complex_edges {
        let (u, v) = c.complex.endpoints(e)?;
        adjacency.entry(u).or_default().push((v, PathStep::Complex(e)));
        adjacency.entry(v).or_default().push((u, PathStep::Complex(e)));
    }
    let root = spine.a;
    let mut parent = BTreeMap::new();
    let mut depth = BTreeMap::new();
    depth.insert(root, 0u32);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let dv = depth[&v];
        for &(w, step) in adjacency.get(&v).into_iter().flatten() {
            if depth.contains_key(&w) {
                continue;
            }
            depth.insert(w, dv + 1);
            parent.insert(w, (v, step));
            queue.push_back(w);
        }
    }
    if depth.len() != vertex_count {
        return Err(Error::ConstructionFailure("T' does not span the complex".into()));
    }
    let _ = idx; // the index is part of the construction context signature
    Ok(SpanningTreePlan {
        spine: spine.clone(),
        tb1,
        tb2,
        tb3,
        tw1,
        tw2,
        crossing,
        diagonals,
        complex_edges,
        parent,
        root,
        depth,
    })
}

/// A fundamental cycle of T′: a non-tree complex edge plus the tree path
/// between its endpoints. Stored as a closed walk whose final step is the
/// defining edge.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FundamentalCycle {
    pub edge: EdgeId,
    pub vertices: Vec<VertexId>,
    pub steps: Vec<PathStep>,
}

impl FundamentalCycle {
    pub fn contains_vertices(&self, targets: &[VertexId]) -> bool {
        targets.iter().all(|t| self.vertices.contains(t))
    }

    /// The cycle as an integer polyline (closed by construction).
    pub fn geometry(&self, c: &CuboidComplex) -> Result<PLCycle> {
        let pts: Vec<[i64; 3]> = self
            .vertices
            .iter()
            .map(|&v| c.coord(v))
            .collect::<Result<_>>()?;
        PLCycle::new(pts)
    }
}

pub fn fundamental_cycle(
    c: &CuboidComplex,
    plan: &SpanningTreePlan,
    e: EdgeId,
) -> Result<FundamentalCycle> {
    if plan.contains_complex_edge(e) {
        return Err(Error::TreeEdge(e.0));
    }
    let (u, v) = c.complex.endpoints(e)?;
    let (vertices, mut steps) = plan.tree_path(u, v)?;
    steps.push(PathStep::Complex(e));
    Ok(FundamentalCycle { edge: e, vertices, steps })
}

/// Knottedness certificate for a fundamental cycle.
pub fn certify_cycle(
    c: &CuboidComplex,
    cycle: &FundamentalCycle,
    seed: u64,
) -> Result<Certification> {
    knots::is_certified_nontrivial(&cycle.geometry(c)?, seed)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollinearTriple {
    pub e1: DiagonalEdge,
    pub e2: DiagonalEdge,
    pub e3: DiagonalEdge,
    /// the four endpoint vertices e1−, e1+ ≡ e2−, e2+ ≡ e3−, e3+
    pub endpoints: [VertexId; 4],
}

/// First run of three consecutive same-direction diagonal steps on the
/// cycle (scanning cyclically from the start).
pub fn find_collinear_triple(c: &CuboidComplex, cycle: &FundamentalCycle) -> Result<CollinearTriple> {
    let len = cycle.vertices.len();
    let coord = |i: usize| c.coord(cycle.vertices[i % len]);
    for i in 0..len {
        let mut ok = true;
        let mut dir = None;
        for k in 0..3 {
            match cycle.steps[(i + k) % len] {
                PathStep::Diagonal(_) => {}
                PathStep::Complex(_) => {
                    ok = false;
                    break;
                }
            }
            let a = coord(i + k)?;
            let b = coord(i + k + 1)?;
            let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            if *dir.get_or_insert(d) != d {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let diag = |j: usize| match cycle.steps[j % len] {
            PathStep::Diagonal(d) => d,
            PathStep::Complex(_) => unreachable!(),
        };
        return Ok(CollinearTriple {
            e1: diag(i),
            e2: diag(i + 1),
            e3: diag(i + 2),
            endpoints: [
                cycle.vertices[i % len],
                cycle.vertices[(i + 1) % len],
                cycle.vertices[(i + 2) % len],
                cycle.vertices[(i + 3) % len],
            ],
        });
    }
    Err(Error::ConstructionFailure(
        "no collinear diagonal triple on the cycle".into(),
    ))
}

/// C′: every face hosting a T′ diagonal is subdivided by it.
#[derive(Debug, Clone)]
pub struct PrimeComplex {
    pub complex: TwoComplex,
    /// chord edge id of each T′ diagonal in C′
    pub chord_of: BTreeMap<DiagonalEdge, EdgeId>,
}

pub fn build_c_prime(c: &CuboidComplex, plan: &SpanningTreePlan) -> Result<PrimeComplex> {
    let chords: Vec<(FaceId, VertexId, VertexId)> =
        plan.diagonals.iter().map(|d| (d.host, d.a, d.b)).collect();
    let faces_before = c.complex.faces().count();
    let (complex, ids) = c.complex.subdivide_faces(&chords)?;
    if complex.faces().count() != faces_before + plan.diagonals.len() {
        return Err(Error::ConstructionFailure("C' face count off".into()));
    }
    let chord_of = plan.diagonals.iter().copied().zip(ids).collect();
    Ok(PrimeComplex { complex, chord_of })
}

/// C″ = C′ / T′: contract every tree edge (all chords plus the two complex
/// edges) in one batch.
pub fn build_c_double_prime(prime: &PrimeComplex, plan: &SpanningTreePlan) -> Result<TwoComplex> {
    let mut set: BTreeSet<EdgeId> = plan.complex_edges.iter().copied().collect();
    set.extend(prime.chord_of.values().copied());
    let out = crate::complex::contract_edge_set(&prime.complex, &set)?;
    if out.vertices().count() != 1 {
        return Err(Error::ConstructionFailure("C'' is not a single vertex".into()));
    }
    Ok(out)
}
