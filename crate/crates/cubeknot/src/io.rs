//! Export formats: JSON (lossless, reloadable), OFF and OBJ (for external
//! mesh viewers) and DOT (graphs, via [`Multigraph::to_dot`]).
//!
//! JSON schema for a complex: `vertices` is a list of ids, `edges` a list of
//! `[id, tail, head]`, `faces` a list of `[id, walk]` where the walk is a
//! closed sequence of signed 1-based edge ids (positive = forward
//! traversal), and `coords` an optional map from vertex id to `[x, y, z]`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::complex::{EdgeId, FaceId, Step, TwoComplex, VertexId};
use crate::cuboid::Coord;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<u32>,
    /// `[id, tail, head]`
    pub edges: Vec<[u32; 3]>,
    /// `(id, signed 1-based edge ids)`
    pub faces: Vec<(u32, Vec<i64>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coords: Option<BTreeMap<u32, Coord>>,
}

impl ComplexJson {
    pub fn from_complex(c: &TwoComplex, coords: Option<&BTreeMap<VertexId, Coord>>) -> Self {
        ComplexJson {
            vertices: c.vertices().map(|v| v.0).collect(),
            edges: c.edges().map(|(e, (u, v))| [e.0, u.0, v.0]).collect(),
            faces: c
                .faces()
                .map(|(f, walk)| {
                    let signed = walk
                        .iter()
                        .map(|s| {
                            let id = i64::from(s.edge.0) + 1;
                            if s.forward { id } else { -id }
                        })
                        .collect();
                    (f.0, signed)
                })
                .collect(),
            coords: coords.map(|m| m.iter().map(|(v, &p)| (v.0, p)).collect()),
        }
    }

    pub fn to_complex(&self) -> Result<TwoComplex> {
        let mut c = TwoComplex::new();
        for &v in &self.vertices {
            c.insert_vertex(VertexId(v));
        }
        for &[e, u, v] in &self.edges {
            c.insert_edge(EdgeId(e), VertexId(u), VertexId(v))?;
        }
        for (f, signed) in &self.faces {
            let walk = signed
                .iter()
                .map(|&s| {
                    if s == 0 {
                        return Err(Error::InvalidWalk("signed edge id 0".into()));
                    }
                    let edge = EdgeId(u32::try_from(s.unsigned_abs() - 1).map_err(|_| {
                        Error::InvalidWalk(format!("edge id {s} out of range"))
                    })?);
                    Ok(Step { edge, forward: s > 0 })
                })
                .collect::<Result<Vec<_>>>()?;
            c.insert_face(FaceId(*f), walk)?;
        }
        Ok(c)
    }

    pub fn vertex_coords(&self) -> Option<BTreeMap<VertexId, Coord>> {
        self.coords
            .as_ref()
            .map(|m| m.iter().map(|(&v, &p)| (VertexId(v), p)).collect())
    }
}

/// OFF export; faces become index polygons over the vertex order of the
/// header. Edge count in the header follows the complex, as OFF permits.
pub fn off_string(c: &TwoComplex, coords: &BTreeMap<VertexId, Coord>) -> Result<String> {
    let mut out = String::from("OFF\n");
    out.push_str(&format!("{} {} {}\n", c.vertex_count(), c.face_count(), c.edge_count()));
    let index: BTreeMap<VertexId, usize> = c.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    for v in c.vertices() {
        let p = coords.get(&v).ok_or(Error::UnknownVertex(v.0))?;
        out.push_str(&format!("{} {} {}\n", p[0], p[1], p[2]));
    }
    for (f, _) in c.faces() {
        let corners = c.face_corners(f)?;
        out.push_str(&corners.len().to_string());
        for v in corners {
            out.push_str(&format!(" {}", index[&v]));
        }
        out.push('\n');
    }
    Ok(out)
}

/// OBJ export; polylines (e.g. a spine or a fundamental cycle) become `l`
/// records after the faces.
pub fn obj_string(
    c: &TwoComplex,
    coords: &BTreeMap<VertexId, Coord>,
    polylines: &[Vec<VertexId>],
) -> Result<String> {
    let mut out = String::new();
    let index: BTreeMap<VertexId, usize> = c.vertices().enumerate().map(|(i, v)| (v, i + 1)).collect();
    for v in c.vertices() {
        let p = coords.get(&v).ok_or(Error::UnknownVertex(v.0))?;
        out.push_str(&format!("v {} {} {}\n", p[0], p[1], p[2]));
    }
    for (f, _) in c.faces() {
        out.push('f');
        for v in c.face_corners(f)? {
            out.push_str(&format!(" {}", index[&v]));
        }
        out.push('\n');
    }
    for line in polylines {
        if line.is_empty() {
            continue;
        }
        out.push('l');
        for v in line {
            out.push_str(&format!(" {}", index.get(v).ok_or(Error::UnknownVertex(v.0))?));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    fs::write(path, body)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
