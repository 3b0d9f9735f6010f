//! Construction and mechanical verification of cuboid 2-complexes whose
//! spanning trees are entangled: every fundamental cycle is nontrivially
//! knotted in the canonical embedding, and every edge contraction of the
//! contracted complex destroys embeddability in 3-space.
//!
//! The crate is organised around a small contraction calculus for
//! 2-dimensional CW complexes ([`complex`]), lattice cuboid complexes
//! ([`cuboid`]), the spine / spanning-tree / subdivision pipeline
//! ([`construction`]), planarity certification ([`planarity`]), exact
//! piecewise-linear knot projection with Fox colorings ([`knots`]) and an
//! end-to-end verification driver ([`verify`]).

pub mod complex;
pub mod construction;
pub mod cuboid;
pub mod graph;
pub mod io;
pub mod knots;
pub mod planarity;
pub mod verify;

pub use complex::TwoComplex;
pub use cuboid::CuboidComplex;
pub use graph::Multigraph;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown vertex id {0}")]
    UnknownVertex(u32),
    #[error("unknown edge id {0}")]
    UnknownEdge(u32),
    #[error("unknown face id {0}")]
    UnknownFace(u32),
    #[error("invalid face walk: {0}")]
    InvalidWalk(String),
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("degree mismatch in vertex sum: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid end pairing: {0}")]
    InvalidPairing(String),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("slab bounds out of range: [{0}, {1}]")]
    SlabBounds(i64, i64),
    #[error("construction requires n >= 20, got {0}")]
    NTooSmall(i64),
    #[error("no facial path exists within the prescribed tube: {0}")]
    NoFacialPath(String),
    #[error("construction invariant violated: {0}")]
    ConstructionFailure(String),
    #[error("edge {0} is in the spanning tree; fundamental cycles are defined for non-tree edges")]
    TreeEdge(u32),
    #[error("graph too large for this operation: {0} vertices (limit {1})")]
    TooLarge(usize, usize),
    #[error("graph too small for this operation: {0} vertices (need {1})")]
    TooSmall(usize, usize),
    #[error("invalid minor script: {0}")]
    InvalidScript(String),
    #[error("invalid knot input: {0}")]
    InvalidCycle(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
