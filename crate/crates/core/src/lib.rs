//! Dilation (stretch factor) toolkit for plane geometric graphs.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`geometry`] — planar primitives, predicates with documented tolerances,
//!   and the point-set generators used throughout (regular n-gons, the 13-point
//!   hexagonal set, the pentagon set, collinear extensions).
//! * [`graph`] — geometric graphs (points + straight-line edges), plane
//!   validation, shortest paths, and the stretch-factor computation with
//!   deterministic witnesses.
//! * [`convex`] — everything specific to triangulations of the regular n-gon:
//!   chord arithmetic in closed form, exhaustive enumeration with certified
//!   pruning, random sampling, and an edge-flip local search.
//! * [`constructions`] — named point/edge configurations with known stretch
//!   values, plus a randomized falsification search for degree-bounded
//!   spanners.
//! * [`greedy`] — greedy triangulations, the six-point parallelogram family
//!   with its analytic stretch bound, and experiment harnesses.
//! * [`svg`] — deterministic SVG rendering of graphs and dilation witnesses.

pub mod constructions;
pub mod convex;
pub mod geometry;
pub mod graph;
pub mod greedy;
pub mod svg;

pub use geometry::{Point, PointSet};
pub use graph::{DilationReport, GeometricGraph};
