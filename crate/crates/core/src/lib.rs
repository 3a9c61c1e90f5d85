//! Exact computational toolkit for Laakso-type graphs.
//!
//! * [`graph`] builds the graphs `X_i` and their canonical refinements.
//! * [`metric`] computes geodesic distances in integer units of `4^{-i}`.
//! * [`covering`] measures covering numbers, doubling constants and
//!   homogeneity exponents.
//! * [`diffset`] evaluates differences of distance functions in the sup norm
//!   and produces certificates that the difference set is not doubling.
//! * [`verify`] re-checks those certificates from scratch.

pub mod covering;
pub mod diffset;
pub mod error;
pub mod graph;
pub mod metric;
pub mod scaled;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{build, EdgeCycle, LaaksoGraph, Node, Point, RefinementMap, Tower, VertexId, VertexLabel, DEFAULT_CAP};
pub use scaled::{ScaledDistance, SignedDistance};
