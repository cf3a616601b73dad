//! Exact computations for envelopes of free groups acting on trees.
//!
//! A free group of rank `n` acting freely and cocompactly on a tree with all
//! vertex degrees at least 3 is described by its finite quotient multigraph.
//! This crate enumerates those quotient graphs, builds the free bases that
//! come from maximal subtrees, and computes exact scale values of the basis
//! elements with respect to the full automorphism group of the covering tree.
//!
//! The modules build on each other bottom-up:
//!
//! * [`multigraph`]: dart-based multigraphs with loops, canonical keys, file format.
//! * [`enumerate`]: the class of rank-`n` graphs with minimum degree 3, up to isomorphism.
//! * [`schottky`]: spanning trees and the bases (generators, translation lengths, axes).
//! * [`colors`]: non-backtracking dart color refinement (branch types in the cover).
//! * [`scale`]: ramification profiles, the product formula and a path-counting oracle.
//! * [`volumes`]: explicit graph families, scale volumes, prime spectra, bound checks.

pub mod arith;
pub mod colors;
pub mod enumerate;
mod error;
pub mod multigraph;
pub mod scale;
pub mod schottky;
pub mod volumes;

pub use error::{Error, Result};
pub use multigraph::{CanonicalKey, Dart, Multigraph};
