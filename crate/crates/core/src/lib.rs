//! Kernel for Σ-complexes: polyhedral complexes whose edges are drawn from a
//! four-vector star that folds flat into either vertical coordinate plane.
//!
//! The crate is organised bottom-up:
//!
//! - [`star`] holds the one-parameter star family and the folding law.
//! - [`lattice`] provides integer star coordinates and period lattices.
//! - [`complex`] is the combinatorial model: facets, incidence, vertex types,
//!   curvature and genus, and the legal-move engine used for design.
//! - [`geometry`] realizes a complex at a fold parameter and checks
//!   congruence, collapse and self-intersection.
//! - [`generators`] builds the named example complexes.
//! - [`io`] reads and writes complex documents, OBJ meshes and animations.

pub mod complex;
pub mod generators;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod star;

pub use complex::{ComplexError, Edge, Facet, FacetType, SigmaComplex};
pub use lattice::{Coord4, PeriodLattice};
pub use star::{StarParams, StarState};
