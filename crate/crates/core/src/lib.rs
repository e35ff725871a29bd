//! Exact classification invariants of real abelian varieties and abelian Nash
//! manifolds, computed from real lattices.

pub mod classify;
pub mod components;
pub mod io;
pub mod isogeny;
pub mod kernel;
pub mod lattice;
pub mod polarization;
