//! Exact invariants of smooth complete toric varieties presented by their fans.
//!
//! The crate computes primitive collections and relations, the Picard number,
//! the pseudo-index via torus-invariant curves, the Mori cone, f-vectors of
//! the associated simplicial polytope, and checks the generalized Mukai
//! inequality `rho * (iota - 1) <= dim` with its equality case.
//!
//! All arithmetic is exact.

pub mod fan;
pub mod fvector;
pub mod invariants;
pub mod io;
pub mod oracle;
pub mod lattice;
pub mod par;
pub mod primitive;
pub mod report;

pub use fan::{ConeRef, Fan, FanError, RaySet};
pub use lattice::{IntegerMatrix, LatticeError, LatticeVector, RationalVector};
pub use par::Execution;
