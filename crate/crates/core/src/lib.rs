//! Equivariant-degree bifurcation invariants for a ring of N identical, delayed and
//! damped wave equations coupled through the cycle graph Laplacian.
//!
//! The crate is layered bottom-up:
//! [`groups`] builds the finite symmetry groups and their subgroup lattices,
//! [`burnside`] and [`twisted`] implement the Burnside ring and its twisted module,
//! [`reps`] and [`degrees`] supply representations and basic degrees,
//! [`spectrum`] holds the analytic eigenvalue formulas, [`bifurcation`] assembles
//! invariants and branch predictions, and [`verify`] cross-checks everything against
//! discretized linearizations.

pub mod bifurcation;
pub mod burnside;
pub mod context;
pub mod degrees;
pub mod error;
pub mod exec;
pub mod groups;
pub mod reps;
pub mod spectrum;
pub mod turn;
pub mod twisted;
pub mod verify;

pub use context::SymmetryContext;
pub use error::{Error, Result};
pub use exec::Exec;
