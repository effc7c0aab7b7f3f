//! Bound-state spectra of the exponentially screened Coulomb potential
//!
//! ```text
//! V(r) = -(a/r) [1 + (1 + b r) exp(-2 b r)]
//! ```
//!
//! computed three ways that check each other:
//!
//! * [`closed_form`]: the analytic β-series for the energy shifts and
//!   superpotentials of the n = 0, 1, 2 states (β = b/a),
//! * [`quadrature`]: the same correction integrals evaluated numerically
//!   against exact Coulomb wavefunctions, valid for any state,
//! * [`numerov`]: a shooting eigensolver for the untruncated potential.
//!
//! [`tables`] and [`verify`] assemble the published comparison tables and
//! the cross-route checks used by the `mgesc` command-line tool.

pub mod closed_form;
pub mod coulomb;
pub mod error;
pub mod gauss;
pub mod moderated;
pub mod numerov;
pub mod potential;
pub mod quadrature;
pub mod tables;
pub mod verify;

pub use closed_form::{EnergyBreakdown, TruncationOrder};
pub use coulomb::{CoulombState, QuantumNumbers};
pub use error::{Error, Result};
pub use numerov::{RadialGrid, ShotResult, SolverConfig};
pub use potential::{PotentialParams, SeriesCoefficients};
pub use quadrature::QuadratureSpec;
