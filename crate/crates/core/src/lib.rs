//! Bound states of the Hulthén + Yukawa + inverse-quadratic potential.
//!
//! Closed-form Nikiforov–Uvarov spectra under the Greene–Aldrich
//! approximation, Hellmann–Feynman expectation values, and an independent
//! finite-difference / Numerov solver used to cross-check them.

pub mod checks;
pub mod commands;
pub mod constants;
pub mod error;
pub mod figures;
pub mod fixtures;
pub mod hft;
pub mod jacobi;
pub mod oracle;
pub mod output;
pub mod potential;
pub mod quadrature;
pub mod spectrum;
pub mod tridiag;

pub use constants::{get_molecule, hbar2_over_2mu, Molecule, PhysicalConstants, Registry, UnitMode};
pub use error::{Error, Result};
pub use potential::PotentialParams;
