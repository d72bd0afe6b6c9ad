//! Hermite-Padé approximants of type I and type II for Nikishin systems of
//! Cauchy transforms perturbed by rational functions, together with the
//! numerical checks that exercise their orthogonality, remainder, zero and
//! convergence properties.

pub mod error;
pub mod hermite_pade;
pub mod analysis;
pub mod measures;
pub mod nikishin;
pub mod perturbation;
pub mod numkernel;

pub use error::{Error, Result};
