//! Numerical toolkit for the trajectory representation of stationary
//! quantum mechanics.
//!
//! The central object is a pair of real independent solutions of the
//! stationary Schroedinger equation ([`SolutionBasis`]). A [`Microstate`]
//! -- three real coefficients (a, b, c) with a, b and ab - c^2/4 positive --
//! selects one solution of the corresponding quantum Hamilton-Jacobi
//! equation; from it the crate derives the conjugate momentum and reduced
//! action ([`qshje`]), equations of motion and the classical limit
//! ([`trajectory`]), barrier traversal in closed form ([`tunneling`]),
//! bound-state trajectories ([`boundstate`]), and the quantum-potential
//! comparison machinery ([`bohm`]).

// Validation deliberately writes `!(x > 0.0)`: unlike `x <= 0.0`, it also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod bohm;
pub mod boundstate;
pub mod error;
mod numeric;
pub mod potential;
pub mod qshje;
pub mod tolerances;
pub mod trajectory;
pub mod tunneling;

pub use basis::{BasisSample, SolutionBasis};
pub use error::{Error, Result};
pub use potential::Potential;
pub use qshje::{ActionRecord, Microstate};
