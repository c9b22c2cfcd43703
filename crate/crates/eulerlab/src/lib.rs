//! Numerical laboratory for 3D incompressible Euler in the Lagrangian gauge.
//!
//! The velocity at each instant solves a first-order elliptic system that is
//! close to translation invariant; it is inverted here by an exact Fourier
//! multiplier plus a Neumann-series fixed point, turning the evolution into
//! an ODE on a ball of displacement fields. On top of that core sit weighted
//! Sobolev norms, a time integrator with conservation diagnostics, particle
//! re-labeling, perturbation about (possibly singular) reference flows, and
//! certificate checkers for self-similar profiles.

pub mod error;
pub mod fields;
pub mod linalg;
pub mod norms;

pub use error::{Error, Result};
