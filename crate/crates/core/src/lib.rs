//! Fractal classification of fractional-spin particle classes.
//!
//! A universal class is labelled by its Hausdorff dimension `h` in `[1, 2]`
//! (fermions at 1, bosons at 2). This crate provides:
//!
//! - [`classes`]: the banded fractal spectrum `nu -> h`, duality `h -> 3 - h`,
//!   supersymmetric spin pairs and class membership, in exact rationals;
//! - [`solver`]: the fractal distribution `n = 1/(Y - h)` with `Y[xi]` from
//!   `(Y - 1)^(h - 1) (Y - 2)^(2 - h) = xi`;
//! - [`entropy`]: statistical weights, microstate probabilities and three
//!   equivalent forms of the entropy per state;
//! - [`entanglement`]: the occupation-number entanglement measure `E[h, p]`,
//!   capped occupation bases and amplitude files;
//! - [`fqhe`]: Farey transition graphs, dual filling factors and
//!   low-temperature occupation tables.

pub mod classes;
pub mod entanglement;
pub mod entropy;
pub mod error;
pub mod fqhe;
pub mod solver;

pub use classes::{
    class_from_nu, class_members, dual_class, dual_filling, susy_partner_spin, FillingFactor,
    FractonClass,
};
pub use error::{Error, Result};
pub use solver::{solve_y, SolverOptions, SolverPoint, StatisticalPoint};
