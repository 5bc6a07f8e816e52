//! Radiative-transfer lattice-Boltzmann toolkit.
//!
//! A two-direction transport equation is stepped on a periodic 1-D lattice by
//! three interchangeable strategies: a quantum pipeline built on an in-crate
//! statevector simulator (collision realized as a linear combination of two
//! single-qubit unitaries, source injection and lattice shifts as controlled
//! circuits, intensities recovered by post-selecting three ancillas), a
//! direct classical iteration of the same update, and — for steady-state
//! validation — a closed-form piecewise-exponential solution.

pub mod analytic;
pub mod classical;
pub mod circuits;
pub mod error;
pub mod qsim;
pub mod rte;
pub mod solver;

pub use error::{Error, Result};
pub use rte::{LatticeField, RteConfig, RunOutput, SourceSpec, StepDiagnostics, StepMode};
pub use solver::{Solver, SolverRegistry};
