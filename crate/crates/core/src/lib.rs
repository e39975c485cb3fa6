//! Solvers for convex quadratic programs over a box with a cardinality
//! constraint `‖x‖₀ ≤ k`, plus the instance generator and benchmarking
//! tools used to compare them.

pub mod classic_bb;
pub mod error;
pub mod flagbox;
pub mod harness;
pub mod ibb;
pub mod instance;
pub mod qp;
pub mod registry;
pub mod sfs;
pub mod solver;

pub use error::{Error, Result};
pub use qp::{IndexSet, QuadraticObjective, SearchBox};
pub use registry::{CcqoSolver, Problem, SolverRegistry};
pub use solver::{NodeSelection, SolveResult, SolverConfig, StopReason};
