//! Plane linear elasticity on quadrilateral meshes with assumed-stress
//! hybrid elements.
//!
//! The crate implements the 4-node hybrid quadrilaterals PS and ECQ4,
//! in which the stress is approximated by an element-wise independent
//! 5-parameter mode and condensed out at the element level, plus the
//! standard isoparametric bilinear displacement element for comparison.
//! On top of the solver sit error norms against exact solutions, a
//! residual-based a posteriori error estimator, and a set of cantilever
//! beam benchmarks with reference tables.
//!
//! Module map:
//! - [`mesh`]: quadrilateral meshes, bilinear-map geometry, edge topology
//! - [`elements`]: material law, stress modes, quadrature, element kernels
//! - [`solver`]: assembly, boundary conditions, sparse SPD solve
//! - [`analysis`]: error norms, the estimator, convergence rates
//! - [`bench`]: benchmark cases and reference-table reproduction

pub mod analysis;
pub mod bench;
pub mod elements;
pub mod error;
pub mod mesh;
pub mod solver;

pub use error::FemError;
