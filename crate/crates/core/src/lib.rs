//! Discontinuous Galerkin time stepping for the time-fractional diffusion
//! and wave equation `u' + d_t^{-alpha} A u = f` on `(0, 1)`.
//!
//! The scheme uses piecewise-linear (in time) discontinuous trial functions
//! on graded meshes, continuous P1 finite elements in space and exact
//! memory weights for the fractional operator. [`reference`] provides the
//! series solution of the model problem and the error measures, and
//! [`postprocess`] the superconvergent interpolation postprocessor.

pub mod banded;
pub mod dg;
pub mod error;
pub mod fem;
pub mod kernel;
pub mod mesh;
pub mod postprocess;
pub mod quadrature;
pub mod reference;

pub use dg::{residual_gn, solve, stability_check, DgSolution, DgStepper, ProblemSpec, Side};
pub use error::{Error, Result};
pub use fem::SpatialGrid;
pub use kernel::{mittag_leffler, FracOrder};
pub use mesh::TimeMesh;
pub use postprocess::PostprocessedSolution;
pub use reference::{global_pp_error, nodal_errors, observed_rate, ExactSolution, LeftRange};
