//! Multipole expansion method (MEM) for two-dimensional Helmholtz scattering
//! by disjoint, sound-soft circular cylinders.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: real-argument Bessel/Hankel functions with an extended
//!   exponent range, plus the two hypergeometric evaluators used by the
//!   convergence diagnostics.
//! - [`scene`]: cylinders, wavenumber and incident field; validation and
//!   pairwise geometry.
//! - [`assembly`]: the preconditioned block system `(I + A) Φ = G` and the
//!   quadrature oracles that certify every closed-form entry.
//! - [`solver`]: dense LU, restarted GMRES, the parallel method of
//!   reflections and the first-order (single scattering) solution.
//! - [`analysis`]: truncation-error sweeps, decay envelopes and rate fits.
//! - [`field`]: scattered/total field evaluation.
//!
//! ```
//! use multipole::{presets, solver, assembly::MemSystem};
//!
//! let scene = presets::Preset::Moderate.scene(0.6);
//! let system = MemSystem::assemble(&scene, 8).unwrap();
//! let result = solver::solve_dense(&system).unwrap();
//! assert!(result.residual < 1e-12);
//! ```

pub mod analysis;
pub mod assembly;
pub mod coeffs;
mod error;
pub mod field;
pub mod presets;
pub mod scene;
pub mod selftest;
pub mod solver;
pub mod specfun;

pub use coeffs::CoefficientVector;
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use scene::{Cylinder, IncidentField, PairGeometry, Point, Scene};
