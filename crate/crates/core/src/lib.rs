//! Numerical verification of convexity properties of weighted L2-norms
//! H(t) of harmonic functions over parameterized families of level
//! surfaces.
//!
//! Module layout:
//! - [`comparison`]: constant-curvature trigonometric comparison functions;
//! - [`geometry`]: small vector helpers and hyperspherical parameterizations;
//! - [`quadrature`]: Gauss-Legendre surface/region integration with error
//!   estimates and a Monte Carlo cross-check;
//! - [`harmonics`]: catalogs of harmonic functions with analytic gradients;
//! - [`families`]: concrete level-surface families with conditioning bounds;
//! - [`convexity`]: the verification engine for the growth, log-convexity
//!   and boundary-identity checks;
//! - [`cli`]: configuration, suites, and report writers for the binary.

pub mod cli;
pub mod comparison;
pub mod convexity;
pub mod error;
pub mod families;
pub mod geometry;
pub mod harmonics;
pub mod quadrature;

pub use error::{Error, Result};
