//! Quadrature, Bessel functions, and least-squares fitting shared by the engines.

pub mod bessel;
pub mod fit;
pub mod quadrature;
pub mod simplex;

pub use bessel::{bessel_j, bessel_j_normalized};
pub use fit::{loglog_fit, ols, LinearFit};
pub use simplex::{nelder_mead, SimplexResult};
pub use quadrature::{adaptive_gl, gauss_legendre, integrate_gl, AdaptiveOptions};
