//! Numerical tools for Gaussian time-frequency localization operators: Hilbert–Schmidt norms
//! by several independent routes, discretized spectra, symmetric rearrangement, Fraenkel
//! asymmetry, rearrangement deficits with exponent fits, the short-time Fourier transform,
//! and the Cauchy-wavelet kernel on the hyperbolic half-plane.

pub mod asymmetry;
pub mod cli;
pub mod deficit_lab;
mod error;
pub mod hs_engine;
pub mod hyperbolic;
pub mod numerics;
pub mod phase_space;
pub mod rearrange;
pub mod spectral;
pub mod stft;

pub use error::{Error, Result};
