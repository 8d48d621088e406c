//! Numerical laboratory for the 3D radial focusing energy-critical
//! inhomogeneous NLS: coefficient condition checks, ground-state
//! thresholds, radial split-step evolution, virial diagnostics, and a
//! scatter/blowup evidence classifier.

pub mod classifier;
pub mod coefficient;
pub mod config;
pub mod diagnostics;
pub mod dst;
pub mod error;
pub mod evolution;
pub mod groundstate;
pub mod harness;
pub mod params;
pub mod quad;
pub mod weights;

pub use error::{Error, Result};
pub use params::ProblemParams;
