//! Compressive hyperspectral acquisition with a single-pixel Fourier
//! transform interferometer: fast transforms, multilevel sampling design,
//! the subsampled Fourier–Hadamard forward model, and constrained
//! analysis-l1 recovery.

pub mod acquisition;
pub mod error;
pub mod phantom;
pub mod sampling;
pub mod solver;
pub mod transforms;

pub use error::{Result, SpftiError};
