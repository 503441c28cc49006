//! Fast orthonormal transforms: unitary 1-D DFT, sequency-ordered 2-D
//! Walsh–Hadamard, and full-depth anisotropic 2-D Haar wavelets.
//!
//! All transforms require power-of-two sizes and preserve the Euclidean
//! norm; each fast path is checked against a dense matrix oracle in the
//! test suites.

pub mod dft;
pub mod haar;
pub mod walsh;

pub use dft::{dft_forward, dft_inverse, DftPlan};
pub use haar::{
    haar_1d_forward_inplace, haar_1d_inverse_inplace, haar_2d_forward, haar_2d_forward_inplace,
    haar_2d_inverse, haar_2d_inverse_inplace, haar_level_of_index,
};
pub use walsh::{dense_walsh_matrix, wht_1d, wht_2d_forward, Walsh2dPlan, WalshPlan, WalshScalar};
