//! Unitary 1-D DFT on power-of-two lengths.
//!
//! Both directions are scaled by `1/sqrt(N)` so the transform is unitary:
//! the forward and inverse matrices are conjugate transposes of each other
//! and the operator norm is exactly 1.

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

use crate::error::{Result, SpftiError};

pub(crate) fn check_power_of_two(n: usize, what: &str) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(SpftiError::Dimension(format!(
            "{what} must be a power of two >= 2, got {n}"
        )));
    }
    Ok(())
}

/// Cached FFT plans for one transform length.
pub struct DftPlan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl DftPlan {
    pub fn new(n: usize) -> Result<Self> {
        check_power_of_two(n, "DFT length")?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            forward: planner.plan_fft(n, FftDirection::Forward),
            inverse: planner.plan_fft(n, FftDirection::Inverse),
            scale: 1.0 / (n as f64).sqrt(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// In-place unitary forward DFT.
    pub fn forward_inplace(&self, x: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.n);
        self.forward.process(x);
        for v in x.iter_mut() {
            *v *= self.scale;
        }
    }

    /// In-place unitary inverse DFT (adjoint of the forward transform).
    pub fn inverse_inplace(&self, x: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.n);
        self.inverse.process(x);
        for v in x.iter_mut() {
            *v *= self.scale;
        }
    }
}

/// Unitary forward DFT of a complex signal.
pub fn dft_forward(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let plan = DftPlan::new(x.len())?;
    let mut y = x.to_vec();
    plan.forward_inplace(&mut y);
    Ok(y)
}

/// Unitary inverse DFT; exact roundtrip partner of [`dft_forward`].
pub fn dft_inverse(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let plan = DftPlan::new(x.len())?;
    let mut y = x.to_vec();
    plan.inverse_inplace(&mut y);
    Ok(y)
}
