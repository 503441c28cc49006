//! The analysis operator of the recovery program and operator-norm
//! estimation for step-size validation.

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acquisition::ForwardModel;
use crate::error::Result;
use crate::sampling::SamplingPattern;
use crate::transforms::dft::DftPlan;
use crate::transforms::haar::{haar_2d_forward_inplace, haar_2d_inverse_inplace};

/// Unitary analysis map of the recovery objective: forward DFT along the
/// spectral axis and 2-D Haar analysis along each (reshaped) spatial row.
/// Its adjoint is the exact synthesis inverse.
pub struct AnalysisPlan {
    n_xi: usize,
    nx: usize,
    ny: usize,
    dft: DftPlan,
}

impl AnalysisPlan {
    pub fn new(n_xi: usize, nx: usize, ny: usize) -> Result<Self> {
        crate::transforms::dft::check_power_of_two(nx, "nx")?;
        crate::transforms::dft::check_power_of_two(ny, "ny")?;
        Ok(Self {
            n_xi,
            nx,
            ny,
            dft: DftPlan::new(n_xi)?,
        })
    }

    pub fn n_p(&self) -> usize {
        self.nx * self.ny
    }

    fn spectral_pass(&self, data: &mut Array2<Complex64>, inverse: bool) {
        let mut col = vec![Complex64::ZERO; self.n_xi];
        for j in 0..self.n_p() {
            for (i, v) in col.iter_mut().enumerate() {
                *v = data[[i, j]];
            }
            if inverse {
                self.dft.inverse_inplace(&mut col);
            } else {
                self.dft.forward_inplace(&mut col);
            }
            for (i, &v) in col.iter().enumerate() {
                data[[i, j]] = v;
            }
        }
    }

    fn spatial_pass(&self, data: &mut Array2<Complex64>, inverse: bool) {
        for i in 0..self.n_xi {
            let row = data.row(i).to_vec();
            let mut img = Array2::from_shape_vec((self.nx, self.ny), row).expect("shape");
            if inverse {
                haar_2d_inverse_inplace(&mut img);
            } else {
                haar_2d_forward_inplace(&mut img);
            }
            let flat = img.as_slice().expect("contiguous");
            for (j, &v) in flat.iter().enumerate() {
                data[[i, j]] = v;
            }
        }
    }

    /// Analysis coefficients of a complex volume.
    pub fn analysis(&self, u: &Array2<Complex64>) -> Array2<Complex64> {
        debug_assert_eq!(u.dim(), (self.n_xi, self.n_p()));
        let mut out = u.clone();
        self.spectral_pass(&mut out, false);
        self.spatial_pass(&mut out, false);
        out
    }

    /// Adjoint (= inverse) of [`Self::analysis`].
    pub fn synthesis(&self, w: &Array2<Complex64>) -> Array2<Complex64> {
        debug_assert_eq!(w.dim(), (self.n_xi, self.n_p()));
        let mut out = w.clone();
        self.spatial_pass(&mut out, true);
        self.spectral_pass(&mut out, true);
        out
    }
}

/// A complex linear map with an adjoint, seen as flat vectors.
pub trait LinearOperator {
    fn domain_len(&self) -> usize;
    fn range_len(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64>;
}

/// The SP-FTI measurement map as a [`LinearOperator`].
pub struct MeasurementOperator<'a> {
    pub model: &'a ForwardModel,
    pub pattern: &'a SamplingPattern,
}

impl LinearOperator for MeasurementOperator<'_> {
    fn domain_len(&self) -> usize {
        self.model.n_xi() * self.model.n_p()
    }

    fn range_len(&self) -> usize {
        self.pattern.m_xi() * self.pattern.m_p()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let u = Array2::from_shape_vec((self.model.n_xi(), self.model.n_p()), x.to_vec())
            .expect("shape");
        let y = self
            .model
            .forward_complex(&u, self.pattern)
            .expect("validated geometry");
        y.into_raw_vec_and_offset().0
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let ym = Array2::from_shape_vec((self.pattern.m_xi(), self.pattern.m_p()), y.to_vec())
            .expect("shape");
        let u = self
            .model
            .adjoint(&ym, self.pattern)
            .expect("validated geometry");
        u.into_raw_vec_and_offset().0
    }
}

/// The analysis map as a [`LinearOperator`].
pub struct AnalysisOperator<'a> {
    pub plan: &'a AnalysisPlan,
    pub n_xi: usize,
}

impl LinearOperator for AnalysisOperator<'_> {
    fn domain_len(&self) -> usize {
        self.n_xi * self.plan.n_p()
    }

    fn range_len(&self) -> usize {
        self.domain_len()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let u =
            Array2::from_shape_vec((self.n_xi, self.plan.n_p()), x.to_vec()).expect("shape");
        self.plan.analysis(&u).into_raw_vec_and_offset().0
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let w =
            Array2::from_shape_vec((self.n_xi, self.plan.n_p()), y.to_vec()).expect("shape");
        self.plan.synthesis(&w).into_raw_vec_and_offset().0
    }
}

/// Vertical stack `[analysis; measurement]` whose norm bounds the
/// primal–dual step sizes.
pub struct StackedOperator<'a> {
    pub analysis: AnalysisOperator<'a>,
    pub measurement: MeasurementOperator<'a>,
}

impl LinearOperator for StackedOperator<'_> {
    fn domain_len(&self) -> usize {
        self.analysis.domain_len()
    }

    fn range_len(&self) -> usize {
        self.analysis.range_len() + self.measurement.range_len()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = self.analysis.apply(x);
        out.extend(self.measurement.apply(x));
        out
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let split = self.analysis.range_len();
        let mut out = self.analysis.apply_adjoint(&y[..split]);
        let from_meas = self.measurement.apply_adjoint(&y[split..]);
        for (a, b) in out.iter_mut().zip(from_meas) {
            *a += b;
        }
        out
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Power iteration estimate of the operator norm of `op`.
///
/// Iterates on `op* . op` from a seeded random start; the returned
/// Rayleigh-quotient estimates grow monotonically toward the true norm.
pub fn operator_norm_estimate(op: &dyn LinearOperator, iters: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..op.domain_len())
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let mut estimate = 0.0;
    for _ in 0..iters {
        let vn = norm(&v);
        if vn == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|x| *x /= vn);
        let w = op.apply(&v);
        estimate = norm(&w);
        v = op.apply_adjoint(&w);
    }
    estimate
}
