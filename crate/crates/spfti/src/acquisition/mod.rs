//! The SP-FTI forward model: fast subsampled Fourier–Hadamard sensing of a
//! hyperspectral volume, its adjoint, and Nyquist-domain noise injection.

pub mod metrics;

pub use metrics::{err, mur};

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Result, SpftiError};
use crate::sampling::SamplingPattern;
use crate::transforms::dft::{check_power_of_two, DftPlan};
use crate::transforms::walsh::Walsh2dPlan;

/// A real spectral-by-spatial data volume: `n_nu` wavenumber samples by
/// `nx * ny` pixels, pixels flattened row-major over `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperCube {
    values: Array2<f64>,
    nx: usize,
    ny: usize,
    /// Optional per-bin wavelength axis in nanometers.
    pub wavelength_nm: Option<Vec<f64>>,
}

impl HyperCube {
    pub fn new(values: Array2<f64>, nx: usize, ny: usize) -> Result<Self> {
        let (n_nu, n_p) = values.dim();
        check_power_of_two(n_nu, "spectral size")?;
        check_power_of_two(nx, "nx")?;
        check_power_of_two(ny, "ny")?;
        if nx * ny != n_p {
            return Err(SpftiError::Dimension(format!(
                "{nx}x{ny} pixels do not match {n_p} columns"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SpftiError::Config("volume contains non-finite values".into()));
        }
        Ok(Self {
            values,
            nx,
            ny,
            wavelength_nm: None,
        })
    }

    pub fn zeros(n_nu: usize, nx: usize, ny: usize) -> Result<Self> {
        Self::new(Array2::zeros((n_nu, nx * ny)), nx, ny)
    }

    pub fn n_nu(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_p(&self) -> usize {
        self.values.ncols()
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    /// Frobenius norm of the volume.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// One spectral slice as an `nx x ny` image.
    pub fn slice_image(&self, nu_index: usize) -> Result<Array2<f64>> {
        if nu_index >= self.n_nu() {
            return Err(SpftiError::Dimension(format!(
                "slice {nu_index} out of range for {} bins",
                self.n_nu()
            )));
        }
        let row = self.values.row(nu_index);
        Ok(Array2::from_shape_vec((self.nx, self.ny), row.to_vec()).expect("shape"))
    }

    /// The spectrum at pixel `(ix, iy)`.
    pub fn spectrum_at(&self, ix: usize, iy: usize) -> Result<Array1<f64>> {
        if ix >= self.nx || iy >= self.ny {
            return Err(SpftiError::Dimension(format!(
                "pixel ({ix}, {iy}) out of range for {}x{}",
                self.nx, self.ny
            )));
        }
        Ok(self.values.column(ix * self.ny + iy).to_owned())
    }
}

/// Plans for the fast SP-FTI measurement operator of one geometry.
pub struct ForwardModel {
    n_xi: usize,
    nx: usize,
    ny: usize,
    dft: DftPlan,
    walsh: Walsh2dPlan,
}

impl ForwardModel {
    pub fn new(n_xi: usize, nx: usize, ny: usize) -> Result<Self> {
        Ok(Self {
            n_xi,
            nx,
            ny,
            dft: DftPlan::new(n_xi)?,
            walsh: Walsh2dPlan::new(nx, ny)?,
        })
    }

    pub fn n_xi(&self) -> usize {
        self.n_xi
    }

    pub fn n_p(&self) -> usize {
        self.nx * self.ny
    }

    fn check_pattern(&self, pattern: &SamplingPattern) -> Result<()> {
        if pattern.n_xi() != self.n_xi || (pattern.nx, pattern.ny) != (self.nx, self.ny) {
            return Err(SpftiError::Dimension(format!(
                "pattern geometry ({}, {}x{}) does not match model ({}, {}x{})",
                pattern.n_xi(),
                pattern.nx,
                pattern.ny,
                self.n_xi,
                self.nx,
                self.ny
            )));
        }
        if pattern.omega_xi().iter().any(|&i| i >= self.n_xi)
            || pattern.omega_p().iter().any(|&i| i >= self.n_p())
        {
            return Err(SpftiError::Dimension("pattern index out of range".into()));
        }
        Ok(())
    }

    /// Unitary DFT along the spectral axis followed by the 2-D sequency WHT
    /// along each (reshaped) spatial row, without subsampling.
    fn transform_full(&self, u: &Array2<Complex64>) -> Array2<Complex64> {
        let n_p = self.n_p();
        let mut out = u.clone();
        let mut col = vec![Complex64::ZERO; self.n_xi];
        for j in 0..n_p {
            for (i, v) in col.iter_mut().enumerate() {
                *v = out[[i, j]];
            }
            self.dft.forward_inplace(&mut col);
            for (i, &v) in col.iter().enumerate() {
                out[[i, j]] = v;
            }
        }
        for i in 0..self.n_xi {
            let row = out.row(i).to_vec();
            let mut img = Array2::from_shape_vec((self.nx, self.ny), row).expect("shape");
            self.walsh.transform_inplace(&mut img);
            let flat = img.as_slice().expect("contiguous");
            for (j, &v) in flat.iter().enumerate() {
                out[[i, j]] = v;
            }
        }
        out
    }

    /// Inverse of [`Self::transform_full`]: WHT (self-inverse) along the
    /// spatial axis, then inverse DFT along the spectral axis.
    fn transform_full_adjoint(&self, z: &Array2<Complex64>) -> Array2<Complex64> {
        let n_p = self.n_p();
        let mut out = z.clone();
        for i in 0..self.n_xi {
            let row = out.row(i).to_vec();
            let mut img = Array2::from_shape_vec((self.nx, self.ny), row).expect("shape");
            self.walsh.transform_inplace(&mut img);
            let flat = img.as_slice().expect("contiguous");
            for (j, &v) in flat.iter().enumerate() {
                out[[i, j]] = v;
            }
        }
        let mut col = vec![Complex64::ZERO; self.n_xi];
        for j in 0..n_p {
            for (i, v) in col.iter_mut().enumerate() {
                *v = out[[i, j]];
            }
            self.dft.inverse_inplace(&mut col);
            for (i, &v) in col.iter().enumerate() {
                out[[i, j]] = v;
            }
        }
        out
    }

    /// Measurement operator on a complex volume: transform, then keep the
    /// rows in `omega_xi` and columns in `omega_p`.
    pub fn forward_complex(
        &self,
        u: &Array2<Complex64>,
        pattern: &SamplingPattern,
    ) -> Result<Array2<Complex64>> {
        self.check_pattern(pattern)?;
        if u.dim() != (self.n_xi, self.n_p()) {
            return Err(SpftiError::Dimension(format!(
                "volume of {:?} does not match model ({}, {})",
                u.dim(),
                self.n_xi,
                self.n_p()
            )));
        }
        let full = self.transform_full(u);
        let mut y = Array2::zeros((pattern.m_xi(), pattern.m_p()));
        for (a, &i) in pattern.omega_xi().iter().enumerate() {
            for (b, &j) in pattern.omega_p().iter().enumerate() {
                y[[a, b]] = full[[i, j]];
            }
        }
        Ok(y)
    }

    /// Measurement operator on a real hyperspectral volume.
    pub fn forward(&self, x: &HyperCube, pattern: &SamplingPattern) -> Result<Array2<Complex64>> {
        let u = x.values().mapv(|v| Complex64::new(v, 0.0));
        self.forward_complex(&u, pattern)
    }

    /// Adjoint of [`Self::forward_complex`]: zero-fill the measurements into
    /// the full grid, then apply the inverse transforms.
    pub fn adjoint(
        &self,
        y: &Array2<Complex64>,
        pattern: &SamplingPattern,
    ) -> Result<Array2<Complex64>> {
        self.check_pattern(pattern)?;
        if y.dim() != (pattern.m_xi(), pattern.m_p()) {
            return Err(SpftiError::Dimension(format!(
                "measurements of {:?} do not match pattern ({}, {})",
                y.dim(),
                pattern.m_xi(),
                pattern.m_p()
            )));
        }
        let mut full = Array2::zeros((self.n_xi, self.n_p()));
        for (a, &i) in pattern.omega_xi().iter().enumerate() {
            for (b, &j) in pattern.omega_p().iter().enumerate() {
                full[[i, j]] = y[[a, b]];
            }
        }
        Ok(self.transform_full_adjoint(&full))
    }
}

/// Measurements with their noise level and fidelity radius.
#[derive(Debug, Clone)]
pub struct MeasurementSet {
    pub y: Array2<Complex64>,
    pub sigma_nyq: f64,
    pub epsilon: f64,
    pub pattern: SamplingPattern,
}

impl MeasurementSet {
    /// The default fidelity radius for noise level `sigma` on an
    /// `m_xi x m_p` measurement grid.
    pub fn default_epsilon(sigma: f64, m_xi: usize, m_p: usize) -> f64 {
        sigma * ((m_xi * m_p) as f64).sqrt()
    }

    /// Override the auto-derived fidelity radius.
    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if epsilon < 0.0 {
            return Err(SpftiError::Config(format!("negative epsilon {epsilon}")));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn m_xi(&self) -> usize {
        self.y.nrows()
    }

    pub fn m_p(&self) -> usize {
        self.y.ncols()
    }

    /// Frobenius norm of the measurement matrix.
    pub fn norm(&self) -> f64 {
        self.y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Add real i.i.d. Gaussian noise of standard deviation `sigma_nyq` to clean
/// measurements and derive `epsilon = sigma * sqrt(m_xi * m_p)`.
///
/// Subsampling an i.i.d. Nyquist-domain noise matrix leaves the kept
/// entries i.i.d., so the noise is drawn directly on the measurement grid.
pub fn add_noise(
    y_clean: &Array2<Complex64>,
    sigma_nyq: f64,
    seed: u64,
    pattern: &SamplingPattern,
) -> Result<MeasurementSet> {
    if sigma_nyq < 0.0 {
        return Err(SpftiError::Config(format!(
            "negative noise level {sigma_nyq}"
        )));
    }
    if y_clean.dim() != (pattern.m_xi(), pattern.m_p()) {
        return Err(SpftiError::Dimension(format!(
            "measurements of {:?} do not match pattern ({}, {})",
            y_clean.dim(),
            pattern.m_xi(),
            pattern.m_p()
        )));
    }
    let mut y = y_clean.clone();
    if sigma_nyq > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, sigma_nyq).expect("validated sigma");
        for v in y.iter_mut() {
            *v += Complex64::new(normal.sample(&mut rng), 0.0);
        }
    }
    let epsilon = MeasurementSet::default_epsilon(sigma_nyq, pattern.m_xi(), pattern.m_p());
    Ok(MeasurementSet {
        y,
        sigma_nyq,
        epsilon,
        pattern: pattern.clone(),
    })
}
