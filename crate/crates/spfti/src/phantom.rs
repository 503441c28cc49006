//! Deterministic synthetic hyperspectral volumes and coefficient corpora.
//!
//! A phantom is a sum of separable sources: a smooth Gaussian-shaped
//! spectrum (compressible in the low DFT bins) times a seeded spatial map,
//! either smooth blobs (compressible in coarse Haar levels) or blocky
//! regions (exactly sparse in Haar).

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::acquisition::HyperCube;
use crate::error::{Result, SpftiError};
use crate::transforms::dft::{check_power_of_two, DftPlan};
use crate::transforms::haar::haar_2d_forward;

/// One Gaussian spectral line: `amplitude * exp(-(bin - center)^2 / (2 width^2))`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpectralPeak {
    pub center: usize,
    pub width: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpatialStyle {
    Blobs,
    Blocks,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhantomSpec {
    pub n_nu: usize,
    pub nx: usize,
    pub ny: usize,
    pub n_sources: usize,
    pub spectral_peaks: Vec<SpectralPeak>,
    pub spatial_style: SpatialStyle,
    pub seed: u64,
}

impl PhantomSpec {
    /// Desk-scale default: 128 wavenumber bins over 32x32 pixels.
    pub fn default_desk() -> Self {
        Self {
            n_nu: 128,
            nx: 32,
            ny: 32,
            n_sources: 3,
            spectral_peaks: vec![
                SpectralPeak { center: 40, width: 6.0, amplitude: 1.0 },
                SpectralPeak { center: 64, width: 5.0, amplitude: 0.8 },
                SpectralPeak { center: 90, width: 7.0, amplitude: 0.9 },
            ],
            spatial_style: SpatialStyle::Blobs,
            seed: 7,
        }
    }

    /// Small default for fast tests: 64 bins over 16x16 pixels.
    pub fn default_small() -> Self {
        Self {
            n_nu: 64,
            nx: 16,
            ny: 16,
            n_sources: 2,
            spectral_peaks: vec![
                SpectralPeak { center: 24, width: 4.0, amplitude: 1.0 },
                SpectralPeak { center: 40, width: 5.0, amplitude: 0.7 },
            ],
            spatial_style: SpatialStyle::Blobs,
            seed: 11,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_power_of_two(self.n_nu, "n_nu")?;
        check_power_of_two(self.nx, "nx")?;
        check_power_of_two(self.ny, "ny")?;
        if self.n_sources > 0 && self.spectral_peaks.is_empty() {
            return Err(SpftiError::Config(
                "sources requested but no spectral peaks given".into(),
            ));
        }
        for peak in &self.spectral_peaks {
            if peak.center >= self.n_nu {
                return Err(SpftiError::Config(format!(
                    "peak center {} out of range for {} bins",
                    peak.center, self.n_nu
                )));
            }
            if peak.width < 1.0 {
                return Err(SpftiError::Config(format!(
                    "peak width {} below one bin",
                    peak.width
                )));
            }
            if peak.amplitude <= 0.0 {
                return Err(SpftiError::Config(format!(
                    "peak amplitude {} not positive",
                    peak.amplitude
                )));
            }
        }
        Ok(())
    }
}

fn gaussian_spectrum(n_nu: usize, peak: &SpectralPeak) -> Vec<f64> {
    (0..n_nu)
        .map(|n| {
            let d = n as f64 - peak.center as f64;
            peak.amplitude * (-d * d / (2.0 * peak.width * peak.width)).exp()
        })
        .collect()
}

fn blob_map(nx: usize, ny: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let n_blobs = rng.random_range(2..=4);
    let mut map = Array2::zeros((nx, ny));
    for _ in 0..n_blobs {
        let cx = rng.random_range(0.15..0.85) * nx as f64;
        let cy = rng.random_range(0.15..0.85) * ny as f64;
        let radius = rng.random_range(0.08..0.22) * nx as f64;
        let weight = rng.random_range(0.4..1.0);
        for ((ix, iy), v) in map.indexed_iter_mut() {
            let dx = ix as f64 - cx;
            let dy = iy as f64 - cy;
            *v += weight * (-(dx * dx + dy * dy) / (2.0 * radius * radius)).exp();
        }
    }
    map
}

fn block_map(nx: usize, ny: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let n_blocks = rng.random_range(2..=4);
    let mut map = Array2::zeros((nx, ny));
    for _ in 0..n_blocks {
        // Dyadically aligned corners keep the map exactly sparse in Haar.
        let scale = rng.random_range(1..=2u32);
        let step = nx >> scale;
        let x0 = rng.random_range(0..(nx / step)) * step;
        let y0 = rng.random_range(0..(ny / step)) * step;
        let weight = rng.random_range(0.4..1.0);
        for ix in x0..(x0 + step).min(nx) {
            for iy in y0..(y0 + step).min(ny) {
                map[[ix, iy]] += weight;
            }
        }
    }
    map
}

/// Deterministic synthetic volume: the sum over sources of
/// `spectrum (x) spatial map`, max-normalized into `[0, 1]`.
pub fn generate_phantom(spec: &PhantomSpec) -> Result<HyperCube> {
    spec.validate()?;
    let n_p = spec.nx * spec.ny;
    let mut values = Array2::zeros((spec.n_nu, n_p));
    for s in 0..spec.n_sources {
        let peak = &spec.spectral_peaks[s % spec.spectral_peaks.len()];
        let spectrum = gaussian_spectrum(spec.n_nu, peak);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(s as u64));
        let map = match spec.spatial_style {
            SpatialStyle::Blobs => blob_map(spec.nx, spec.ny, &mut rng),
            SpatialStyle::Blocks => block_map(spec.nx, spec.ny, &mut rng),
        };
        let flat = map.as_slice().expect("contiguous");
        for (i, &sv) in spectrum.iter().enumerate() {
            for (j, &mv) in flat.iter().enumerate() {
                values[[i, j]] += sv * mv;
            }
        }
    }
    let max = values.iter().fold(0.0f64, |m, &v| m.max(v));
    if max > 0.0 {
        values.mapv_inplace(|v| v / max);
    }
    HyperCube::new(values, spec.nx, spec.ny)
}

/// Which analysis basis a corpus is emitted in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusBasis {
    /// Unitary DFT coefficients of each source spectrum.
    SpectralDft,
    /// 2-D Haar coefficients of each source spatial map.
    SpatialHaar,
}

/// Analysis-coefficient corpus for sparsity-in-levels estimation: one item
/// per source of every phantom spec, in the requested basis.
pub fn generate_corpus(specs: &[PhantomSpec], basis: CorpusBasis) -> Result<Vec<Vec<Complex64>>> {
    if specs.is_empty() {
        return Err(SpftiError::Config("empty phantom spec list".into()));
    }
    let mut corpus = Vec::new();
    for spec in specs {
        spec.validate()?;
        match basis {
            CorpusBasis::SpectralDft => {
                let plan = DftPlan::new(spec.n_nu)?;
                for s in 0..spec.n_sources.max(1) {
                    let peak = &spec.spectral_peaks[s % spec.spectral_peaks.len()];
                    let mut coeffs: Vec<Complex64> = gaussian_spectrum(spec.n_nu, peak)
                        .into_iter()
                        .map(|v| Complex64::new(v, 0.0))
                        .collect();
                    plan.forward_inplace(&mut coeffs);
                    corpus.push(coeffs);
                }
            }
            CorpusBasis::SpatialHaar => {
                for s in 0..spec.n_sources.max(1) {
                    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(s as u64));
                    let map = match spec.spatial_style {
                        SpatialStyle::Blobs => blob_map(spec.nx, spec.ny, &mut rng),
                        SpatialStyle::Blocks => block_map(spec.nx, spec.ny, &mut rng),
                    };
                    let coeffs = haar_2d_forward(&map)?;
                    corpus.push(coeffs.iter().map(|&v| Complex64::new(v, 0.0)).collect());
                }
            }
        }
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{estimate_sparsity_in_levels, spatial_partition, spectral_partition};
    use crate::transforms::dft::DftPlan;
    use crate::transforms::haar::haar_level_of_index;

    #[test]
    fn zero_sources_gives_zero_volume() {
        let spec = PhantomSpec {
            n_sources: 0,
            ..PhantomSpec::default_small()
        };
        let cube = generate_phantom(&spec).unwrap();
        assert_eq!(cube.norm(), 0.0);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let spec = PhantomSpec::default_desk();
        let a = generate_phantom(&spec).unwrap();
        let b = generate_phantom(&spec).unwrap();
        assert_eq!(a.values(), b.values());

        let other = PhantomSpec {
            seed: spec.seed + 1,
            ..spec
        };
        let c = generate_phantom(&other).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn values_stay_in_unit_range() {
        for style in [SpatialStyle::Blobs, SpatialStyle::Blocks] {
            let spec = PhantomSpec {
                spatial_style: style,
                ..PhantomSpec::default_desk()
            };
            let cube = generate_phantom(&spec).unwrap();
            let max = cube.values().iter().fold(0.0f64, |m, &v| m.max(v));
            let min = cube.values().iter().fold(1.0f64, |m, &v| m.min(v));
            assert!(max <= 1.0 && max > 0.99);
            assert!(min >= 0.0);
        }
    }

    #[test]
    fn single_constant_source_is_rank_one_and_band_limited() {
        // One peak, one constant map: every nonzero pixel column is a
        // multiple of the same spectrum.
        let n_nu = 128;
        let spec = PhantomSpec {
            n_nu,
            nx: 4,
            ny: 4,
            n_sources: 1,
            spectral_peaks: vec![SpectralPeak { center: 64, width: 4.0, amplitude: 1.0 }],
            spatial_style: SpatialStyle::Blocks,
            seed: 3,
        };
        let cube = generate_phantom(&spec).unwrap();
        // Reference spectrum from the brightest pixel.
        let (bx, by) = (0..4)
            .flat_map(|ix| (0..4).map(move |iy| (ix, iy)))
            .max_by(|a, b| {
                let va = cube.values()[[64, a.0 * 4 + a.1]];
                let vb = cube.values()[[64, b.0 * 4 + b.1]];
                va.partial_cmp(&vb).unwrap()
            })
            .unwrap();
        let reference = cube.spectrum_at(bx, by).unwrap();
        assert!(reference[64] > 0.0);
        for ix in 0..4 {
            for iy in 0..4 {
                let col = cube.spectrum_at(ix, iy).unwrap();
                let scale = col[64] / reference[64];
                for (a, b) in col.iter().zip(reference.iter()) {
                    assert!((a - b * scale).abs() < 1e-12);
                }
            }
        }

        // Width >= 4 bins concentrates DFT energy in the central band.
        let plan = DftPlan::new(n_nu).unwrap();
        let mut coeffs: Vec<Complex64> = reference
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        plan.forward_inplace(&mut coeffs);
        let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let central: f64 = coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let f = if *k < n_nu / 2 { *k as i64 } else { *k as i64 - n_nu as i64 };
                f.abs() < (n_nu / 8) as i64
            })
            .map(|(_, c)| c.norm_sqr())
            .sum();
        assert!(central / total > 0.99, "central fraction {}", central / total);
    }

    #[test]
    fn default_specs_meet_the_compressibility_contract() {
        for spec in [PhantomSpec::default_desk(), PhantomSpec::default_small()] {
            let cube = generate_phantom(&spec).unwrap();
            let n_nu = spec.n_nu;

            // >= 99% of spectral-DFT energy in the central quarter of bins.
            let plan = DftPlan::new(n_nu).unwrap();
            let mut central = 0.0;
            let mut total = 0.0;
            for j in 0..cube.n_p() {
                let mut col: Vec<Complex64> = (0..n_nu)
                    .map(|i| Complex64::new(cube.values()[[i, j]], 0.0))
                    .collect();
                plan.forward_inplace(&mut col);
                for (k, c) in col.iter().enumerate() {
                    let f = if k < n_nu / 2 { k as i64 } else { k as i64 - n_nu as i64 };
                    let e = c.norm_sqr();
                    total += e;
                    if f.abs() <= (n_nu / 8) as i64 {
                        central += e;
                    }
                }
            }
            assert!(central / total >= 0.99, "spectral fraction {}", central / total);

            // >= 95% of spatial Haar energy in the four coarsest levels.
            let mut coarse = 0.0;
            let mut total = 0.0;
            for i in 0..n_nu {
                let img = cube.slice_image(i).unwrap();
                let coeffs = haar_2d_forward(&img).unwrap();
                for ((ix, iy), v) in coeffs.indexed_iter() {
                    let level = haar_level_of_index(ix).max(haar_level_of_index(iy));
                    total += v * v;
                    if level <= 4 {
                        coarse += v * v;
                    }
                }
            }
            assert!(coarse / total >= 0.95, "Haar fraction {}", coarse / total);
        }
    }

    #[test]
    fn corpus_is_deterministic_and_level_concentrated() {
        // Gaussian DFT decay: the >1%-of-max set stops at
        // f < N*sqrt(ln 100)/(sqrt(2)*pi*w), i.e. f < 49.4 (level 7 of 32)
        // for width 5 and f < 61.8 (level 8) for width 4 at N = 512.
        let base = PhantomSpec {
            n_nu: 512,
            spectral_peaks: vec![SpectralPeak { center: 256, width: 5.0, amplitude: 1.0 }],
            n_sources: 1,
            ..PhantomSpec::default_desk()
        };
        let t = spectral_partition(512, 32).unwrap();

        let corpus = generate_corpus(&[base.clone()], CorpusBasis::SpectralDft).unwrap();
        assert_eq!(corpus.len(), 1);
        let k = estimate_sparsity_in_levels(&corpus, &t, 0.01).unwrap();
        assert!(k.counts[..7].iter().sum::<usize>() > 0);
        assert!(k.counts[7..].iter().all(|&c| c == 0), "counts {:?}", k.counts);

        let mut wider = base.clone();
        wider.spectral_peaks[0].width = 4.0;
        let corpus4 = generate_corpus(&[wider], CorpusBasis::SpectralDft).unwrap();
        let k4 = estimate_sparsity_in_levels(&corpus4, &t, 0.01).unwrap();
        assert!(k4.counts[7] > 0);
        assert!(k4.counts[8..].iter().all(|&c| c == 0), "counts {:?}", k4.counts);

        // Determinism across calls.
        let again = generate_corpus(&[base], CorpusBasis::SpectralDft).unwrap();
        assert_eq!(corpus, again);
    }

    #[test]
    fn spatial_corpus_of_seeded_blobs_is_reproducible() {
        let specs: Vec<PhantomSpec> = (0..10)
            .map(|i| PhantomSpec {
                seed: 100 + i,
                n_sources: 1,
                ..PhantomSpec::default_desk()
            })
            .collect();
        let corpus = generate_corpus(&specs, CorpusBasis::SpatialHaar).unwrap();
        assert_eq!(corpus.len(), 10);
        let t = spatial_partition(32, 32).unwrap();
        let k1 = estimate_sparsity_in_levels(&corpus, &t, 0.01).unwrap();
        let again = generate_corpus(&specs, CorpusBasis::SpatialHaar).unwrap();
        let k2 = estimate_sparsity_in_levels(&again, &t, 0.01).unwrap();
        assert_eq!(k1.counts, k2.counts);
    }

    #[test]
    fn constant_patch_energy_in_first_level() {
        let spec = PhantomSpec {
            nx: 8,
            ny: 8,
            n_sources: 1,
            spatial_style: SpatialStyle::Blocks,
            ..PhantomSpec::default_small()
        };
        // Blocks with dyadic corners: all coefficients live in coarse bands.
        let corpus = generate_corpus(&[spec], CorpusBasis::SpatialHaar).unwrap();
        let nonzero = corpus[0].iter().filter(|c| c.norm() > 1e-12).count();
        assert!(nonzero < 64, "blocks should be Haar-sparse, {nonzero} nonzeros");
    }

    #[test]
    fn rejects_invalid_specs() {
        let mut spec = PhantomSpec::default_small();
        spec.spectral_peaks[0].center = 1000;
        assert!(generate_phantom(&spec).is_err());
        let mut spec = PhantomSpec::default_small();
        spec.spectral_peaks[0].width = 0.5;
        assert!(generate_phantom(&spec).is_err());
        let mut spec = PhantomSpec::default_small();
        spec.n_nu = 100;
        assert!(generate_phantom(&spec).is_err());
        assert!(generate_corpus(&[], CorpusBasis::SpectralDft).is_err());
    }
}
