//! Multilevel sampling design: level partitions, multilevel coherence,
//! sparsity-in-levels estimation, sampling profiles, per-level sample
//! allocation and mask generation.

pub mod coherence;
pub mod mask;
pub mod partition;
pub mod profile;

pub use coherence::{
    multilevel_coherence, DftBasis, Haar2dSynthesisBasis, HaarSynthesisBasis, IdentityBasis,
    InverseDftBasis, LinearBasis, Walsh2dBasis, WalshBasis,
};
pub use mask::{draw_mls_mask, draw_uds_mask, DomainMask, SamplingPattern, Strategy};
pub use partition::{spatial_partition, spectral_partition};
pub use profile::{
    allocate_samples, estimate_sparsity_in_levels, fixture_profile, sampling_profile,
    FIXTURE_FIG2_SPATIAL, FIXTURE_FIG2_SPECTRAL,
};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpftiError};

/// Index domain a partition lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainTag {
    Spectral,
    Spatial,
}

/// Ordered disjoint index sets covering `0..n` (0-based internally;
/// serialized forms are 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPartition {
    levels: Vec<Vec<usize>>,
    n: usize,
    domain: DomainTag,
}

impl LevelPartition {
    /// Build a partition from explicit level index sets, validating that
    /// they disjointly cover `0..n`.
    pub fn new(mut levels: Vec<Vec<usize>>, n: usize, domain: DomainTag) -> Result<Self> {
        if levels.is_empty() {
            return Err(SpftiError::Dimension(
                "partition needs at least one level".into(),
            ));
        }
        let mut seen = vec![false; n];
        let mut total = 0usize;
        for level in &levels {
            for &idx in level {
                if idx >= n {
                    return Err(SpftiError::Dimension(format!(
                        "partition index {idx} out of range for n={n}"
                    )));
                }
                if seen[idx] {
                    return Err(SpftiError::Dimension(format!(
                        "partition levels overlap at index {idx}"
                    )));
                }
                seen[idx] = true;
                total += 1;
            }
        }
        if total != n {
            return Err(SpftiError::Dimension(format!(
                "partition covers {total} of {n} indices"
            )));
        }
        for level in levels.iter_mut() {
            level.sort_unstable();
        }
        Ok(Self { levels, n, domain })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Total number of indices covered.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn domain(&self) -> DomainTag {
        self.domain
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Lookup table mapping each index to its 0-based level number.
    pub fn level_of_index(&self) -> Vec<usize> {
        let mut lookup = vec![0usize; self.n];
        for (t, level) in self.levels.iter().enumerate() {
            for &idx in level {
                lookup[idx] = t;
            }
        }
        lookup
    }
}

/// Multilevel coherence values between a sensing and a sparsity basis.
#[derive(Debug, Clone)]
pub struct CoherenceMatrix {
    /// `mu[(t, l)]` for sampling level `t` and sparsity level `l`.
    pub mu: ndarray::Array2<f64>,
    /// Free-form label of the basis pair, e.g. `"dft/inverse-dft"`.
    pub basis_pair: String,
}

impl CoherenceMatrix {
    pub fn num_sampling_levels(&self) -> usize {
        self.mu.nrows()
    }

    pub fn num_sparsity_levels(&self) -> usize {
        self.mu.ncols()
    }
}

/// Worst-case per-level counts of significant coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparsityProfile {
    /// `k[l]`: worst-case significant-coefficient count in sparsity level `l`.
    pub counts: Vec<usize>,
    /// `k[l] / |T_l|` for the partition the counts were estimated on.
    pub ratios: Vec<f64>,
}

impl SparsityProfile {
    /// Profile from raw counts and the partition they refer to.
    pub fn from_counts(counts: Vec<usize>, partition: &LevelPartition) -> Result<Self> {
        if counts.len() != partition.num_levels() {
            return Err(SpftiError::Dimension(format!(
                "{} counts for {} levels",
                counts.len(),
                partition.num_levels()
            )));
        }
        let ratios = counts
            .iter()
            .zip(partition.level_sizes())
            .map(|(&k, size)| {
                if k > size {
                    Err(SpftiError::Config(format!(
                        "sparsity count {k} exceeds level size {size}"
                    )))
                } else {
                    Ok(k as f64 / size as f64)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { counts, ratios })
    }

    pub fn num_levels(&self) -> usize {
        self.counts.len()
    }
}

/// Per-level relative sampling densities `theta in [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingProfile {
    pub theta: Vec<f64>,
}

impl SamplingProfile {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(SpftiError::Config(
                "sampling profile values must lie in [0, 1]".into(),
            ));
        }
        Ok(Self { theta })
    }

    pub fn num_levels(&self) -> usize {
        self.theta.len()
    }
}
