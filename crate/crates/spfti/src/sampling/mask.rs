//! Seeded index-set generation for the multilevel and uniform-density
//! sampling strategies.
//!
//! All draws are uniform without replacement from an explicit seeded RNG,
//! so a `(counts, partition, seed)` triple always maps to the same mask.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpftiError};
use crate::sampling::{LevelPartition, SamplingProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Mls,
    Uds,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::Mls => write!(f, "mls"),
            Strategy::Uds => write!(f, "uds"),
        }
    }
}

fn sample_without_replacement(
    pool: &[usize],
    amount: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let picked = rand::seq::index::sample(rng, pool.len(), amount);
    picked.into_iter().map(|i| pool[i]).collect()
}

/// Draw `m[t]` indices uniformly without replacement from each level of `w`.
/// The result is sorted and depends only on `(m, w, seed)`.
pub fn draw_mls_mask(m: &[usize], w: &LevelPartition, seed: u64) -> Result<Vec<usize>> {
    if m.len() != w.num_levels() {
        return Err(SpftiError::Dimension(format!(
            "{} counts for {} levels",
            m.len(),
            w.num_levels()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omega = Vec::with_capacity(m.iter().sum());
    for (level, &count) in w.levels().iter().zip(m) {
        if count > level.len() {
            return Err(SpftiError::Config(format!(
                "cannot draw {count} samples from a level of {}",
                level.len()
            )));
        }
        omega.extend(sample_without_replacement(level, count, &mut rng));
    }
    omega.sort_unstable();
    Ok(omega)
}

/// Draw `m` indices uniformly without replacement from `0..n`.
pub fn draw_uds_mask(m: usize, n: usize, seed: u64) -> Result<Vec<usize>> {
    if m > n {
        return Err(SpftiError::Config(format!(
            "cannot draw {m} samples from a domain of {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omega: Vec<usize> = rand::seq::index::sample(&mut rng, n, m).into_vec();
    omega.sort_unstable();
    Ok(omega)
}

/// A drawn index set for one domain (spectral or spatial), together with
/// everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainMask {
    pub strategy: Strategy,
    pub seed: u64,
    pub n: usize,
    /// Level index sets the allocation was computed over (a single full
    /// level for UDS).
    pub levels: Vec<Vec<usize>>,
    /// Per-level sample counts.
    pub m: Vec<usize>,
    /// Sorted sampled indices, 0-based.
    pub omega: Vec<usize>,
}

impl DomainMask {
    /// Multilevel mask: allocate `m_target` samples over the levels of `w`
    /// proportionally to `theta`, then draw within each level.
    pub fn multilevel(
        w: &LevelPartition,
        theta: &SamplingProfile,
        m_target: usize,
        seed: u64,
    ) -> Result<Self> {
        let m = super::profile::allocate_samples(theta, w, m_target)?;
        let omega = draw_mls_mask(&m, w, seed)?;
        Ok(Self {
            strategy: Strategy::Mls,
            seed,
            n: w.len(),
            levels: w.levels().to_vec(),
            m,
            omega,
        })
    }

    /// Uniform-density mask over the whole domain.
    pub fn uniform(n: usize, m_target: usize, seed: u64) -> Result<Self> {
        let omega = draw_uds_mask(m_target, n, seed)?;
        Ok(Self {
            strategy: Strategy::Uds,
            seed,
            n,
            levels: vec![(0..n).collect()],
            m: vec![m_target],
            omega,
        })
    }

    /// Number of sampled indices.
    pub fn num_samples(&self) -> usize {
        self.omega.len()
    }

    /// Check internal consistency: indices sorted, unique, in range, and
    /// per-level counts matching the recorded allocation.
    pub fn validate(&self) -> Result<()> {
        if self.omega.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SpftiError::Config("mask indices not strictly sorted".into()));
        }
        if self.omega.last().is_some_and(|&last| last >= self.n) {
            return Err(SpftiError::Dimension(format!(
                "mask index out of range for n={}",
                self.n
            )));
        }
        if self.levels.len() != self.m.len() {
            return Err(SpftiError::Dimension(
                "per-level counts do not match level count".into(),
            ));
        }
        if self.num_samples() != self.m.iter().sum::<usize>() {
            return Err(SpftiError::Config(
                "mask size does not match recorded allocation".into(),
            ));
        }
        for (level, &count) in self.levels.iter().zip(&self.m) {
            let inside = self
                .omega
                .iter()
                .filter(|idx| level.binary_search(idx).is_ok())
                .count();
            if inside != count {
                return Err(SpftiError::Config(format!(
                    "level holds {inside} sampled indices, allocation says {count}"
                )));
            }
        }
        Ok(())
    }
}

/// The pair of masks defining one acquisition: active OPD/spectral rows and
/// active Hadamard patterns, plus the spatial grid the patterns index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingPattern {
    pub spectral: DomainMask,
    pub spatial: DomainMask,
    pub nx: usize,
    pub ny: usize,
}

impl SamplingPattern {
    pub fn new(spectral: DomainMask, spatial: DomainMask, nx: usize, ny: usize) -> Result<Self> {
        spectral.validate()?;
        spatial.validate()?;
        if nx * ny != spatial.n {
            return Err(SpftiError::Dimension(format!(
                "{nx}x{ny} grid does not match spatial domain of {}",
                spatial.n
            )));
        }
        Ok(Self {
            spectral,
            spatial,
            nx,
            ny,
        })
    }

    pub fn n_xi(&self) -> usize {
        self.spectral.n
    }

    pub fn n_p(&self) -> usize {
        self.spatial.n
    }

    pub fn m_xi(&self) -> usize {
        self.spectral.num_samples()
    }

    pub fn m_p(&self) -> usize {
        self.spatial.num_samples()
    }

    pub fn omega_xi(&self) -> &[usize] {
        &self.spectral.omega
    }

    pub fn omega_p(&self) -> &[usize] {
        &self.spatial.omega
    }
}
