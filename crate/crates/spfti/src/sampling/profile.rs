//! Sparsity-in-levels estimation, sampling-profile computation, per-level
//! sample allocation, and the published profile fixtures.

use num_complex::Complex64;

use crate::error::{Result, SpftiError};
use crate::sampling::{CoherenceMatrix, LevelPartition, SamplingProfile, SparsityProfile};

/// Spectral Fourier/Fourier profile: 32 levels, fully dense on the seven
/// innermost bands and zero outside.
pub const FIXTURE_FIG2_SPECTRAL: &str = "fig2-spectral";

/// Spatial Hadamard/Haar profile for 128x128 images (7 dyadic levels).
pub const FIXTURE_FIG2_SPATIAL: &str = "fig2-spatial";

const FIG2_SPATIAL_THETA: [f64; 7] = [
    1.0,
    1.0,
    0.8125,
    0.380208333333333,
    0.2421875,
    0.187825520833333,
    0.0946451822916667,
];

/// Published sampling profile by fixture name.
pub fn fixture_profile(name: &str) -> Result<SamplingProfile> {
    match name {
        FIXTURE_FIG2_SPECTRAL => {
            let mut theta = vec![0.0; 32];
            theta[..7].fill(1.0);
            SamplingProfile::new(theta)
        }
        FIXTURE_FIG2_SPATIAL => SamplingProfile::new(FIG2_SPATIAL_THETA.to_vec()),
        other => Err(SpftiError::Config(format!("unknown profile fixture '{other}'"))),
    }
}

/// Worst-case sparsity in levels over a corpus of coefficient arrays.
///
/// For each item, coefficients with magnitude above `rel_threshold` times
/// the item's max magnitude count as significant; `k[l]` is the largest
/// per-level count seen across the corpus.
pub fn estimate_sparsity_in_levels(
    corpus: &[Vec<Complex64>],
    t_levels: &LevelPartition,
    rel_threshold: f64,
) -> Result<SparsityProfile> {
    if corpus.is_empty() {
        return Err(SpftiError::Config("empty corpus".into()));
    }
    if !(rel_threshold > 0.0 && rel_threshold < 1.0) {
        return Err(SpftiError::Config(format!(
            "relative threshold must lie in (0, 1), got {rel_threshold}"
        )));
    }
    let n = t_levels.len();
    let lookup = t_levels.level_of_index();
    let mut counts = vec![0usize; t_levels.num_levels()];
    for item in corpus {
        if item.len() != n {
            return Err(SpftiError::Dimension(format!(
                "corpus item of length {} for partition over {n}",
                item.len()
            )));
        }
        let max_mag = item.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        let cut = rel_threshold * max_mag;
        let mut item_counts = vec![0usize; counts.len()];
        for (idx, v) in item.iter().enumerate() {
            if v.norm() > cut {
                item_counts[lookup[idx]] += 1;
            }
        }
        for (k, ik) in counts.iter_mut().zip(item_counts) {
            *k = (*k).max(ik);
        }
    }
    SparsityProfile::from_counts(counts, t_levels)
}

/// Sampling profile `theta[t] = min(1, sum_l mu[(t, l)] * k[l])`.
pub fn sampling_profile(mu: &CoherenceMatrix, k: &SparsityProfile) -> Result<SamplingProfile> {
    if mu.num_sparsity_levels() != k.num_levels() {
        return Err(SpftiError::Dimension(format!(
            "coherence has {} sparsity levels, profile has {}",
            mu.num_sparsity_levels(),
            k.num_levels()
        )));
    }
    let theta = (0..mu.num_sampling_levels())
        .map(|t| {
            let s: f64 = (0..k.num_levels())
                .map(|l| mu.mu[[t, l]] * k.counts[l] as f64)
                .sum();
            s.min(1.0)
        })
        .collect();
    SamplingProfile::new(theta)
}

/// Per-level measurement counts proportional to `theta[t] * |W_t|`, with
/// saturation at the level size and an exact total of `m_target`.
///
/// Samples are assigned in the order of the per-level quota thresholds
/// `j / (theta[t] * |W_t|)` (a divisor-style apportionment), so growing
/// `m_target` only ever extends the assignment: allocations are monotone
/// in the target. Levels with `theta[t] = 0` receive nothing.
pub fn allocate_samples(
    theta: &SamplingProfile,
    w: &LevelPartition,
    m_target: usize,
) -> Result<Vec<usize>> {
    let sizes = w.level_sizes();
    if theta.num_levels() != sizes.len() {
        return Err(SpftiError::Dimension(format!(
            "profile has {} levels, partition has {}",
            theta.num_levels(),
            sizes.len()
        )));
    }
    if m_target == 0 || m_target > w.len() {
        return Err(SpftiError::Config(format!(
            "target of {m_target} samples out of range for n={}",
            w.len()
        )));
    }
    let capacity: usize = sizes
        .iter()
        .zip(&theta.theta)
        .filter(|(_, &th)| th > 0.0)
        .map(|(&s, _)| s)
        .sum();
    if m_target > capacity {
        return Err(SpftiError::Config(format!(
            "target of {m_target} samples infeasible: levels with positive \
             density hold only {capacity}"
        )));
    }

    let mut events: Vec<(f64, usize, usize)> = Vec::with_capacity(capacity);
    for (t, (&size, &th)) in sizes.iter().zip(&theta.theta).enumerate() {
        if th == 0.0 {
            continue;
        }
        let rate = th * size as f64;
        for j in 1..=size {
            events.push((j as f64 / rate, t, j));
        }
    }
    events.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite thresholds")
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut m = vec![0usize; sizes.len()];
    for &(_, t, _) in events.iter().take(m_target) {
        m[t] += 1;
    }
    Ok(m)
}
