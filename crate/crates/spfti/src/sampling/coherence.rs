//! Multilevel coherence between a sensing and a sparsity basis.
//!
//! Desk-scale only: the cross matrix `Phi * Psi` is materialized densely,
//! guarded by the per-domain size limits below.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Result, SpftiError};
use crate::sampling::{CoherenceMatrix, DomainTag, LevelPartition};
use crate::transforms::dft::DftPlan;
use crate::transforms::haar::{haar_1d_inverse_inplace, haar_2d_inverse_inplace};
use crate::transforms::walsh::{Walsh2dPlan, WalshPlan};

/// Largest spectral dimension for dense coherence computation.
pub const MAX_COHERENCE_DIM_SPECTRAL: usize = 1024;
/// Largest spatial dimension for dense coherence computation.
pub const MAX_COHERENCE_DIM_SPATIAL: usize = 4096;

/// Provider of a dense orthonormal basis matrix.
///
/// `materialize` returns the matrix whose action on coefficient vectors the
/// basis represents: sensing bases return the analysis matrix applied during
/// acquisition, sparsity bases return the synthesis matrix whose columns are
/// the basis vectors.
pub trait LinearBasis {
    fn dim(&self) -> usize;
    fn label(&self) -> String;
    fn materialize(&self) -> Array2<Complex64>;
}

fn columns_from_apply(
    n: usize,
    mut apply: impl FnMut(&mut Vec<Complex64>),
) -> Array2<Complex64> {
    let mut out = Array2::zeros((n, n));
    let mut col = vec![Complex64::ZERO; n];
    for j in 0..n {
        col.iter_mut().for_each(|v| *v = Complex64::ZERO);
        col[j] = Complex64::new(1.0, 0.0);
        apply(&mut col);
        for (i, v) in col.iter().enumerate() {
            out[[i, j]] = *v;
        }
    }
    out
}

/// Unitary forward DFT matrix (spectral sensing).
pub struct DftBasis {
    pub n: usize,
}

impl LinearBasis for DftBasis {
    fn dim(&self) -> usize {
        self.n
    }

    fn label(&self) -> String {
        "dft".into()
    }

    fn materialize(&self) -> Array2<Complex64> {
        let plan = DftPlan::new(self.n).expect("validated dimension");
        columns_from_apply(self.n, |col| plan.forward_inplace(col))
    }
}

/// Unitary inverse DFT matrix (spectral sparsity basis).
pub struct InverseDftBasis {
    pub n: usize,
}

impl LinearBasis for InverseDftBasis {
    fn dim(&self) -> usize {
        self.n
    }

    fn label(&self) -> String {
        "inverse-dft".into()
    }

    fn materialize(&self) -> Array2<Complex64> {
        let plan = DftPlan::new(self.n).expect("validated dimension");
        columns_from_apply(self.n, |col| plan.inverse_inplace(col))
    }
}

/// Orthonormal 1-D sequency Walsh matrix.
pub struct WalshBasis {
    pub n: usize,
}

impl LinearBasis for WalshBasis {
    fn dim(&self) -> usize {
        self.n
    }

    fn label(&self) -> String {
        "walsh".into()
    }

    fn materialize(&self) -> Array2<Complex64> {
        let plan = WalshPlan::new(self.n).expect("validated dimension");
        columns_from_apply(self.n, |col| plan.transform_inplace(col.as_mut_slice()))
    }
}

/// Orthonormal 1-D Haar synthesis matrix (columns are Haar basis vectors).
pub struct HaarSynthesisBasis {
    pub n: usize,
}

impl LinearBasis for HaarSynthesisBasis {
    fn dim(&self) -> usize {
        self.n
    }

    fn label(&self) -> String {
        "haar".into()
    }

    fn materialize(&self) -> Array2<Complex64> {
        let mut scratch = Vec::with_capacity(self.n);
        columns_from_apply(self.n, |col| haar_1d_inverse_inplace(col, &mut scratch))
    }
}

/// Orthonormal 2-D sequency Walsh matrix on row-major flattened images.
pub struct Walsh2dBasis {
    pub nx: usize,
    pub ny: usize,
}

impl LinearBasis for Walsh2dBasis {
    fn dim(&self) -> usize {
        self.nx * self.ny
    }

    fn label(&self) -> String {
        "walsh-2d".into()
    }

    fn materialize(&self) -> Array2<Complex64> {
        let plan = Walsh2dPlan::new(self.nx, self.ny).expect("validated dimension");
        let (nx, ny) = (self.nx, self.ny);
        columns_from_apply(nx * ny, |col| {
            let mut img = Array2::from_shape_vec((nx, ny), col.clone()).expect("shape");
            plan.transform_inplace(&mut img);
            col.copy_from_slice(img.as_slice().expect("contiguous"));
        })
    }
}

/// Orthonormal 2-D Haar synthesis matrix on row-major flattened images.
pub struct Haar2dSynthesisBasis {
    pub nx: usize,
    pub ny: usize,
}

impl LinearBasis for Haar2dSynthesisBasis {
    fn dim(&self) -> usize {
        self.nx * self.ny
    }

    fn label(&self) -> String {
        "haar-2d".into()
    }

    fn materialize(&self) -> Array2<Complex64> {
        let (nx, ny) = (self.nx, self.ny);
        columns_from_apply(nx * ny, |col| {
            let mut img = Array2::from_shape_vec((nx, ny), col.clone()).expect("shape");
            haar_2d_inverse_inplace(&mut img);
            col.copy_from_slice(img.as_slice().expect("contiguous"));
        })
    }
}

/// Identity matrix, useful for calibration and tests.
pub struct IdentityBasis {
    pub n: usize,
}

impl LinearBasis for IdentityBasis {
    fn dim(&self) -> usize {
        self.n
    }

    fn label(&self) -> String {
        "identity".into()
    }

    fn materialize(&self) -> Array2<Complex64> {
        Array2::eye(self.n).mapv(|v: f64| Complex64::new(v, 0.0))
    }
}

/// Magnitudes below this floor are numerically indistinguishable from zero
/// for entries of a product of two `n`-dimensional orthonormal matrices.
pub fn coherence_zero_floor(n: usize) -> f64 {
    16.0 * n as f64 * f64::EPSILON
}

/// Absolute values of the dense cross matrix `sensing * sparsity`, with
/// sub-roundoff magnitudes snapped to exact zero.
///
/// Entries are accumulated with the plain ascending-k inner product so the
/// result is bit-reproducible against any oracle using the same matrices
/// and loop order.
pub fn cross_matrix_abs(sensing: &dyn LinearBasis, sparsity: &dyn LinearBasis) -> Result<Array2<f64>> {
    let n = sensing.dim();
    if n != sparsity.dim() {
        return Err(SpftiError::Dimension(format!(
            "sensing dim {} != sparsity dim {}",
            n,
            sparsity.dim()
        )));
    }
    let phi = sensing.materialize();
    let psi = sparsity.materialize();
    let floor = coherence_zero_floor(n);
    let mut abs = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::ZERO;
            for k in 0..n {
                acc += phi[[i, k]] * psi[[k, j]];
            }
            let mag = acc.norm();
            abs[[i, j]] = if mag <= floor { 0.0 } else { mag };
        }
    }
    Ok(abs)
}

fn guard_limit(domain: DomainTag) -> usize {
    match domain {
        DomainTag::Spectral => MAX_COHERENCE_DIM_SPECTRAL,
        DomainTag::Spatial => MAX_COHERENCE_DIM_SPATIAL,
    }
}

/// Multilevel coherence `mu[(t, l)]` between a sensing and a sparsity basis
/// over sampling levels `w` and sparsity levels `t_levels`:
/// the max-magnitude entry of the cross matrix restricted to the rows of
/// sampling level `t`, times the max restricted to those rows and the
/// columns of sparsity level `l`.
pub fn multilevel_coherence(
    sensing: &dyn LinearBasis,
    sparsity: &dyn LinearBasis,
    w: &LevelPartition,
    t_levels: &LevelPartition,
) -> Result<CoherenceMatrix> {
    let n = sensing.dim();
    if w.len() != n || t_levels.len() != n {
        return Err(SpftiError::Dimension(format!(
            "partition sizes ({}, {}) do not match basis dim {}",
            w.len(),
            t_levels.len(),
            n
        )));
    }
    let limit = guard_limit(w.domain());
    if n > limit {
        return Err(SpftiError::Config(format!(
            "dense coherence limited to n <= {limit}, got {n}"
        )));
    }
    let abs = cross_matrix_abs(sensing, sparsity)?;
    Ok(coherence_from_cross(&abs, w, t_levels, format!(
        "{}/{}",
        sensing.label(),
        sparsity.label()
    )))
}

/// Blockwise coherence reduction of an absolute cross matrix.
pub fn coherence_from_cross(
    abs: &Array2<f64>,
    w: &LevelPartition,
    t_levels: &LevelPartition,
    basis_pair: String,
) -> CoherenceMatrix {
    let r_w = w.num_levels();
    let r_t = t_levels.num_levels();
    let row_level = w.level_of_index();
    let col_level = t_levels.level_of_index();
    let mut block_max = Array2::zeros((r_w, r_t));
    for ((i, j), &v) in abs.indexed_iter() {
        let t = row_level[i];
        let l = col_level[j];
        if v > block_max[[t, l]] {
            block_max[[t, l]] = v;
        }
    }
    let mut mu = Array2::zeros((r_w, r_t));
    for t in 0..r_w {
        let row_max = (0..r_t).fold(0.0f64, |m, l| m.max(block_max[[t, l]]));
        for l in 0..r_t {
            mu[[t, l]] = row_max * block_max[[t, l]];
        }
    }
    CoherenceMatrix { mu, basis_pair }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::partition::spectral_partition;
    use crate::sampling::DomainTag;

    #[test]
    fn fourier_fourier_is_kronecker_delta() {
        let n = 32;
        let w = spectral_partition(n, 4).unwrap();
        let mu = multilevel_coherence(&DftBasis { n }, &InverseDftBasis { n }, &w, &w).unwrap();
        for t in 0..4 {
            for l in 0..4 {
                if t == l {
                    assert!((mu.mu[[t, l]] - 1.0).abs() < 1e-12);
                } else {
                    assert_eq!(mu.mu[[t, l]], 0.0, "off-diagonal block ({t},{l})");
                }
            }
        }
        assert_eq!(mu.basis_pair, "dft/inverse-dft");
    }

    #[test]
    fn identity_identity_single_level() {
        let w = LevelPartition::new(vec![(0..8).collect()], 8, DomainTag::Spectral).unwrap();
        let mu =
            multilevel_coherence(&IdentityBasis { n: 8 }, &IdentityBasis { n: 8 }, &w, &w).unwrap();
        assert_eq!(mu.mu[[0, 0]], 1.0);
    }

    #[test]
    fn walsh_haar_block_structure_matches_dense_oracle() {
        // 1-D dyadic partitions: {0,1}, {2,3}, {4..8}.
        let n = 8;
        let levels = vec![vec![0, 1], vec![2, 3], vec![4, 5, 6, 7]];
        let p = LevelPartition::new(levels, n, DomainTag::Spatial).unwrap();
        let mu = multilevel_coherence(
            &WalshBasis { n },
            &HaarSynthesisBasis { n },
            &p,
            &p,
        )
        .unwrap();

        // Brute force on the same materialized matrices, reducing each
        // block of the dense product independently.
        let phi = WalshBasis { n }.materialize();
        let psi = HaarSynthesisBasis { n }.materialize();
        let floor = coherence_zero_floor(n);
        let mut abs = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += phi[[i, k]] * psi[[k, j]];
                }
                abs[[i, j]] = if acc.norm() <= floor { 0.0 } else { acc.norm() };
            }
        }
        for (t, wt) in p.levels().iter().enumerate() {
            let a = wt
                .iter()
                .flat_map(|&i| (0..n).map(move |j| (i, j)))
                .fold(0.0f64, |m, (i, j)| m.max(abs[[i, j]]));
            for (l, tl) in p.levels().iter().enumerate() {
                let b = wt
                    .iter()
                    .flat_map(|&i| tl.iter().map(move |&j| (i, j)))
                    .fold(0.0f64, |m, (i, j)| m.max(abs[[i, j]]));
                assert_eq!(mu.mu[[t, l]], a * b, "block ({t},{l})");
            }
        }

        // Sequency band 3 (rows 4..8) is orthogonal to the coarsest Haar
        // scale: incompatible blocks vanish.
        assert_eq!(mu.mu[[2, 0]], 0.0);
        assert!(mu.mu[[2, 2]] > 0.0);
    }

    #[test]
    fn guards_oversize_spectral_input() {
        let n = 2048;
        let w = spectral_partition(n, 2).unwrap();
        let err = multilevel_coherence(&DftBasis { n }, &InverseDftBasis { n }, &w, &w);
        assert!(matches!(err, Err(SpftiError::Config(_))));
    }
}
