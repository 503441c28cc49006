//! Canonical level partitions for the spectral (DFT-bin) and spatial
//! (2-D Haar / dyadic sequency) index domains.

use crate::error::{Result, SpftiError};
use crate::sampling::{DomainTag, LevelPartition};
use crate::transforms::dft::check_power_of_two;
use crate::transforms::haar::haar_level_of_index;

/// Equal-cardinality DFT-bin levels, symmetric around the DC frequency.
///
/// Unshifted bin `j` carries the signed frequency `f = j` (for `j < N/2`)
/// or `f = j - N` otherwise. Bins are ranked by their distance from the
/// center of the shifted spectrum (`d = f` for `f >= 0`, `d = -f - 1`
/// otherwise) and grouped into `r` bands of `N/r` bins, innermost band
/// first.
pub fn spectral_partition(n: usize, r: usize) -> Result<LevelPartition> {
    check_power_of_two(n, "spectral size")?;
    if r == 0 || !r.is_power_of_two() {
        return Err(SpftiError::Dimension(format!(
            "level count must be a power of two >= 1, got {r}"
        )));
    }
    if n % r != 0 {
        return Err(SpftiError::Dimension(format!(
            "level count {r} does not divide size {n}"
        )));
    }
    let per_level = n / r;
    if per_level % 2 != 0 {
        return Err(SpftiError::Dimension(format!(
            "levels of {per_level} bins cannot be symmetric around DC"
        )));
    }
    let half_width = per_level / 2;
    let mut levels = vec![Vec::with_capacity(per_level); r];
    for j in 0..n {
        let f = if j < n / 2 {
            j as i64
        } else {
            j as i64 - n as i64
        };
        let d = if f >= 0 { f } else { -f - 1 } as usize;
        levels[d / half_width].push(j);
    }
    LevelPartition::new(levels, n, DomainTag::Spectral)
}

/// Dyadic levels for the flattened (row-major) pixel indices of a square
/// power-of-two image: the 2-D level of pixel `(ix, iy)` is the maximum of
/// the 1-D dyadic levels of `ix` and `iy`, giving `log2(nx)` levels.
pub fn spatial_partition(nx: usize, ny: usize) -> Result<LevelPartition> {
    if nx != ny {
        return Err(SpftiError::Dimension(format!(
            "spatial partition needs a square image, got {nx}x{ny}"
        )));
    }
    check_power_of_two(nx, "spatial size")?;
    let r = nx.ilog2() as usize;
    let mut levels = vec![Vec::new(); r];
    for ix in 0..nx {
        let lx = haar_level_of_index(ix);
        for iy in 0..ny {
            let level = lx.max(haar_level_of_index(iy));
            levels[level - 1].push(ix * ny + iy);
        }
    }
    LevelPartition::new(levels, nx * ny, DomainTag::Spatial)
}
