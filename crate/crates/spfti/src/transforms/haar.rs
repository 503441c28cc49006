//! Full-depth orthonormal 1-D Haar transform and its anisotropic 2-D
//! tensor-product extension.
//!
//! Coefficient layout per axis: index 0 holds the scaling coefficient,
//! index 1 the coarsest detail, and indices `2^(s-1)..2^s` the details of
//! scale `s`. The 2-D transform applies the full 1-D decomposition along
//! every row and then every column, so the dyadic level of coefficient
//! `(i, j)` is the maximum of the two 1-D levels.

use ndarray::Array2;

use crate::error::Result;
use crate::transforms::dft::check_power_of_two;
use crate::transforms::walsh::WalshScalar;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Full-depth orthonormal Haar analysis, in place.
pub fn haar_1d_forward_inplace<T: WalshScalar>(data: &mut [T], scratch: &mut Vec<T>) {
    debug_assert!(data.len().is_power_of_two());
    let mut len = data.len();
    while len >= 2 {
        let half = len / 2;
        scratch.clear();
        scratch.extend_from_slice(&data[..len]);
        for i in 0..half {
            let a = scratch[2 * i];
            let b = scratch[2 * i + 1];
            data[i] = (a + b) * SQRT_HALF;
            data[half + i] = (a - b) * SQRT_HALF;
        }
        len = half;
    }
}

/// Full-depth orthonormal Haar synthesis, in place; exact inverse of analysis.
pub fn haar_1d_inverse_inplace<T: WalshScalar>(data: &mut [T], scratch: &mut Vec<T>) {
    debug_assert!(data.len().is_power_of_two());
    let mut len = 2;
    while len <= data.len() {
        let half = len / 2;
        scratch.clear();
        scratch.extend_from_slice(&data[..len]);
        for i in 0..half {
            let s = scratch[i];
            let d = scratch[half + i];
            data[2 * i] = (s + d) * SQRT_HALF;
            data[2 * i + 1] = (s - d) * SQRT_HALF;
        }
        len *= 2;
    }
}

/// Dyadic level (1-based) of a 0-based 1-D Haar coefficient index.
///
/// Indices 0 and 1 (scaling + coarsest detail) form level 1; index
/// `i >= 2` lies in level `floor(log2(i)) + 1`. A length-`2^j` axis has
/// `j` levels.
pub fn haar_level_of_index(i: usize) -> usize {
    if i < 2 {
        1
    } else {
        i.ilog2() as usize + 1
    }
}

fn transform_2d<T: WalshScalar>(img: &mut Array2<T>, inverse: bool) {
    let (nx, ny) = img.dim();
    let mut scratch = Vec::with_capacity(nx.max(ny));
    for mut row in img.rows_mut() {
        let slice = row.as_slice_mut().expect("contiguous row");
        if inverse {
            haar_1d_inverse_inplace(slice, &mut scratch);
        } else {
            haar_1d_forward_inplace(slice, &mut scratch);
        }
    }
    let mut col_buf: Vec<T> = Vec::with_capacity(nx);
    for j in 0..ny {
        col_buf.clear();
        col_buf.extend(img.column(j).iter().copied());
        if inverse {
            haar_1d_inverse_inplace(&mut col_buf, &mut scratch);
        } else {
            haar_1d_forward_inplace(&mut col_buf, &mut scratch);
        }
        for (i, v) in col_buf.iter().enumerate() {
            img[[i, j]] = *v;
        }
    }
}

/// Anisotropic 2-D Haar analysis (full depth along each axis), in place.
pub fn haar_2d_forward_inplace<T: WalshScalar>(img: &mut Array2<T>) {
    transform_2d(img, false);
}

/// Anisotropic 2-D Haar synthesis, in place.
pub fn haar_2d_inverse_inplace<T: WalshScalar>(img: &mut Array2<T>) {
    transform_2d(img, true);
}

/// 2-D Haar analysis of a real image.
pub fn haar_2d_forward(img: &Array2<f64>) -> Result<Array2<f64>> {
    let (nx, ny) = img.dim();
    check_power_of_two(nx, "Haar image rows")?;
    check_power_of_two(ny, "Haar image columns")?;
    let mut out = img.clone();
    haar_2d_forward_inplace(&mut out);
    Ok(out)
}

/// 2-D Haar synthesis of a real coefficient array.
pub fn haar_2d_inverse(coeffs: &Array2<f64>) -> Result<Array2<f64>> {
    let (nx, ny) = coeffs.dim();
    check_power_of_two(nx, "Haar image rows")?;
    check_power_of_two(ny, "Haar image columns")?;
    let mut out = coeffs.clone();
    haar_2d_inverse_inplace(&mut out);
    Ok(out)
}
