//! Orthonormal sequency-ordered Walsh–Hadamard transform.
//!
//! The fast butterfly produces natural (Sylvester) ordering; rows are then
//! reordered into sequency order through the Gray-code + bit-reversal
//! permutation. In sequency order the transform matrix is symmetric, so the
//! orthonormal transform is its own inverse and its own adjoint.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::Result;
use crate::transforms::dft::check_power_of_two;

/// Element types the Walsh–Hadamard butterfly operates on.
pub trait WalshScalar:
    Copy + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + std::ops::Mul<f64, Output = Self>
{
}

impl WalshScalar for f64 {}
impl WalshScalar for Complex64 {}

/// Natural-order fast Walsh–Hadamard butterfly, unnormalized.
fn fwht_natural_inplace<T: WalshScalar>(data: &mut [T]) {
    let n = data.len();
    let mut h = 1;
    while h < n {
        let step = h * 2;
        let mut i = 0;
        while i < n {
            for j in i..i + h {
                let a = data[j];
                let b = data[j + h];
                data[j] = a + b;
                data[j + h] = a - b;
            }
            i += step;
        }
        h = step;
    }
}

/// Natural (Sylvester) row index holding sequency row `s` of the Walsh matrix.
fn sequency_to_natural(s: usize, bits: u32) -> usize {
    let gray = s ^ (s >> 1);
    gray.reverse_bits() >> (usize::BITS - bits)
}

/// Reusable plan for the orthonormal 1-D sequency WHT of one length.
pub struct WalshPlan {
    n: usize,
    // perm[s] = natural-order position holding sequency coefficient s
    perm: Vec<usize>,
    scale: f64,
}

impl WalshPlan {
    pub fn new(n: usize) -> Result<Self> {
        check_power_of_two(n, "WHT length")?;
        let bits = n.trailing_zeros();
        let perm = (0..n).map(|s| sequency_to_natural(s, bits)).collect();
        Ok(Self {
            n,
            perm,
            scale: 1.0 / (n as f64).sqrt(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// In-place orthonormal sequency-ordered WHT; `scratch` must have length n.
    pub fn transform_with_scratch<T: WalshScalar>(&self, data: &mut [T], scratch: &mut Vec<T>) {
        debug_assert_eq!(data.len(), self.n);
        fwht_natural_inplace(data);
        scratch.clear();
        scratch.extend(self.perm.iter().map(|&p| data[p] * self.scale));
        data.copy_from_slice(scratch);
    }

    pub fn transform_inplace<T: WalshScalar>(&self, data: &mut [T]) {
        let mut scratch = Vec::with_capacity(self.n);
        self.transform_with_scratch(data, &mut scratch);
    }
}

/// Orthonormal sequency WHT of a real vector.
pub fn wht_1d(x: &[f64]) -> Result<Vec<f64>> {
    let plan = WalshPlan::new(x.len())?;
    let mut y = x.to_vec();
    plan.transform_inplace(&mut y);
    Ok(y)
}

/// Plans for a separable 2-D transform on `nx x ny` images.
pub struct Walsh2dPlan {
    pub(crate) rows: WalshPlan,
    pub(crate) cols: WalshPlan,
}

impl Walsh2dPlan {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        Ok(Self {
            rows: WalshPlan::new(ny)?,
            cols: WalshPlan::new(nx)?,
        })
    }

    /// In-place 2-D transform: 1-D WHT along every row, then every column.
    pub fn transform_inplace<T: WalshScalar>(&self, img: &mut Array2<T>) {
        let (nx, ny) = img.dim();
        debug_assert_eq!((nx, ny), (self.cols.len(), self.rows.len()));
        let mut scratch = Vec::with_capacity(ny.max(nx));
        for mut row in img.rows_mut() {
            let slice = row.as_slice_mut().expect("contiguous row");
            self.rows.transform_with_scratch(slice, &mut scratch);
        }
        let mut col_buf: Vec<T> = Vec::with_capacity(nx);
        for j in 0..ny {
            col_buf.clear();
            col_buf.extend(img.column(j).iter().copied());
            self.cols.transform_with_scratch(&mut col_buf, &mut scratch);
            for (i, v) in col_buf.iter().enumerate() {
                img[[i, j]] = *v;
            }
        }
    }
}

/// Orthonormal 2-D sequency WHT of a real image (self-inverse).
pub fn wht_2d_forward(img: &Array2<f64>) -> Result<Array2<f64>> {
    let (nx, ny) = img.dim();
    let plan = Walsh2dPlan::new(nx, ny)?;
    let mut out = img.clone();
    plan.transform_inplace(&mut out);
    Ok(out)
}

/// Dense sequency-ordered orthonormal Walsh matrix (test and coherence use).
pub fn dense_walsh_matrix(n: usize) -> Result<Array2<f64>> {
    check_power_of_two(n, "WHT length")?;
    let bits = n.trailing_zeros();
    let scale = 1.0 / (n as f64).sqrt();
    let mut w = Array2::zeros((n, n));
    for s in 0..n {
        let nat = sequency_to_natural(s, bits);
        for j in 0..n {
            let sign = if (nat & j).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            w[[s, j]] = sign * scale;
        }
    }
    Ok(w)
}
