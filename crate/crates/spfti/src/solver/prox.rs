//! Proximal building blocks for the primal–dual solver.

use ndarray::Array2;
use num_complex::Complex64;

/// Complex soft threshold: shrink the magnitude by `lambda`, keep the phase.
pub fn soft_threshold(v: Complex64, lambda: f64) -> Complex64 {
    let mag = v.norm();
    if mag <= lambda {
        Complex64::ZERO
    } else {
        v * ((mag - lambda) / mag)
    }
}

/// Frobenius norm of a complex matrix.
pub fn frobenius(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Projection of `z` onto the Frobenius ball of radius `eps` around
/// `center`. Radius zero projects onto the center itself.
pub fn project_ball(
    z: &Array2<Complex64>,
    center: &Array2<Complex64>,
    eps: f64,
) -> Array2<Complex64> {
    let diff = z - center;
    let dist = frobenius(&diff);
    if dist <= eps {
        z.clone()
    } else {
        center + &(diff * (eps / dist))
    }
}

/// Dual prox of the l1 norm at step `sigma`, applied in place.
///
/// By the Moreau identity this is `v - sigma * soft(v / sigma, 1 / sigma)`,
/// which equals the projection of each entry onto the complex unit disc.
pub fn l1_dual_prox_inplace(v: &mut Array2<Complex64>, sigma: f64) {
    for x in v.iter_mut() {
        *x -= soft_threshold(*x / sigma, 1.0 / sigma) * sigma;
    }
}

/// Dual prox of the `eps`-ball data-fidelity indicator at step `sigma`,
/// via the Moreau identity: `v - sigma * proj_ball(v / sigma)`.
pub fn ball_dual_prox(
    v: &Array2<Complex64>,
    center: &Array2<Complex64>,
    eps: f64,
    sigma: f64,
) -> Array2<Complex64> {
    let scaled = v.mapv(|x| x / sigma);
    v - &(project_ball(&scaled, center, eps) * sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(shape: (usize, usize), seed: u64) -> Array2<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_fn(shape, |_| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn soft_threshold_shrinks_magnitude_and_keeps_phase() {
        let v = Complex64::new(3.0, 4.0); // magnitude 5
        let s = soft_threshold(v, 2.0);
        assert!((s.norm() - 3.0).abs() < 1e-15);
        assert!((s.arg() - v.arg()).abs() < 1e-15);
        assert_eq!(soft_threshold(Complex64::new(0.3, -0.4), 0.5), Complex64::ZERO);
        assert_eq!(soft_threshold(Complex64::ZERO, 0.1), Complex64::ZERO);
    }

    #[test]
    fn l1_dual_prox_is_unit_disc_projection() {
        let mut v = random_matrix((5, 7), 1);
        v *= Complex64::new(3.0, 0.0);
        let mut moreau = v.clone();
        l1_dual_prox_inplace(&mut moreau, 0.7);
        for (m, orig) in moreau.iter().zip(v.iter()) {
            let clip = if orig.norm() > 1.0 {
                orig / orig.norm()
            } else {
                *orig
            };
            assert!((m - clip).norm() < 1e-12);
        }
    }

    #[test]
    fn ball_projection_cases() {
        let center = random_matrix((4, 4), 2);
        let inside = &center + &(random_matrix((4, 4), 3) * 0.01);
        let proj = project_ball(&inside, &center, 1.0);
        for (a, b) in proj.iter().zip(inside.iter()) {
            assert_eq!(a, b);
        }

        let outside = &center + &random_matrix((4, 4), 4);
        let proj = project_ball(&outside, &center, 0.25);
        assert!((frobenius(&(&proj - &center)) - 0.25).abs() < 1e-12);

        // Radius zero is the equality constraint.
        let proj = project_ball(&outside, &center, 0.0);
        for (a, b) in proj.iter().zip(center.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn ball_dual_prox_satisfies_moreau_identity() {
        let center = random_matrix((3, 6), 5);
        for (seed, sigma, eps) in [(6, 0.3, 0.5), (7, 1.7, 0.0), (8, 0.9, 2.5)] {
            let v = random_matrix((3, 6), seed) * 4.0;
            let lhs = ball_dual_prox(&v, &center, eps, sigma);
            let direct = project_ball(&v.mapv(|x| x / sigma), &center, eps);
            let rhs = &v - &(direct * sigma);
            for (a, b) in lhs.iter().zip(rhs.iter()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
