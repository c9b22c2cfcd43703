//! Sobolev norms of periodic fields, computed spectrally.
//!
//! Polynomial weights are not periodic, so the torus versions carry the
//! L = 0 part of the scale only; the weighted cases live on box grids.

use super::{multi_indices, SobolevParams};
use crate::error::{Error, Result};
use crate::fields::field::kahan_sum;
use crate::fields::{FormPair, ScalarField, VectorField};

const MEAN_TOL: f64 = 1e-11;

/// Sum over modes of |c_k|^2 * sum_{|alpha| <= M} k^(2 alpha), times the
/// torus volume (Parseval).
fn dn_sq_scalar(u: &ScalarField, p: SobolevParams) -> f64 {
    let s = u.spectrum();
    let alphas = multi_indices(p.m);
    let vol = (2.0 * std::f64::consts::PI).powi(3);
    let terms = s.coeffs.iter().enumerate().map(|(idx, c)| {
        let k = s.grid.wavevector(idx);
        let mut mult = 0.0;
        for a in &alphas {
            let mut t = 1.0;
            for i in 0..3 {
                t *= (k[i] as f64).powi(2 * a[i] as i32);
            }
            mult += t;
        }
        c.norm_sqr() * mult
    });
    vol * kahan_sum(terms)
}

/// DN norm of a scalar field (weights beta = 0 on the torus).
pub fn dn_norm(u: &ScalarField, p: SobolevParams) -> f64 {
    dn_sq_scalar(u, p).sqrt()
}

/// DN norm of a tuple: square root of the sum of squared component norms.
pub fn dn_norm_vector(u: &VectorField, p: SobolevParams) -> f64 {
    u.components.iter().map(|c| dn_sq_scalar(c, p)).sum::<f64>().sqrt()
}

/// DN norm of a right-hand-side pair (coefficients with respect to the
/// coordinate differentials).
pub fn dn_norm_pair(w: &FormPair, p: SobolevParams) -> f64 {
    (w.two_form_axial.components.iter().map(|c| dn_sq_scalar(c, p)).sum::<f64>()
        + dn_sq_scalar(&w.three_form, p))
    .sqrt()
}

/// N norm: DN norm of the gradient. Constant functions are not in N; a
/// nonzero mean is flagged as an error.
pub fn n_norm(u: &ScalarField, p: SobolevParams) -> Result<f64> {
    let mean = u.mean();
    let scale = u.linf_norm().max(1.0);
    if mean.abs() > MEAN_TOL * scale {
        return Err(Error::NonzeroMean { mean, tol: MEAN_TOL * scale });
    }
    let sq: f64 = (0..3).map(|axis| dn_sq_scalar(&u.derivative(axis), p)).sum();
    Ok(sq.sqrt())
}

/// N norm of a vector field (gradient tuple has nine entries).
pub fn n_norm_vector(u: &VectorField, p: SobolevParams) -> Result<f64> {
    let mut sq = 0.0;
    for c in &u.components {
        let mean = c.mean();
        let scale = c.linf_norm().max(1.0);
        if mean.abs() > MEAN_TOL * scale {
            return Err(Error::NonzeroMean { mean, tol: MEAN_TOL * scale });
        }
        for axis in 0..3 {
            sq += dn_sq_scalar(&c.derivative(axis), p);
        }
    }
    Ok(sq.sqrt())
}

/// DK norm: sum over |alpha| <= 2 of sup |d^alpha u| on grid samples.
pub fn dk_norm(u: &ScalarField) -> f64 {
    multi_indices(2)
        .iter()
        .map(|a| {
            let mut f = u.clone();
            for axis in 0..3 {
                for _ in 0..a[axis] {
                    f = f.derivative(axis);
                }
            }
            f.linf_norm()
        })
        .sum()
}

/// DK norm of a tuple: the largest component DK norm.
pub fn dk_norm_vector(u: &VectorField) -> f64 {
    u.components.iter().map(dk_norm).fold(0.0, f64::max)
}

/// DK norm of a gradient matrix (nine scalar entries).
pub fn dk_norm_jacobian(jac: &[[ScalarField; 3]; 3]) -> f64 {
    jac.iter().flatten().map(dk_norm).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_field_has_zero_norms() {
        let grid = Grid::new(16).unwrap();
        let z = ScalarField::zeros(grid);
        let p = SobolevParams::default();
        assert_eq!(dn_norm(&z, p), 0.0);
        assert_eq!(dk_norm(&z), 0.0);
        assert_eq!(n_norm(&z, p).unwrap(), 0.0);
    }

    #[test]
    fn constants_rejected_by_n() {
        let grid = Grid::new(16).unwrap();
        let c = ScalarField::constant(grid, 1.0);
        assert!(matches!(
            n_norm(&c, SobolevParams::default()),
            Err(Error::NonzeroMean { .. })
        ));
    }

    #[test]
    fn n_norm_is_dn_of_gradient() {
        let grid = Grid::new(16).unwrap();
        let p = SobolevParams::new(2, 0).unwrap();
        let u = ScalarField::from_fn(grid, |x| x[0].sin());
        // Gradient of sin(x1) is (cos(x1), 0, 0).
        let g = VectorField::from_fn(grid, |x| [x[0].cos(), 0.0, 0.0]);
        let lhs = n_norm(&u, p).unwrap();
        let rhs = dn_norm_vector(&g, p);
        assert!((lhs - rhs).abs() < 1e-12 * rhs);

        // Random zero-mean field: identity holds by definition.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = ScalarField::random_band_limited(grid, 5, 1.0, &mut rng);
        let grad = VectorField {
            components: [f.derivative(0), f.derivative(1), f.derivative(2)],
        };
        let lhs = n_norm(&f, p).unwrap();
        let rhs = dn_norm_vector(&grad, p);
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn dk_of_single_mode_is_three() {
        let grid = Grid::new(32).unwrap();
        let u = ScalarField::from_fn(grid, |x| x[0].sin());
        // sup of u, d1 u, d11 u are all 1 on a grid that hits the extrema.
        assert!((dk_norm(&u) - 3.0).abs() < 1e-8);
    }

    #[test]
    fn dn_is_a_norm_homogeneous_and_triangle() {
        let grid = Grid::new(16).unwrap();
        let p = SobolevParams::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let f = ScalarField::random_band_limited(grid, 4, 1.0, &mut rng);
            let g = ScalarField::random_band_limited(grid, 4, 1.0, &mut rng);
            let c = -2.5;
            assert!((dn_norm(&f.scale(c), p) - c.abs() * dn_norm(&f, p)).abs() < 1e-10);
            assert!(dn_norm(&(&f + &g), p) <= dn_norm(&f, p) + dn_norm(&g, p) + 1e-12);
        }
    }

    // Known closed form: for u = sin(x1) and (M, L) = (2, 0) the derivative
    // sum has three nonzero terms, each of squared L2 norm (2 pi)^3 / 2.
    #[test]
    fn dn_of_single_mode_matches_closed_form() {
        let grid = Grid::new(16).unwrap();
        let u = ScalarField::from_fn(grid, |x| x[0].sin());
        let p = SobolevParams::new(2, 0).unwrap();
        let vol = (2.0 * std::f64::consts::PI).powi(3);
        let want = (3.0 * vol / 2.0).sqrt();
        assert!((dn_norm(&u, p) - want).abs() < 1e-10);
    }
}
