//! Infinitesimal composition estimate: how a weighted Sobolev norm of
//! f composed with a moving diffeomorphism changes at s = 0.
//!
//! The norm itself is differentiated: the weighted seminorm integrands are
//! 3-forms on the fixed manifold, so no derivatives of f are lost. The
//! left-hand side below is a finite difference in s of the actual norm; the
//! right-hand side is the Cauchy-Schwarz majorant assembled from the three
//! b-term contributions.

use super::boxfield::{BoxField, BoxGrid};
use super::{multi_indices, order};
use crate::error::{Error, Result};
use crate::fields::field::kahan_sum;
use crate::linalg::{det3, inv3, Mat3, Vec3};

type VecFn = Box<dyn Fn([f64; 3]) -> Vec3>;
type DerivFn = Box<dyn Fn([f64; 3], [u32; 3]) -> Vec3>;

/// Family of diffeomorphisms y(s, x) = x + s * v(x). The velocity and its
/// spatial derivatives are supplied analytically: typical family members
/// (translations, shears) are not periodic on the box, so sampling them
/// spectrally is not an option.
pub struct VelocityFamily {
    v: VecFn,
    dv: DerivFn,
}

impl VelocityFamily {
    pub fn new(v: VecFn, dv: DerivFn) -> VelocityFamily {
        VelocityFamily { v, dv }
    }

    /// v(x) = a x + c (covers translations, shears, rotations).
    pub fn linear(a: Mat3, c: Vec3) -> VelocityFamily {
        let v = Box::new(move |p: [f64; 3]| {
            [
                a[0][0] * p[0] + a[0][1] * p[1] + a[0][2] * p[2] + c[0],
                a[1][0] * p[0] + a[1][1] * p[1] + a[1][2] * p[2] + c[1],
                a[2][0] * p[0] + a[2][1] * p[1] + a[2][2] * p[2] + c[2],
            ]
        });
        let dv = Box::new(move |_p: [f64; 3], mu: [u32; 3]| -> Vec3 {
            match order(mu) {
                1 => {
                    let axis = (0..3).find(|&i| mu[i] == 1).unwrap();
                    [a[0][axis], a[1][axis], a[2][axis]]
                }
                _ => [0.0; 3],
            }
        });
        VelocityFamily { v, dv }
    }

    pub fn translation(c: Vec3) -> VelocityFamily {
        VelocityFamily::linear([[0.0; 3]; 3], c)
    }

    #[inline]
    fn velocity(&self, p: [f64; 3]) -> Vec3 {
        (self.v)(p)
    }

    #[inline]
    fn derivative(&self, p: [f64; 3], mu: [u32; 3]) -> Vec3 {
        (self.dv)(p, mu)
    }

    fn jacobian_at(&self, p: [f64; 3]) -> Mat3 {
        let mut j = [[0.0; 3]; 3];
        for b in 0..3 {
            let mut mu = [0u32; 3];
            mu[b] = 1;
            let col = self.derivative(p, mu);
            for a in 0..3 {
                j[a][b] = col[a];
            }
        }
        j
    }
}

pub struct CompositionCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Norm at s = 0, for scale context in reports.
    pub norm_at_zero: f64,
}

/// Derivatives with respect to the y(s) coordinates, applied recursively:
/// each step is (Dy)^-T times the x-gradient.
fn dy_multi(f: &BoxField, alpha: [u32; 3], jac_inv: &[Mat3]) -> BoxField {
    let mut cur = f.clone();
    for axis in 0..3 {
        for _ in 0..alpha[axis] {
            let grads: [BoxField; 3] = std::array::from_fn(|j| cur.derivative(j));
            let mut next = BoxField::zeros(f.grid);
            for (idx, out) in next.values.iter_mut().enumerate() {
                let ji = &jac_inv[idx];
                // d/dy_i = sum_j (J^-1)_{ji} d/dx_j.
                *out = (0..3).map(|j| ji[j][axis] * grads[j].values[idx]).sum();
            }
            cur = next;
        }
    }
    cur
}

/// Weighted seminorm of f in the y(s) coordinates, integrated over the fixed
/// box: N(s)^2 = sum_S int |y^beta d_y^alpha f|^2 det(Dy) d^3x.
fn norm_at(
    f: &BoxField,
    fam: &VelocityFamily,
    s: f64,
    set: &[([u32; 3], [u32; 3])],
) -> Result<f64> {
    let grid = f.grid;
    let npts = grid.len();

    let mut jac_inv = Vec::with_capacity(npts);
    let mut dets = Vec::with_capacity(npts);
    let mut ys = Vec::with_capacity(npts);
    for idx in 0..npts {
        let p = grid.point(idx);
        let dv = fam.jacobian_at(p);
        let mut j = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                j[a][b] = (a == b) as u64 as f64 + s * dv[a][b];
            }
        }
        let d = det3(&j);
        if d <= 0.0 {
            return Err(Error::DegenerateJacobian(d));
        }
        jac_inv.push(inv3(&j).ok_or(Error::DegenerateJacobian(d))?);
        dets.push(d);
        let v = fam.velocity(p);
        ys.push([p[0] + s * v[0], p[1] + s * v[1], p[2] + s * v[2]]);
    }

    let cell = grid.spacing().powi(3);
    let mut total = 0.0;
    for &(alpha, beta) in set {
        let da = dy_multi(f, alpha, &jac_inv);
        let terms = (0..npts).map(|idx| {
            let y = ys[idx];
            let w = y[0].powi(beta[0] as i32)
                * y[1].powi(beta[1] as i32)
                * y[2].powi(beta[2] as i32);
            let q = w * da.values[idx];
            q * q * dets[idx]
        });
        total += kahan_sum(terms) * cell;
    }
    Ok(total.sqrt())
}

fn multi_binomial(alpha: [u32; 3], gamma: [u32; 3]) -> f64 {
    fn binom(n: u32, k: u32) -> f64 {
        let mut out = 1.0;
        for i in 0..k {
            out *= (n - i) as f64 / (i + 1) as f64;
        }
        out
    }
    (0..3).map(|i| binom(alpha[i], gamma[i])).product()
}

/// Finite-difference derivative of the composed norm at s = 0 (lhs) against
/// the Cauchy-Schwarz majorant (rhs). The inequality lhs <= rhs is the
/// content of the estimate; callers assert it with their own tolerance.
pub fn composition_derivative_bound(
    f: &BoxField,
    fam: &VelocityFamily,
    set: &[([u32; 3], [u32; 3])],
    fd_step: f64,
) -> Result<CompositionCheck> {
    let grid = f.grid;

    let n_plus = norm_at(f, fam, fd_step, set)?;
    let n_minus = norm_at(f, fam, -fd_step, set)?;
    let n_zero = norm_at(f, fam, 0.0, set)?;
    let lhs = (n_plus - n_minus).abs() / (2.0 * fd_step);

    // b_{alpha beta} at s = 0, from the three displayed contributions:
    //   (D y^beta)(d^alpha f) + x^beta (D d_y^alpha) f
    //   + 1/2 x^beta (d^alpha f) tr(dv).
    let npts = grid.len();
    let cell = grid.spacing().powi(3);
    let mut rhs_sq = 0.0;
    for &(alpha, beta) in set {
        let da = f.derivative_multi(alpha);
        let mut b = vec![0.0; npts];

        // Term 1: D y^beta = sum_A beta_A x^(beta - e_A) v^A.
        for a in 0..3 {
            if beta[a] == 0 {
                continue;
            }
            let mut bm = beta;
            bm[a] -= 1;
            for (idx, out) in b.iter_mut().enumerate() {
                let p = grid.point(idx);
                let w = p[0].powi(bm[0] as i32)
                    * p[1].powi(bm[1] as i32)
                    * p[2].powi(bm[2] as i32);
                *out += beta[a] as f64 * w * fam.velocity(p)[a] * da.values[idx];
            }
        }

        // Term 2: x^beta (D d_y^alpha) f with
        // D d_y^alpha = -sum_{gamma < alpha} C(alpha, gamma)
        //               sum_A (d^(alpha-gamma) v^A) d^(gamma + e_A).
        for gamma in multi_indices(order(alpha)) {
            if gamma == alpha || !(0..3).all(|i| gamma[i] <= alpha[i]) {
                continue;
            }
            let coef = multi_binomial(alpha, gamma);
            let diff = [alpha[0] - gamma[0], alpha[1] - gamma[1], alpha[2] - gamma[2]];
            for a in 0..3 {
                let mut ge = gamma;
                ge[a] += 1;
                let dgf = f.derivative_multi(ge);
                for (idx, out) in b.iter_mut().enumerate() {
                    let p = grid.point(idx);
                    let w = p[0].powi(beta[0] as i32)
                        * p[1].powi(beta[1] as i32)
                        * p[2].powi(beta[2] as i32);
                    *out -= w * coef * fam.derivative(p, diff)[a] * dgf.values[idx];
                }
            }
        }

        // Term 3: 1/2 x^beta (d^alpha f) tr(dv).
        for (idx, out) in b.iter_mut().enumerate() {
            let p = grid.point(idx);
            let w = p[0].powi(beta[0] as i32)
                * p[1].powi(beta[1] as i32)
                * p[2].powi(beta[2] as i32);
            let tr = crate::linalg::trace(&fam.jacobian_at(p));
            *out += 0.5 * w * da.values[idx] * tr;
        }

        rhs_sq += kahan_sum(b.iter().map(|v| v * v)) * cell;
    }

    Ok(CompositionCheck { lhs, rhs: rhs_sq.sqrt(), norm_at_zero: n_zero })
}
