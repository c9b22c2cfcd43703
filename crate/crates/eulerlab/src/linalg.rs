//! Small fixed-size linear algebra helpers used by the Jacobian plumbing.

pub type Mat3 = [[f64; 3]; 3];
pub type Vec3 = [f64; 3];

pub const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

#[inline]
pub fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse via the adjugate; returns None when the determinant underflows.
pub fn inv3(m: &Mat3) -> Option<Mat3> {
    let d = det3(m);
    if d.abs() < 1e-300 {
        return None;
    }
    let c = |i: usize, j: usize| -> f64 {
        let r = [(i + 1) % 3, (i + 2) % 3];
        let s = [(j + 1) % 3, (j + 2) % 3];
        m[r[0]][s[0]] * m[r[1]][s[1]] - m[r[0]][s[1]] * m[r[1]][s[0]]
    };
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // Adjugate transpose built into the index order.
            out[j][i] = c(i, j) / d;
        }
    }
    Some(out)
}

#[inline]
pub fn matvec(m: &Mat3, v: &Vec3) -> Vec3 {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

#[inline]
pub fn matmul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

#[inline]
pub fn transpose(m: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[j][i];
        }
    }
    out
}

#[inline]
pub fn trace(m: &Mat3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

#[inline]
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Coefficients of det(x I - A) = x^3 + c2 x^2 + c1 x + c0.
pub fn char_poly(a: &Mat3) -> [f64; 3] {
    let tr = trace(a);
    let a2 = matmul(a, a);
    let c2 = -tr;
    let c1 = 0.5 * (tr * tr - trace(&a2));
    let c0 = -det3(a);
    [c0, c1, c2]
}

/// Roots of x^3 + c2 x^2 + c1 x + c0 (real coefficients), as complex pairs.
pub fn cubic_roots(c: [f64; 3]) -> [num_complex::Complex64; 3] {
    use num_complex::Complex64;
    let [c0, c1, c2] = c;
    let a = Complex64::new(c2, 0.0);
    let b = Complex64::new(c1, 0.0);
    let d = Complex64::new(c0, 0.0);
    // Depressed cubic t^3 + p t + q with x = t - a/3.
    let p = b - a * a / 3.0;
    let q = a * (a * a * 2.0 / 27.0) - a * b / 3.0 + d;
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    let sq = disc.sqrt();
    let mut u = (-q / 2.0 + sq).cbrt_principal();
    if u.norm() < 1e-30 {
        u = (-q / 2.0 - sq).cbrt_principal();
    }
    let omega = Complex64::new(-0.5, 3.0_f64.sqrt() / 2.0);
    let mut roots = [Complex64::default(); 3];
    for (i, r) in roots.iter_mut().enumerate() {
        let uk = u * omega.powu(i as u32);
        let t = if uk.norm() < 1e-30 { uk } else { uk - p / (uk * 3.0) };
        *r = t - a / 3.0;
    }
    roots
}

trait CbrtPrincipal {
    fn cbrt_principal(self) -> Self;
}

impl CbrtPrincipal for num_complex::Complex64 {
    fn cbrt_principal(self) -> Self {
        self.powf(1.0 / 3.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = [[2.0, 1.0, 0.5], [0.0, 3.0, -1.0], [1.0, 0.0, 1.5]];
        let inv = inv3(&m).unwrap();
        let prod = matmul(&m, &inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[i][j] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cubic_roots_recover_eigenvalues() {
        // Matrix with eigenvalues 1, 2, 3.
        let m = [[1.0, 5.0, 0.0], [0.0, 2.0, 1.0], [0.0, 0.0, 3.0]];
        let mut roots: Vec<f64> = cubic_roots(char_poly(&m)).iter().map(|r| r.re).collect();
        roots.sort_by(f64::total_cmp);
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - want).abs() < 1e-10);
        }
    }
}
