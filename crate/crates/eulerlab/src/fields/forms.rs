//! Differential forms in coordinates and the wedge-product residual oracle.
//!
//! 2-forms are stored in the axial representation
//! `F = 1/2 eps_ABC a^A dl^B wedge dl^C`, i.e. `a^1 = F_23`, `a^2 = F_31`,
//! `a^3 = F_12`. The oracle expands wedge products of 1-forms generically
//! with the Levi-Civita symbol and antisymmetrization; no operator identity
//! is folded in by hand. Hand-expanded operators elsewhere are tested
//! against it.

use super::field::{ScalarField, VectorField};
use super::grid::Grid;
use super::products::{mul2, pad_constant, pad_field, PaddedAccum, PaddedScalar};

/// Totally antisymmetric symbol with eps(0,1,2) = 1.
#[inline]
pub fn eps(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Right-hand-side pair for the elliptic problem: an axial 2-form and a
/// 3-form scalar.
#[derive(Clone, Debug)]
pub struct FormPair {
    pub two_form_axial: VectorField,
    pub three_form: ScalarField,
}

impl FormPair {
    pub fn zeros(grid: Grid) -> FormPair {
        FormPair {
            two_form_axial: VectorField::zeros(grid),
            three_form: ScalarField::zeros(grid),
        }
    }

    pub fn grid(&self) -> Grid {
        self.three_form.grid
    }

    pub fn scale(&self, c: f64) -> FormPair {
        FormPair {
            two_form_axial: self.two_form_axial.scale(c),
            three_form: self.three_form.scale(c),
        }
    }

    pub fn linf_norm(&self) -> f64 {
        self.two_form_axial.linf_norm().max(self.three_form.linf_norm())
    }

    /// Divergence of the axial part; vanishes exactly when the 2-form is
    /// closed (the integrability condition).
    pub fn integrability_defect(&self) -> f64 {
        self.two_form_axial.divergence().linf_norm()
    }
}

impl std::ops::Add<&FormPair> for &FormPair {
    type Output = FormPair;
    fn add(self, rhs: &FormPair) -> FormPair {
        FormPair {
            two_form_axial: &self.two_form_axial + &rhs.two_form_axial,
            three_form: &self.three_form + &rhs.three_form,
        }
    }
}

impl std::ops::Sub<&FormPair> for &FormPair {
    type Output = FormPair;
    fn sub(self, rhs: &FormPair) -> FormPair {
        FormPair {
            two_form_axial: &self.two_form_axial - &rhs.two_form_axial,
            three_form: &self.three_form - &rhs.three_form,
        }
    }
}

/// A map `l -> x(l)` split into a constant linear part and a periodic part,
/// so that affine symmetries (rotations, scalings, boosts) stay representable
/// on the torus. `x^A = sum_B lin[A][B] l^B + shift^A + periodic^A(l)`.
#[derive(Clone, Debug)]
pub struct XMap {
    pub lin: [[f64; 3]; 3],
    pub periodic: VectorField,
}

impl XMap {
    /// x = l + y for a periodic displacement y.
    pub fn displacement(y: &VectorField) -> XMap {
        let mut lin = [[0.0; 3]; 3];
        for (a, row) in lin.iter_mut().enumerate() {
            row[a] = 1.0;
        }
        XMap { lin, periodic: y.clone() }
    }

    pub fn identity(grid: Grid) -> XMap {
        XMap::displacement(&VectorField::zeros(grid))
    }

    pub fn grid(&self) -> Grid {
        self.periodic.grid()
    }

    /// Gradient rows d(x^A)/d(l^B) = lin[A][B] + d(periodic^A)/d(l^B).
    pub fn gradient_rows(&self) -> [[ScalarField; 3]; 3] {
        let grid = self.grid();
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut d = self.periodic.comp(a).derivative(b);
                if self.lin[a][b] != 0.0 {
                    d = &d + &ScalarField::constant(grid, self.lin[a][b]);
                }
                d
            })
        })
    }
}

/// Evaluates the residual of the wedge-product equations
/// `delta_AB dv^A ^ dx^B - Omega_2` and
/// `eps_ABC dv^A ^ dx^B ^ dx^C - Omega_3`
/// in the (axial, scalar) representation, using de-aliased Galerkin products.
///
/// This is the ground-truth oracle; `Omega_3` is zero for the plain Euler
/// system but kept general for reference-flow error pairs.
pub fn wedge_residual_full(v: &VectorField, x_map: &XMap, omega: &FormPair) -> FormPair {
    let grid = v.grid();
    assert_eq!(grid.n(), x_map.grid().n());
    assert_eq!(grid.n(), omega.grid().n());

    let dv = v.jacobian();
    let dx = x_map.gradient_rows();

    // 2-form part: sum_{A,B} delta_AB  dv^A ^ dx^B, expanded generically:
    // axial_D = sum_A sum_{B,C} eps_DBC (dv^A)_B (dx^A)_C.
    let mut axial: [ScalarField; 3] = std::array::from_fn(|_| ScalarField::zeros(grid));
    for d in 0..3 {
        let mut acc = ScalarField::zeros(grid);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let e = eps(d, b, c);
                    if e != 0.0 {
                        let prod = dv[a][b].pointwise_mul(&dx[a][c]);
                        acc = &acc + &prod.scale(e);
                    }
                }
            }
        }
        axial[d] = acc.dealias();
    }

    // 3-form part: sum_{A,B,C} eps_ABC dv^A ^ dx^B ^ dx^C. Each triple wedge
    // of 1-forms u ^ p ^ q expands as sum over permutations (i,j,k) of
    // eps(i,j,k) u_i p_j q_k; everything is accumulated on the padded grid
    // and transformed once.
    let pad_dv: Vec<[PaddedScalar; 3]> =
        (0..3).map(|a| std::array::from_fn(|b| pad_field(&dv[a][b]))).collect();
    let pad_dx: Vec<[PaddedScalar; 3]> = (0..3)
        .map(|a| {
            std::array::from_fn(|b| {
                if is_constant_row(&x_map.periodic.comp(a).values) {
                    pad_constant(grid, x_map.lin[a][b])
                } else {
                    pad_field(&dx[a][b])
                }
            })
        })
        .collect();

    let mut acc = PaddedAccum::new(grid);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let e1 = eps(a, b, c);
                if e1 == 0.0 {
                    continue;
                }
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            let e2 = eps(i, j, k);
                            if e2 == 0.0 {
                                continue;
                            }
                            acc.add_prod3(
                                e1 * e2,
                                &pad_dv[a][i],
                                &pad_dx[b][j],
                                &pad_dx[c][k],
                            );
                        }
                    }
                }
            }
        }
    }
    let three = acc.finish(grid);

    FormPair {
        two_form_axial: &VectorField { components: axial } - &omega.two_form_axial,
        three_form: &three - &omega.three_form,
    }
}

fn is_constant_row(values: &[f64]) -> bool {
    values.iter().all(|&v| v == values[0])
}
