//! De-aliased products for the Galerkin solver space.
//!
//! Quadratic products are evaluated pointwise on the native grid and masked
//! by the 2/3 rule. Cubic (trilinear) products go through zero-padded
//! transforms on a grid of twice the side, where triple sums of retained
//! modes cannot alias, and are then truncated back and masked. With the band
//! floor((n-1)/3) both constructions are exactly multilinear on in-band
//! fields, which is what makes the hand-expanded operators and the generic
//! wedge oracle agree to rounding.

use super::field::ScalarField;
use super::grid::Grid;
use super::spectral::Spectrum;

/// Binary Galerkin product: pointwise then 2/3-mask.
pub fn mul2(a: &ScalarField, b: &ScalarField) -> ScalarField {
    a.pointwise_mul(b).dealias()
}

/// Samples of a field on the doubled (zero-padded) grid.
#[derive(Clone, Debug)]
pub struct PaddedScalar {
    pub grid: Grid,
    pub values: Vec<f64>,
}

pub fn pad_spectrum(s: &Spectrum) -> PaddedScalar {
    let m = s.grid.n() * 2;
    let big = s.pad_to(m);
    PaddedScalar { grid: big.grid, values: big.to_samples() }
}

pub fn pad_field(f: &ScalarField) -> PaddedScalar {
    pad_spectrum(&f.spectrum())
}

pub fn pad_constant(small: Grid, c: f64) -> PaddedScalar {
    let big = Grid::new(small.n() * 2).expect("padded grid");
    PaddedScalar { grid: big, values: vec![c; big.len()] }
}

/// Accumulator for sums of trilinear terms on the padded grid.
pub struct PaddedAccum {
    grid: Grid,
    values: Vec<f64>,
}

impl PaddedAccum {
    pub fn new(small: Grid) -> PaddedAccum {
        let big = Grid::new(small.n() * 2).expect("padded grid");
        PaddedAccum { grid: big, values: vec![0.0; big.len()] }
    }

    pub fn add_prod3(&mut self, sign: f64, a: &PaddedScalar, b: &PaddedScalar, c: &PaddedScalar) {
        debug_assert_eq!(a.grid.n(), self.grid.n());
        debug_assert_eq!(b.grid.n(), self.grid.n());
        debug_assert_eq!(c.grid.n(), self.grid.n());
        for (i, out) in self.values.iter_mut().enumerate() {
            *out += sign * a.values[i] * b.values[i] * c.values[i];
        }
    }

    /// Transform back, truncate to the native cube, and mask.
    pub fn finish(&self, small: Grid) -> ScalarField {
        debug_assert_eq!(small.n() * 2, self.grid.n());
        let s = Spectrum::from_samples(self.grid, &self.values);
        let mut t = s.truncate_to(small.n());
        t.dealias();
        ScalarField::from_spectrum(&t)
    }
}

/// Flat trilinear Galerkin product of three native-grid fields.
pub fn mul3(a: &ScalarField, b: &ScalarField, c: &ScalarField) -> ScalarField {
    let mut acc = PaddedAccum::new(a.grid);
    acc.add_prod3(1.0, &pad_field(a), &pad_field(b), &pad_field(c));
    acc.finish(a.grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // In-band multilinearity is the property the operator algebra relies on.
    #[test]
    fn products_are_multilinear_on_in_band_fields() {
        let grid = Grid::new(16).unwrap();
        let band = grid.dealias_band();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = ScalarField::random_band_limited(grid, band, 1.0, &mut rng);
        let b = ScalarField::random_band_limited(grid, band, 1.0, &mut rng);
        let c = ScalarField::random_band_limited(grid, band, 1.0, &mut rng);
        let d = ScalarField::random_band_limited(grid, band, 1.0, &mut rng);

        let lhs = mul2(&(&a + &b), &c);
        let rhs = &mul2(&a, &c) + &mul2(&b, &c);
        assert!((&lhs - &rhs).linf_norm() < 1e-12);

        let lhs = mul3(&(&a + &b), &c, &d);
        let rhs = &mul3(&a, &c, &d) + &mul3(&b, &c, &d);
        assert!((&lhs - &rhs).linf_norm() < 1e-12);
    }

    // For fields whose total bandwidth stays inside the mask, the Galerkin
    // product is the exact product.
    #[test]
    fn products_exact_for_small_bands() {
        let grid = Grid::new(32).unwrap();
        let f = ScalarField::from_fn(grid, |p| p[0].sin());
        let g = ScalarField::from_fn(grid, |p| (2.0 * p[1]).cos());
        let h = ScalarField::from_fn(grid, |p| p[2].sin());

        let exact2 = ScalarField::from_fn(grid, |p| p[0].sin() * (2.0 * p[1]).cos());
        assert!((&mul2(&f, &g) - &exact2).linf_norm() < 1e-13);

        let exact3 =
            ScalarField::from_fn(grid, |p| p[0].sin() * (2.0 * p[1]).cos() * p[2].sin());
        assert!((&mul3(&f, &g, &h) - &exact3).linf_norm() < 1e-13);
    }

    #[test]
    fn mul3_with_constant_factor_reduces_to_mul2() {
        let grid = Grid::new(16).unwrap();
        let band = grid.dealias_band();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = ScalarField::random_band_limited(grid, band, 1.0, &mut rng);
        let b = ScalarField::random_band_limited(grid, band, 1.0, &mut rng);
        let one = ScalarField::constant(grid, 2.5);
        let lhs = mul3(&a, &one, &b);
        let rhs = mul2(&a, &b).scale(2.5);
        assert!((&lhs - &rhs).linf_norm() < 1e-12);
    }
}
