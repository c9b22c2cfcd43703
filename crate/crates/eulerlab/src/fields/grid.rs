//! Periodic label grid on the 3-torus of side 2*pi.

use crate::error::{Error, Result};

/// Uniform n^3 grid on [0, 2*pi)^3 with integer wavevectors.
///
/// Storage is row-major with the third axis fastest:
/// `idx = (i1 * n + i2) * n + i3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Grid> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Grid { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing 2*pi/n.
    #[inline]
    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n as f64
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.n + i2) * self.n + i3
    }

    /// Signed wavenumber for FFT bin `i` in the standard layout
    /// 0, 1, .., n/2-1, -n/2, .., -1.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    #[inline]
    pub fn wavevector(&self, idx: usize) -> [i64; 3] {
        let n = self.n;
        let i3 = idx % n;
        let i2 = (idx / n) % n;
        let i1 = idx / (n * n);
        [self.wavenumber(i1), self.wavenumber(i2), self.wavenumber(i3)]
    }

    /// Physical coordinates of grid point `idx`.
    #[inline]
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let n = self.n;
        let h = self.spacing();
        let i3 = idx % n;
        let i2 = (idx / n) % n;
        let i1 = idx / (n * n);
        [i1 as f64 * h, i2 as f64 * h, i3 as f64 * h]
    }

    /// Largest retained wavenumber under the 2/3-rule de-aliasing mask.
    ///
    /// Chosen as floor((n-1)/3) so that triple sums of retained modes can
    /// never wrap around the periodic spectrum.
    #[inline]
    pub fn dealias_band(&self) -> i64 {
        ((self.n as i64) - 1) / 3
    }

    /// True if the mode survives the 2/3-rule mask (componentwise).
    #[inline]
    pub fn in_band(&self, k: [i64; 3]) -> bool {
        let b = self.dealias_band();
        k[0].abs() <= b && k[1].abs() <= b && k[2].abs() <= b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavevectors_symmetric_under_negation() {
        let g = Grid::new(16).unwrap();
        let mut ks: Vec<i64> = (0..16).map(|i| g.wavenumber(i)).collect();
        ks.sort_unstable();
        // -n/2 is its own negative on the discrete circle; all others pair up.
        for k in 1..8i64 {
            assert!(ks.contains(&k) && ks.contains(&-k));
        }
        assert!(ks.contains(&-8));
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(7).is_err());
        assert!(Grid::new(12).is_err());
        assert!(Grid::new(4).is_err());
        assert!(Grid::new(8).is_ok());
    }

    #[test]
    fn dealias_band_avoids_triple_wraparound() {
        for n in [8usize, 16, 24usize.next_power_of_two(), 32, 64] {
            let g = Grid::new(n).unwrap();
            assert!(3 * g.dealias_band() < n as i64);
        }
    }
}
