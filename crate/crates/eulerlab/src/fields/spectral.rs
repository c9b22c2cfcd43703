//! FFT plumbing and the spectral representation of torus fields.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::grid::Grid;
use crate::error::{Error, Result};

fn plan(n: usize, dir: FftDirection) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (n, matches!(dir, FftDirection::Forward));
    let mut map = cache.lock().unwrap();
    map.entry(key)
        .or_insert_with(|| FftPlanner::new().plan_fft(n, dir))
        .clone()
}

/// In-place 3D FFT over a cube of side `n`, third axis fastest.
fn fft3(data: &mut [Complex64], n: usize, dir: FftDirection) {
    debug_assert_eq!(data.len(), n * n * n);
    let fft = plan(n, dir);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // Axis 3: contiguous rows.
    for row in data.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    // Axes 2 and 1: gather strided lines, transform, scatter back.
    let mut line = vec![Complex64::default(); n];
    for i1 in 0..n {
        for i3 in 0..n {
            let base = i1 * n * n + i3;
            for i2 in 0..n {
                line[i2] = data[base + i2 * n];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for i2 in 0..n {
                data[base + i2 * n] = line[i2];
            }
        }
    }
    for i2 in 0..n {
        for i3 in 0..n {
            let base = i2 * n + i3;
            for i1 in 0..n {
                line[i1] = data[base + i1 * n * n];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for i1 in 0..n {
                data[base + i1 * n * n] = line[i1];
            }
        }
    }
}

/// Fourier coefficients of a field: `f(x) = sum_k c_k exp(i k.x)`.
///
/// Real fields have conjugate-symmetric coefficients, `c_{-k} = conj(c_k)`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub grid: Grid,
    pub coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(grid: Grid) -> Spectrum {
        Spectrum { grid, coeffs: vec![Complex64::default(); grid.len()] }
    }

    pub fn from_samples(grid: Grid, samples: &[f64]) -> Spectrum {
        let mut coeffs: Vec<Complex64> =
            samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft3(&mut coeffs, grid.n(), FftDirection::Forward);
        let scale = 1.0 / grid.len() as f64;
        for c in &mut coeffs {
            *c *= scale;
        }
        Spectrum { grid, coeffs }
    }

    /// Inverse transform back to real samples. The imaginary residue of a
    /// conjugate-symmetric spectrum is discarded.
    pub fn to_samples(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        fft3(&mut data, self.grid.n(), FftDirection::Inverse);
        data.into_iter().map(|c| c.re).collect()
    }

    /// Coefficient at integer wavevector `k`, zero outside the cube.
    pub fn coeff(&self, k: [i64; 3]) -> Complex64 {
        let n = self.grid.n() as i64;
        for &ki in &k {
            if ki < -n / 2 || ki >= n / 2 {
                return Complex64::default();
            }
        }
        let wrap = |ki: i64| -> usize { ((ki + n) % n) as usize };
        self.coeffs[self.grid.index(wrap(k[0]), wrap(k[1]), wrap(k[2]))]
    }

    pub fn coeff_mut(&mut self, k: [i64; 3]) -> &mut Complex64 {
        let n = self.grid.n() as i64;
        let wrap = |ki: i64| -> usize { ((ki + n) % n) as usize };
        let idx = self.grid.index(wrap(k[0]), wrap(k[1]), wrap(k[2]));
        &mut self.coeffs[idx]
    }

    /// Multiplier i*k_axis (spectral partial derivative).
    pub fn derivative(&self, axis: usize) -> Spectrum {
        assert!(axis < 3);
        let mut out = self.clone();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            let k = self.grid.wavevector(idx);
            *c *= Complex64::new(0.0, k[axis] as f64);
        }
        out
    }

    /// Zero out modes outside the 2/3-rule band (componentwise mask).
    pub fn dealias(&mut self) {
        for idx in 0..self.coeffs.len() {
            if !self.grid.in_band(self.grid.wavevector(idx)) {
                self.coeffs[idx] = Complex64::default();
            }
        }
    }

    /// Largest |k|_inf carrying a coefficient above `tol` (absolute).
    pub fn band(&self, tol: f64) -> i64 {
        let mut band = 0;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.norm() > tol {
                let k = self.grid.wavevector(idx);
                band = band.max(k[0].abs()).max(k[1].abs()).max(k[2].abs());
            }
        }
        band
    }

    /// Embed into a cube of side `m >= n` (zero padding in k-space).
    pub fn pad_to(&self, m: usize) -> Spectrum {
        let big = Grid::new(m).expect("padded grid size");
        assert!(m >= self.grid.n());
        let mut out = Spectrum::zeros(big);
        for (idx, &c) in self.coeffs.iter().enumerate() {
            // The source n/2 bin reads as -n/2 and lands on the negative side
            // of the padded cube; de-aliased fields carry nothing there.
            let k = self.grid.wavevector(idx);
            *out.coeff_mut(k) = c;
        }
        out
    }

    /// Restrict to a cube of side `m <= n`, dropping outside modes.
    pub fn truncate_to(&self, m: usize) -> Spectrum {
        let small = Grid::new(m).expect("truncated grid size");
        assert!(m <= self.grid.n());
        let mut out = Spectrum::zeros(small);
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            *c = self.coeff(small.wavevector(idx));
        }
        out
    }

    /// Evaluate the trigonometric interpolant at arbitrary points, summing
    /// modes with |k|_inf <= `band` (pass `n/2` for the full cube).
    pub fn eval_at(&self, points: &[[f64; 3]], band: i64) -> Vec<f64> {
        let n = self.grid.n();
        let nyq = (n / 2) as i64;
        let band = band.min(nyq);
        // Collect the contributing modes once.
        let mut modes: Vec<([i64; 3], Complex64)> = Vec::new();
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let k = self.grid.wavevector(idx);
            if k[0].abs() <= band && k[1].abs() <= band && k[2].abs() <= band {
                if c.norm_sqr() > 0.0 {
                    modes.push((k, c));
                }
            }
        }
        points
            .iter()
            .map(|p| {
                let mut acc = Complex64::default();
                for &(k, c) in &modes {
                    let phase = k[0] as f64 * p[0] + k[1] as f64 * p[1] + k[2] as f64 * p[2];
                    acc += c * Complex64::new(phase.cos(), phase.sin());
                }
                acc.re
            })
            .collect()
    }

    pub fn check_grid(&self, other: &Spectrum) -> Result<()> {
        if self.grid.n() != other.grid.n() {
            return Err(Error::SizeMismatch(self.grid.n(), other.grid.n()));
        }
        Ok(())
    }
}

impl std::ops::Add<&Spectrum> for Spectrum {
    type Output = Spectrum;
    fn add(mut self, rhs: &Spectrum) -> Spectrum {
        assert_eq!(self.grid.n(), rhs.grid.n());
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl std::ops::Sub<&Spectrum> for Spectrum {
    type Output = Spectrum;
    fn sub(mut self, rhs: &Spectrum) -> Spectrum {
        assert_eq!(self.grid.n(), rhs.grid.n());
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_matches_known_modes() {
        let g = Grid::new(16).unwrap();
        // f = 1 -> only k = 0.
        let ones = vec![1.0; g.len()];
        let s = Spectrum::from_samples(g, &ones);
        assert!((s.coeff([0, 0, 0]).re - 1.0).abs() < 1e-14);
        assert!(s.coeff([1, 0, 0]).norm() < 1e-14);

        // f = cos(x1) -> 1/2 at k = (+-1,0,0).
        let cosx: Vec<f64> = (0..g.len()).map(|i| g.point(i)[0].cos()).collect();
        let s = Spectrum::from_samples(g, &cosx);
        assert!((s.coeff([1, 0, 0]).re - 0.5).abs() < 1e-14);
        assert!((s.coeff([-1, 0, 0]).re - 0.5).abs() < 1e-14);
        assert!(s.coeff([0, 1, 0]).norm() < 1e-14);
    }

    #[test]
    fn pad_truncate_roundtrip() {
        let g = Grid::new(8).unwrap();
        let f: Vec<f64> = (0..g.len())
            .map(|i| {
                let p = g.point(i);
                (p[0] + 2.0 * p[1]).sin() + (p[2]).cos()
            })
            .collect();
        let s = Spectrum::from_samples(g, &f);
        let back = s.pad_to(16).truncate_to(8);
        for (a, b) in s.coeffs.iter().zip(&back.coeffs) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
