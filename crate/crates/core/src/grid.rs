//! Uniform periodic lattice, complex fields on it, quadrature and the
//! discrete Fourier pair used by the spectral propagator.
//!
//! Spectral convention: `to_spectral` is the unnormalized forward DFT,
//! `ψ̂_m = Σ_j ψ_j e^{−2πi jm/n}`, and `from_spectral` carries the `1/n`.
//! With that choice Parseval reads `Σ_j |ψ_j|² dx = (dx/n) Σ_m |ψ̂_m|²`,
//! equivalently `Σ_m |ψ̂_m|² dk · dx²/(2π)` with `dk = 2π/(n dx)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Default lattice spacing in oscillator lengths.
pub const DEFAULT_DX: f64 = 0.0177;
/// Default number of lattice points; `n·dx ≈ 145` covers ±72.5.
pub const DEFAULT_N: usize = 8192;
/// Smallest admissible lattice.
pub const MIN_POINTS: usize = 16;

/// Periodic 1D lattice, symmetric about the origin: `x_min = −n·dx/2`, so
/// that `x = 0` is the lattice point `j = n/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    dx: f64,
}

impl Grid {
    pub fn new(n: usize, dx: f64) -> Result<Self> {
        if n < MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two and at least {MIN_POINTS}"
            )));
        }
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidGrid(format!("dx = {dx} must be positive")));
        }
        Ok(Grid { n, dx })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn length(&self) -> f64 {
        self.n as f64 * self.dx
    }

    pub fn x_min(&self) -> f64 {
        self.x(0)
    }

    /// Largest lattice coordinate, `x_min + (n−1)·dx`.
    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    /// `x_j = (j − n/2)·dx`; written this way `x_{n−j} = −x_j` holds
    /// bit-exactly.
    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.dx
    }

    /// Index of the lattice point at `x = 0`.
    pub fn origin_index(&self) -> usize {
        self.n / 2
    }

    /// Index of the mirror point `−x_j`, i.e. `j ↔ n − j (mod n)`.
    /// The pair `(0, n/2)` maps to itself; `x_0 = −L/2` is its own mirror
    /// under periodicity.
    pub fn reflect(&self, j: usize) -> usize {
        (self.n - j) % self.n
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / self.length()
    }

    /// Wavenumber of bin `j` in FFT ordering.
    pub fn k(&self, j: usize) -> f64 {
        let m = if j < self.n / 2 {
            j as f64
        } else {
            j as f64 - self.n as f64
        };
        m * self.dk()
    }

    pub fn k_max(&self) -> f64 {
        PI / self.dx
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.k(j)).collect()
    }

    /// Rectangle-rule quadrature `Σ f_j dx`.
    pub fn integrate(&self, field: &[f64]) -> Result<f64> {
        self.check_len(field.len())?;
        Ok(field.iter().sum::<f64>() * self.dx)
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: len,
            });
        }
        Ok(())
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            n: DEFAULT_N,
            dx: DEFAULT_DX,
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Grid(n={}, dx={}, [{}, {}])",
            self.n,
            self.dx,
            self.x_min(),
            self.x_max()
        )
    }
}

/// Complex field on a [`Grid`] at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Wavefunction {
    grid: Grid,
    amplitudes: Vec<Complex64>,
    pub t: f64,
}

impl Wavefunction {
    pub fn new(grid: Grid, amplitudes: Vec<Complex64>, t: f64) -> Result<Self> {
        grid.check_len(amplitudes.len())?;
        Ok(Wavefunction {
            grid,
            amplitudes,
            t,
        })
    }

    /// Samples `f(x_j)` on every lattice point.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let amplitudes = (0..grid.n()).map(|j| f(grid.x(j))).collect();
        Wavefunction {
            grid,
            amplitudes,
            t: 0.0,
        }
    }

    /// Unit-norm Gaussian `e^{−(x−c)²/(2w²)} / √(w√π)` (up to lattice
    /// quadrature error, removed by a final [`normalize`]).
    pub fn gaussian(grid: Grid, center: f64, width: f64) -> Result<Self> {
        let amp = 1.0 / (width * PI.sqrt()).sqrt();
        let psi = Self::from_fn(grid, |x| {
            let u = (x - center) / width;
            Complex64::new(amp * (-0.5 * u * u).exp(), 0.0)
        });
        normalize(psi)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// `∫|ψ|² dx` by the rectangle rule.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `⟨φ|ψ⟩ = Σ conj(φ_j) ψ_j dx`.
    pub fn overlap(&self, other: &Wavefunction) -> Result<Complex64> {
        self.grid.check_len(other.amplitudes.len())?;
        let s: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.grid.dx())
    }
}

/// Rescales `ψ` to unit norm; pointwise phases are untouched.
pub fn normalize(mut psi: Wavefunction) -> Result<Wavefunction> {
    let norm = psi.norm_sqr();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let scale = 1.0 / norm.sqrt();
    for c in psi.amplitudes.iter_mut() {
        *c *= scale;
    }
    Ok(psi)
}

/// Forward/inverse DFT pair of a fixed length.
#[derive(Clone)]
pub struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl fmt::Debug for Spectral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).finish()
    }
}

impl Spectral {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.n();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Spectral {
            n,
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    pub fn to_spectral(&mut self, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(psi.len())?;
        let mut out = psi.to_vec();
        self.forward_in_place(&mut out);
        Ok(out)
    }

    pub fn from_spectral(&mut self, psi_hat: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(psi_hat.len())?;
        let mut out = psi_hat.to_vec();
        self.inverse_in_place(&mut out);
        let scale = 1.0 / self.n as f64;
        out.iter_mut().for_each(|c| *c *= scale);
        Ok(out)
    }

    /// Unnormalized forward transform; `buf.len()` must equal `n`.
    pub(crate) fn forward_in_place(&mut self, buf: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }

    /// Unnormalized inverse transform (no `1/n`).
    pub(crate) fn inverse_in_place(&mut self, buf: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: len,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn default_grid_extent() {
        let g = Grid::new(8192, 0.0177).unwrap();
        assert!((g.x_min() + 72.4992).abs() < 1e-12);
        assert!((g.x_max() - 72.4815).abs() < 1e-10);
        assert!((g.dk() - 2.0 * PI / 144.9984).abs() < 1e-15);
        assert_eq!(g.x(g.origin_index()), 0.0);
    }

    #[test]
    fn small_grid_by_hand() {
        let g = Grid::new(16, 1.0).unwrap();
        assert_eq!(g.x_min(), -8.0);
        let xs = g.positions();
        assert_eq!(xs, (-8..8).map(|v| v as f64).collect::<Vec<_>>());
        let kmax = g.wavenumbers().iter().fold(0.0_f64, |m, k| m.max(k.abs()));
        assert!((kmax - PI).abs() < 1e-15);
        assert_eq!(g.k(8), -PI);
        assert_eq!(g.k(1), 2.0 * PI / 16.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(Grid::new(12, 0.1), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(8, 0.1), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(16, 0.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(16, -1.0), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn reflection_is_involution_and_mirrors_coordinates() {
        let g = Grid::new(64, 0.25).unwrap();
        for j in 0..g.n() {
            let r = g.reflect(j);
            assert_eq!(g.reflect(r), j);
            if j != 0 {
                assert_eq!(g.x(r), -g.x(j));
            }
        }
    }

    #[test]
    fn integrate_constant_zero_and_mismatch() {
        let g = Grid::new(16, 1.0).unwrap();
        assert_eq!(g.integrate(&[1.0; 16]).unwrap(), 16.0);
        assert_eq!(g.integrate(&[0.0; 16]).unwrap(), 0.0);
        assert!(matches!(
            g.integrate(&[1.0; 15]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn integrate_normalized_gaussian_density() {
        // ∫ e^{−x²}/√π dx = 1 in closed form.
        let g = Grid::default();
        let f: Vec<f64> = g
            .positions()
            .iter()
            .map(|x| (-x * x).exp() / PI.sqrt())
            .collect();
        assert!((g.integrate(&f).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn normalize_scales_and_is_idempotent() {
        let g = Grid::new(16, 1.0).unwrap();
        // Σ|ψ|² dx = 16 · 0.25 = 4.
        let psi = Wavefunction::new(g, vec![c(0.3, 0.4); 16], 0.0).unwrap();
        assert!((psi.norm_sqr() - 4.0).abs() < 1e-15);
        let out = normalize(psi.clone()).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b * 0.5).norm() < 1e-16);
        }
        let again = normalize(out.clone()).unwrap();
        for (a, b) in again.amplitudes().iter().zip(out.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        let zero = Wavefunction::new(g, vec![c(0.0, 0.0); 16], 0.0).unwrap();
        assert!(matches!(normalize(zero), Err(Error::ZeroNorm)));
    }

    #[test]
    fn impulse_has_flat_spectrum() {
        let g = Grid::new(32, 0.5).unwrap();
        let mut spec = Spectral::new(&g);
        let mut psi = vec![c(0.0, 0.0); 32];
        psi[5] = c(2.0, 0.0);
        let hat = spec.to_spectral(&psi).unwrap();
        for h in hat {
            assert!((h.norm() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn plane_wave_occupies_one_bin() {
        let g = Grid::new(64, 0.3).unwrap();
        let mut spec = Spectral::new(&g);
        let k5 = g.k(5);
        let psi: Vec<Complex64> = g
            .positions()
            .iter()
            .map(|x| Complex64::from_polar(1.0, k5 * x))
            .collect();
        let hat = spec.to_spectral(&psi).unwrap();
        for (m, h) in hat.iter().enumerate() {
            if m == 5 {
                assert!((h.norm() - 64.0).abs() < 1e-10);
            } else {
                assert!(h.norm() < 1e-10, "bin {m}: {h}");
            }
        }
    }

    #[test]
    fn transform_length_mismatch() {
        let g = Grid::new(16, 1.0).unwrap();
        let mut spec = Spectral::new(&g);
        assert!(spec.to_spectral(&[c(1.0, 0.0); 8]).is_err());
        assert!(spec.from_spectral(&[c(1.0, 0.0); 32]).is_err());
    }
}
