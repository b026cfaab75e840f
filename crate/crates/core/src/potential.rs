//! External potentials: harmonic trap, Gaussian obstacle and the odd
//! imaginary gain/loss term, plus the dimensional → dimensionless map for
//! the interaction strength.
//!
//! All quantities are in oscillator units: length `√(ħ/mω_x)`, time
//! `1/ω_x`, energy `ħω_x`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Reduced Planck constant in J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// `V(x) = (x−c)²/2 + v0·e^{−(x/w)²} + i·w0·x·e^{−(x/w)²}`.
///
/// The obstacle always sits at the origin; only the trap minimum moves.
/// With `w0 > 0` the imaginary part is a gain for `x > 0` and a loss for
/// `x < 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialSpec {
    pub trap_center: f64,
    pub v0: f64,
    pub w0: f64,
    pub obstacle_width: f64,
}

impl PotentialSpec {
    pub fn new(trap_center: f64, v0: f64, w0: f64, obstacle_width: f64) -> Result<Self> {
        let spec = PotentialSpec {
            trap_center,
            v0,
            w0,
            obstacle_width,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Shifted harmonic trap used to prepare the initial condensate.
    pub fn preparation(trap_center: f64) -> Self {
        PotentialSpec {
            trap_center,
            v0: 0.0,
            w0: 0.0,
            obstacle_width: 1.0,
        }
    }

    /// Post-quench potential: trap minimum on top of the obstacle.
    pub fn scattering(v0: f64, w0: f64) -> Self {
        PotentialSpec {
            trap_center: 0.0,
            v0,
            w0,
            obstacle_width: 1.0,
        }
    }

    pub fn with_obstacle_width(mut self, width: f64) -> Self {
        self.obstacle_width = width;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.trap_center, self.v0, self.w0, self.obstacle_width]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter(format!(
                "non-finite potential parameter in {self:?}"
            )));
        }
        if !(self.obstacle_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "obstacle_width = {} must be positive",
                self.obstacle_width
            )));
        }
        Ok(())
    }

    pub fn value_at(&self, x: f64) -> Complex64 {
        let s = x - self.trap_center;
        let u = x / self.obstacle_width;
        let bump = (-u * u).exp();
        Complex64::new(0.5 * s * s + self.v0 * bump, self.w0 * x * bump)
    }

    pub fn real_at(&self, x: f64) -> f64 {
        self.value_at(x).re
    }

    pub fn imag_at(&self, x: f64) -> f64 {
        self.value_at(x).im
    }
}

/// Samples the potential on every lattice point.
pub fn eval_potential(spec: &PotentialSpec, grid: &Grid) -> Vec<Complex64> {
    (0..grid.n()).map(|j| spec.value_at(grid.x(j))).collect()
}

/// Largest `|V(x_j) − conj(V(−x_j))|` over the lattice.
///
/// Requires a trap centred on the obstacle; a shifted trap breaks parity
/// and the condition is meaningless there.
pub fn pt_symmetry_check(spec: &PotentialSpec, grid: &Grid) -> Result<f64> {
    if spec.trap_center != 0.0 {
        return Err(Error::ShiftedTrap(spec.trap_center));
    }
    pt_violation(&eval_potential(spec, grid), grid)
}

/// PT violation of arbitrary sampled values. The end point `j = 0` has no
/// mirror on the lattice and is skipped.
pub fn pt_violation(values: &[Complex64], grid: &Grid) -> Result<f64> {
    grid.check_len(values.len())?;
    Ok((1..grid.n())
        .map(|j| (values[j] - values[grid.reflect(j)].conj()).norm())
        .fold(0.0, f64::max))
}

/// Laboratory parameters of a cigar-shaped trap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionalParams {
    pub atom_count: u64,
    /// s-wave scattering length in metres.
    pub scattering_length: f64,
    /// Radial trap frequency in rad/s.
    pub radial_freq: f64,
    /// Axial trap frequency in rad/s.
    pub axial_freq: f64,
    /// Atomic mass in kg.
    pub mass: f64,
}

impl DimensionalParams {
    /// Axial oscillator length `√(ħ/(m ω_x))` in metres.
    pub fn oscillator_length(&self) -> f64 {
        (HBAR / (self.mass * self.axial_freq)).sqrt()
    }
}

/// Dimensionless interaction strength `g_s = 2 N ω_r a_s / (ω_x L)`.
pub fn nondimensionalize(p: &DimensionalParams) -> Result<f64> {
    let positive = [p.radial_freq, p.axial_freq, p.mass]
        .iter()
        .all(|v| *v > 0.0 && v.is_finite());
    if !positive || !(p.scattering_length >= 0.0) || p.atom_count == 0 {
        return Err(Error::InvalidParameter(format!(
            "dimensional parameters must be positive: {p:?}"
        )));
    }
    Ok(2.0 * p.atom_count as f64 * p.radial_freq * p.scattering_length
        / (p.axial_freq * p.oscillator_length()))
}
