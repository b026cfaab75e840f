//! Strang-split spectral propagation of the dimensionless quasi-1D GPE
//!
//! ```text
//! i ∂ψ/∂t = [−½ ∂²/∂x² + V_R(x) + i V_I(x) + g_s |ψ|²] ψ
//! ```
//!
//! One step is half a kinetic step in Fourier space, a full pointwise
//! potential + nonlinear step, and another half kinetic step. The pointwise
//! step is integrated exactly: with gain/loss the density grows as
//! `|ψ(s)|² = |ψ₀|² e^{2 V_I s}`, so the accumulated nonlinear phase is
//! `g_s |ψ₀|² (e^{2 V_I dt} − 1) / (2 V_I)`.
//!
//! Ground states come from the same splitting with `dt → −i dτ` and a
//! renormalization after every step.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{normalize, Grid, Spectral, Wavefunction};
use crate::potential::{eval_potential, PotentialSpec};

/// Default real-time step.
pub const DEFAULT_DT: f64 = 1e-4;
/// Default imaginary-time step.
pub const DEFAULT_IMAG_DT: f64 = 1e-3;
/// Default relative energy change at which relaxation stops.
pub const DEFAULT_IMAG_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_IMAG_STEPS: u64 = 500_000;
pub const DEFAULT_T_FINAL: f64 = 25.0;
pub const DEFAULT_SNAPSHOT_STRIDE: u64 = 100;
/// Below this `|2 V_I dt|` the nonlinear phase weight uses its Taylor form.
const GAIN_TAYLOR_CUTOFF: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_stride: u64,
    pub imag_dt: f64,
    pub imag_tol: f64,
    pub max_imag_steps: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: DEFAULT_DT,
            t_final: DEFAULT_T_FINAL,
            snapshot_stride: DEFAULT_SNAPSHOT_STRIDE,
            imag_dt: DEFAULT_IMAG_DT,
            imag_tol: DEFAULT_IMAG_TOL,
            max_imag_steps: DEFAULT_MAX_IMAG_STEPS,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            Err(Error::InvalidParameter(format!("{what} = {v} must be positive")))
        };
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt", self.dt);
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad("t_final", self.t_final);
        }
        if !(self.imag_dt > 0.0 && self.imag_dt.is_finite()) {
            return bad("imag_dt", self.imag_dt);
        }
        if !(self.imag_tol > 0.0) {
            return bad("imag_tol", self.imag_tol);
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidParameter(
                "snapshot_stride must be at least 1".into(),
            ));
        }
        if self.max_imag_steps == 0 {
            return Err(Error::InvalidParameter(
                "max_imag_steps must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Number of real-time steps covering `t_final`.
    pub fn total_steps(&self) -> u64 {
        (self.t_final / self.dt).round() as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicsParams {
    pub g_s: f64,
    pub spec: PotentialSpec,
}

impl PhysicsParams {
    pub fn new(g_s: f64, spec: PotentialSpec) -> Result<Self> {
        if !(g_s >= 0.0 && g_s.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "g_s = {g_s} must be non-negative"
            )));
        }
        spec.validate()?;
        Ok(PhysicsParams { g_s, spec })
    }
}

/// Precomputed split-step propagator for a fixed grid, potential and step.
///
/// The inverse FFT's `1/n` is folded into the kinetic multipliers.
#[derive(Clone, Debug)]
pub struct SplitStep {
    grid: Grid,
    spectral: Spectral,
    g_s: f64,
    imaginary: bool,
    half_kinetic: Vec<f64>,
    full_kinetic_phase: Vec<Complex64>,
    half_kinetic_phase: Vec<Complex64>,
    /// Real time: `e^{V_I dt} e^{−i V_R dt}`. Imaginary time: `e^{−V_R dτ}`.
    linear: Vec<Complex64>,
    /// Real time: weight multiplying `g_s |ψ₀|²` in the nonlinear phase.
    nl_weight: Vec<f64>,
    step_size: f64,
}

impl SplitStep {
    /// Real-time propagator with step `dt`.
    pub fn real_time(grid: &Grid, params: &PhysicsParams, dt: f64) -> Self {
        Self::real_time_with(grid, params.g_s, &eval_potential(&params.spec, grid), dt)
    }

    /// Real-time propagator for arbitrary sampled potential values.
    pub fn real_time_with(grid: &Grid, g_s: f64, potential: &[Complex64], dt: f64) -> Self {
        assert_eq!(potential.len(), grid.n(), "potential length");
        let n = grid.n() as f64;
        let kin = |frac: f64| -> Vec<Complex64> {
            grid.wavenumbers()
                .iter()
                .map(|k| Complex64::from_polar(1.0 / n, -0.5 * k * k * dt * frac))
                .collect()
        };
        let linear = potential
            .iter()
            .map(|v| Complex64::from_polar((v.im * dt).exp(), -v.re * dt))
            .collect();
        let nl_weight = potential.iter().map(|v| gain_weight(v.im, dt)).collect();
        SplitStep {
            grid: *grid,
            spectral: Spectral::new(grid),
            g_s,
            imaginary: false,
            half_kinetic: Vec::new(),
            full_kinetic_phase: kin(1.0),
            half_kinetic_phase: kin(0.5),
            linear,
            nl_weight,
            step_size: dt,
        }
    }

    /// Imaginary-time propagator (`dt → −i dτ`). The imaginary part of the
    /// potential is ignored; relaxation is only defined for conservative
    /// potentials.
    pub fn imaginary_time(grid: &Grid, params: &PhysicsParams, dtau: f64) -> Self {
        let n = grid.n() as f64;
        let half_kinetic = grid
            .wavenumbers()
            .iter()
            .map(|k| (-0.25 * k * k * dtau).exp() / n)
            .collect();
        let linear = grid
            .positions()
            .iter()
            .map(|&x| Complex64::new((-params.spec.real_at(x) * dtau).exp(), 0.0))
            .collect();
        SplitStep {
            grid: *grid,
            spectral: Spectral::new(grid),
            g_s: params.g_s,
            imaginary: true,
            half_kinetic,
            full_kinetic_phase: Vec::new(),
            half_kinetic_phase: Vec::new(),
            linear,
            nl_weight: Vec::new(),
            step_size: dtau,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    /// One full Strang step in place. Returns `Σ|ψ|²` after the pointwise
    /// substep (non-finite on blow-up).
    pub fn step(&mut self, psi: &mut [Complex64]) -> f64 {
        self.kinetic(psi, true);
        let s = self.potential(psi);
        self.kinetic(psi, true);
        s
    }

    /// `steps` Strang steps with adjacent half kinetic steps fused into one
    /// full kinetic step. `first_step` only labels blow-up errors.
    pub fn advance(&mut self, psi: &mut [Complex64], steps: u64, first_step: u64) -> Result<()> {
        if steps == 0 {
            return Ok(());
        }
        self.kinetic(psi, true);
        for i in 0..steps {
            let s = self.potential(psi);
            if !s.is_finite() {
                return Err(Error::BlowUp {
                    step: first_step + i + 1,
                });
            }
            self.kinetic(psi, i + 1 == steps);
        }
        Ok(())
    }

    fn kinetic(&mut self, psi: &mut [Complex64], half: bool) {
        self.spectral.forward_in_place(psi);
        if self.imaginary {
            for (c, m) in psi.iter_mut().zip(&self.half_kinetic) {
                *c *= m;
            }
        } else {
            let mult = if half {
                &self.half_kinetic_phase
            } else {
                &self.full_kinetic_phase
            };
            for (c, m) in psi.iter_mut().zip(mult) {
                *c *= m;
            }
        }
        self.spectral.inverse_in_place(psi);
    }

    /// Exact pointwise substep; returns `Σ|ψ|²` of the updated field.
    fn potential(&self, psi: &mut [Complex64]) -> f64 {
        let g = self.g_s;
        let mut total = 0.0;
        if self.imaginary {
            let dtau = self.step_size;
            for (c, lin) in psi.iter_mut().zip(&self.linear) {
                let rho = c.norm_sqr();
                *c *= lin.re * (-g * rho * dtau).exp();
                total += c.norm_sqr();
            }
        } else {
            for ((c, lin), w) in psi.iter_mut().zip(&self.linear).zip(&self.nl_weight) {
                let rho = c.norm_sqr();
                let (s, co) = small_sin_cos(g * rho * w);
                *c = *c * lin * Complex64::new(co, -s);
                total += c.norm_sqr();
            }
        }
        total
    }
}

/// `sin_cos` with a polynomial fast path for the small nonlinear phases of
/// a resolved time step; truncation error is below 1e−19 on the fast path.
#[inline]
fn small_sin_cos(theta: f64) -> (f64, f64) {
    if theta.abs() > 0.05 {
        return theta.sin_cos();
    }
    let t2 = theta * theta;
    let s = theta * (1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0))));
    let c = 1.0 - t2 / 2.0 * (1.0 - t2 / 12.0 * (1.0 - t2 / 30.0 * (1.0 - t2 / 56.0)));
    (s, c)
}

/// `(e^{2 V_I dt} − 1) / (2 V_I)`, the time integral of `e^{2 V_I s}` over
/// one step, with its Taylor limit for tiny `V_I dt`.
fn gain_weight(v_imag: f64, dt: f64) -> f64 {
    let z = 2.0 * v_imag * dt;
    if z.abs() > GAIN_TAYLOR_CUTOFF {
        z.exp_m1() / (2.0 * v_imag)
    } else {
        dt * (1.0 + v_imag * dt)
    }
}

/// One real-time Strang step of `ψ`.
pub fn step_real(psi: &Wavefunction, params: &PhysicsParams, dt: f64) -> Result<Wavefunction> {
    let mut stepper = SplitStep::real_time(psi.grid(), params, dt);
    let mut amps = psi.amplitudes().to_vec();
    let s = stepper.step(&mut amps);
    if !s.is_finite() {
        return Err(Error::BlowUp { step: 1 });
    }
    Wavefunction::new(*psi.grid(), amps, psi.t + dt)
}

/// Exact solution of `i ∂ψ/∂t = (V_R + i V_I + g_s|ψ|²) ψ` over `dt` at
/// every lattice point.
pub fn potential_substep(psi: &Wavefunction, params: &PhysicsParams, dt: f64) -> Wavefunction {
    let grid = *psi.grid();
    let amps = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let v = params.spec.value_at(grid.x(j));
            let phase = v.re * dt + params.g_s * c.norm_sqr() * gain_weight(v.im, dt);
            c * Complex64::from_polar((v.im * dt).exp(), -phase)
        })
        .collect();
    Wavefunction::new(grid, amps, psi.t).expect("same grid")
}

/// `E[ψ] = ∫ (½|ψ'|² + V_R|ψ|² + ½ g_s |ψ|⁴) dx`, kinetic term from the
/// spectrum. Only the real part of the potential enters.
pub fn gp_energy(psi: &Wavefunction, params: &PhysicsParams) -> f64 {
    let mut spectral = Spectral::new(psi.grid());
    gp_energy_with(&mut spectral, psi, params)
}

/// [`gp_energy`] reusing an existing FFT plan.
pub fn gp_energy_with(spectral: &mut Spectral, psi: &Wavefunction, params: &PhysicsParams) -> f64 {
    let grid = psi.grid();
    let (kinetic, potential) = energy_parts(spectral, psi, |x| params.spec.real_at(x));
    let quartic: f64 = psi
        .amplitudes()
        .iter()
        .map(|c| {
            let r = c.norm_sqr();
            r * r
        })
        .sum::<f64>()
        * grid.dx();
    kinetic + potential + 0.5 * params.g_s * quartic
}

fn energy_parts(
    spectral: &mut Spectral,
    psi: &Wavefunction,
    potential: impl Fn(f64) -> f64,
) -> (f64, f64) {
    let grid = psi.grid();
    let mut buf = psi.amplitudes().to_vec();
    spectral.forward_in_place(&mut buf);
    let kinetic = buf
        .iter()
        .enumerate()
        .map(|(m, c)| {
            let k = grid.k(m);
            k * k * c.norm_sqr()
        })
        .sum::<f64>()
        * 0.5
        * grid.dx()
        / grid.n() as f64;
    let pot = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, c)| potential(grid.x(j)) * c.norm_sqr())
        .sum::<f64>()
        * grid.dx();
    (kinetic, pot)
}

/// `d‖ψ‖²/dt = 2 ∫ V_I |ψ|² dx`.
pub fn norm_rate(psi: &Wavefunction, spec: &PotentialSpec) -> f64 {
    let grid = psi.grid();
    2.0 * psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, c)| spec.imag_at(grid.x(j)) * c.norm_sqr())
        .sum::<f64>()
        * grid.dx()
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub psi: Wavefunction,
    pub energy: f64,
    pub steps: u64,
    /// Largest single-step energy increase seen during relaxation.
    pub max_energy_rise: f64,
}

/// Normalized imaginary-time relaxation from a unit-width Gaussian at the
/// trap centre, stopping once the relative energy change per step drops
/// below `cfg.imag_tol`.
pub fn ground_state(grid: &Grid, params: &PhysicsParams, cfg: &SolverConfig) -> Result<GroundState> {
    cfg.validate()?;
    if params.spec.w0 != 0.0 {
        return Err(Error::InvalidParameter(
            "ground-state relaxation needs a conservative potential (w0 = 0)".into(),
        ));
    }
    let initial = Wavefunction::gaussian(*grid, params.spec.trap_center, 1.0)?;
    relax(initial, params, cfg)
}

/// Imaginary-time relaxation from an arbitrary starting field.
pub fn relax(initial: Wavefunction, params: &PhysicsParams, cfg: &SolverConfig) -> Result<GroundState> {
    let grid = *initial.grid();
    let mut stepper = SplitStep::imaginary_time(&grid, params, cfg.imag_dt);
    let mut spectral = Spectral::new(&grid);
    let mut psi = normalize(initial)?;
    let mut energy = gp_energy_with(&mut spectral, &psi, params);
    let mut max_rise = f64::NEG_INFINITY;
    let mut last_change = f64::INFINITY;
    for step in 1..=cfg.max_imag_steps {
        let sum = stepper.step(psi.amplitudes_mut());
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::BlowUp { step });
        }
        psi = normalize(psi)?;
        let next = gp_energy_with(&mut spectral, &psi, params);
        max_rise = max_rise.max(next - energy);
        last_change = ((next - energy) / next).abs();
        energy = next;
        if last_change < cfg.imag_tol {
            psi.t = 0.0;
            return Ok(GroundState {
                psi,
                energy,
                steps: step,
                max_energy_rise: max_rise,
            });
        }
    }
    Err(Error::NotConverged {
        steps: cfg.max_imag_steps,
        last_change,
    })
}

/// Summary of a finished real-time evolution.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub final_state: Wavefunction,
    pub steps: u64,
    pub snapshots: u64,
}

/// Real-time evolution for `cfg.t_final`, calling `observer` with a
/// read-only snapshot at step 0, every `cfg.snapshot_stride` steps and at
/// the final step.
pub fn evolve<F>(
    psi0: &Wavefunction,
    params: &PhysicsParams,
    cfg: &SolverConfig,
    mut observer: F,
) -> Result<Trajectory>
where
    F: FnMut(&Wavefunction) -> Result<()>,
{
    cfg.validate()?;
    let grid = *psi0.grid();
    let mut stepper = SplitStep::real_time(&grid, params, cfg.dt);
    let total = cfg.total_steps();
    let t0 = psi0.t;
    let mut psi = psi0.clone();
    observer(&psi)?;
    let mut snapshots = 1;
    let mut done = 0;
    while done < total {
        let chunk = cfg.snapshot_stride.min(total - done);
        stepper.advance(psi.amplitudes_mut(), chunk, done)?;
        done += chunk;
        psi.t = t0 + done as f64 * cfg.dt;
        observer(&psi)?;
        snapshots += 1;
    }
    Ok(Trajectory {
        final_state: psi,
        steps: total,
        snapshots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn small_sin_cos_matches_libm() {
        for i in -1000..=1000 {
            let th = i as f64 * 1e-4;
            let (s, c) = small_sin_cos(th);
            let (s0, c0) = th.sin_cos();
            assert!((s - s0).abs() <= 2e-16 * (1.0 + s0.abs()), "{th}");
            assert!((c - c0).abs() <= 2e-16, "{th}");
        }
        assert_eq!(small_sin_cos(1.0), 1.0f64.sin_cos());
    }

    fn harmonic(g_s: f64) -> PhysicsParams {
        PhysicsParams::new(g_s, PotentialSpec::scattering(0.0, 0.0)).unwrap()
    }

    fn oscillator_ground(grid: Grid) -> Wavefunction {
        // φ₀ = π^{-1/4} e^{−x²/2}
        Wavefunction::gaussian(grid, 0.0, 1.0).unwrap()
    }

    #[test]
    fn gain_weight_limits() {
        assert_eq!(gain_weight(0.0, 0.1), 0.1);
        let w = gain_weight(0.5, 0.1);
        assert!((w - ((0.1f64).exp() - 1.0)).abs() < 1e-15);
        // Taylor branch agrees with the closed form at the cutoff.
        let tiny = 1e-9;
        let closed = (2.0 * tiny * 1e-4f64).exp_m1() / (2.0 * tiny);
        assert!((gain_weight(tiny, 1e-4) - closed).abs() < 1e-18);
    }

    #[test]
    fn single_point_substep_matches_scalar_ode() {
        // Reference integration of i ψ' = (i V_I + g|ψ|²) ψ by RK4 with a
        // very fine step, independent of the closed form.
        let (vi, g, dt) = (0.5, 1.0, 0.1);
        let rhs = |p: Complex64| -> Complex64 {
            let v = Complex64::new(g * p.norm_sqr(), vi);
            -Complex64::i() * v * p
        };
        let mut p = Complex64::new(1.0, 0.0);
        let steps = 100_000;
        let h = dt / steps as f64;
        for _ in 0..steps {
            let k1 = rhs(p);
            let k2 = rhs(p + k1 * (h / 2.0));
            let k3 = rhs(p + k2 * (h / 2.0));
            let k4 = rhs(p + k3 * h);
            p += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        }
        let lin = Complex64::from_polar((vi * dt).exp(), 0.0);
        let closed = lin * Complex64::from_polar(1.0, -g * gain_weight(vi, dt));
        assert!((p - closed).norm() < 1e-12, "{p} vs {closed}");
        assert!((p.norm() - (0.05f64).exp()).abs() < 1e-12);
        assert!((-p.arg() - 0.105_170_918_075_647_6).abs() < 1e-11);
    }

    #[test]
    fn substep_without_gain_is_pure_phase() {
        let grid = Grid::new(64, 0.25).unwrap();
        let params = PhysicsParams::new(3.0, PotentialSpec::scattering(5.0, 0.0)).unwrap();
        let psi = Wavefunction::gaussian(grid, 1.0, 1.5).unwrap();
        let dt = 0.01;
        let out = potential_substep(&psi, &params, dt);
        for (j, (a, b)) in psi.amplitudes().iter().zip(out.amplitudes()).enumerate() {
            let v = params.spec.real_at(grid.x(j));
            let expect = a * Complex64::from_polar(1.0, -(v + 3.0 * a.norm_sqr()) * dt);
            assert!((b - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn substep_pure_gain_growth() {
        let grid = Grid::new(64, 0.25).unwrap();
        let params = PhysicsParams::new(0.0, PotentialSpec::scattering(0.0, 2.0)).unwrap();
        let psi = Wavefunction::gaussian(grid, 0.5, 1.0).unwrap();
        let dt = 0.05;
        let out = potential_substep(&psi, &params, dt);
        for (j, (a, b)) in psi.amplitudes().iter().zip(out.amplitudes()).enumerate() {
            let x = grid.x(j);
            let ratio = b.norm() / a.norm();
            let vi = params.spec.imag_at(x);
            assert!((ratio - (vi * dt).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn stationary_state_phase() {
        let grid = Grid::new(1024, 0.03).unwrap();
        let params = harmonic(0.0);
        let psi0 = oscillator_ground(grid);
        let dt = 1e-3;
        let mut stepper = SplitStep::real_time(&grid, &params, dt);
        let mut amps = psi0.amplitudes().to_vec();
        stepper.step(&mut amps);
        let psi1 = Wavefunction::new(grid, amps, dt).unwrap();
        let ov = psi0.overlap(&psi1).unwrap();
        assert!((ov.norm() - 1.0).abs() < 1e-8);
        // Strang phase for the oscillator ground state: −E₀ dt up to O(dt³).
        assert!((ov.arg() + 0.5 * dt).abs() < 1e-8, "{}", ov.arg());
        for (a, b) in psi0.amplitudes().iter().zip(psi1.amplitudes()) {
            assert!((a.norm() - b.norm()).abs() < 1e-8);
        }
    }

    #[test]
    fn free_gaussian_spreading() {
        // A Gaussian with initial width σ₀ spreads as σ(t)² = σ₀² (1 + t²/σ₀⁴)
        // under i ψ_t = −½ ψ_xx. The kinetic step is exact, so only roundoff
        // remains.
        let grid = Grid::new(2048, 0.05).unwrap();
        let psi0 = Wavefunction::gaussian(grid, 0.0, 1.0).unwrap();
        let zero = vec![Complex64::new(0.0, 0.0); grid.n()];
        let mut stepper = SplitStep::real_time_with(&grid, 0.0, &zero, 0.01);
        let mut amps = psi0.amplitudes().to_vec();
        stepper.advance(&mut amps, 200, 0).unwrap();
        let psi = Wavefunction::new(grid, amps, 2.0).unwrap();
        let rho = psi.density();
        let var: f64 = grid
            .positions()
            .iter()
            .zip(&rho)
            .map(|(x, r)| x * x * r)
            .sum::<f64>()
            * grid.dx();
        // |ψ|² variance = a²/2 with a(t)² = 1 + t².
        let expected = 0.5 * (1.0 + 4.0);
        assert!((var - expected).abs() < 1e-8, "{var} vs {expected}");
    }

    #[test]
    fn unitary_without_gain() {
        let grid = Grid::new(2048, 0.05).unwrap();
        let params = PhysicsParams::new(30.0, PotentialSpec::scattering(50.0, 0.0)).unwrap();
        let psi0 = Wavefunction::gaussian(grid, 10.0, 1.5).unwrap();
        let mut stepper = SplitStep::real_time(&grid, &params, 1e-4);
        let mut amps = psi0.amplitudes().to_vec();
        let before = psi0.norm_sqr();
        for _ in 0..10 {
            stepper.step(&mut amps);
            let now = Wavefunction::new(grid, amps.clone(), 0.0).unwrap().norm_sqr();
            assert!((now - before).abs() < 1e-12);
        }
    }

    #[test]
    fn fused_advance_matches_plain_steps() {
        let grid = Grid::new(512, 0.1).unwrap();
        let params = PhysicsParams::new(10.0, PotentialSpec::scattering(20.0, 1.0)).unwrap();
        let psi0 = Wavefunction::gaussian(grid, 3.0, 1.0).unwrap();
        let mut a = psi0.amplitudes().to_vec();
        let mut b = a.clone();
        let mut s1 = SplitStep::real_time(&grid, &params, 1e-3);
        let mut s2 = s1.clone();
        for _ in 0..50 {
            s1.step(&mut a);
        }
        s2.advance(&mut b, 50, 0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn blow_up_reports_step() {
        let grid = Grid::new(64, 0.5).unwrap();
        let params = PhysicsParams::new(0.0, PotentialSpec::scattering(0.0, 1.0)).unwrap();
        let mut stepper = SplitStep::real_time(&grid, &params, 1e-3);
        let mut amps = vec![Complex64::new(1.0, 0.0); 64];
        amps[10] = Complex64::new(f64::NAN, 0.0);
        let err = stepper.advance(&mut amps, 5, 40).unwrap_err();
        assert!(matches!(err, Error::BlowUp { step: 41 }));
    }

    #[test]
    fn energy_of_free_gaussian_width() {
        // E(a) = 1/(4a²) + a²/4 + g/(2√(2π) a) for the unit-norm Gaussian of
        // width a in the harmonic trap.
        let grid = Grid::new(4096, 0.01).unwrap();
        for (a, g) in [(1.0, 0.0), (2.0, 30.0), (0.7, 5.0)] {
            let psi = Wavefunction::gaussian(grid, 0.0, a).unwrap();
            let e = gp_energy(&psi, &harmonic(g));
            let expected = 0.25 / (a * a) + 0.25 * a * a + g / (2.0 * (2.0 * PI).sqrt() * a);
            assert!((e - expected).abs() < 1e-8, "a={a}: {e} vs {expected}");
        }
    }

    #[test]
    fn norm_rate_signs() {
        let grid = Grid::new(1024, 0.05).unwrap();
        let right = Wavefunction::gaussian(grid, 1.0, 0.3).unwrap();
        assert_eq!(norm_rate(&right, &PotentialSpec::scattering(10.0, 0.0)), 0.0);
        assert!(norm_rate(&right, &PotentialSpec::scattering(10.0, 1.0)) > 0.0);
        assert!(norm_rate(&right, &PotentialSpec::scattering(10.0, -1.0)) < 0.0);
    }

    #[test]
    fn harmonic_ground_state_shifted() {
        let grid = Grid::new(2048, 0.05).unwrap();
        let params = PhysicsParams::new(0.0, PotentialSpec::preparation(20.0)).unwrap();
        let gs = ground_state(&grid, &params, &SolverConfig::default()).unwrap();
        assert!((gs.energy - 0.5).abs() < 1e-8, "{}", gs.energy);
        let rho = gs.psi.density();
        let mean: f64 = grid.positions().iter().zip(&rho).map(|(x, r)| x * r).sum::<f64>() * grid.dx();
        assert!((mean - 20.0).abs() < 1e-10);
        assert!(gs.max_energy_rise <= 1e-12);
    }

    #[test]
    fn ground_state_requires_conservative_potential() {
        let grid = Grid::new(64, 0.5).unwrap();
        let params = PhysicsParams::new(0.0, PotentialSpec::scattering(0.0, 1.0)).unwrap();
        assert!(ground_state(&grid, &params, &SolverConfig::default()).is_err());
    }

    #[test]
    fn relaxation_cap_is_an_error() {
        let grid = Grid::new(256, 0.1).unwrap();
        let params = PhysicsParams::new(30.0, PotentialSpec::preparation(0.0)).unwrap();
        let cfg = SolverConfig {
            max_imag_steps: 5,
            ..SolverConfig::default()
        };
        assert!(matches!(
            ground_state(&grid, &params, &cfg),
            Err(Error::NotConverged { steps: 5, .. })
        ));
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::default();
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.total_steps(), 250_000);
        cfg.dt = -1.0;
        assert!(cfg.validate().is_err());
        cfg = SolverConfig {
            snapshot_stride: 0,
            ..SolverConfig::default()
        };
        assert!(cfg.validate().is_err());
        assert!(PhysicsParams::new(-1.0, PotentialSpec::scattering(0.0, 0.0)).is_err());
    }
}
