//! Reduced dynamics of the Gaussian ansatz
//!
//! ```text
//! ψ(x,t) = (a√π)^{-1/2} exp[−(x−x₀)²/(2a²) + i x α + i x² β]
//! ```
//!
//! The state carries the centre `x₀`, its velocity `v = x₀'`, the width `a`
//! and its rate `b = a'`. With `ζ = 1 + a²` the conservative equations are
//!
//! ```text
//! x₀'' = −x₀ + 2 V₀ x₀ ζ^{-3/2} e^{−x₀²/ζ}
//! a''  = −a + 1/a³ + g_s/(√(2π) a²) + 2 V₀ a ζ^{-3/2} e^{−x₀²/ζ} (1 − 2x₀²/ζ)
//! ```
//!
//! and [`rhs_full`] adds the gain/loss corrections (terms in `W₀` and
//! `W₀²`, including velocity-dependent ones). The width equation comes
//! naturally in implicit form; it is solved here for `a''`.
//!
//! `α` and `β` never enter the dynamics. They are reconstructed only for
//! [`ansatz_wavefunction`] as `α = v − x₀ b/a`, `β = b/(2a)`, which makes
//! the local velocity `v + (b/a)(x − x₀)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{normalize, Grid, Wavefunction};

/// Widths below this are treated as a collapse of the ansatz.
pub const MIN_WIDTH: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VariationalState {
    pub x0: f64,
    pub v: f64,
    pub a: f64,
    pub b: f64,
    pub t: f64,
}

impl VariationalState {
    /// Condensate at rest with its equilibrium width, as prepared in a trap
    /// centred on `x0`.
    pub fn at_rest(x0: f64, g_s: f64) -> Self {
        VariationalState {
            x0,
            v: 0.0,
            a: equilibrium_width(g_s),
            b: 0.0,
            t: 0.0,
        }
    }

    pub fn zeta(&self) -> f64 {
        1.0 + self.a * self.a
    }

    pub fn alpha(&self) -> f64 {
        self.v - self.x0 * self.b / self.a
    }

    pub fn beta(&self) -> f64 {
        self.b / (2.0 * self.a)
    }

    /// Reduced energy of the ansatz in the bare harmonic trap,
    /// `½v² + ½x₀² + ¼b² + 1/(4a²) + a²/4 + g_s/(2√(2π)a)`. Conserved by the
    /// equations of motion when `V₀ = W₀ = 0`.
    pub fn harmonic_energy(&self, g_s: f64) -> f64 {
        let a2 = self.a * self.a;
        0.5 * self.v * self.v
            + 0.5 * self.x0 * self.x0
            + 0.25 * self.b * self.b
            + 0.25 / a2
            + 0.25 * a2
            + g_s / (2.0 * (2.0 * PI).sqrt() * self.a)
    }

    fn check_width(&self) -> Result<()> {
        if !(self.a >= MIN_WIDTH) {
            return Err(Error::WidthUnderflow {
                t: self.t,
                a: self.a,
            });
        }
        Ok(())
    }
}

/// Parameters of the reduced model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnsatzParams {
    pub v0: f64,
    pub w0: f64,
    pub g_s: f64,
}

/// `(x₀'', a'')` without the gain/loss terms.
pub fn rhs_conservative(s: &VariationalState, v0: f64, g_s: f64) -> Result<(f64, f64)> {
    s.check_width()?;
    let (x0, a) = (s.x0, s.a);
    let zeta = s.zeta();
    let e1 = (-x0 * x0 / zeta).exp();
    let z32 = zeta * zeta.sqrt();
    let x_acc = -x0 + 2.0 * v0 * x0 * e1 / z32;
    let a_acc = -a
        + 1.0 / (a * a * a)
        + g_s / ((2.0 * PI).sqrt() * a * a)
        + 2.0 * v0 * a * e1 / z32 * (1.0 - 2.0 * x0 * x0 / zeta);
    Ok((x_acc, a_acc))
}

/// `(x₀'', a'')` including the non-conservative corrections from the
/// imaginary potential `i W₀ x e^{−x²}`. Reduces exactly (bit for bit) to
/// [`rhs_conservative`] when `w0 = 0`.
pub fn rhs_full(s: &VariationalState, v0: f64, w0: f64, g_s: f64) -> Result<(f64, f64)> {
    let (x_acc, a_acc) = rhs_conservative(s, v0, g_s)?;
    if w0 == 0.0 {
        return Ok((x_acc, a_acc));
    }
    let (dx, da) = gain_loss_terms(s, w0);
    Ok((x_acc + dx, a_acc + da))
}

/// Gain/loss contributions to `(x₀'', a'')`.
fn gain_loss_terms(s: &VariationalState, w0: f64) -> (f64, f64) {
    let (x0, v, a, b) = (s.x0, s.v, s.a, s.b);
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let a8 = a4 * a4;
    let x2 = x0 * x0;
    let x4 = x2 * x2;
    let zeta = s.zeta();
    let z2 = zeta * zeta;
    let sz = zeta.sqrt();
    let e1 = (-x2 / zeta).exp();
    let e2 = (-2.0 * x2 / zeta).exp();

    // Shared polynomial of the W₀² terms.
    let p = 2.0 * a6 + a4 + (4.0 * a2 + 2.0) * x2 - a2;

    // Centre equation.
    let z6 = z2 * z2 * z2;
    let quad = w0 * w0 * x0 * (a4 + a2 + 2.0 * x2) * p * e2 / (a2 * z6);
    let z92 = z2 * z2 * sz;
    let lin = w0 * e1 / (a * z92)
        * (2.0 * a * zeta * x0 * (-a4 + a2 - 2.0 * x2 + 2.0) * v
            + b * (3.0 * a2 * z2 + 4.0 * a2 * x4 + 2.0 * (a4 - 4.0 * a2 + 1.0) * zeta * x2));
    let dx = quad + lin;

    // Width equation: the W₀ part of the bracket, later scaled by
    // −e^{−x₀²/ζ} / (2 a² ζ^{13/2}).
    let bracket_quad = 2.0 * w0 * w0 * x2 * p * p * e1 / (a * sz);
    let bracket_lin = 2.0
        * a
        * zeta
        * w0
        * (a * x0
            * b
            * ((8.0 * a2 + 4.0) * x4
                + (-2.0 * a4 + 11.0 * a2 - 2.0) * z2
                + 2.0 * (2.0 * a4 - 11.0 * a2 - 3.0) * zeta * x2)
            + zeta
                * (2.0 * a8 + 3.0 * a6 - 4.0 * (2.0 * a2 + 1.0) * x4 - a2
                    + (-4.0 * a6 + 10.0 * a4 + 20.0 * a2 + 6.0) * x2)
                * v);
    let z132 = z6 * sz;
    let da = -(bracket_quad + bracket_lin) * e1 / (2.0 * a2 * z132);
    (dx, da)
}

/// Positive root of `a⁴ − g_s a/√(2π) − 1 = 0`: the width at which the
/// trap, dispersion and interaction forces balance.
pub fn equilibrium_width(g_s: f64) -> f64 {
    assert!(g_s >= 0.0, "g_s must be non-negative");
    let c = g_s / (2.0 * PI).sqrt();
    let f = |a: f64| a * a * a * a - c * a - 1.0;
    // f(0) = −1 and f(hi) > 0 since hi⁴ ≥ hi·(c + 1) + ... for hi ≥ 1 + c^{1/3}.
    bisect(f, 0.0, 2.0 + c.cbrt())
}

/// Width at which `a'' = 0` for a condensate at rest on top of the
/// obstacle (`x₀ = 0`), the first root above `a = 0.01`.
pub fn stationary_width_at_obstacle(g_s: f64, v0: f64) -> Result<f64> {
    let f = |a: f64| {
        let s = VariationalState {
            x0: 0.0,
            v: 0.0,
            a,
            b: 0.0,
            t: 0.0,
        };
        rhs_conservative(&s, v0, g_s).map(|r| r.1).unwrap_or(f64::NAN)
    };
    let mut lo = 0.01;
    let mut f_lo = f(lo);
    while lo < 1e3 {
        let hi = lo * 1.05;
        let f_hi = f(hi);
        if f_lo.signum() != f_hi.signum() {
            return Ok(bisect(f, lo, hi));
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::InvalidParameter(format!(
        "no stationary width for g_s = {g_s}, v0 = {v0}"
    )))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let neg_at_lo = f(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Fixed-step classical RK4 on `(x₀, v, a, b)` with the full right-hand
/// side. Returns the initial state and every `sample_stride`-th step (plus
/// the final one).
pub fn integrate_ode(
    s0: &VariationalState,
    params: &AnsatzParams,
    dt: f64,
    t_final: f64,
    sample_stride: u64,
) -> Result<Vec<VariationalState>> {
    if !(dt > 0.0) || !(t_final > 0.0) || sample_stride == 0 {
        return Err(Error::InvalidParameter(format!(
            "bad integration settings: dt = {dt}, t_final = {t_final}, stride = {sample_stride}"
        )));
    }
    s0.check_width()?;
    let total = (t_final / dt).round() as u64;
    let t0 = s0.t;
    let mut out = Vec::with_capacity((total / sample_stride + 2) as usize);
    out.push(*s0);
    let mut s = *s0;
    for step in 1..=total {
        s = rk4_step(&s, params, dt)?;
        s.t = t0 + step as f64 * dt;
        if !(s.x0.is_finite() && s.v.is_finite() && s.a.is_finite() && s.b.is_finite()) {
            return Err(Error::NonFiniteState { t: s.t });
        }
        s.check_width()?;
        if step % sample_stride == 0 || step == total {
            out.push(s);
        }
    }
    Ok(out)
}

fn rk4_step(s: &VariationalState, p: &AnsatzParams, dt: f64) -> Result<VariationalState> {
    let deriv = |st: &VariationalState| -> Result<[f64; 4]> {
        let (xa, aa) = rhs_full(st, p.v0, p.w0, p.g_s)?;
        Ok([st.v, xa, st.b, aa])
    };
    let shift = |k: &[f64; 4], h: f64| VariationalState {
        x0: s.x0 + h * k[0],
        v: s.v + h * k[1],
        a: s.a + h * k[2],
        b: s.b + h * k[3],
        t: s.t,
    };
    let k1 = deriv(s)?;
    let k2 = deriv(&shift(&k1, 0.5 * dt))?;
    let k3 = deriv(&shift(&k2, 0.5 * dt))?;
    let k4 = deriv(&shift(&k3, dt))?;
    let comb = |i: usize| (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * dt / 6.0;
    Ok(VariationalState {
        x0: s.x0 + comb(0),
        v: s.v + comb(1),
        a: s.a + comb(2),
        b: s.b + comb(3),
        t: s.t + dt,
    })
}

/// The ansatz field on the lattice, renormalized against quadrature error.
pub fn ansatz_wavefunction(s: &VariationalState, grid: &Grid) -> Result<Wavefunction> {
    s.check_width()?;
    let amp = 1.0 / (s.a * PI.sqrt()).sqrt();
    let (alpha, beta) = (s.alpha(), s.beta());
    let mut psi = Wavefunction::from_fn(*grid, |x| {
        let u = (x - s.x0) / s.a;
        Complex64::from_polar(amp * (-0.5 * u * u).exp(), x * alpha + x * x * beta)
    });
    psi.t = s.t;
    normalize(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(x0: f64, v: f64, a: f64, b: f64) -> VariationalState {
        VariationalState { x0, v, a, b, t: 0.0 }
    }

    #[test]
    fn equilibrium_width_values() {
        assert!((equilibrium_width(0.0) - 1.0).abs() < 1e-12);
        let a = equilibrium_width(30.0);
        let residual = a.powi(4) - 30.0 * a / (2.0 * PI).sqrt() - 1.0;
        assert!(residual.abs() < 1e-10);
        assert!((a - 2.315).abs() < 1e-3, "{a}");
        assert!(equilibrium_width(60.0) > a);
    }

    #[test]
    fn harmonic_limit_at_rest() {
        let g = 30.0;
        let s = VariationalState::at_rest(35.0, g);
        let (xa, aa) = rhs_conservative(&s, 0.0, g).unwrap();
        assert!((xa + 35.0).abs() < 1e-12);
        assert!(aa.abs() < 1e-10);
    }

    #[test]
    fn centred_state_feels_no_force() {
        let s = state(0.0, 3.0, 1.7, 0.2);
        assert_eq!(rhs_conservative(&s, -500.0, 30.0).unwrap().0, 0.0);
        let rest = state(0.0, 0.0, 1.7, 0.0);
        assert_eq!(rhs_full(&rest, -500.0, 1.0, 30.0).unwrap().0, 0.0);
    }

    #[test]
    fn width_underflow() {
        let s = state(1.0, 0.0, 1e-7, 0.0);
        assert!(matches!(
            rhs_conservative(&s, 0.0, 0.0),
            Err(Error::WidthUnderflow { .. })
        ));
        assert!(rhs_full(&s, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn reduction_is_exact() {
        for &(x0, v, a, b) in &[(5.0, -3.0, 2.0, 0.1), (-12.0, 30.0, 0.5, -2.0), (0.3, 0.0, 7.0, 4.0)] {
            let s = state(x0, v, a, b);
            assert_eq!(
                rhs_full(&s, -500.0, 0.0, 30.0).unwrap(),
                rhs_conservative(&s, -500.0, 30.0).unwrap()
            );
        }
    }

    #[test]
    fn free_oscillation() {
        let g = 30.0;
        let s0 = VariationalState::at_rest(35.0, g);
        let a_eq = s0.a;
        let p = AnsatzParams { v0: 0.0, w0: 0.0, g_s: g };
        let traj = integrate_ode(&s0, &p, 1e-4, 10.0, 1000).unwrap();
        assert_eq!(traj.len(), 101);
        for s in &traj {
            assert!((s.x0 - 35.0 * s.t.cos()).abs() < 1e-6, "t={}", s.t);
            assert!((s.a - a_eq).abs() < 1e-6);
        }
    }

    #[test]
    fn ansatz_moments() {
        let grid = Grid::new(4096, 0.02).unwrap();
        let s = state(3.5, 2.0, 1.3, 0.4);
        let psi = ansatz_wavefunction(&s, &grid).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        let mean: f64 = grid
            .positions()
            .iter()
            .zip(psi.density())
            .map(|(x, r)| x * r)
            .sum::<f64>()
            * grid.dx();
        assert!((mean - 3.5).abs() < 1e-10);

        let plain = ansatz_wavefunction(&state(0.0, 0.0, 1.0, 0.0), &grid).unwrap();
        assert!(plain.amplitudes().iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn ansatz_phase_gives_local_velocity() {
        // Phase gradient at the centre is v, slope of the velocity field b/a.
        let s = state(1.0, 2.5, 2.0, 0.6);
        let phase = |x: f64| x * s.alpha() + x * x * s.beta();
        let h = 1e-5;
        let grad = |x: f64| (phase(x + h) - phase(x - h)) / (2.0 * h);
        assert!((grad(1.0) - 2.5).abs() < 1e-8);
        assert!(((grad(2.0) - grad(1.0)) - 0.3).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_integration_settings() {
        let s0 = VariationalState::at_rest(35.0, 30.0);
        let p = AnsatzParams { v0: 0.0, w0: 0.0, g_s: 30.0 };
        assert!(integrate_ode(&s0, &p, 0.0, 1.0, 1).is_err());
        assert!(integrate_ode(&s0, &p, 1e-3, 1.0, 0).is_err());
    }

    #[test]
    fn stationary_width_on_barrier() {
        let a = stationary_width_at_obstacle(30.0, 100.0).unwrap();
        let s = state(0.0, 0.0, a, 0.0);
        let (xa, aa) = rhs_full(&s, 100.0, 0.0, 30.0).unwrap();
        assert_eq!(xa, 0.0);
        assert!(aa.abs() < 1e-9);
    }

    #[test]
    fn reference_values() {
        // Independent 50-digit evaluation of the equations of motion.
        let close = |got: f64, want: f64| (got - want).abs() <= 1e-12 * want.abs().max(1.0);
        let (xa, aa) = rhs_conservative(&state(5.0, 0.0, 2.0, 0.0), -500.0, 30.0).unwrap();
        assert!(close(xa, -8.013301503749164), "{xa}");
        assert!(close(aa, 11.964952516507735), "{aa}");
        let (xa, aa) = rhs_full(&state(10.0, -5.0, 2.0, 0.3), -500.0, 1.0, 30.0).unwrap();
        assert!(close(xa, -10.0000016530097), "{xa}");
        assert!(close(aa, 1.1170798487382605), "{aa}");
        let (xa, aa) = rhs_full(&state(1.0, -5.0, 2.0, 0.3), -500.0, 1.0, 30.0).unwrap();
        assert!(close(xa, -73.81207524125652), "{xa}");
        assert!(close(aa, -85.83205130742105), "{aa}");
    }

    #[test]
    fn energy_conserved_in_bare_trap() {
        let g = 30.0;
        let s0 = state(35.0, 0.0, 1.5, 0.3);
        let p = AnsatzParams { v0: 0.0, w0: 0.0, g_s: g };
        let e0 = s0.harmonic_energy(g);
        let traj = integrate_ode(&s0, &p, 1e-4, 25.0, 1000).unwrap();
        let drift = traj
            .iter()
            .map(|s| (s.harmonic_energy(g) - e0).abs())
            .fold(0.0, f64::max);
        assert!(drift < 1e-8, "{drift}");
    }

    fn endpoint(p: &AnsatzParams, dt: f64, t_final: f64) -> VariationalState {
        let s0 = VariationalState::at_rest(10.0, p.g_s);
        *integrate_ode(&s0, p, dt, t_final, u64::MAX).unwrap().last().unwrap()
    }

    fn distance(a: &VariationalState, b: &VariationalState) -> f64 {
        [a.x0 - b.x0, a.v - b.v, a.a - b.a, a.b - b.b]
            .iter()
            .fold(0.0, |m, d| m.max(d.abs()))
    }

    #[test]
    fn rk4_is_fourth_order() {
        let p = AnsatzParams { v0: -500.0, w0: 1.0, g_s: 30.0 };
        let h = 0.01;
        let reference = endpoint(&p, h / 16.0, 2.0);
        let e1 = distance(&endpoint(&p, h, 2.0), &reference);
        let e2 = distance(&endpoint(&p, h / 2.0, 2.0), &reference);
        let ratio = e1 / e2;
        assert!((ratio - 16.0).abs() < 0.3 * 16.0, "{e1} {e2} {ratio}");
    }

    #[test]
    fn halving_the_step_changes_little() {
        let p = AnsatzParams { v0: -500.0, w0: 1.0, g_s: 30.0 };
        let d = distance(&endpoint(&p, 1e-4, 10.0), &endpoint(&p, 5e-5, 10.0));
        assert!(d < 1e-8, "{d}");
    }

    #[test]
    fn mirrored_trajectory_without_gain() {
        let p = AnsatzParams { v0: -500.0, w0: 0.0, g_s: 30.0 };
        let right = integrate_ode(&VariationalState::at_rest(35.0, 30.0), &p, 1e-3, 10.0, 100).unwrap();
        let left = integrate_ode(&VariationalState::at_rest(-35.0, 30.0), &p, 1e-3, 10.0, 100).unwrap();
        for (r, l) in right.iter().zip(&left) {
            assert!((r.x0 + l.x0).abs() < 1e-9 && (r.v + l.v).abs() < 1e-9);
            assert!((r.a - l.a).abs() < 1e-9 && (r.b - l.b).abs() < 1e-9);
        }
    }
}
