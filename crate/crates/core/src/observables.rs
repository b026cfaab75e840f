//! Per-snapshot diagnostics and the GPE ↔ ansatz comparison.
//!
//! Left/right powers split the lattice at `x = 0`; the `x = 0` sample
//! belongs to the right half, so `p_left + p_right` is exactly the norm
//! quadrature. Moments (`mean_x`, `rms_width`) and `edge_mass` are
//! normalized by the current norm, which matters once gain/loss is on.

use crate::error::{Error, Result};
use crate::grid::{Grid, Spectral, Wavefunction};
use crate::propagator::{gp_energy_with, PhysicsParams};
use crate::variational::VariationalState;

/// Fraction of the half-extent beyond which density counts as edge mass.
pub const EDGE_FRACTION: f64 = 0.9;
/// Edge mass above this fraction of the norm means the periodic boundary
/// is no longer negligible.
pub const EDGE_MASS_LIMIT: f64 = 1e-6;
/// Local density maxima below this fraction of the peak are ignored when
/// judging whether the density is still single-humped.
pub const PEAK_FLOOR: f64 = 0.05;
/// Default centre-gap threshold separating agreement from disagreement.
pub const DEFAULT_CENTER_THRESHOLD: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservableRecord {
    pub t: f64,
    pub norm: f64,
    pub p_left: f64,
    pub p_right: f64,
    pub mean_x: f64,
    pub rms_width: f64,
    pub energy: f64,
    pub edge_mass: f64,
    /// Local density maxima above [`PEAK_FLOOR`] of the peak.
    pub peaks: usize,
}

impl ObservableRecord {
    pub fn edge_exceeded(&self) -> bool {
        self.edge_mass > EDGE_MASS_LIMIT
    }
}

/// Computes [`ObservableRecord`]s, reusing one FFT plan.
#[derive(Debug)]
pub struct Recorder {
    params: PhysicsParams,
    spectral: Spectral,
}

impl Recorder {
    pub fn new(grid: &Grid, params: &PhysicsParams) -> Self {
        Recorder {
            params: *params,
            spectral: Spectral::new(grid),
        }
    }

    pub fn record(&mut self, psi: &Wavefunction) -> ObservableRecord {
        let grid = psi.grid();
        let dx = grid.dx();
        let rho = psi.density();
        let mid = grid.origin_index();
        let p_left = rho[..mid].iter().sum::<f64>() * dx;
        let p_right = rho[mid..].iter().sum::<f64>() * dx;
        let norm = p_left + p_right;

        let (mut m1, mut edge) = (0.0, 0.0);
        let edge_x = EDGE_FRACTION * 0.5 * grid.length();
        for (j, r) in rho.iter().enumerate() {
            let x = grid.x(j);
            m1 += x * r;
            if x.abs() > edge_x {
                edge += r;
            }
        }
        let mean_x = m1 * dx / norm;
        let var = rho
            .iter()
            .enumerate()
            .map(|(j, r)| {
                let d = grid.x(j) - mean_x;
                d * d * r
            })
            .sum::<f64>()
            * dx
            / norm;

        ObservableRecord {
            t: psi.t,
            norm,
            p_left,
            p_right,
            mean_x,
            rms_width: var.sqrt(),
            energy: gp_energy_with(&mut self.spectral, psi, &self.params),
            edge_mass: edge * dx / norm,
            peaks: count_peaks(&rho, PEAK_FLOOR),
        }
    }
}

/// One-off [`Recorder::record`].
pub fn record(psi: &Wavefunction, params: &PhysicsParams) -> ObservableRecord {
    Recorder::new(psi.grid(), params).record(psi)
}

/// Number of local maxima of `density` exceeding `floor` times its peak.
/// A flat top counts once.
pub fn count_peaks(density: &[f64], floor: f64) -> usize {
    let peak = density.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return 0;
    }
    let cut = floor * peak;
    let n = density.len();
    let mut count = 0;
    let mut j = 0;
    while j < n {
        // walk over plateaus
        let mut end = j;
        while end + 1 < n && density[end + 1] == density[j] {
            end += 1;
        }
        let left = if j == 0 { f64::NEG_INFINITY } else { density[j - 1] };
        let right = if end + 1 == n {
            f64::NEG_INFINITY
        } else {
            density[end + 1]
        };
        if density[j] > cut && density[j] > left && density[j] > right {
            count += 1;
        }
        j = end + 1;
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonReport {
    /// `max_t |⟨x⟩_GPE − x₀|`.
    pub max_center_gap: f64,
    /// `max_t |√2 σ_GPE − a|`; exact comparison for a Gaussian density.
    pub max_width_gap: f64,
    /// First sample time at which the centre gap exceeds the threshold.
    pub t_divergence: Option<f64>,
    pub verdict: Verdict,
    pub center_threshold: f64,
    /// The GPE density developed more than one significant maximum, so the
    /// width comparison is against a non-Gaussian shape.
    pub non_gaussian: bool,
}

/// Per-sample pairing of a GPE record with an ansatz state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonSample {
    pub t: f64,
    pub gpe_center: f64,
    pub var_center: f64,
    pub gpe_width: f64,
    pub var_width: f64,
}

impl ComparisonSample {
    pub fn center_gap(&self) -> f64 {
        (self.gpe_center - self.var_center).abs()
    }

    pub fn width_gap(&self) -> f64 {
        (self.gpe_width - self.var_width).abs()
    }
}

/// Pairs samples taken on the same time grid.
pub fn pair_samples(
    gpe: &[ObservableRecord],
    var: &[VariationalState],
) -> Result<Vec<ComparisonSample>> {
    if gpe.len() != var.len() {
        return Err(Error::TimeGridMismatch(format!(
            "{} GPE samples vs {} ansatz samples",
            gpe.len(),
            var.len()
        )));
    }
    gpe.iter()
        .zip(var)
        .map(|(r, s)| {
            if (r.t - s.t).abs() > 1e-9 * (1.0 + r.t.abs()) {
                return Err(Error::TimeGridMismatch(format!(
                    "sample at t = {} paired with t = {}",
                    r.t, s.t
                )));
            }
            Ok(ComparisonSample {
                t: r.t,
                gpe_center: r.mean_x,
                var_center: s.x0,
                gpe_width: std::f64::consts::SQRT_2 * r.rms_width,
                var_width: s.a,
            })
        })
        .collect()
}

pub fn compare(
    gpe: &[ObservableRecord],
    var: &[VariationalState],
    center_threshold: f64,
) -> Result<ComparisonReport> {
    let samples = pair_samples(gpe, var)?;
    let max_center_gap = samples.iter().map(|s| s.center_gap()).fold(0.0, f64::max);
    let max_width_gap = samples.iter().map(|s| s.width_gap()).fold(0.0, f64::max);
    let t_divergence = samples
        .iter()
        .find(|s| s.center_gap() > center_threshold)
        .map(|s| s.t);
    let verdict = if max_center_gap > center_threshold {
        Verdict::Mismatch
    } else {
        Verdict::Match
    };
    Ok(ComparisonReport {
        max_center_gap,
        max_width_gap,
        t_divergence,
        verdict,
        center_threshold,
        non_gaussian: gpe.iter().any(|r| r.peaks > 1),
    })
}
