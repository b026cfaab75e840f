//! Configuration-driven experiment drivers behind the `gpscatter` binary.
//!
//! Every driver writes its files into one output directory. CSV files start
//! with a `#`-commented copy of the command and the configuration as read,
//! so identical configurations give byte-identical files regardless of
//! `--out` or `--jobs`.

pub mod config;
pub mod io;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Wavefunction;
use crate::observables::{compare, pair_samples, ComparisonReport, ObservableRecord, Recorder};
use crate::propagator::{evolve, ground_state, PhysicsParams};
use crate::variational::{integrate_ode, AnsatzParams, VariationalState};

pub use config::ExperimentConfig;
use io::{fmt_f64, CsvWriter, DensityWriter};

pub const COMMANDS: &[&str] = &["groundstate", "evolve", "variational", "compare", "sweep"];

pub const TIMESERIES_COLUMNS: &[&str] = &[
    "t",
    "norm",
    "p_left",
    "p_right",
    "mean_x",
    "rms_width",
    "energy",
    "edge_mass",
];

pub const SWEEP_COLUMNS: &[&str] = &[
    "v0",
    "w0",
    "status",
    "final_norm",
    "final_p_left",
    "final_p_right",
    "mean_p_left_last_quarter",
    "mean_p_right_last_quarter",
    "max_edge_mass",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    GroundState,
    Evolve,
    Variational,
    Compare,
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GroundState => "groundstate",
            Command::Evolve => "evolve",
            Command::Variational => "variational",
            Command::Compare => "compare",
            Command::Sweep => "sweep",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "groundstate" => Command::GroundState,
            "evolve" => Command::Evolve,
            "variational" => Command::Variational,
            "compare" => Command::Compare,
            "sweep" => Command::Sweep,
            other => return Err(Error::Config(format!("unknown command {other:?}"))),
        })
    }
}

/// Runs `command` with outputs under `out_dir` (the config's `output_dir`
/// when `None`). `jobs` only affects the sweep.
pub fn run(
    command: Command,
    cfg: &ExperimentConfig,
    out_dir: Option<&Path>,
    jobs: usize,
) -> Result<()> {
    if let Some(c) = &cfg.run.command {
        if c != command.name() {
            return Err(Error::Config(format!(
                "config is for command {c:?}, not {:?}",
                command.name()
            )));
        }
    }
    let out = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.run.output_dir.clone());
    match command {
        Command::GroundState => run_groundstate(cfg, &out).map(|_| ()),
        Command::Evolve => run_evolve(cfg, &out).map(|_| ()),
        Command::Variational => run_variational(cfg, &out).map(|_| ()),
        Command::Compare => run_compare(cfg, &out).map(|_| ()),
        Command::Sweep => run_sweep(cfg, &out, jobs).map(|_| ()),
    }
}

fn provenance(command: Command, cfg: &ExperimentConfig) -> String {
    format!("gpscatter {}\n\n{}", command.name(), cfg.to_ini())
}

fn prepare_dir(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out)?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct GroundStateOutput {
    pub psi: Wavefunction,
    pub energy: f64,
    pub steps: u64,
}

/// Initial condensate: loaded from `run.psi0` when set, otherwise relaxed
/// in the preparation trap.
pub fn initial_state(cfg: &ExperimentConfig) -> Result<GroundStateOutput> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let prep = cfg.preparation_params()?;
    if let Some(path) = &cfg.run.psi0 {
        let psi = io::read_wavefunction(path)?;
        if psi.grid() != &grid {
            return Err(Error::Config(format!(
                "{} was computed on {}, config asks for {}",
                path.display(),
                psi.grid(),
                grid
            )));
        }
        let energy = crate::propagator::gp_energy(&psi, &prep);
        return Ok(GroundStateOutput {
            psi,
            energy,
            steps: 0,
        });
    }
    let gs = ground_state(&grid, &prep, &cfg.solver_config())?;
    Ok(GroundStateOutput {
        psi: gs.psi,
        energy: gs.energy,
        steps: gs.steps,
    })
}

/// Writes `psi0.bin` and `summary.csv`.
pub fn run_groundstate(cfg: &ExperimentConfig, out: &Path) -> Result<GroundStateOutput> {
    cfg.validate()?;
    let gs = initial_state(cfg)?;
    prepare_dir(out)?;
    io::write_wavefunction(&out.join("psi0.bin"), &gs.psi)?;
    let rec = Recorder::new(gs.psi.grid(), &cfg.preparation_params()?).record(&gs.psi);
    let mut csv = CsvWriter::create(
        &out.join("summary.csv"),
        &provenance(Command::GroundState, cfg),
        &["energy", "mean_x", "rms_width", "norm", "steps"],
    )?;
    csv.row(&[
        fmt_f64(gs.energy),
        fmt_f64(rec.mean_x),
        fmt_f64(rec.rms_width),
        fmt_f64(rec.norm),
        gs.steps.to_string(),
    ])?;
    csv.finish()?;
    Ok(gs)
}

fn timeseries_row(r: &ObservableRecord) -> Vec<String> {
    [
        r.t,
        r.norm,
        r.p_left,
        r.p_right,
        r.mean_x,
        r.rms_width,
        r.energy,
        r.edge_mass,
    ]
    .iter()
    .map(|v| fmt_f64(*v))
    .collect()
}

/// Quench evolution of `psi0` under `params`, recording observables at
/// every snapshot and optionally streaming density frames.
pub fn evolve_records(
    psi0: &Wavefunction,
    params: &PhysicsParams,
    cfg: &ExperimentConfig,
    mut density: Option<&mut DensityWriter>,
) -> Result<Vec<ObservableRecord>> {
    let solver = cfg.solver_config();
    let mut recorder = Recorder::new(psi0.grid(), params);
    let mut records = Vec::with_capacity((solver.total_steps() / solver.snapshot_stride + 2) as usize);
    evolve(psi0, params, &solver, |psi| {
        records.push(recorder.record(psi));
        if let Some(w) = density.as_deref_mut() {
            let step = (psi.t / solver.dt).round() as u64;
            if step % cfg.time.density_stride == 0 {
                w.frame(psi)?;
            }
        }
        Ok(())
    })?;
    Ok(records)
}

#[derive(Clone, Debug)]
pub struct EvolveOutput {
    pub records: Vec<ObservableRecord>,
}

/// Writes `timeseries.csv` and `density.bin`.
pub fn run_evolve(cfg: &ExperimentConfig, out: &Path) -> Result<EvolveOutput> {
    cfg.validate()?;
    let psi0 = initial_state(cfg)?.psi;
    let params = cfg.scattering_params()?;
    prepare_dir(out)?;
    let solver = cfg.solver_config();
    let frames = solver.total_steps() / cfg.time.density_stride + 1;
    let mut density = DensityWriter::create(
        &out.join("density.bin"),
        psi0.grid(),
        frames,
        cfg.time.density_stride as f64 * solver.dt,
    )?;
    let records = evolve_records(&psi0, &params, cfg, Some(&mut density))?;
    density.finish()?;
    let mut csv = CsvWriter::create(
        &out.join("timeseries.csv"),
        &provenance(Command::Evolve, cfg),
        TIMESERIES_COLUMNS,
    )?;
    for r in &records {
        csv.row(&timeseries_row(r))?;
    }
    csv.finish()?;
    Ok(EvolveOutput { records })
}

/// Ansatz trajectory sampled on the same grid as the GPE snapshots.
pub fn variational_trajectory(cfg: &ExperimentConfig) -> Result<Vec<VariationalState>> {
    cfg.validate()?;
    let p = &cfg.physics;
    let s0 = VariationalState::at_rest(p.x_init, p.g_s);
    let params = AnsatzParams {
        v0: p.v0,
        w0: p.w0,
        g_s: p.g_s,
    };
    integrate_ode(
        &s0,
        &params,
        cfg.time.dt,
        cfg.time.t_final,
        cfg.time.snapshot_stride,
    )
}

/// Writes `variational.csv`.
pub fn run_variational(cfg: &ExperimentConfig, out: &Path) -> Result<Vec<VariationalState>> {
    let traj = variational_trajectory(cfg)?;
    prepare_dir(out)?;
    let mut csv = CsvWriter::create(
        &out.join("variational.csv"),
        &provenance(Command::Variational, cfg),
        &["t", "x0", "v", "a", "b"],
    )?;
    for s in &traj {
        csv.row(&[s.t, s.x0, s.v, s.a, s.b].map(fmt_f64))?;
    }
    csv.finish()?;
    Ok(traj)
}

#[derive(Clone, Debug)]
pub struct CompareOutput {
    pub gpe: Vec<ObservableRecord>,
    pub variational: Vec<VariationalState>,
    pub report: ComparisonReport,
}

/// GPE and ansatz runs for the configured `(v0, w0)` without writing files.
pub fn compare_runs(cfg: &ExperimentConfig) -> Result<CompareOutput> {
    cfg.validate()?;
    let psi0 = initial_state(cfg)?.psi;
    let gpe = evolve_records(&psi0, &cfg.scattering_params()?, cfg, None)?;
    let variational = variational_trajectory(cfg)?;
    let report = compare(&gpe, &variational, cfg.run.center_threshold)?;
    Ok(CompareOutput {
        gpe,
        variational,
        report,
    })
}

/// Writes `compare.csv` (paired samples) and `report.csv` (one row).
pub fn run_compare(cfg: &ExperimentConfig, out: &Path) -> Result<CompareOutput> {
    let result = compare_runs(cfg)?;
    prepare_dir(out)?;
    let prov = provenance(Command::Compare, cfg);
    let mut csv = CsvWriter::create(
        &out.join("compare.csv"),
        &prov,
        &[
            "t",
            "gpe_center",
            "var_center",
            "gpe_width",
            "var_width",
            "center_gap",
            "width_gap",
        ],
    )?;
    for s in pair_samples(&result.gpe, &result.variational)? {
        csv.row(
            &[
                s.t,
                s.gpe_center,
                s.var_center,
                s.gpe_width,
                s.var_width,
                s.center_gap(),
                s.width_gap(),
            ]
            .map(fmt_f64),
        )?;
    }
    csv.finish()?;

    let r = &result.report;
    let mut csv = CsvWriter::create(
        &out.join("report.csv"),
        &prov,
        &[
            "v0",
            "w0",
            "max_center_gap",
            "max_width_gap",
            "t_divergence",
            "center_threshold",
            "verdict",
            "non_gaussian",
        ],
    )?;
    csv.row(&[
        fmt_f64(cfg.physics.v0),
        fmt_f64(cfg.physics.w0),
        fmt_f64(r.max_center_gap),
        fmt_f64(r.max_width_gap),
        r.t_divergence.map(fmt_f64).unwrap_or_default(),
        fmt_f64(r.center_threshold),
        r.verdict.as_str().to_string(),
        r.non_gaussian.to_string(),
    ])?;
    csv.finish()?;
    Ok(result)
}

/// One `(v0, w0)` point of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub v0: f64,
    pub w0: f64,
    pub outcome: std::result::Result<SweepSummary, String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSummary {
    pub final_norm: f64,
    pub final_p_left: f64,
    pub final_p_right: f64,
    pub mean_p_left_last_quarter: f64,
    pub mean_p_right_last_quarter: f64,
    pub max_edge_mass: f64,
}

impl SweepSummary {
    /// Summary of one evolution's records.
    pub fn from_records(records: &[ObservableRecord], t_final: f64) -> Self {
        let last = records.last().expect("evolution records at least one snapshot");
        let tail: Vec<_> = records.iter().filter(|r| r.t >= 0.75 * t_final).collect();
        let mean = |f: fn(&ObservableRecord) -> f64| {
            tail.iter().map(|r| f(r)).sum::<f64>() / tail.len() as f64
        };
        SweepSummary {
            final_norm: last.norm,
            final_p_left: last.p_left,
            final_p_right: last.p_right,
            mean_p_left_last_quarter: mean(|r| r.p_left),
            mean_p_right_last_quarter: mean(|r| r.p_right),
            max_edge_mass: records.iter().map(|r| r.edge_mass).fold(0.0, f64::max),
        }
    }
}

fn failure_status(e: &Error) -> String {
    match e {
        Error::BlowUp { step } => format!("blowup_at_step_{step}"),
        Error::InvalidParameter(_) => "invalid_parameter".into(),
        _ => "error".into(),
    }
}

/// Sorted, de-duplicated `(v0, w0)` grid.
pub fn sweep_points(cfg: &ExperimentConfig) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = cfg
        .run
        .sweep_v0
        .iter()
        .flat_map(|&v| cfg.run.sweep_w0.iter().map(move |&w| (v, w)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    pts
}

/// Evolves every sweep point from the shared initial condensate on a pool
/// of `jobs` workers. Row order depends only on the parameter values.
pub fn sweep(cfg: &ExperimentConfig, jobs: usize) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    cfg.validate_sweep()?;
    let psi0 = initial_state(cfg)?.psi;
    let points = sweep_points(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let rows = pool.install(|| {
        points
            .par_iter()
            .map(|&(v0, w0)| {
                let outcome = cfg
                    .scattering_params_for(v0, w0)
                    .and_then(|params| evolve_records(&psi0, &params, cfg, None))
                    .map(|recs| SweepSummary::from_records(&recs, cfg.time.t_final))
                    .map_err(|e| failure_status(&e));
                SweepRow { v0, w0, outcome }
            })
            .collect()
    });
    Ok(rows)
}

/// Writes `sweep.csv`.
pub fn run_sweep(cfg: &ExperimentConfig, out: &Path, jobs: usize) -> Result<Vec<SweepRow>> {
    let rows = sweep(cfg, jobs)?;
    prepare_dir(out)?;
    let mut csv = CsvWriter::create(
        &out.join("sweep.csv"),
        &provenance(Command::Sweep, cfg),
        SWEEP_COLUMNS,
    )?;
    for row in &rows {
        let mut fields = vec![fmt_f64(row.v0), fmt_f64(row.w0)];
        match &row.outcome {
            Ok(s) => {
                fields.push("ok".into());
                fields.extend(
                    [
                        s.final_norm,
                        s.final_p_left,
                        s.final_p_right,
                        s.mean_p_left_last_quarter,
                        s.mean_p_right_last_quarter,
                        s.max_edge_mass,
                    ]
                    .map(fmt_f64),
                );
            }
            Err(status) => {
                fields.push(status.clone());
                fields.extend(std::iter::repeat("nan".to_string()).take(6));
            }
        }
        csv.row(&fields)?;
    }
    csv.finish()?;
    Ok(rows)
}

/// Files each command writes, relative to its output directory.
pub fn output_files(command: Command) -> &'static [&'static str] {
    match command {
        Command::GroundState => &["psi0.bin", "summary.csv"],
        Command::Evolve => &["timeseries.csv", "density.bin"],
        Command::Variational => &["variational.csv"],
        Command::Compare => &["compare.csv", "report.csv"],
        Command::Sweep => &["sweep.csv"],
    }
}

/// Default worker count: `GPSCATTER_JOBS`, else `requested`, else the
/// available parallelism.
pub fn resolve_jobs(requested: Option<usize>) -> usize {
    if let Some(n) = std::env::var("GPSCATTER_JOBS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        return n;
    }
    requested.filter(|&n| n > 0).unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
}

/// Output directory for a command, for callers that want the resolved path.
pub fn output_dir(cfg: &ExperimentConfig, out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf)
        .unwrap_or_else(|| cfg.run.output_dir.clone())
}
