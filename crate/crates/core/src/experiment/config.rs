//! Sectioned `key = value` experiment files.
//!
//! ```text
//! # comments start with '#' or ';'
//! [grid]
//! n = 8192
//! dx = 0.0177
//!
//! [physics]
//! g_s = 30
//! v0 = 600
//! w0 = 0
//! obstacle_width = 1
//! x_init = 35
//!
//! [time]
//! dt = 0.0001
//! t_final = 25
//! snapshot_stride = 100
//! density_stride = 2500
//! imag_dt = 0.001
//! imag_tol = 1e-10
//! max_imag_steps = 500000
//!
//! [run]
//! output_dir = out
//! sweep_v0 = 400, 500, 600, 700
//! sweep_w0 = 0
//! center_threshold = 2.0
//! ```
//!
//! Every key is optional and defaults to the values above; unknown
//! sections, unknown keys and repeated keys are errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Grid, DEFAULT_DX, DEFAULT_N};
use crate::observables::DEFAULT_CENTER_THRESHOLD;
use crate::potential::PotentialSpec;
use crate::propagator::{PhysicsParams, SolverConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct GridSection {
    pub n: usize,
    pub dx: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhysicsSection {
    pub g_s: f64,
    pub v0: f64,
    pub w0: f64,
    pub obstacle_width: f64,
    pub x_init: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeSection {
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_stride: u64,
    pub density_stride: u64,
    pub imag_dt: f64,
    pub imag_tol: f64,
    pub max_imag_steps: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSection {
    pub command: Option<String>,
    pub output_dir: PathBuf,
    pub psi0: Option<PathBuf>,
    pub sweep_v0: Vec<f64>,
    pub sweep_w0: Vec<f64>,
    pub center_threshold: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridSection,
    pub physics: PhysicsSection,
    pub time: TimeSection,
    pub run: RunSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            grid: GridSection {
                n: DEFAULT_N,
                dx: DEFAULT_DX,
            },
            physics: PhysicsSection {
                g_s: 30.0,
                v0: 600.0,
                w0: 0.0,
                obstacle_width: 1.0,
                x_init: 35.0,
            },
            time: TimeSection {
                dt: 1e-4,
                t_final: 25.0,
                snapshot_stride: 100,
                density_stride: 2500,
                imag_dt: 1e-3,
                imag_tol: 1e-10,
                max_imag_steps: 500_000,
            },
            run: RunSection {
                command: None,
                output_dir: PathBuf::from("out"),
                psi0: None,
                sweep_v0: Vec::new(),
                sweep_w0: Vec::new(),
                center_threshold: DEFAULT_CENTER_THRESHOLD,
            },
        }
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str, line: usize) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::Config(format!("line {line}: cannot parse {key} = {raw:?}")))
}

fn parse_list(key: &str, raw: &str, line: usize) -> Result<Vec<f64>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(key, s, line))
        .collect()
}

impl ExperimentConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read {}: {e}", path.display()))
        })?;
        text.parse()
    }

    fn set(&mut self, section: &str, key: &str, raw: &str, line: usize) -> Result<()> {
        match (section, key) {
            ("grid", "n") => self.grid.n = parse_value(key, raw, line)?,
            ("grid", "dx") => self.grid.dx = parse_value(key, raw, line)?,
            ("physics", "g_s") => self.physics.g_s = parse_value(key, raw, line)?,
            ("physics", "v0") => self.physics.v0 = parse_value(key, raw, line)?,
            ("physics", "w0") => self.physics.w0 = parse_value(key, raw, line)?,
            ("physics", "obstacle_width") => {
                self.physics.obstacle_width = parse_value(key, raw, line)?
            }
            ("physics", "x_init") => self.physics.x_init = parse_value(key, raw, line)?,
            ("time", "dt") => self.time.dt = parse_value(key, raw, line)?,
            ("time", "t_final") => self.time.t_final = parse_value(key, raw, line)?,
            ("time", "snapshot_stride") => {
                self.time.snapshot_stride = parse_value(key, raw, line)?
            }
            ("time", "density_stride") => self.time.density_stride = parse_value(key, raw, line)?,
            ("time", "imag_dt") => self.time.imag_dt = parse_value(key, raw, line)?,
            ("time", "imag_tol") => self.time.imag_tol = parse_value(key, raw, line)?,
            ("time", "max_imag_steps") => self.time.max_imag_steps = parse_value(key, raw, line)?,
            ("run", "command") => self.run.command = Some(raw.to_string()),
            ("run", "output_dir") => self.run.output_dir = PathBuf::from(raw),
            ("run", "psi0") => self.run.psi0 = Some(PathBuf::from(raw)),
            ("run", "sweep_v0") => self.run.sweep_v0 = parse_list(key, raw, line)?,
            ("run", "sweep_w0") => self.run.sweep_w0 = parse_list(key, raw, line)?,
            ("run", "center_threshold") => {
                self.run.center_threshold = parse_value(key, raw, line)?
            }
            _ => {
                return Err(Error::Config(format!(
                    "line {line}: unknown key {key:?} in section [{section}]"
                )))
            }
        }
        Ok(())
    }

    /// Checks every parameter the drivers rely on. Sweep lists are only
    /// required by the sweep command, see [`ExperimentConfig::validate_sweep`].
    pub fn validate(&self) -> Result<()> {
        let cfg_err = |e: Error| Error::Config(e.to_string());
        self.grid().map_err(cfg_err)?;
        self.scattering_params().map_err(cfg_err)?;
        self.solver_config().validate().map_err(cfg_err)?;
        if !self.physics.x_init.is_finite() {
            return Err(Error::Config("x_init must be finite".into()));
        }
        if self.time.density_stride == 0
            || self.time.density_stride % self.time.snapshot_stride != 0
        {
            return Err(Error::Config(format!(
                "density_stride = {} must be a positive multiple of snapshot_stride = {}",
                self.time.density_stride, self.time.snapshot_stride
            )));
        }
        if !(self.run.center_threshold > 0.0) {
            return Err(Error::Config("center_threshold must be positive".into()));
        }
        if let Some(cmd) = &self.run.command {
            if !super::COMMANDS.contains(&cmd.as_str()) {
                return Err(Error::Config(format!("unknown command {cmd:?}")));
            }
        }
        Ok(())
    }

    pub fn validate_sweep(&self) -> Result<()> {
        if self.run.sweep_v0.is_empty() || self.run.sweep_w0.is_empty() {
            return Err(Error::Config(
                "sweep needs non-empty sweep_v0 and sweep_w0 lists".into(),
            ));
        }
        if self
            .run
            .sweep_v0
            .iter()
            .chain(&self.run.sweep_w0)
            .any(|v| !v.is_finite())
        {
            return Err(Error::Config("sweep values must be finite".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.n, self.grid.dx)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            dt: self.time.dt,
            t_final: self.time.t_final,
            snapshot_stride: self.time.snapshot_stride,
            imag_dt: self.time.imag_dt,
            imag_tol: self.time.imag_tol,
            max_imag_steps: self.time.max_imag_steps,
        }
    }

    /// Shifted trap in which the initial condensate is prepared.
    pub fn preparation_params(&self) -> Result<PhysicsParams> {
        PhysicsParams::new(
            self.physics.g_s,
            PotentialSpec::preparation(self.physics.x_init)
                .with_obstacle_width(self.physics.obstacle_width),
        )
    }

    /// Post-quench potential with the configured obstacle.
    pub fn scattering_params(&self) -> Result<PhysicsParams> {
        self.scattering_params_for(self.physics.v0, self.physics.w0)
    }

    pub fn scattering_params_for(&self, v0: f64, w0: f64) -> Result<PhysicsParams> {
        PhysicsParams::new(
            self.physics.g_s,
            PotentialSpec::new(0.0, v0, w0, self.physics.obstacle_width)?,
        )
    }

    /// Canonical text form; parsing it yields an equal config.
    pub fn to_ini(&self) -> String {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut s = String::new();
        let _ = writeln!(s, "[grid]\nn = {}\ndx = {}", self.grid.n, self.grid.dx);
        let p = &self.physics;
        let _ = writeln!(
            s,
            "\n[physics]\ng_s = {}\nv0 = {}\nw0 = {}\nobstacle_width = {}\nx_init = {}",
            p.g_s, p.v0, p.w0, p.obstacle_width, p.x_init
        );
        let t = &self.time;
        let _ = writeln!(
            s,
            "\n[time]\ndt = {}\nt_final = {}\nsnapshot_stride = {}\ndensity_stride = {}\nimag_dt = {}\nimag_tol = {}\nmax_imag_steps = {}",
            t.dt, t.t_final, t.snapshot_stride, t.density_stride, t.imag_dt, t.imag_tol, t.max_imag_steps
        );
        let r = &self.run;
        let _ = writeln!(s, "\n[run]");
        if let Some(c) = &r.command {
            let _ = writeln!(s, "command = {c}");
        }
        let _ = writeln!(s, "output_dir = {}", r.output_dir.display());
        if let Some(p) = &r.psi0 {
            let _ = writeln!(s, "psi0 = {}", p.display());
        }
        let _ = writeln!(
            s,
            "sweep_v0 = {}\nsweep_w0 = {}\ncenter_threshold = {}",
            list(&r.sweep_v0),
            list(&r.sweep_w0),
            r.center_threshold
        );
        s
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut section: Option<String> = None;
        let mut seen = std::collections::HashSet::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| {
                    Error::Config(format!("line {line_no}: malformed section header"))
                })?;
                let name = name.trim();
                if !["grid", "physics", "time", "run"].contains(&name) {
                    return Err(Error::Config(format!(
                        "line {line_no}: unknown section [{name}]"
                    )));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {line_no}: expected key = value"))
            })?;
            let sec = section.as_deref().ok_or_else(|| {
                Error::Config(format!("line {line_no}: key outside of any section"))
            })?;
            let key = key.trim();
            if !seen.insert((sec.to_string(), key.to_string())) {
                return Err(Error::Config(format!(
                    "line {line_no}: duplicate key {key:?} in [{sec}]"
                )));
            }
            cfg.set(sec, key, value.trim(), line_no)?;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg: ExperimentConfig = "".parse().unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.grid.n, 8192);
        assert_eq!(cfg.time.dt, 1e-4);
        assert_eq!(cfg.physics.g_s, 30.0);
        cfg.validate().unwrap();
    }

    #[test]
    fn parses_sections_and_lists() {
        let text = "# sweep\n[grid]\nn = 1024\n dx = 0.05 \n[run]\nsweep_v0 = 400, 500,600\nsweep_w0 = 0\n; done\n";
        let cfg: ExperimentConfig = text.parse().unwrap();
        assert_eq!(cfg.grid.n, 1024);
        assert_eq!(cfg.grid.dx, 0.05);
        assert_eq!(cfg.run.sweep_v0, vec![400.0, 500.0, 600.0]);
        cfg.validate_sweep().unwrap();
    }

    #[test]
    fn canonical_text_round_trips() {
        let mut cfg = ExperimentConfig::default();
        cfg.run.sweep_v0 = vec![400.0, 700.5];
        cfg.run.sweep_w0 = vec![0.0, 0.1];
        cfg.run.psi0 = Some("a/psi0.bin".into());
        cfg.run.command = Some("sweep".into());
        let back: ExperimentConfig = cfg.to_ini().parse().unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        for bad in [
            "[grid]\nnx = 3\n",
            "[mesh]\nn = 16\n",
            "n = 16\n",
            "[grid]\nn = 16\nn = 32\n",
            "[grid]\nn = sixteen\n",
            "[grid\nn = 16\n",
            "[grid]\njust text\n",
        ] {
            assert!(
                matches!(bad.parse::<ExperimentConfig>(), Err(Error::Config(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn validation_failures() {
        let negative_dt: ExperimentConfig = "[time]\ndt = -0.1\n".parse().unwrap();
        assert!(matches!(negative_dt.validate(), Err(Error::Config(_))));
        let odd_grid: ExperimentConfig = "[grid]\nn = 1000\n".parse().unwrap();
        assert!(odd_grid.validate().is_err());
        let stride: ExperimentConfig = "[time]\nsnapshot_stride = 300\n".parse().unwrap();
        assert!(stride.validate().is_err());
        let cmd: ExperimentConfig = "[run]\ncommand = plot\n".parse().unwrap();
        assert!(cmd.validate().is_err());
        assert!(ExperimentConfig::default().validate_sweep().is_err());
    }
}
