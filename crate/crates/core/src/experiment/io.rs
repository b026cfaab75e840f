//! Output files: CSV tables with a provenance header, the binary ground
//! state (`psi0.bin`) and density frames (`density.bin`).
//!
//! Both binary formats are little-endian.
//!
//! `psi0.bin`: magic `GPSW`, `u32` version = 1, `u64` n, `f64` dx, `f64` t,
//! then `n` pairs `(re: f64, im: f64)`.
//!
//! `density.bin`: magic `GPSD`, `u32` version = 1, `u64` n, `u64`
//! n_snapshots, `f64` dx, `f64` dt_snapshot, then `n_snapshots` row-major
//! frames of `n` `f64` values `|ψ|²`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, Wavefunction};

pub const PSI_MAGIC: &[u8; 4] = b"GPSW";
pub const DENSITY_MAGIC: &[u8; 4] = b"GPSD";
pub const FORMAT_VERSION: u32 = 1;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV writer that prefixes the file with `# `-commented provenance lines.
pub struct CsvWriter {
    out: BufWriter<File>,
}

impl CsvWriter {
    pub fn create(path: &Path, provenance: &str, columns: &[&str]) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        for line in provenance.lines() {
            if line.is_empty() {
                writeln!(out, "#")?;
            } else {
                writeln!(out, "# {line}")?;
            }
        }
        writeln!(out, "{}", columns.join(","))?;
        Ok(CsvWriter { out })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        writeln!(self.out, "{}", fields.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

pub fn write_wavefunction(path: &Path, psi: &Wavefunction) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(PSI_MAGIC)?;
    out.write_all(&FORMAT_VERSION.to_le_bytes())?;
    out.write_all(&(psi.grid().n() as u64).to_le_bytes())?;
    out.write_all(&psi.grid().dx().to_le_bytes())?;
    out.write_all(&psi.t.to_le_bytes())?;
    for c in psi.amplitudes() {
        out.write_all(&c.re.to_le_bytes())?;
        out.write_all(&c.im.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn read_array<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Format(format!("truncated file: {e}")))?;
    Ok(buf)
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_le_bytes(read_array(r)?))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    Ok(u64::from_le_bytes(read_array(r)?))
}

fn read_header(r: &mut impl Read, magic: &[u8; 4]) -> Result<()> {
    let m: [u8; 4] = read_array(r)?;
    if &m != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&m),
            String::from_utf8_lossy(magic)
        )));
    }
    let version = u32::from_le_bytes(read_array(r)?);
    if version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    Ok(())
}

pub fn read_wavefunction(path: &Path) -> Result<Wavefunction> {
    let mut r = BufReader::new(File::open(path)?);
    read_header(&mut r, PSI_MAGIC)?;
    let n = read_u64(&mut r)? as usize;
    let dx = read_f64(&mut r)?;
    let t = read_f64(&mut r)?;
    let grid = Grid::new(n, dx).map_err(|e| Error::Format(e.to_string()))?;
    let mut amps = Vec::with_capacity(n);
    for _ in 0..n {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        amps.push(Complex64::new(re, im));
    }
    Wavefunction::new(grid, amps, t)
}

/// Streams `|ψ|²` frames to `density.bin`. The frame count is fixed up
/// front and checked on [`DensityWriter::finish`].
pub struct DensityWriter {
    out: BufWriter<File>,
    n: usize,
    expected: u64,
    written: u64,
}

impl DensityWriter {
    pub fn create(path: &Path, grid: &Grid, n_snapshots: u64, dt_snapshot: f64) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(DENSITY_MAGIC)?;
        out.write_all(&FORMAT_VERSION.to_le_bytes())?;
        out.write_all(&(grid.n() as u64).to_le_bytes())?;
        out.write_all(&n_snapshots.to_le_bytes())?;
        out.write_all(&grid.dx().to_le_bytes())?;
        out.write_all(&dt_snapshot.to_le_bytes())?;
        Ok(DensityWriter {
            out,
            n: grid.n(),
            expected: n_snapshots,
            written: 0,
        })
    }

    pub fn frame(&mut self, psi: &Wavefunction) -> Result<()> {
        debug_assert_eq!(psi.amplitudes().len(), self.n);
        for c in psi.amplitudes() {
            self.out.write_all(&c.norm_sqr().to_le_bytes())?;
        }
        self.written += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        if self.written != self.expected {
            return Err(Error::Format(format!(
                "wrote {} density frames, header promises {}",
                self.written, self.expected
            )));
        }
        self.out.flush()?;
        Ok(())
    }
}

/// Parsed `density.bin`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityFrames {
    pub n: usize,
    pub dx: f64,
    pub dt_snapshot: f64,
    pub frames: Vec<Vec<f64>>,
}

pub fn read_density(path: &Path) -> Result<DensityFrames> {
    let mut r = BufReader::new(File::open(path)?);
    read_header(&mut r, DENSITY_MAGIC)?;
    let n = read_u64(&mut r)? as usize;
    let count = read_u64(&mut r)?;
    let dx = read_f64(&mut r)?;
    let dt_snapshot = read_f64(&mut r)?;
    let mut frames = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let mut f = Vec::with_capacity(n);
        for _ in 0..n {
            f.push(read_f64(&mut r)?);
        }
        frames.push(f);
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Format(format!("{} trailing bytes", rest.len())));
    }
    Ok(DensityFrames {
        n,
        dx,
        dt_snapshot,
        frames,
    })
}
