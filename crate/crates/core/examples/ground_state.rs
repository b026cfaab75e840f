//! Imaginary-time preparation of the condensate in the shifted trap and
//! its comparison with the Gaussian-ansatz equilibrium width.
//!
//!     cargo run --release --example ground_state -- [g_s] [psi0.bin]

use std::path::Path;

use gpscatter::experiment::io::write_wavefunction;
use gpscatter::grid::Grid;
use gpscatter::observables::record;
use gpscatter::potential::PotentialSpec;
use gpscatter::propagator::{ground_state, PhysicsParams, SolverConfig};
use gpscatter::variational::equilibrium_width;

fn main() -> gpscatter::Result<()> {
    let mut args = std::env::args().skip(1);
    let g_s: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(30.0);
    let grid = Grid::default();
    let params = PhysicsParams::new(g_s, PotentialSpec::preparation(35.0))?;

    let start = std::time::Instant::now();
    let gs = ground_state(&grid, &params, &SolverConfig::default())?;
    let r = record(&gs.psi, &params);
    println!("g_s = {g_s}: converged in {} steps ({:.2?})", gs.steps, start.elapsed());
    println!("energy      {:.12}", gs.energy);
    println!("largest energy rise during relaxation {:.1e}", gs.max_energy_rise);
    println!("<x>         {:.12}", r.mean_x);
    println!("sqrt2 * rms {:.6}  (ansatz equilibrium width {:.6})", std::f64::consts::SQRT_2 * r.rms_width, equilibrium_width(g_s));
    println!("p_right     {:.15}", r.p_right);

    if let Some(path) = args.next() {
        write_wavefunction(Path::new(&path), &gs.psi)?;
        println!("wrote {path}");
    }
    Ok(())
}
