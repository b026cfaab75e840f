//! The scattering potential on the default grid: barrier profile, PT
//! symmetry of the complex obstacle, and the laboratory scale behind g_s.
//!
//!     cargo run --release --example potential_landscape -- [v0] [w0]

use std::f64::consts::PI;

use gpscatter::grid::Grid;
use gpscatter::potential::{eval_potential, nondimensionalize, pt_symmetry_check, DimensionalParams, PotentialSpec};

fn main() -> gpscatter::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let v0 = args.first().copied().unwrap_or(600.0);
    let w0 = args.get(1).copied().unwrap_or(10.0);

    let grid = Grid::default();
    let spec = PotentialSpec::new(0.0, v0, w0, 1.0)?;
    println!("grid: {grid}");
    println!("{:>6} {:>14} {:>14}", "x", "Re V", "Im V");
    for x in [-3.0, -1.5, -0.7071, 0.0, 0.7071, 1.5, 3.0] {
        let v = spec.value_at(x);
        println!("{x:>6.3} {:>14.6} {:>14.6}", v.re, v.im);
    }

    let values = eval_potential(&spec, &grid);
    let peak = values.iter().map(|v| v.im).fold(f64::NEG_INFINITY, f64::max);
    println!("max gain rate Im V = {peak:.4} (W0/sqrt(2e) = {:.4})", w0 / (2.0 * std::f64::consts::E).sqrt());
    println!("PT violation max|V(x) - conj V(-x)| = {:e}", pt_symmetry_check(&spec, &grid)?);
    let shifted = PotentialSpec::new(35.0, v0, w0, 1.0)?;
    println!("shifted preparation trap: {}", pt_symmetry_check(&shifted, &grid).unwrap_err());

    let rb = DimensionalParams {
        atom_count: 193,
        scattering_length: 5.29e-9,
        radial_freq: 2.0 * PI * 500.0,
        axial_freq: 2.0 * PI * 10.0,
        mass: 1.443e-25,
    };
    println!(
        "87Rb, {} atoms, omega_r/omega_x = 50: L = {:.3} um, g_s = {:.3}",
        rb.atom_count,
        rb.oscillator_length() * 1e6,
        nondimensionalize(&rb)?
    );
    Ok(())
}
