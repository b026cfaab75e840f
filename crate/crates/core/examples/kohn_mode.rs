//! Quench from x = 35 into the centred trap without obstacle: the centre of
//! mass follows 35 cos t exactly, whatever the interaction strength.
//!
//!     cargo run --release --example kohn_mode -- [t_final]

use gpscatter::experiment::{evolve_records, initial_state, ExperimentConfig};

fn main() -> gpscatter::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.time.t_final = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2.0 * std::f64::consts::PI);
    cfg.physics.v0 = 0.0;

    let psi0 = initial_state(&cfg)?.psi;
    let records = evolve_records(&psi0, &cfg.scattering_params()?, &cfg, None)?;
    let mut worst: f64 = 0.0;
    for (i, r) in records.iter().enumerate() {
        let exact = 35.0 * r.t.cos();
        worst = worst.max((r.mean_x - exact).abs());
        if i % 50 == 0 {
            println!("t {:6.2}  <x> {:+10.6}  35cos t {:+10.6}  width {:.5}", r.t, r.mean_x, exact, r.rms_width);
        }
    }
    println!("max |<x> - 35 cos t| = {worst:.2e} over {} snapshots", records.len());
    Ok(())
}
