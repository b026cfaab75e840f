//! Gaussian-ansatz dynamics against the full GPE for one (V0, W0) pair.
//! The ansatz tracks wells and low barriers, and breaks down once the
//! barrier fragments the condensate.
//!
//!     cargo run --release --example variational_compare -- [v0] [w0] [t_final]

use gpscatter::experiment::{compare_runs, ExperimentConfig};
use gpscatter::observables::pair_samples;

fn main() -> gpscatter::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut cfg = ExperimentConfig::default();
    cfg.physics.v0 = args.first().copied().unwrap_or(-500.0);
    cfg.physics.w0 = args.get(1).copied().unwrap_or(0.0);
    cfg.time.t_final = args.get(2).copied().unwrap_or(25.0);

    let out = compare_runs(&cfg)?;
    println!("{:>6} {:>10} {:>10} {:>8} {:>8}", "t", "GPE <x>", "ansatz x0", "GPE a", "ansatz a");
    for s in pair_samples(&out.gpe, &out.variational)?.iter().step_by(100) {
        println!("{:>6.2} {:>10.4} {:>10.4} {:>8.4} {:>8.4}", s.t, s.gpe_center, s.var_center, s.gpe_width, s.var_width);
    }
    let r = &out.report;
    println!(
        "V0 = {}, W0 = {}: {} (max centre gap {:.3}, threshold {}, max width gap {:.3}{})",
        cfg.physics.v0,
        cfg.physics.w0,
        r.verdict.as_str(),
        r.max_center_gap,
        r.center_threshold,
        r.max_width_gap,
        r.t_divergence.map(|t| format!(", diverges at t = {t:.2}")).unwrap_or_default()
    );
    Ok(())
}
