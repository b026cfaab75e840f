//! Scattering at V0 = 600 with growing PT strength: gain on the right and
//! loss on the left bias the split condensate towards the right side.
//!
//!     cargo run --release --example pt_unidirectional -- [t_final] [w0...]

use gpscatter::experiment::{evolve_records, initial_state, ExperimentConfig};
use gpscatter::propagator::norm_rate;

fn main() -> gpscatter::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut cfg = ExperimentConfig::default();
    cfg.time.t_final = args.first().copied().unwrap_or(5.0);
    let strengths = if args.len() > 1 { args[1..].to_vec() } else { vec![0.0, 1.0, 5.0, 10.0] };

    let psi0 = initial_state(&cfg)?.psi;
    println!("V0 = 600, t_final = {}", cfg.time.t_final);
    println!("{:>5} {:>12} {:>12} {:>12} {:>10}", "W0", "norm", "P_L", "P_R", "P_R/norm");
    for w0 in strengths {
        let params = cfg.scattering_params_for(600.0, w0)?;
        let records = evolve_records(&psi0, &params, &cfg, None)?;
        let last = records.last().unwrap();
        println!(
            "{w0:>5} {:>12.5} {:>12.5} {:>12.5} {:>10.4}",
            last.norm,
            last.p_left,
            last.p_right,
            last.p_right / last.norm
        );
    }
    // The gain is only active while density overlaps the obstacle.
    println!("d|psi|^2/dt of the initial state at W0 = 10: {:e}", norm_rate(&psi0, &cfg.scattering_params_for(600.0, 10.0)?.spec));
    Ok(())
}
