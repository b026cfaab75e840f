//! A (V0, W0) sweep on a worker pool. Rows come back in parameter order and
//! are byte-identical for any worker count.
//!
//!     cargo run --release --example parameter_sweep -- [jobs] [t_final]

use std::path::Path;

use gpscatter::experiment::{run_sweep, ExperimentConfig};

fn main() -> gpscatter::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let jobs = args.first().and_then(|a| a.parse().ok()).unwrap_or(2);
    let mut cfg = ExperimentConfig::default();
    cfg.time.t_final = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(4.0);
    cfg.run.sweep_v0 = vec![700.0, 400.0, 600.0, 500.0];
    cfg.run.sweep_w0 = vec![0.0, 5.0];

    let out = Path::new("out/parameter_sweep");
    let rows = run_sweep(&cfg, out, jobs)?;
    println!("{:>5} {:>4} {:>9} {:>9} {:>11}", "V0", "W0", "P_L", "P_R", "<P_R> tail");
    for row in &rows {
        match &row.outcome {
            Ok(s) => println!(
                "{:>5} {:>4} {:>9.4} {:>9.4} {:>11.4}",
                row.v0, row.w0, s.final_p_left, s.final_p_right, s.mean_p_right_last_quarter
            ),
            Err(status) => println!("{:>5} {:>4} {status}", row.v0, row.w0),
        }
    }
    println!("{} in {}", "sweep.csv", out.display());
    Ok(())
}
