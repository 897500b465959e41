//! Follow the gradient flow of the Morse function from the Schur point and
//! compare its exponential decay with the lower Hessian bound.

use qtoda::bethe::{decay_rate, gradient_flow, k_bounds, solve_bethe, MorseProblem, DEFAULT_TOL};
use qtoda::lattice::{LatticeConfig, Partition};
use qtoda::measures::ModelParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = LatticeConfig::new(3, 2)?;
    let params = ModelParams::symmetric(0.5, 0.25, -0.3)?;
    let prob = MorseProblem::new(cfg, params, Partition::new(vec![2, 1], 3)?)?;
    let target = solve_bethe(&prob, DEFAULT_TOL)?;
    let lower = 2.0 * (cfg.n as f64 + k_bounds(&params, cfg).minus);
    let traj = gradient_flow(&prob, &prob.schur_point(), 30.0 / lower, 300)?;
    let end_error = traj
        .last()
        .iter()
        .zip(&target.xi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("endpoint error {end_error:.2e}");
    if let Some(rate) = decay_rate(&traj, &target.xi, 1e-7) {
        println!("fitted decay rate {rate:.4}, guaranteed at least {lower:.4}");
    }
    let path = std::env::temp_dir().join("qtoda_flow.csv");
    traj.write_csv(std::fs::File::create(&path)?)?;
    println!("trajectory written to {}", path.display());
    Ok(())
}
