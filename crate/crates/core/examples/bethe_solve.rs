//! Solve the Bethe equations for every quantum number in a box by
//! minimizing the strictly convex Morse function.

use qtoda::bethe::{check_bounds, k_bounds, solve_bethe, MorseProblem, DEFAULT_TOL};
use qtoda::lattice::{enumerate, LatticeConfig};
use qtoda::measures::ModelParams;

fn main() -> qtoda::Result<()> {
    let cfg = LatticeConfig::new(3, 2)?;
    let params = ModelParams::new(0.3, 0.2, -0.1, 0.4, 0.0)?;
    let k = k_bounds(&params, cfg);
    println!("K- = {:.6}, K+ = {:.6}", k.minus, k.plus);
    for kappa in enumerate(cfg.dual()) {
        let prob = MorseProblem::new(cfg, params, kappa.clone())?;
        let sol = solve_bethe(&prob, DEFAULT_TOL)?;
        let bounds = check_bounds(&prob, &sol.xi);
        println!(
            "kappa={kappa:<7} xi={:?} E={:+.12} iters={} |grad|={:.1e} bae={:.1e} bounds ok={}",
            sol.xi.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>(),
            sol.energy,
            sol.iterations,
            sol.grad_norm,
            sol.bae_residual,
            bounds.holds(1e-12)
        );
    }
    Ok(())
}
