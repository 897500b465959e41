//! Approach q = 1 and watch the Bethe roots, energies and weights converge to
//! their decoupled limits.

use qtoda::bethe::{solve_bethe, MorseProblem, DEFAULT_TOL};
use qtoda::lattice::{enumerate, Lattice, LatticeConfig};
use qtoda::measures::{ModelParams, WeightKind, WeightTable};
use qtoda::q1_limit::{aw_roots, energy_q1, q1_bethe_solution};

fn main() -> qtoda::Result<()> {
    let cfg = LatticeConfig::new(2, 2)?;
    let base = ModelParams::new(0.0, 0.3, -0.2, 0.25, 0.6)?;
    let roots = aw_roots(cfg.n, &base)?;
    let lattice = Lattice::new(cfg);
    let limit_w = WeightTable::build(WeightKind::Multinomial, &lattice, &base)?;
    for kappa in enumerate(cfg.dual()) {
        let limit = q1_bethe_solution(&kappa, &roots)?;
        println!("kappa={kappa}  limit xi={:?}", limit.as_slice());
        for eps in [1e-3, 1e-4, 1e-5] {
            let sol = solve_bethe(&MorseProblem::new(cfg, base.with_q(1.0 - eps), kappa.clone())?, DEFAULT_TOL)?;
            let dxi = sol.xi.iter().zip(limit.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let de = (sol.energy / eps - energy_q1(limit.as_slice())).abs();
            println!("  eps={eps:.0e}  |xi - limit| = {dxi:.2e}  |E/eps - E_limit| = {de:.2e}");
        }
    }
    for eps in [1e-3, 1e-4, 1e-5] {
        let w = WeightTable::build(WeightKind::Toda, &lattice, &base.with_q(1.0 - eps))?;
        let err = w
            .values()
            .iter()
            .zip(limit_w.values())
            .map(|(a, b)| (a - b).abs() / b)
            .fold(0.0, f64::max);
        println!("eps={eps:.0e}  max relative weight error {err:.2e}");
    }
    Ok(())
}
