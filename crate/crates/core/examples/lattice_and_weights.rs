//! Enumerate a lattice, conjugate its points and print both weight functions.

use qtoda::lattice::{Lattice, LatticeConfig};
use qtoda::measures::{conjugate_weight, multinomial_weight, toda_weight, ModelParams};

fn main() -> qtoda::Result<()> {
    let cfg = LatticeConfig::new(3, 2)?;
    let params = ModelParams::new(0.4, 0.3, -0.2, 0.5, 0.1)?;
    let lattice = Lattice::new(cfg);
    println!("Lambda({},{}) has {} points", cfg.n, cfg.m, lattice.len());
    println!("{:<10} {:<12} {:>22} {:>22}", "mu", "conjugate", "toda weight", "multinomial (q=1)");
    for mu in lattice.iter() {
        let lam = mu.conjugate();
        assert_eq!(toda_weight(mu, &params), conjugate_weight(&lam, &params));
        println!(
            "{:<10} {:<12} {:>22.15e} {:>22.15e}",
            mu.to_string(),
            lam.to_string(),
            toda_weight(mu, &params),
            multinomial_weight(mu, &params)
        );
    }
    Ok(())
}
