//! Diagonalize the Hamiltonian through the Bethe ansatz and compare with a
//! dense Jacobi eigensolver.

use qtoda::lattice::LatticeConfig;
use qtoda::measures::ModelParams;
use qtoda::spectrum::{build_eigensystem, compare_spectra, condition_number, eigenbasis_singular_values};

fn main() -> qtoda::Result<()> {
    let cfg = LatticeConfig::new(2, 3)?;
    let params = ModelParams::new(0.25, 0.6, -0.5, 0.25, 0.6)?;
    let es = build_eigensystem(cfg, &params, 1e-12)?;
    let cmp = compare_spectra(&es)?;
    for (b, o) in cmp.bethe.iter().zip(&cmp.oracle) {
        println!("{b:+.15}  {o:+.15}  {:.1e}", (b - o).abs());
    }
    println!("max deviation {:.2e}, eigen residual {:.2e}", cmp.max_deviation, es.max_residual());
    let sv = eigenbasis_singular_values(&es.eigenvectors, es.operator.weights())?;
    println!("eigenbasis condition number {:.3}", condition_number(&sv));
    Ok(())
}
