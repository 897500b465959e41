//! Build the Hamiltonian and check that it is symmetric in the weighted
//! inner product.

use qtoda::hamiltonian::{build_toda, check_self_adjoint};
use qtoda::lattice::LatticeConfig;
use qtoda::measures::ModelParams;

fn main() -> qtoda::Result<()> {
    let params = ModelParams::new(0.6, -0.5, 0.25, 0.25, 0.6)?;
    for (n, m) in [(1, 1), (2, 2), (2, 3), (3, 2), (4, 3)] {
        let op = build_toda(LatticeConfig::new(n, m)?, &params)?;
        let scale = op.matrix().max_abs();
        println!(
            "(n,m)=({n},{m}) dim {:>2}  weighted asymmetry / ||M|| = {:.2e}",
            op.dimension(),
            check_self_adjoint(&op) / scale
        );
    }
    Ok(())
}
