//! The q -> 1 limit: Askey-Wilson roots, decoupled Bethe equations and the
//! factorized eigenbasis of the limiting Hamiltonian.

use qtoda::lattice::LatticeConfig;
use qtoda::measures::ModelParams;
use qtoda::q1_limit::{aw_roots, bs_polynomial, verify_q1_eigensystem};

fn main() -> qtoda::Result<()> {
    let params = ModelParams::new(0.0, 0.3, -0.2, 0.25, 0.6)?;
    let n = 4;
    let roots = aw_roots(n, &params)?;
    for (k, &t) in roots.thetas.iter().enumerate() {
        println!("theta_{k} = {t:.15}  p(theta) = {:+.1e}", bs_polynomial(t, n, &params)?);
    }
    let (_, checks) = verify_q1_eigensystem(LatticeConfig::new(n, 2)?, &params, 1e-9)?;
    for c in checks {
        println!("{:<28} {:.2e} (tol {:.0e}) {}", c.name, c.value, c.tol, if c.passed { "ok" } else { "FAIL" });
    }
    Ok(())
}
