//! Gram matrices of the Bethe eigenbasis in the regimes where orthogonality
//! holds unconditionally, and at a generic point with simple spectrum.

use qtoda::lattice::LatticeConfig;
use qtoda::measures::ModelParams;
use qtoda::spectrum::{build_eigensystem, conjugate_orthogonality, max_offdiag, normalize_gram};
use qtoda::verify::unconditionally_orthogonal;

fn main() -> qtoda::Result<()> {
    let cases = [
        ("q = 0", LatticeConfig::new(2, 3)?, ModelParams::new(0.0, 0.6, -0.5, 0.25, 0.25)?),
        ("alpha = 0", LatticeConfig::new(3, 2)?, ModelParams::new(0.6, 0.0, 0.5, -0.5, 0.0)?),
        ("n >= 2m", LatticeConfig::new(4, 2)?, ModelParams::symmetric(0.6, 0.25, -0.5)?),
        ("generic", LatticeConfig::new(3, 3)?, ModelParams::symmetric(0.25, 0.6, -0.5)?),
    ];
    for (name, cfg, params) in cases {
        let es = build_eigensystem(cfg, &params, 1e-12)?;
        let gram = max_offdiag(&normalize_gram(&es.gram), |_, _| true);
        let conj = max_offdiag(&conjugate_orthogonality(&es)?, |_, _| true);
        println!(
            "{name:<10} (n,m)=({},{}) unconditional={:<5} gram {gram:.1e}  conjugate gram {conj:.1e}",
            cfg.n,
            cfg.m,
            unconditionally_orthogonal(cfg, &params)
        );
    }
    Ok(())
}
