//! Per-configuration verification suite used by the `verify` command.

use serde::Serialize;

use crate::bethe::{check_bounds, MorseProblem};
use crate::error::Result;
use crate::hall_littlewood::poincare_value;
use crate::hamiltonian::check_self_adjoint;
use crate::lattice::{enumerate, LatticeConfig};
use crate::measures::ModelParams;
use crate::spectrum::{
    assemble_eigensystem, compare_spectra, conjugate_orthogonality, eigenbasis_singular_values, max_offdiag,
    normalize_gram, spectrum_report, EigenSystem, SpectrumReport, DEGENERACY_GAP, RESIDUAL_TOL,
};

pub const SELF_ADJOINT_TOL: f64 = 1e-12;
pub const BAE_TOL: f64 = 1e-12;
pub const BOUNDS_SLACK: f64 = 1e-12;
pub const SPECTRUM_TOL: f64 = 1e-9;
pub const COMPLETENESS_RATIO: f64 = 1e-8;
pub const ORTHOGONALITY_TOL: f64 = 1e-9;
pub const POINCARE_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

/// One named comparison of a measured value against a threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtMost,
            threshold,
            passed: value <= threshold,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtLeast,
            threshold,
            passed: value >= threshold,
        }
    }
}

/// Parameter regimes in which the eigenbasis is orthogonal without any
/// assumption on eigenvalue multiplicities.
pub fn unconditionally_orthogonal(cfg: LatticeConfig, params: &ModelParams) -> bool {
    let q_zero = params.q == 0.0;
    let alpha_zero = params.alpha_plus() == 0.0 && params.alpha_minus() == 0.0 && params.q > 0.0;
    q_zero || alpha_zero || cfg.n >= 2 * cfg.m || cfg.n == 1
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub report: SpectrumReport,
}

/// Run every check on a solved eigensystem.
pub fn run_checks(es: &EigenSystem) -> Result<Vec<Check>> {
    let cfg = es.config();
    let params = &es.params;
    let mut checks = Vec::new();

    let scale = es.operator.matrix().max_abs();
    checks.push(Check::at_most(
        "self_adjointness",
        check_self_adjoint(&es.operator),
        SELF_ADJOINT_TOL * scale,
    ));

    let grad = es.solutions.iter().map(|s| s.grad_norm).fold(0.0, f64::max);
    checks.push(Check::at_most("bethe_gradient", grad, BAE_TOL));
    let outside = es.solutions.iter().filter(|s| !s.point().in_alcove()).count();
    checks.push(Check::at_most("alcove", outside as f64, 0.0));
    let mut coordinate = f64::NEG_INFINITY;
    let mut difference = f64::NEG_INFINITY;
    for (kappa, sol) in enumerate(cfg.dual()).into_iter().zip(&es.solutions) {
        let b = check_bounds(&MorseProblem::new(cfg, *params, kappa)?, &sol.xi);
        coordinate = coordinate.max(b.coordinate);
        difference = difference.max(b.difference);
    }
    checks.push(Check::at_most("bounds_coordinate", coordinate, BOUNDS_SLACK));
    checks.push(Check::at_most("bounds_difference", difference, BOUNDS_SLACK));
    let bae = es.solutions.iter().map(|s| s.bae_residual).fold(0.0, f64::max);
    checks.push(Check::at_most("bae_residual", bae, BAE_TOL));

    checks.push(Check::at_most("eigenvalue_equation", es.max_residual(), RESIDUAL_TOL));
    let r0 = poincare_value(cfg.m, params);
    let origin = es
        .origin_values
        .iter()
        .map(|v| (v - r0).abs() / r0.abs())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("origin_value", origin, POINCARE_TOL));

    let cmp = compare_spectra(es)?;
    checks.push(Check::at_most("spectrum_vs_oracle", cmp.max_deviation, SPECTRUM_TOL * cmp.scale));
    let sv = eigenbasis_singular_values(&es.eigenvectors, es.operator.weights())?;
    let ratio = sv.last().copied().unwrap_or(0.0) / sv.first().copied().unwrap_or(1.0);
    checks.push(Check::at_least("completeness", ratio, COMPLETENESS_RATIO));

    let normalized = normalize_gram(&es.gram);
    let conj = conjugate_orthogonality(es)?;
    if unconditionally_orthogonal(cfg, params) || !cmp.degenerate {
        checks.push(Check::at_most(
            "orthogonality",
            max_offdiag(&normalized, |_, _| true),
            ORTHOGONALITY_TOL,
        ));
        checks.push(Check::at_most(
            "conjugate_orthogonality",
            max_offdiag(&conj, |_, _| true),
            ORTHOGONALITY_TOL,
        ));
    } else {
        let e = es.energies();
        let distinct = |a: usize, b: usize| (e[a] - e[b]).abs() >= DEGENERACY_GAP;
        checks.push(Check::at_most(
            "orthogonality_distinct_pairs",
            max_offdiag(&normalized, distinct),
            ORTHOGONALITY_TOL,
        ));
        checks.push(Check::at_most(
            "conjugate_orthogonality_distinct_pairs",
            max_offdiag(&conj, distinct),
            ORTHOGONALITY_TOL,
        ));
    }
    Ok(checks)
}

/// Solve, assemble and check one configuration.
pub fn verify(cfg: LatticeConfig, params: &ModelParams, tol: f64) -> Result<VerifyReport> {
    let es = assemble_eigensystem(cfg, params, tol)?;
    let checks = run_checks(&es)?;
    Ok(VerifyReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
        report: spectrum_report(&es)?,
    })
}
