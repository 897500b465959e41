//! The Bethe eigenbasis of the hamiltonian and its cross-checks against an
//! independent dense diagonalization.

use serde::Serialize;

use crate::bethe::{solve_all, BetheSolution};
use crate::error::{Error, Result};
use crate::hall_littlewood::{wave_function, HlEvaluator, SpectralPoint};
use crate::hamiltonian::{build_toda, inner_product, LatticeOperator};
use crate::lattice::{Lattice, LatticeConfig};
use crate::linalg::{max_abs, singular_values, symmetric_eigenvalues, Matrix};
use crate::measures::{ModelParams, WeightKind, WeightTable};

/// Relative eigenvalue-equation residual accepted by [`build_eigensystem`].
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Eigenvalue gaps below this are reported as degeneracies.
pub const DEGENERACY_GAP: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-13;

/// `E(xi) = 2 (1 - q) sum_j cos xi_j`.
pub fn energy(xi: &[f64], q: f64) -> f64 {
    2.0 * (1.0 - q) * xi.iter().map(|x| x.cos()).sum::<f64>()
}

/// `||M psi - e psi||_inf / ||psi||_inf`.
pub fn eigen_residual(op: &LatticeOperator, psi: &[f64], e: f64) -> Result<f64> {
    let h_psi = op.apply(psi)?;
    let diff: Vec<f64> = h_psi.iter().zip(psi).map(|(a, b)| a - e * b).collect();
    Ok(max_abs(&diff) / max_abs(psi))
}

/// Bethe solutions, wave functions and their weighted Gram matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub params: ModelParams,
    pub operator: LatticeOperator,
    pub solutions: Vec<BetheSolution>,
    /// Row `k` holds `psi_{xi_kappa}` for the `k`-th `kappa` in enumeration order.
    pub eigenvectors: Matrix,
    /// `<psi_kappa, psi_nu>_Delta`.
    pub gram: Matrix,
    pub residuals: Vec<f64>,
    /// `psi_{xi_kappa}(0^n)` for each `kappa`.
    pub origin_values: Vec<f64>,
}

impl EigenSystem {
    pub fn config(&self) -> LatticeConfig {
        self.operator.config()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.solutions.iter().map(|s| s.energy).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, &b| a.max(b))
    }
}

/// Solve every `kappa`, tabulate `psi_{xi_kappa}` and the Gram matrix,
/// without judging the residuals.
pub fn assemble_eigensystem(cfg: LatticeConfig, params: &ModelParams, tol: f64) -> Result<EigenSystem> {
    let operator = build_toda(cfg, params)?;
    let solutions = solve_all(cfg, params, tol)?;
    let d = operator.dimension();
    let mut eigenvectors = Matrix::zeros(solutions.len(), d);
    let mut residuals = Vec::with_capacity(solutions.len());
    let mut origin_values = Vec::with_capacity(solutions.len());
    for (k, sol) in solutions.iter().enumerate() {
        let wf = wave_function(&sol.point(), cfg, params)?;
        residuals.push(eigen_residual(&operator, &wf.values, sol.energy)?);
        origin_values.push(wf.origin_value);
        for (j, v) in wf.values.into_iter().enumerate() {
            eigenvectors[(k, j)] = v;
        }
    }
    let gram = gram_matrix(&eigenvectors, operator.weights())?;
    Ok(EigenSystem {
        params: *params,
        operator,
        solutions,
        eigenvectors,
        gram,
        residuals,
        origin_values,
    })
}

/// [`assemble_eigensystem`], failing on the first `kappa` whose relative
/// residual exceeds [`RESIDUAL_TOL`].
pub fn build_eigensystem(cfg: LatticeConfig, params: &ModelParams, tol: f64) -> Result<EigenSystem> {
    let es = assemble_eigensystem(cfg, params, tol)?;
    for (sol, &r) in es.solutions.iter().zip(&es.residuals) {
        if !(r <= RESIDUAL_TOL) {
            return Err(Error::ResidualExceeded {
                what: "eigenvalue equation",
                kappa: sol.kappa.clone(),
                residual: r,
                tol: RESIDUAL_TOL,
            });
        }
    }
    Ok(es)
}

pub(crate) fn gram_matrix(rows: &Matrix, w: &WeightTable) -> Result<Matrix> {
    let k = rows.rows();
    let mut g = Matrix::zeros(k, k);
    for a in 0..k {
        for b in 0..=a {
            let v = inner_product(rows.row(a), rows.row(b), w)?;
            g[(a, b)] = v;
            g[(b, a)] = v;
        }
    }
    Ok(g)
}

/// Sorted eigenvalues of `D^{1/2} M D^{-1/2}` by cyclic Jacobi.
pub fn oracle_spectrum(op: &LatticeOperator) -> Result<Vec<f64>> {
    symmetric_eigenvalues(&op.symmetrized(), ORACLE_TOL)
}

/// Sorted pairing of two spectra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumComparison {
    pub bethe: Vec<f64>,
    pub oracle: Vec<f64>,
    pub max_deviation: f64,
    /// `max(1, ||S||_max)`; deviations are judged relative to this.
    pub scale: f64,
    /// Smallest gap between consecutive sorted Bethe energies.
    pub min_gap: f64,
    pub degenerate: bool,
}

impl SpectrumComparison {
    pub fn new(mut bethe: Vec<f64>, oracle: Vec<f64>, scale: f64) -> Self {
        bethe.sort_by(f64::total_cmp);
        let max_deviation = bethe
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).abs())
            .fold(if bethe.len() == oracle.len() { 0.0 } else { f64::INFINITY }, f64::max);
        let min_gap = bethe.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        Self {
            bethe,
            oracle,
            max_deviation,
            scale,
            min_gap,
            degenerate: min_gap < DEGENERACY_GAP,
        }
    }

    pub fn matches(&self, tol: f64) -> bool {
        self.max_deviation <= tol * self.scale
    }
}

pub fn compare_spectra(es: &EigenSystem) -> Result<SpectrumComparison> {
    let oracle = oracle_spectrum(&es.operator)?;
    let scale = es.operator.symmetrized().max_abs().max(1.0);
    Ok(SpectrumComparison::new(es.energies(), oracle, scale))
}

/// `G_{kappa nu} / sqrt(G_{kappa kappa} G_{nu nu})`.
pub fn normalize_gram(gram: &Matrix) -> Matrix {
    let k = gram.rows();
    let mut out = Matrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            out[(a, b)] = gram[(a, b)] / (gram[(a, a)] * gram[(b, b)]).sqrt();
        }
    }
    out
}

/// Normalized inner products of the eigenbasis in `l^2(Lambda(n,m), w)`.
pub fn orthogonality_report(es: &EigenSystem, w: &WeightTable) -> Result<Matrix> {
    Ok(normalize_gram(&gram_matrix(&es.eigenvectors, w)?))
}

/// Largest `|G_{ab}|`, `a != b`, over pairs accepted by `keep`.
pub fn max_offdiag(normalized: &Matrix, mut keep: impl FnMut(usize, usize) -> bool) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..normalized.rows() {
        for b in 0..a {
            if keep(a, b) {
                worst = worst.max(normalized[(a, b)].abs());
            }
        }
    }
    worst
}

/// Normalized `sum_lambda R_lambda(xi_kappa) R_lambda(xi_nu) Delta'_lambda`
/// computed directly on `Lambda(m,n)`.
pub fn conjugate_orthogonality(es: &EigenSystem) -> Result<Matrix> {
    let cfg = es.config();
    let dual = Lattice::new(cfg.dual());
    let w = WeightTable::build(WeightKind::Conjugate, &dual, &es.params)?;
    let mut rows = Matrix::zeros(es.solutions.len(), dual.len());
    for (k, sol) in es.solutions.iter().enumerate() {
        let hl = HlEvaluator::new(&SpectralPoint::new(sol.xi.clone()), &es.params)?;
        for (j, lam) in dual.iter().enumerate() {
            rows[(k, j)] = hl.eval(lam)?;
        }
    }
    Ok(normalize_gram(&gram_matrix(&rows, &w)?))
}

/// Singular values of the eigenbasis written in a `Delta`-orthonormal
/// coordinate system, rows normalized: `sqrt(Delta_mu) psi_kappa(mu) / ||psi_kappa||`.
pub fn eigenbasis_singular_values(eigenvectors: &Matrix, w: &WeightTable) -> Result<Vec<f64>> {
    let (k, d) = (eigenvectors.rows(), eigenvectors.cols());
    let mut scaled = Matrix::zeros(k, d);
    for a in 0..k {
        let norm = inner_product(eigenvectors.row(a), eigenvectors.row(a), w)?.sqrt();
        for j in 0..d {
            scaled[(a, j)] = eigenvectors[(a, j)] * w.get(j).sqrt() / norm;
        }
    }
    singular_values(&scaled)
}

/// `s_max / s_min`.
pub fn condition_number(singular: &[f64]) -> f64 {
    match (singular.first(), singular.last()) {
        (Some(&hi), Some(&lo)) => hi / lo,
        _ => f64::NAN,
    }
}

/// One row of the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaEntry {
    pub kappa: Vec<usize>,
    pub xi: Vec<f64>,
    pub energy: f64,
    pub residuals: KappaResiduals,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaResiduals {
    pub grad_norm: f64,
    pub bae: f64,
    pub eigen: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportParams {
    pub q: f64,
    pub p_plus: f64,
    pub q_plus: f64,
    pub p_minus: f64,
    pub q_minus: f64,
}

impl From<&ModelParams> for ReportParams {
    fn from(p: &ModelParams) -> Self {
        Self {
            q: p.q,
            p_plus: p.p_plus,
            q_plus: p.q_plus,
            p_minus: p.p_minus,
            q_minus: p.q_minus,
        }
    }
}

/// Eigensystem summary; shared by the `q -> 1` pipeline with `q1 = true`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q1: Option<bool>,
    pub params: ReportParams,
    pub n: usize,
    pub m: usize,
    pub kappas: Vec<KappaEntry>,
    pub spectrum_comparison: SpectrumComparison,
    /// Over all pairs.
    pub gram_max_offdiag: f64,
    /// Over pairs whose energies differ by at least the degeneracy gap.
    pub gram_max_offdiag_distinct: f64,
    pub condition_number: f64,
}

pub fn spectrum_report(es: &EigenSystem) -> Result<SpectrumReport> {
    let cfg = es.config();
    let normalized = normalize_gram(&es.gram);
    let energies = es.energies();
    let sv = eigenbasis_singular_values(&es.eigenvectors, es.operator.weights())?;
    Ok(SpectrumReport {
        q1: None,
        params: (&es.params).into(),
        n: cfg.n,
        m: cfg.m,
        kappas: es
            .solutions
            .iter()
            .zip(&es.residuals)
            .map(|(s, &r)| KappaEntry {
                kappa: s.kappa.clone(),
                xi: s.xi.clone(),
                energy: s.energy,
                residuals: KappaResiduals {
                    grad_norm: s.grad_norm,
                    bae: s.bae_residual,
                    eigen: r,
                },
            })
            .collect(),
        spectrum_comparison: compare_spectra(es)?,
        gram_max_offdiag: max_offdiag(&normalized, |_, _| true),
        gram_max_offdiag_distinct: max_offdiag(&normalized, |a, b| {
            (energies[a] - energies[b]).abs() >= DEGENERACY_GAP
        }),
        condition_number: condition_number(&sv),
    })
}
