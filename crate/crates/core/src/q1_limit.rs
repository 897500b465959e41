//! The `q -> 1` degeneration: decoupled Bethe equations solved by the roots
//! of a Bernstein-Szego polynomial, factorized wave functions, and the
//! multinomial eigenbasis of the linear-coefficient hamiltonian.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::bethe::{bae_rhs, v, v_antiderivative, v_prime};
use crate::error::{Error, Result};
use crate::hall_littlewood::{permutations, SpectralPoint, UnivariateTable};
use crate::hamiltonian::{build_toda_q1, LatticeOperator};
use crate::lattice::{enumerate, Lattice, LatticeConfig, Partition};
use crate::linalg::{max_abs, Matrix};
use crate::measures::{conjugate_multinomial_weight, multinomial_distribution, ModelParams};
use crate::spectrum::{
    condition_number, eigen_residual, eigenbasis_singular_values, gram_matrix, max_offdiag, normalize_gram,
    oracle_spectrum, KappaEntry, KappaResiduals, SpectrumComparison, SpectrumReport,
};

const ROOT_TOL: f64 = 1e-15;

/// `q -> 1` energy `2 sum_j cos xi_j`.
pub fn energy_q1(xi: &[f64]) -> f64 {
    2.0 * xi.iter().map(|x| x.cos()).sum::<f64>()
}

fn amplitude(theta: f64, roots: &[f64; 4]) -> Complex64 {
    let z = Complex64::from_polar(1.0, -theta);
    roots.iter().map(|&a| 1.0 - a * z).product::<Complex64>() / (1.0 - z * z)
}

/// Two-term Bernstein-Szego expression for the degree `n+1` polynomial,
/// `A(t) e^{i(n+1)t} + A(-t) e^{-i(n+1)t}` with
/// `A(t) = prod_a (1 - a e^{-it}) / (1 - e^{-2it})` over the four boundary roots.
/// Reduces to `sin((n+2)t) / sin t` when they vanish.
pub fn bs_polynomial(theta: f64, n: usize, params: &ModelParams) -> Result<f64> {
    if (theta.sin()).abs() < 1e-12 {
        return Err(Error::NearSingular {
            modulus: theta.sin().abs(),
            xi: vec![theta],
        });
    }
    let roots = params.boundary_roots();
    let phase = Complex64::from_polar(1.0, (n + 1) as f64 * theta);
    let v = amplitude(theta, &roots) * phase + amplitude(-theta, &roots) * phase.conj();
    Ok(v.re)
}

/// The roots `0 < t_0 < ... < t_n < pi`, `t_k` solving
/// `2 n t + sum_a v_a(t) = 2 pi (k + 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AskeyWilsonRoots {
    pub thetas: Vec<f64>,
    /// `[p_+, q_+, p_-, q_-]`.
    pub params: [f64; 4],
}

impl AskeyWilsonRoots {
    pub fn n(&self) -> usize {
        self.thetas.len() - 1
    }
}

fn log_equation(t: f64, n: usize, roots: &[f64; 4]) -> (f64, f64) {
    let f = 2.0 * n as f64 * t + roots.iter().map(|&a| v(a, t)).sum::<f64>();
    let df = 2.0 * n as f64 + roots.iter().map(|&a| v_prime(a, t)).sum::<f64>();
    (f, df)
}

/// Newton on the strictly increasing left-hand side, falling back to
/// bisection whenever a step leaves the bracket.
pub fn aw_roots(n: usize, params: &ModelParams) -> Result<AskeyWilsonRoots> {
    params.validate()?;
    let roots = params.boundary_roots();
    let thetas = (0..=n)
        .map(|k| {
            let target = 2.0 * PI * (k + 1) as f64;
            let (mut lo, mut hi) = (0.0, PI);
            let mut t = PI * (k + 1) as f64 / (n + 2) as f64;
            for _ in 0..200 {
                let (f, df) = log_equation(t, n, &roots);
                let g = f - target;
                if g < 0.0 {
                    lo = t;
                } else {
                    hi = t;
                }
                let mut next = t - g / df;
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                let done = (next - t).abs() <= ROOT_TOL * t.max(1.0) || hi - lo <= ROOT_TOL;
                t = next;
                if done {
                    break;
                }
            }
            t
        })
        .collect();
    Ok(AskeyWilsonRoots {
        thetas,
        params: roots,
    })
}

/// `max_k |e^{2 i n t_k} / RHS(t_k) - 1|` for the decoupled equations.
pub fn decoupled_bae_residual(thetas: &[f64], n: usize, params: &ModelParams) -> f64 {
    (0..thetas.len())
        .map(|j| {
            let lhs = Complex64::from_polar(1.0, 2.0 * n as f64 * thetas[j]);
            (lhs / bae_rhs(thetas, j, params, false) - 1.0).norm()
        })
        .fold(0.0, f64::max)
}

fn check_kappa(kappa: &Partition, n: usize) -> Result<()> {
    if kappa.max() != n {
        return Err(Error::NotInBox {
            parts: kappa.parts().to_vec(),
            rows: kappa.len(),
            max: n,
        });
    }
    Ok(())
}

/// `(t_{kappa_1}, ..., t_{kappa_m})`.
pub fn q1_bethe_solution(kappa: &Partition, roots: &AskeyWilsonRoots) -> Result<SpectralPoint> {
    check_kappa(kappa, roots.n())?;
    Ok(SpectralPoint::new(
        kappa.parts().iter().map(|&k| roots.thetas[k]).collect(),
    ))
}

/// The decoupled Morse function
/// `sum_j (n xi_j^2 - 2 pi (kappa_j + 1) xi_j + sum_a int_0^{xi_j} v_a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoupledMorse {
    n: usize,
    roots: [f64; 4],
    kappa: Partition,
}

impl DecoupledMorse {
    pub fn new(kappa: Partition, params: &ModelParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            n: kappa.max(),
            roots: params.boundary_roots(),
            kappa,
        })
    }

    pub fn value(&self, xi: &[f64]) -> f64 {
        let n = self.n as f64;
        xi.iter()
            .zip(self.kappa.parts())
            .map(|(&x, &k)| {
                n * x * x - 2.0 * PI * (k + 1) as f64 * x
                    + self.roots.iter().map(|&a| v_antiderivative(a, x)).sum::<f64>()
            })
            .sum()
    }

    pub fn gradient(&self, xi: &[f64]) -> Vec<f64> {
        xi.iter()
            .zip(self.kappa.parts())
            .map(|(&x, &k)| log_equation(x, self.n, &self.roots).0 - 2.0 * PI * (k + 1) as f64)
            .collect()
    }
}

/// Factorized wave function `mu -> R~_{mu'}(xi)` over `Lambda(n,m)`.
pub fn q1_wave_function(xi: &SpectralPoint, cfg: LatticeConfig, params: &ModelParams) -> Result<Vec<f64>> {
    let table = UnivariateTable::new(xi, cfg.n, params)?;
    enumerate(cfg)
        .iter()
        .map(|mu| table.factorized(&mu.conjugate()))
        .collect()
}

/// `S(k, l) = sum_{lambda=0}^n R_lambda(t_k) R_lambda(t_l) / ((1-alpha_+)^{[lambda=0]} (1-alpha_-)^{[lambda=n]})`.
pub fn univariate_gram(roots: &AskeyWilsonRoots, params: &ModelParams) -> Result<Matrix> {
    let n = roots.n();
    let table = UnivariateTable::new(&SpectralPoint::new(roots.thetas.clone()), n, params)?;
    let (ap, am) = (params.alpha_plus(), params.alpha_minus());
    let mut s = Matrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        for l in 0..=n {
            s[(k, l)] = (0..=n)
                .map(|lam| {
                    let mut w = 1.0;
                    if lam == 0 {
                        w /= 1.0 - ap;
                    }
                    if lam == n {
                        w /= 1.0 - am;
                    }
                    table.univariate(k, lam) * table.univariate(l, lam) * w
                })
                .sum();
        }
    }
    Ok(s)
}

/// The Gram entry `<psi~_kappa, psi~_nu>` evaluated twice: as a weighted sum
/// over `Lambda(m,n)`, and as `sum_{sigma, tau} prod_j S(kappa_sigma(j), nu_tau(j))`.
pub fn factorized_gram_entry(
    kappa: &Partition,
    nu: &Partition,
    roots: &AskeyWilsonRoots,
    params: &ModelParams,
) -> Result<(f64, f64)> {
    let n = roots.n();
    check_kappa(kappa, n)?;
    check_kappa(nu, n)?;
    let m = kappa.len();
    let dual = Lattice::new(LatticeConfig::new(m, n)?);
    let tk = UnivariateTable::new(&q1_bethe_solution(kappa, roots)?, n, params)?;
    let tn = UnivariateTable::new(&q1_bethe_solution(nu, roots)?, n, params)?;
    let mut lattice_sum = 0.0;
    for lam in dual.iter() {
        lattice_sum += tk.factorized(lam)? * tn.factorized(lam)? * conjugate_multinomial_weight(lam, params);
    }
    let s = univariate_gram(roots, params)?;
    let perms = permutations(m);
    let mut product_sum = 0.0;
    for sigma in &perms {
        for tau in &perms {
            product_sum += (0..m)
                .map(|j| s[(kappa.parts()[sigma[j]], nu.parts()[tau[j]])])
                .product::<f64>();
        }
    }
    Ok((lattice_sum, product_sum))
}

/// Largest residual of the one-particle recurrence
/// `2 cos(t_k) R_l(t_k) = (beta_+ [l=0] + beta_- [l=n]) R_l(t_k)
///   + (1-alpha_+)^{[l=0]} [l<n] R_{l+1}(t_k) + (1-alpha_-)^{[l=n]} [l>0] R_{l-1}(t_k)`
/// over all `0 <= k, l <= n`, relative to `max |R|`.
pub fn one_particle_recurrence_residual(roots: &AskeyWilsonRoots, params: &ModelParams) -> Result<f64> {
    let n = roots.n();
    let table = UnivariateTable::new(&SpectralPoint::new(roots.thetas.clone()), n, params)?;
    let (ap, bp, am, bm) = (
        params.alpha_plus(),
        params.beta_plus(),
        params.alpha_minus(),
        params.beta_minus(),
    );
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (k, &t) in roots.thetas.iter().enumerate() {
        let r = |l: usize| table.univariate(k, l);
        for l in 0..=n {
            scale = scale.max(r(l).abs());
            let mut diag = 0.0;
            if l == 0 {
                diag += bp;
            }
            if l == n {
                diag += bm;
            }
            let mut rhs = diag * r(l);
            if l < n {
                rhs += if l == 0 { 1.0 - ap } else { 1.0 } * r(l + 1);
            }
            if l > 0 {
                rhs += if l == n { 1.0 - am } else { 1.0 } * r(l - 1);
            }
            worst = worst.max((2.0 * t.cos() * r(l) - rhs).abs());
        }
    }
    Ok(worst / scale)
}

/// Decoupled solutions, factorized eigenbasis and multinomial Gram matrix.
#[derive(Debug, Clone)]
pub struct Q1EigenSystem {
    pub params: ModelParams,
    pub operator: LatticeOperator,
    pub roots: AskeyWilsonRoots,
    pub kappas: Vec<Partition>,
    pub points: Vec<SpectralPoint>,
    pub energies: Vec<f64>,
    pub eigenvectors: Matrix,
    pub gram: Matrix,
    pub residuals: Vec<f64>,
    pub grad_norms: Vec<f64>,
}

pub fn assemble_q1_eigensystem(cfg: LatticeConfig, params: &ModelParams) -> Result<Q1EigenSystem> {
    let operator = build_toda_q1(cfg, params)?;
    let roots = aw_roots(cfg.n, params)?;
    let kappas = enumerate(cfg.dual());
    let mut eigenvectors = Matrix::zeros(kappas.len(), operator.dimension());
    let mut points = Vec::new();
    let mut energies = Vec::new();
    let mut residuals = Vec::new();
    let mut grad_norms = Vec::new();
    for (a, kappa) in kappas.iter().enumerate() {
        let xi = q1_bethe_solution(kappa, &roots)?;
        let psi = q1_wave_function(&xi, cfg, params)?;
        let e = energy_q1(xi.as_slice());
        residuals.push(eigen_residual(&operator, &psi, e)?);
        grad_norms.push(max_abs(&DecoupledMorse::new(kappa.clone(), params)?.gradient(xi.as_slice())));
        for (j, v) in psi.into_iter().enumerate() {
            eigenvectors[(a, j)] = v;
        }
        points.push(xi);
        energies.push(e);
    }
    let gram = gram_matrix(&eigenvectors, operator.weights())?;
    Ok(Q1EigenSystem {
        params: *params,
        operator,
        roots,
        kappas,
        points,
        energies,
        eigenvectors,
        gram,
        residuals,
        grad_norms,
    })
}

/// Named outcome of one `q -> 1` check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Q1Check {
    pub name: &'static str,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Q1Check {
    fn new(name: &'static str, value: f64, tol: f64) -> Self {
        Self {
            name,
            value,
            tol,
            passed: value <= tol,
        }
    }
}

/// Assemble the `q -> 1` eigensystem and run every check at tolerance `tol`
/// (the normalization identity is judged at `1e-12` relative).
pub fn verify_q1_eigensystem(cfg: LatticeConfig, params: &ModelParams, tol: f64) -> Result<(Q1EigenSystem, Vec<Q1Check>)> {
    let es = assemble_q1_eigensystem(cfg, params)?;
    let mut checks = Vec::new();
    let n = cfg.n;
    let bs = es
        .roots
        .thetas
        .iter()
        .map(|&t| bs_polynomial(t, n, params).map(f64::abs))
        .collect::<Result<Vec<_>>>()?;
    checks.push(Q1Check::new("bs_polynomial_at_roots", max_abs(&bs), 1e-10));
    checks.push(Q1Check::new(
        "decoupled_bae",
        decoupled_bae_residual(&es.roots.thetas, n, params),
        1e-12,
    ));
    checks.push(Q1Check::new("decoupled_gradient", max_abs(&es.grad_norms), 1e-10));
    checks.push(Q1Check::new("eigenvalue_equation", max_abs(&es.residuals), tol));
    let normalized = normalize_gram(&es.gram);
    checks.push(Q1Check::new("gram_offdiag", max_offdiag(&normalized, |_, _| true), tol));
    let cmp = SpectrumComparison::new(es.energies.clone(), oracle_spectrum(&es.operator)?, spectrum_scale(&es.operator));
    checks.push(Q1Check::new("spectrum_vs_oracle", cmp.max_deviation / cmp.scale, tol));
    let dist = multinomial_distribution(n, cfg.m, params);
    let total = es.operator.weights().total();
    checks.push(Q1Check::new(
        "multinomial_normalization",
        (total - dist.normalizer).abs() / dist.normalizer,
        1e-12,
    ));
    if cfg.m == 1 {
        checks.push(Q1Check::new(
            "one_particle_recurrence",
            one_particle_recurrence_residual(&es.roots, params)?,
            tol,
        ));
    }
    Ok((es, checks))
}

fn spectrum_scale(op: &LatticeOperator) -> f64 {
    op.symmetrized().max_abs().max(1.0)
}

/// Report in the schema of [`crate::spectrum::spectrum_report`] with `q1 = true`.
pub fn q1_report(es: &Q1EigenSystem) -> Result<SpectrumReport> {
    let cfg = es.operator.config();
    let normalized = normalize_gram(&es.gram);
    let sv = eigenbasis_singular_values(&es.eigenvectors, es.operator.weights())?;
    let oracle = oracle_spectrum(&es.operator)?;
    Ok(SpectrumReport {
        q1: Some(true),
        params: (&es.params).into(),
        n: cfg.n,
        m: cfg.m,
        kappas: es
            .kappas
            .iter()
            .zip(&es.points)
            .enumerate()
            .map(|(a, (kappa, xi))| KappaEntry {
                kappa: kappa.parts().to_vec(),
                xi: xi.as_slice().to_vec(),
                energy: es.energies[a],
                residuals: KappaResiduals {
                    grad_norm: es.grad_norms[a],
                    bae: decoupled_bae_residual(xi.as_slice(), cfg.n, &es.params),
                    eigen: es.residuals[a],
                },
            })
            .collect(),
        spectrum_comparison: SpectrumComparison::new(es.energies.clone(), oracle, spectrum_scale(&es.operator)),
        gram_max_offdiag: max_offdiag(&normalized, |_, _| true),
        gram_max_offdiag_distinct: max_offdiag(&normalized, |a, b| {
            (es.energies[a] - es.energies[b]).abs() >= crate::spectrum::DEGENERACY_GAP
        }),
        condition_number: condition_number(&sv),
    })
}
