//! Logarithmic Bethe Ansatz equations as critical points of a strictly convex
//! Yang-Yang type Morse function.
//!
//! For `kappa` in `Lambda(m,n)` the equations read
//!
//! ```text
//! 2 n xi_j + sum_{a in {p+, q+, p-, q-}} v_a(xi_j)
//!     + sum_{k != j} (v_q(xi_j + xi_k) + v_q(xi_j - xi_k)) = 2 pi (m + 1 - j + kappa_j)
//! ```
//!
//! with `v_a(z) = int_0^z (1 - a^2) / (1 - 2 a cos x + a^2) dx`. Their unique
//! solution is the global minimum of [`MorseProblem::value`], found here by
//! damped Newton iteration.

mod flow;

pub use flow::{decay_rate, gradient_flow, Trajectory};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hall_littlewood::SpectralPoint;
use crate::lattice::{enumerate, LatticeConfig, Partition};
use crate::linalg::{cholesky_solve, max_abs, symmetric_eigenvalues, Matrix};
use crate::measures::ModelParams;
use crate::special::li2;
use crate::spectrum::energy;

/// Default stopping tolerance on `||grad||_inf`.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Newton iteration cap.
pub const MAX_NEWTON_ITERATIONS: usize = 200;
const ARMIJO_C: f64 = 1e-4;

/// `v_a(z) = z + 2 atan(a sin z / (1 - a cos z))`, the branch of the
/// Poisson-kernel integral that is smooth on all of `R`.
pub fn v_integral(a: f64, z: f64) -> Result<f64> {
    if !(a.abs() < 1.0) {
        return Err(Error::ParameterOutOfRange { name: "a", value: a });
    }
    Ok(v(a, z))
}

pub(crate) fn v(a: f64, z: f64) -> f64 {
    z + 2.0 * (a * z.sin()).atan2(1.0 - a * z.cos())
}

/// `v_a'(z) = (1 - a^2) / (1 - 2 a cos z + a^2)`.
pub(crate) fn v_prime(a: f64, z: f64) -> f64 {
    (1.0 - a * a) / (1.0 - 2.0 * a * z.cos() + a * a)
}

/// `int_0^z v_a(x) dx = z^2/2 + 2 (Li2(a) - Re Li2(a e^{iz}))`.
pub(crate) fn v_antiderivative(a: f64, z: f64) -> f64 {
    if a == 0.0 {
        return 0.5 * z * z;
    }
    let w = Complex64::from_polar(a.abs(), if a < 0.0 { z + PI } else { z });
    0.5 * z * z + 2.0 * (li2(Complex64::new(a, 0.0)).re - li2(w).re)
}

/// Hessian eigenvalue bounds `K_-`, `K_+`.
///
/// `K_+- = (m-1) r(q)^{+-1} + (1/2) sum_a r(a)^{+-1}` over the four boundary
/// roots, `r(a) = (1+|a|)/(1-|a|)`. The `*_literal` fields use the printed
/// variant whose last term is `((1-|q_-|)/(1-|q_-|))^{+-1} = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KBounds {
    pub minus: f64,
    pub plus: f64,
    pub minus_literal: f64,
    pub plus_literal: f64,
}

pub fn k_bounds(params: &ModelParams, cfg: LatticeConfig) -> KBounds {
    let r = |a: f64| (1.0 + a.abs()) / (1.0 - a.abs());
    let pair = (cfg.m as f64 - 1.0) * r(params.q);
    let pair_inv = (cfg.m as f64 - 1.0) / r(params.q);
    let roots = params.boundary_roots();
    let plus = pair + 0.5 * roots.iter().map(|&a| r(a)).sum::<f64>();
    let minus = pair_inv + 0.5 * roots.iter().map(|&a| 1.0 / r(a)).sum::<f64>();
    let last = r(params.q_minus);
    KBounds {
        minus,
        plus,
        minus_literal: minus - 0.5 / last + 0.5,
        plus_literal: plus - 0.5 * last + 0.5,
    }
}

/// The Morse function `V_kappa` for a given lattice and parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MorseProblem {
    cfg: LatticeConfig,
    params: ModelParams,
    kappa: Partition,
}

impl MorseProblem {
    /// `kappa` must lie in `Lambda(m,n)`: `m` parts bounded by `n`.
    pub fn new(cfg: LatticeConfig, params: ModelParams, kappa: Partition) -> Result<Self> {
        params.validate()?;
        if kappa.len() != cfg.m || kappa.max() != cfg.n {
            return Err(Error::NotInBox {
                parts: kappa.parts().to_vec(),
                rows: cfg.m,
                max: cfg.n,
            });
        }
        Ok(Self { cfg, params, kappa })
    }

    pub fn config(&self) -> LatticeConfig {
        self.cfg
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn kappa(&self) -> &Partition {
        &self.kappa
    }

    /// `m + 1 - j + kappa_j` for `j = 1..=m`.
    pub fn quantum_numbers(&self) -> Vec<f64> {
        let m = self.cfg.m;
        (1..=m)
            .map(|j| (m + 1 - j + self.kappa.part(j)) as f64)
            .collect()
    }

    /// Closed-form minimizer at the Schur point,
    /// `xi_j = pi (m + 1 - j + kappa_j) / (m + n + 1)`.
    pub fn schur_point(&self) -> SpectralPoint {
        let denom = (self.cfg.m + self.cfg.n + 1) as f64;
        SpectralPoint::new(
            self.quantum_numbers()
                .into_iter()
                .map(|k| PI * k / denom)
                .collect(),
        )
    }

    pub fn value(&self, xi: &[f64]) -> f64 {
        let n = self.cfg.n as f64;
        let q = self.params.q;
        let roots = self.params.boundary_roots();
        let mut total = 0.0;
        for (j, (&x, k)) in xi.iter().zip(self.quantum_numbers()).enumerate() {
            total += n * x * x - 2.0 * PI * k * x;
            total += roots.iter().map(|&a| v_antiderivative(a, x)).sum::<f64>();
            for &y in &xi[j + 1..] {
                total += v_antiderivative(q, x + y) + v_antiderivative(q, x - y);
            }
        }
        total
    }

    pub fn gradient(&self, xi: &[f64]) -> Vec<f64> {
        let n = self.cfg.n as f64;
        let q = self.params.q;
        let roots = self.params.boundary_roots();
        xi.iter()
            .zip(self.quantum_numbers())
            .enumerate()
            .map(|(j, (&x, k))| {
                let mut g = 2.0 * n * x + roots.iter().map(|&a| v(a, x)).sum::<f64>();
                for (l, &y) in xi.iter().enumerate() {
                    if l != j {
                        g += v(q, x + y) + v(q, x - y);
                    }
                }
                g - 2.0 * PI * k
            })
            .collect()
    }

    pub fn hessian(&self, xi: &[f64]) -> Matrix {
        let m = xi.len();
        let n = self.cfg.n as f64;
        let q = self.params.q;
        let roots = self.params.boundary_roots();
        let mut h = Matrix::zeros(m, m);
        for j in 0..m {
            h[(j, j)] = 2.0 * n + roots.iter().map(|&a| v_prime(a, xi[j])).sum::<f64>();
            for k in 0..m {
                if k == j {
                    continue;
                }
                let sum = v_prime(q, xi[j] + xi[k]);
                let diff = v_prime(q, xi[j] - xi[k]);
                h[(j, j)] += sum + diff;
                h[(j, k)] = sum - diff;
            }
        }
        h
    }
}

/// A minimizer of `V_kappa` with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetheSolution {
    pub kappa: Vec<usize>,
    pub xi: Vec<f64>,
    pub grad_norm: f64,
    pub hessian_min_eig: f64,
    pub energy: f64,
    /// `max_j |LHS_j / RHS_j - 1|` of the multiplicative equations.
    pub bae_residual: f64,
    pub iterations: usize,
}

impl BetheSolution {
    pub fn point(&self) -> SpectralPoint {
        SpectralPoint::new(self.xi.clone())
    }
}

/// Minimize `V_kappa` from the Schur-limit point.
pub fn solve_bethe(prob: &MorseProblem, tol: f64) -> Result<BetheSolution> {
    solve_bethe_from(prob, &prob.schur_point(), tol)
}

/// Newton iteration with Armijo backtracking from an arbitrary start.
pub fn solve_bethe_from(prob: &MorseProblem, start: &SpectralPoint, tol: f64) -> Result<BetheSolution> {
    let mut xi = start.as_slice().to_vec();
    if xi.len() != prob.cfg.m {
        return Err(Error::DimensionMismatch {
            left: prob.cfg.m,
            right: xi.len(),
        });
    }
    let mut grad = prob.gradient(&xi);
    let mut iterations = 0;
    while max_abs(&grad) > tol {
        if iterations == MAX_NEWTON_ITERATIONS {
            return Err(Error::NoConvergence {
                kappa: prob.kappa.parts().to_vec(),
                iterations,
                grad_norm: max_abs(&grad),
            });
        }
        let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
        let step = cholesky_solve(&prob.hessian(&xi), &neg)?;
        let slope: f64 = grad.iter().zip(&step).map(|(g, d)| g * d).sum();
        let base = prob.value(&xi);
        // rounding slack so that steps below the resolution of V are accepted
        let slack = 8.0 * f64::EPSILON * (base.abs() + 1.0);
        let mut t = 1.0;
        let mut trial: Vec<f64>;
        loop {
            trial = xi.iter().zip(&step).map(|(x, d)| x + t * d).collect();
            if prob.value(&trial) <= base + ARMIJO_C * t * slope + slack || t < 1e-10 {
                break;
            }
            t *= 0.5;
        }
        xi = trial;
        grad = prob.gradient(&xi);
        iterations += 1;
    }
    let hessian_min_eig = symmetric_eigenvalues(&prob.hessian(&xi), 1e-15)?[0];
    Ok(BetheSolution {
        kappa: prob.kappa.parts().to_vec(),
        grad_norm: max_abs(&grad),
        hessian_min_eig,
        energy: energy(&xi, prob.params.q),
        bae_residual: bae_residual(&xi, prob.cfg.n, &prob.params),
        iterations,
        xi,
    })
}

/// Solve for every `kappa` in `Lambda(m,n)`, in enumeration order.
pub fn solve_all(cfg: LatticeConfig, params: &ModelParams, tol: f64) -> Result<Vec<BetheSolution>> {
    enumerate(cfg.dual())
        .into_iter()
        .map(|kappa| solve_bethe(&MorseProblem::new(cfg, *params, kappa)?, tol))
        .collect()
}

fn boundary_ratio(z: Complex64, alpha: f64, beta: f64) -> Complex64 {
    (1.0 - beta * z + alpha * z * z) / (z * z - beta * z + alpha)
}

/// Right-hand side of the multiplicative equations for coordinate `j`;
/// with `couple = false` the pair product is dropped (the decoupled form).
pub(crate) fn bae_rhs(xi: &[f64], j: usize, params: &ModelParams, couple: bool) -> Complex64 {
    let z = Complex64::from_polar(1.0, xi[j]);
    let mut rhs = boundary_ratio(z, params.alpha_plus(), params.beta_plus())
        * boundary_ratio(z, params.alpha_minus(), params.beta_minus());
    if couple {
        let q = params.q;
        for (k, &y) in xi.iter().enumerate() {
            if k == j {
                continue;
            }
            let d = Complex64::from_polar(1.0, xi[j] - y);
            let s = Complex64::from_polar(1.0, xi[j] + y);
            rhs *= (1.0 - q * d) * (1.0 - q * s) / ((d - q) * (s - q));
        }
    }
    rhs
}

/// `max_j |e^{2 i n xi_j} / RHS_j - 1|` for the coupled equations.
pub fn bae_residual(xi: &[f64], n: usize, params: &ModelParams) -> f64 {
    (0..xi.len())
        .map(|j| {
            let lhs = Complex64::from_polar(1.0, 2.0 * n as f64 * xi[j]);
            (lhs / bae_rhs(xi, j, params, true) - 1.0).norm()
        })
        .fold(0.0, f64::max)
}

/// Violations of the two-sided estimates on `xi_j` and `xi_j - xi_k`
/// (positive values mean the estimate fails by that much).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsCheck {
    pub coordinate: f64,
    pub difference: f64,
}

impl BoundsCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.coordinate <= slack && self.difference <= slack
    }
}

/// `pi k_j / (n + K_+) <= xi_j <= pi k_j / (n + K_-)` with `k_j = m + 1 - j + kappa_j`,
/// and the analogous estimate for `xi_j - xi_k` with `k - j + kappa_j - kappa_k`.
pub fn check_bounds(prob: &MorseProblem, xi: &[f64]) -> BoundsCheck {
    let k = k_bounds(&prob.params, prob.cfg);
    let n = prob.cfg.n as f64;
    let (lo, hi) = (PI / (n + k.plus), PI / (n + k.minus));
    let qn = prob.quantum_numbers();
    let mut coordinate = f64::NEG_INFINITY;
    let mut difference = f64::NEG_INFINITY;
    for j in 0..xi.len() {
        coordinate = coordinate.max(lo * qn[j] - xi[j]).max(xi[j] - hi * qn[j]);
        for l in j + 1..xi.len() {
            let gap = qn[j] - qn[l];
            let d = xi[j] - xi[l];
            difference = difference.max(lo * gap - d).max(d - hi * gap);
        }
    }
    BoundsCheck {
        coordinate,
        difference,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, m: usize) -> LatticeConfig {
        LatticeConfig::new(n, m).unwrap()
    }

    /// Trapezoid-free oracle: composite Gauss-Legendre (5 points) on the
    /// Poisson kernel.
    fn v_quadrature(a: f64, z: f64) -> f64 {
        let nodes = [
            (0.0, 0.5688888888888889),
            (-0.5384693101056831, 0.4786286704993665),
            (0.5384693101056831, 0.4786286704993665),
            (-0.9061798459386640, 0.2369268850561891),
            (0.9061798459386640, 0.2369268850561891),
        ];
        let panels = 400;
        let h = z / panels as f64;
        let mut s = 0.0;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for &(x, w) in &nodes {
                s += w * v_prime(a, mid + 0.5 * h * x) * 0.5 * h;
            }
        }
        s
    }

    #[test]
    fn v_matches_the_integral_definition() {
        for &a in &[-0.8, -0.3, 0.0, 0.45, 0.9] {
            for &z in &[0.0, 0.7, -2.1, 3.5, 7.9, -11.0] {
                assert!((v(a, z) - v_quadrature(a, z)).abs() < 1e-11, "a={a} z={z}");
            }
        }
    }

    #[test]
    fn v_examples() {
        for &a in &[-0.7, 0.0, 0.3, 0.95] {
            assert_eq!(v_integral(a, 0.0).unwrap(), 0.0);
            assert!((v_integral(a, PI).unwrap() - PI).abs() < 1e-15);
            let z = 1.234;
            assert!((v(a, z + 2.0 * PI) - v(a, z) - 2.0 * PI).abs() < 1e-13);
            assert!((v(a, -z) + v(a, z)).abs() < 1e-15);
        }
        assert_eq!(v_integral(0.0, 2.5).unwrap(), 2.5);
        assert!(v_integral(1.0, 0.3).is_err());
        assert!(v_integral(-1.2, 0.3).is_err());
    }

    #[test]
    fn antiderivative_differentiates_to_v() {
        for &a in &[-0.6, 0.25, 0.8, 0.999] {
            for &z in &[0.3, 1.9, -2.7, 4.0] {
                let h = 1e-5;
                let fd = (v_antiderivative(a, z + h) - v_antiderivative(a, z - h)) / (2.0 * h);
                assert!((fd - v(a, z)).abs() < 1e-7, "a={a} z={z}: {fd} vs {}", v(a, z));
            }
            assert_eq!(v_antiderivative(a, 0.0), 0.0);
        }
    }

    #[test]
    fn k_bounds_examples() {
        let k = k_bounds(&ModelParams::schur(), cfg(2, 3));
        assert_eq!(k.minus, 4.0);
        assert_eq!(k.plus, 4.0);
        let p = ModelParams::new(0.4, -0.3, 0.6, 0.2, -0.5).unwrap();
        let k = k_bounds(&p, cfg(2, 3));
        assert!(k.minus < k.plus);
        assert!(k.minus_literal > k.minus);
        assert!(k.plus_literal < k.plus);
    }

    #[test]
    fn schur_point_is_exact() {
        let c = cfg(2, 3);
        for kappa in enumerate(c.dual()) {
            let prob = MorseProblem::new(c, ModelParams::schur(), kappa).unwrap();
            let sol = solve_bethe(&prob, DEFAULT_TOL).unwrap();
            assert_eq!(sol.iterations, 0);
            for (x, y) in sol.xi.iter().zip(prob.schur_point().as_slice()) {
                assert!((x - y).abs() < 1e-15);
            }
        }
        let prob = MorseProblem::new(cfg(1, 1), ModelParams::schur(), Partition::zero(1, 1)).unwrap();
        assert!((solve_bethe(&prob, DEFAULT_TOL).unwrap().xi[0] - PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_kappa_outside_dual_box() {
        let c = cfg(2, 3);
        assert!(MorseProblem::new(c, ModelParams::schur(), Partition::zero(2, 3)).is_err());
        assert!(MorseProblem::new(c, ModelParams::schur(), Partition::zero(3, 2)).is_ok());
    }

    #[test]
    fn generic_solutions_are_distinct_alcove_points() {
        let c = cfg(2, 2);
        let p = ModelParams::new(0.4, 0.3, -0.2, 0.3, -0.2).unwrap();
        let sols = solve_all(c, &p, DEFAULT_TOL).unwrap();
        assert_eq!(sols.len(), 6);
        for s in &sols {
            assert!(s.bae_residual <= 1e-12, "{s:?}");
            assert!(s.point().in_alcove());
        }
        for (a, s) in sols.iter().enumerate() {
            for t in &sols[a + 1..] {
                let d = s.xi.iter().zip(&t.xi).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                assert!(d > 1e-8);
            }
        }
    }

    #[test]
    fn newton_is_start_independent() {
        let c = cfg(2, 3);
        let p = ModelParams::new(-0.5, 0.6, 0.25, -0.3, 0.45).unwrap();
        let prob = MorseProblem::new(c, p, Partition::new(vec![2, 1, 1], 2).unwrap()).unwrap();
        let reference = solve_bethe(&prob, DEFAULT_TOL).unwrap();
        let starts = [
            vec![0.0, 0.0, 0.0],
            vec![5.0, -3.0, 1.0],
            vec![-10.0, 12.0, 0.5],
            vec![3.0, 3.0, 3.0],
        ];
        for s in starts {
            let sol = solve_bethe_from(&prob, &SpectralPoint::new(s), DEFAULT_TOL).unwrap();
            for (x, y) in sol.xi.iter().zip(&reference.xi) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
