//! Hyperoctahedral (type `BC_m`) Hall-Littlewood polynomials and the Bethe
//! Ansatz wave functions built from them.
//!
//! `R_lambda(xi)` is the symmetrization over signed permutations
//! `w = (sigma, epsilon)` of `C(w xi) exp(i <w xi, lambda>)`, where the
//! c-function `C` carries the `(alpha_+, beta_+)` boundary factor per
//! coordinate and the `q`-dependent factor per pair `xi_j +- xi_k`.
//! Evaluation is by direct summation over all `m! 2^m` terms in complex
//! double precision, so `m` is capped at [`MAX_M`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{enumerate, Lattice, LatticeConfig, Partition};
use crate::measures::ModelParams;
use crate::spectrum::energy;

/// Largest supported number of spectral variables.
pub const MAX_M: usize = 8;

/// Denominators below this modulus are treated as singular.
pub const WALL_GUARD: f64 = 1e-12;

/// Allowed imaginary part of a symmetrized sum, relative to `sum |term|`.
pub const IMAG_TOL: f64 = 1e-10;

/// A point `(xi_1, ..., xi_m)` of the spectral variables, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPoint(Vec<f64>);

impl SpectralPoint {
    pub fn new(xi: Vec<f64>) -> Self {
        Self(xi)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Smallest modulus among the c-function denominators
    /// `1 - e^{-2i xi_j}` and `1 - e^{-i(xi_j -+ xi_k)}`.
    pub fn wall_distance(&self) -> f64 {
        let xi = &self.0;
        let mut d = f64::INFINITY;
        for (j, &a) in xi.iter().enumerate() {
            d = d.min(chord(2.0 * a));
            for &b in &xi[j + 1..] {
                d = d.min(chord(a - b)).min(chord(a + b));
            }
        }
        d
    }

    /// Whether `2 xi_j`, `xi_j +- xi_k` stay away from `2 pi Z`.
    pub fn is_regular(&self) -> bool {
        self.wall_distance() >= WALL_GUARD
    }

    /// Whether `pi > xi_1 > xi_2 > ... > xi_m > 0`.
    pub fn in_alcove(&self) -> bool {
        let xi = &self.0;
        xi.first().is_some_and(|&x| x < std::f64::consts::PI)
            && xi.last().is_some_and(|&x| x > 0.0)
            && xi.windows(2).all(|w| w[0] > w[1])
    }
}

impl From<Vec<f64>> for SpectralPoint {
    fn from(xi: Vec<f64>) -> Self {
        Self(xi)
    }
}

/// `|1 - e^{-i x}| = 2 |sin(x/2)|`.
fn chord(x: f64) -> f64 {
    2.0 * (0.5 * x).sin().abs()
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// Single-coordinate boundary factor `(1 - beta_+ e^{-ix} + alpha_+ e^{-2ix}) / (1 - e^{-2ix})`.
fn boundary_factor(x: f64, alpha: f64, beta: f64) -> Complex64 {
    let z = cis(-x);
    // 1 - e^{-2ix} = 2i sin(x) e^{-ix}, exact near the walls
    (1.0 - beta * z + alpha * z * z) / (Complex64::new(0.0, 2.0 * x.sin()) * z)
}

/// Pair factor `(1 - q e^{-ix}) / (1 - e^{-ix})`.
fn pair_factor(x: f64, q: f64) -> Complex64 {
    let z = cis(-x);
    (1.0 - q * z) / (Complex64::new(0.0, 2.0 * (0.5 * x).sin()) * cis(-0.5 * x))
}

fn check_regular(xi: &[f64]) -> Result<()> {
    let d = SpectralPoint::new(xi.to_vec()).wall_distance();
    if d < WALL_GUARD {
        return Err(Error::NearSingular {
            modulus: d,
            xi: xi.to_vec(),
        });
    }
    Ok(())
}

/// The c-function `C(xi_1, ..., xi_m)`.
pub fn c_function(xi: &SpectralPoint, params: &ModelParams) -> Result<Complex64> {
    let xi = xi.as_slice();
    check_regular(xi)?;
    let (ap, bp, q) = (params.alpha_plus(), params.beta_plus(), params.q);
    let mut c = Complex64::new(1.0, 0.0);
    for (j, &a) in xi.iter().enumerate() {
        c *= boundary_factor(a, ap, bp);
        for &b in &xi[j + 1..] {
            c *= pair_factor(a - b, q) * pair_factor(a + b, q);
        }
    }
    Ok(c)
}

/// All permutations of `0..m` (Heap's algorithm).
pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..m).collect();
    let mut out = vec![perm.clone()];
    let mut c = vec![0usize; m];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            out.push(perm.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Precomputed signed-permutation terms `(C(w xi), w xi)` at a fixed spectral
/// point, so that many `R_lambda` can be evaluated at the cost of the phases.
#[derive(Debug, Clone)]
pub struct HlEvaluator {
    xi: Vec<f64>,
    terms: Vec<(Complex64, Vec<f64>)>,
}

impl HlEvaluator {
    pub fn new(xi: &SpectralPoint, params: &ModelParams) -> Result<Self> {
        let xi = xi.as_slice().to_vec();
        let m = xi.len();
        if m > MAX_M {
            return Err(Error::TooLarge { m, cap: MAX_M });
        }
        check_regular(&xi)?;
        let (ap, bp, q) = (params.alpha_plus(), params.beta_plus(), params.q);

        // signed coordinate s in 0..2m stands for (+1 or -1) * xi[s / 2]
        let signed: Vec<f64> = (0..2 * m)
            .map(|s| if s % 2 == 0 { xi[s / 2] } else { -xi[s / 2] })
            .collect();
        let single: Vec<Complex64> = signed.iter().map(|&y| boundary_factor(y, ap, bp)).collect();
        let mut pair = vec![Complex64::new(0.0, 0.0); 4 * m * m];
        for (s, &ys) in signed.iter().enumerate() {
            for (t, &yt) in signed.iter().enumerate() {
                if s / 2 != t / 2 {
                    pair[s * 2 * m + t] = pair_factor(ys - yt, q) * pair_factor(ys + yt, q);
                }
            }
        }

        let perms = permutations(m);
        let mut terms = Vec::with_capacity(perms.len() << m);
        let mut idx = vec![0usize; m];
        for sigma in &perms {
            for signs in 0..(1usize << m) {
                for j in 0..m {
                    idx[j] = 2 * sigma[j] + ((signs >> j) & 1);
                }
                let mut c = Complex64::new(1.0, 0.0);
                for j in 0..m {
                    c *= single[idx[j]];
                    for k in j + 1..m {
                        c *= pair[idx[j] * 2 * m + idx[k]];
                    }
                }
                terms.push((c, idx.iter().map(|&s| signed[s]).collect()));
            }
        }
        Ok(Self { xi, terms })
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// `R_lambda(xi)` for `lambda` with `m` parts.
    pub fn eval(&self, lambda: &Partition) -> Result<f64> {
        let parts = lambda.parts();
        if parts.len() != self.xi.len() {
            return Err(Error::DimensionMismatch {
                left: self.xi.len(),
                right: parts.len(),
            });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (c, y) in &self.terms {
            let phase: f64 = y.iter().zip(parts).map(|(y, &l)| y * l as f64).sum();
            sum += c * cis(phase);
            scale += c.norm();
        }
        if sum.im.abs() > IMAG_TOL * scale {
            return Err(Error::ImaginaryResidue {
                imag: sum.im,
                scale,
            });
        }
        Ok(sum.re)
    }
}

/// `R_lambda(xi)`.
pub fn hl_polynomial(lambda: &Partition, xi: &SpectralPoint, params: &ModelParams) -> Result<f64> {
    HlEvaluator::new(xi, params)?.eval(lambda)
}

/// Values of a wave function over `Lambda(n,m)` in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub values: Vec<f64>,
    /// Value at the empty configuration `(0^n)`.
    pub origin_value: f64,
}

/// `psi_xi(mu) = R_{mu'}(xi)` over all `mu` in `Lambda(n,m)`.
pub fn wave_function(xi: &SpectralPoint, cfg: LatticeConfig, params: &ModelParams) -> Result<WaveFunction> {
    if xi.len() != cfg.m {
        return Err(Error::DimensionMismatch {
            left: cfg.m,
            right: xi.len(),
        });
    }
    let hl = HlEvaluator::new(xi, params)?;
    let values = enumerate(cfg)
        .iter()
        .map(|mu| hl.eval(&mu.conjugate()))
        .collect::<Result<Vec<_>>>()?;
    // (0^n) comes last in enumeration order
    let origin_value = values[values.len() - 1];
    Ok(WaveFunction {
        values,
        origin_value,
    })
}

/// Closed form of `R_{(0^m)}`: `(alpha_+; q)_m (q; q)_m / (1 - q)^m`.
pub fn poincare_value(m: usize, params: &ModelParams) -> f64 {
    let q = params.q;
    (0..m)
        .map(|k| {
            let qk = q.powi(k as i32);
            // (1 - q^{k+1}) / (1 - q) summed as a geometric series avoids 0/0 at q -> 1
            let bracket: f64 = (0..=k).map(|e| q.powi(e as i32)).sum();
            (1.0 - params.alpha_plus() * qk) * bracket
        })
        .product()
}

/// Residual of the on-shell `m`-particle q-boson recurrence on
/// `Lambda(m,n)`:
///
/// `E(xi) R_lambda = (beta_+ (1-q^{m_0}) + beta_- (1-q^{m_n})) R_lambda
///   + sum_{j: lambda+e_j} (1 - alpha_+ q^{m_0-1})^{[lambda_j=0]} (1 - q^{m_{lambda_j}}) R_{lambda+e_j}
///   + sum_{j: lambda-e_j} (1 - alpha_- q^{m_n-1})^{[lambda_j=n]} (1 - q^{m_{lambda_j}}) R_{lambda-e_j}`.
///
/// Returns `max_lambda |LHS - RHS| / max_lambda |R_lambda|`.
pub fn on_shell_residual(hl: &HlEvaluator, n: usize, params: &ModelParams) -> Result<f64> {
    let m = hl.xi().len();
    let dual = Lattice::new(LatticeConfig::new(m, n)?);
    let values = dual
        .iter()
        .map(|lam| hl.eval(lam))
        .collect::<Result<Vec<_>>>()?;
    let e = energy(hl.xi(), params.q);
    let q = params.q;
    let pow = |k: usize| q.powi(k as i32);
    let (ap, bp, am, bm) = (
        params.alpha_plus(),
        params.beta_plus(),
        params.alpha_minus(),
        params.beta_minus(),
    );
    let mut worst: f64 = 0.0;
    for (a, lam) in dual.iter().enumerate() {
        let mult = lam.multiplicities();
        let (m0, mn) = (mult[0], mult[n]);
        let mut rhs = (bp * (1.0 - pow(m0)) + bm * (1.0 - pow(mn))) * values[a];
        for j in 1..=m {
            let lj = lam.part(j);
            if let Some(up) = lam.raised(j) {
                let mut c = 1.0 - pow(mult[lj]);
                if lj == 0 {
                    c *= 1.0 - ap * pow(m0 - 1);
                }
                rhs += c * values[dual.index_of(&up).expect("in lattice")];
            }
            if let Some(down) = lam.lowered(j) {
                let mut c = 1.0 - pow(mult[lj]);
                if lj == n {
                    c *= 1.0 - am * pow(mn - 1);
                }
                rhs += c * values[dual.index_of(&down).expect("in lattice")];
            }
        }
        worst = worst.max((e * values[a] - rhs).abs());
    }
    let scale = values.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    Ok(worst / scale)
}

/// Univariate `q = 1` polynomial
/// `R_l(t) = c(t) e^{i l t} + c(-t) e^{-i l t}` with
/// `c(t) = (1 - beta_+ e^{-it} + alpha_+ e^{-2it}) / (1 - e^{-2it})`.
pub fn hl_univariate_q1(l: usize, theta: f64, params: &ModelParams) -> Result<f64> {
    let d = chord(2.0 * theta);
    if d < WALL_GUARD {
        return Err(Error::NearSingular {
            modulus: d,
            xi: vec![theta],
        });
    }
    let (ap, bp) = (params.alpha_plus(), params.beta_plus());
    let lt = l as f64 * theta;
    let v = boundary_factor(theta, ap, bp) * cis(lt) + boundary_factor(-theta, ap, bp) * cis(-lt);
    Ok(v.re)
}

/// `sum_{sigma in S_m} prod_j R_{lambda_j}(xi_{sigma(j)})`, the `q -> 1`
/// limit of [`hl_polynomial`]. Coinciding spectral coordinates are fine.
pub fn hl_factorized_q1(lambda: &Partition, xi: &SpectralPoint, params: &ModelParams) -> Result<f64> {
    let table = UnivariateTable::new(xi, lambda.max(), params)?;
    table.factorized(lambda)
}

/// `R_l(xi_k)` for all `l in 0..=n` and coordinates `k`.
#[derive(Debug, Clone)]
pub(crate) struct UnivariateTable {
    values: Vec<Vec<f64>>,
    perms: Vec<Vec<usize>>,
}

impl UnivariateTable {
    pub(crate) fn new(xi: &SpectralPoint, n: usize, params: &ModelParams) -> Result<Self> {
        let m = xi.len();
        if m > MAX_M {
            return Err(Error::TooLarge { m, cap: MAX_M });
        }
        let values = xi
            .as_slice()
            .iter()
            .map(|&t| (0..=n).map(|l| hl_univariate_q1(l, t, params)).collect())
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Ok(Self {
            values,
            perms: permutations(m),
        })
    }

    /// `R_l` at coordinate `k`.
    pub(crate) fn univariate(&self, k: usize, l: usize) -> f64 {
        self.values[k][l]
    }

    pub(crate) fn factorized(&self, lambda: &Partition) -> Result<f64> {
        let parts = lambda.parts();
        if parts.len() != self.values.len() {
            return Err(Error::DimensionMismatch {
                left: self.values.len(),
                right: parts.len(),
            });
        }
        Ok(self
            .perms
            .iter()
            .map(|sigma| {
                parts
                    .iter()
                    .zip(sigma)
                    .map(|(&l, &k)| self.values[k][l])
                    .product::<f64>()
            })
            .sum())
    }
}
