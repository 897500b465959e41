//! Model parameters, q-shifted factorials and the weight families that
//! define the Hilbert-space inner products on the lattice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, Partition};

/// Coupling constants of the chain.
///
/// The boundary couplings are given through the roots `p, q` of
/// `x^2 - beta x + alpha`, i.e. `alpha = p q` and `beta = p + q`. Zero values
/// are admitted everywhere; only magnitudes `>= 1` are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub q: f64,
    pub p_plus: f64,
    pub q_plus: f64,
    pub p_minus: f64,
    pub q_minus: f64,
}

impl ModelParams {
    pub fn new(q: f64, p_plus: f64, q_plus: f64, p_minus: f64, q_minus: f64) -> Result<Self> {
        let params = Self {
            q,
            p_plus,
            q_plus,
            p_minus,
            q_minus,
        };
        params.validate()?;
        Ok(params)
    }

    /// The symplectic Schur point: every parameter zero.
    pub fn schur() -> Self {
        Self {
            q: 0.0,
            p_plus: 0.0,
            q_plus: 0.0,
            p_minus: 0.0,
            q_minus: 0.0,
        }
    }

    /// Same boundary roots on both ends.
    pub fn symmetric(q: f64, p: f64, q_boundary: f64) -> Result<Self> {
        Self::new(q, p, q_boundary, p, q_boundary)
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("q", self.q),
            ("p_plus", self.p_plus),
            ("q_plus", self.q_plus),
            ("p_minus", self.p_minus),
            ("q_minus", self.q_minus),
        ];
        for (name, value) in named {
            if !(value.abs() < 1.0) {
                return Err(Error::ParameterOutOfRange { name, value });
            }
        }
        Ok(())
    }

    pub fn with_q(self, q: f64) -> Self {
        Self { q, ..self }
    }

    pub fn alpha_plus(&self) -> f64 {
        self.p_plus * self.q_plus
    }

    pub fn beta_plus(&self) -> f64 {
        self.p_plus + self.q_plus
    }

    pub fn alpha_minus(&self) -> f64 {
        self.p_minus * self.q_minus
    }

    pub fn beta_minus(&self) -> f64 {
        self.p_minus + self.q_minus
    }

    /// `(p_+, q_+, p_-, q_-)`.
    pub fn boundary_roots(&self) -> [f64; 4] {
        [self.p_plus, self.q_plus, self.p_minus, self.q_minus]
    }
}

/// `(a; q)_l = (1 - a)(1 - a q) ... (1 - a q^{l-1})`, with `(a; q)_0 = 1`.
pub fn q_pochhammer(a: f64, q: f64, l: usize) -> f64 {
    let mut acc = 1.0;
    let mut aqk = a;
    for _ in 0..l {
        acc *= 1.0 - aqk;
        aqk *= q;
    }
    acc
}

fn ln_q_pochhammer(a: f64, q: f64, l: usize) -> f64 {
    let mut acc = 0.0;
    let mut aqk = a;
    for _ in 0..l {
        acc += (1.0 - aqk).ln();
        aqk *= q;
    }
    acc
}

/// Above this lattice extent the weights are accumulated in log space.
const LOG_SPACE_THRESHOLD: usize = 20;

/// Perturbed q-multinomial in terms of the gap vector
/// `g = (g_0, ..., g_n)` with `sum g_i = m`:
/// `(q;q)_m / ((alpha_+;q)_{g_0} (alpha_-;q)_{g_n} prod_i (q;q)_{g_i})`.
///
/// Both the particle-picture weight and its conjugate funnel through here,
/// so they agree bit for bit.
fn weight_from_gaps(gaps: &[usize], params: &ModelParams) -> f64 {
    let m: usize = gaps.iter().sum();
    let q = params.q;
    let first = gaps[0];
    let last = gaps[gaps.len() - 1];
    if m > LOG_SPACE_THRESHOLD {
        let mut ln = ln_q_pochhammer(q, q, m)
            - ln_q_pochhammer(params.alpha_plus(), q, first)
            - ln_q_pochhammer(params.alpha_minus(), q, last);
        for &g in gaps {
            ln -= ln_q_pochhammer(q, q, g);
        }
        ln.exp()
    } else {
        let mut denom = q_pochhammer(params.alpha_plus(), q, first)
            * q_pochhammer(params.alpha_minus(), q, last);
        for &g in gaps {
            denom *= q_pochhammer(q, q, g);
        }
        q_pochhammer(q, q, m) / denom
    }
}

/// Weight of a configuration `mu` in `Lambda(n,m)`.
pub fn toda_weight(mu: &Partition, params: &ModelParams) -> f64 {
    weight_from_gaps(&mu.gaps(), params)
}

/// Weight of `lambda` in `Lambda(m,n)`, built from its multiplicities; equals
/// [`toda_weight`] of the conjugate partition.
pub fn conjugate_weight(lambda: &Partition, params: &ModelParams) -> f64 {
    weight_from_gaps(&lambda.multiplicities(), params)
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

fn multinomial_from_gaps(gaps: &[usize], alpha_plus: f64, alpha_minus: f64) -> f64 {
    let m: usize = gaps.iter().sum();
    let first = gaps[0] as f64;
    let last = gaps[gaps.len() - 1] as f64;
    if m > LOG_SPACE_THRESHOLD {
        let ln = ln_factorial(m)
            - first * (1.0 - alpha_plus).ln()
            - last * (1.0 - alpha_minus).ln()
            - gaps.iter().map(|&g| ln_factorial(g)).sum::<f64>();
        ln.exp()
    } else {
        let denom = (1.0 - alpha_plus).powf(first)
            * (1.0 - alpha_minus).powf(last)
            * gaps.iter().map(|&g| factorial(g)).product::<f64>();
        factorial(m) / denom
    }
}

/// `m! / ((1-alpha_+)^{m-mu_1} (1-alpha_-)^{mu_n} prod_i (mu_i - mu_{i+1})!)`,
/// the `q -> 1` limit of [`toda_weight`].
pub fn multinomial_weight(mu: &Partition, params: &ModelParams) -> f64 {
    multinomial_from_gaps(&mu.gaps(), params.alpha_plus(), params.alpha_minus())
}

/// Multinomial weight of `lambda` in `Lambda(m,n)` through its multiplicities.
pub fn conjugate_multinomial_weight(lambda: &Partition, params: &ModelParams) -> f64 {
    multinomial_from_gaps(
        &lambda.multiplicities(),
        params.alpha_plus(),
        params.alpha_minus(),
    )
}

/// Cell probabilities and total mass of the two-parameter multinomial
/// distribution underlying [`multinomial_weight`].
#[derive(Debug, Clone, PartialEq)]
pub struct MultinomialDistribution {
    /// `rho_0, ..., rho_n`; they sum to one.
    pub rho: Vec<f64>,
    /// `((n-1) + (1-alpha_+)^{-1} + (1-alpha_-)^{-1})^m`.
    pub normalizer: f64,
}

pub fn multinomial_distribution(n: usize, m: usize, params: &ModelParams) -> MultinomialDistribution {
    let wp = 1.0 / (1.0 - params.alpha_plus());
    let wm = 1.0 / (1.0 - params.alpha_minus());
    let total = (n as f64 - 1.0) + wp + wm;
    let rho = (0..=n)
        .map(|i| {
            if i == 0 {
                wp / total
            } else if i == n {
                wm / total
            } else {
                1.0 / total
            }
        })
        .collect();
    MultinomialDistribution {
        rho,
        normalizer: total.powi(m as i32),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// `Delta` on `Lambda(n,m)`.
    Toda,
    /// `Delta'` on `Lambda(m,n)`.
    Conjugate,
    /// `q -> 1` multinomial weight on `Lambda(n,m)`.
    Multinomial,
}

/// Weights tabulated over a lattice in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    kind: WeightKind,
    values: Vec<f64>,
}

impl WeightTable {
    pub fn build(kind: WeightKind, lattice: &Lattice, params: &ModelParams) -> Result<Self> {
        let f = match kind {
            WeightKind::Toda => toda_weight,
            WeightKind::Conjugate => conjugate_weight,
            WeightKind::Multinomial => multinomial_weight,
        };
        let values = lattice
            .iter()
            .map(|p| {
                let w = f(p, params);
                if w > 0.0 && w.is_finite() {
                    Ok(w)
                } else {
                    Err(Error::NonPositiveWeight {
                        parts: p.parts().to_vec(),
                        value: w,
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { kind, values })
    }

    /// Arbitrary positive weights, e.g. for diagnostics.
    pub fn from_values(kind: WeightKind, values: Vec<f64>) -> Self {
        Self { kind, values }
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}
