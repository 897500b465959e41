//! Matrix assembly of the q-difference Toda hamiltonian and of its `q -> 1`
//! degeneration on an enumerated lattice.
//!
//! Entry `(mu, nu)` of the matrix is the coefficient of `psi(nu)` in
//! `(H psi)(mu)`. Hops leave `mu` only towards `mu +- e_i`.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::lattice::{Lattice, LatticeConfig};
use crate::linalg::Matrix;
use crate::measures::{ModelParams, WeightKind, WeightTable};

/// A lattice operator together with the weight that makes it self-adjoint.
#[derive(Debug, Clone)]
pub struct LatticeOperator {
    lattice: Lattice,
    matrix: Matrix,
    weights: WeightTable,
}

impl LatticeOperator {
    pub fn new(lattice: Lattice, matrix: Matrix, weights: WeightTable) -> Result<Self> {
        let d = lattice.len();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: matrix.rows(),
            });
        }
        if weights.len() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: weights.len(),
            });
        }
        Ok(Self {
            lattice,
            matrix,
            weights,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn config(&self) -> LatticeConfig {
        self.lattice.config()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    pub fn dimension(&self) -> usize {
        self.lattice.len()
    }

    pub fn apply(&self, psi: &[f64]) -> Result<Vec<f64>> {
        self.matrix.mul_vec(psi)
    }

    /// `D^{1/2} M D^{-1/2}` with `D = diag(weights)`; symmetric whenever the
    /// operator is weighted self-adjoint.
    pub fn symmetrized(&self) -> Matrix {
        let d = self.dimension();
        let root: Vec<f64> = self.weights.values().iter().map(|w| w.sqrt()).collect();
        let mut s = Matrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                s[(i, j)] = root[i] * self.matrix[(i, j)] / root[j];
            }
        }
        s
    }

    /// Write the matrix as CSV. The first line names the columns in
    /// enumeration order; every following line starts with the row partition.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let labels: Vec<String> = self
            .lattice
            .iter()
            .map(|p| format!("\"{p}\""))
            .collect();
        writeln!(out, "mu,{}", labels.join(","))?;
        for (i, label) in labels.iter().enumerate() {
            let row: Vec<String> = self.matrix.row(i).iter().map(|&v| fmt_f64(v)).collect();
            writeln!(out, "{label},{}", row.join(","))?;
        }
        Ok(())
    }
}

/// The q-difference Toda hamiltonian on `Lambda(n,m)`.
///
/// Diagonal `beta_+ (1 - q^{m-mu_1}) + beta_- (1 - q^{mu_n})`; hop to
/// `mu + e_i` with `(1 - alpha_+ q^{m-mu_1-1})^{[i=1]} (1 - q^{mu_{i-1}-mu_i})`;
/// hop to `mu - e_i` with `(1 - alpha_- q^{mu_n-1})^{[i=n]} (1 - q^{mu_i-mu_{i+1}})`.
pub fn build_toda(cfg: LatticeConfig, params: &ModelParams) -> Result<LatticeOperator> {
    params.validate()?;
    let lattice = Lattice::new(cfg);
    let (n, m) = (cfg.n, cfg.m);
    let q = params.q;
    let pow = |e: usize| q.powi(e as i32);
    let (ap, bp, am, bm) = (
        params.alpha_plus(),
        params.beta_plus(),
        params.alpha_minus(),
        params.beta_minus(),
    );
    let d = lattice.len();
    let mut matrix = Matrix::zeros(d, d);
    for (a, mu) in lattice.iter().enumerate() {
        matrix[(a, a)] = bp * (1.0 - pow(m - mu.part(1))) + bm * (1.0 - pow(mu.part(n)));
        for i in 1..=n {
            if let Some(up) = mu.raised(i) {
                let mut c = 1.0 - pow(mu.part(i - 1) - mu.part(i));
                if i == 1 {
                    c *= 1.0 - ap * pow(m - mu.part(1) - 1);
                }
                let b = lattice.index_of(&up).expect("raised partition in lattice");
                matrix[(a, b)] += c;
            }
            if let Some(down) = mu.lowered(i) {
                let mut c = 1.0 - pow(mu.part(i) - mu.part(i + 1));
                if i == n {
                    c *= 1.0 - am * pow(mu.part(n) - 1);
                }
                let b = lattice.index_of(&down).expect("lowered partition in lattice");
                matrix[(a, b)] += c;
            }
        }
    }
    let weights = WeightTable::build(WeightKind::Toda, &lattice, params)?;
    LatticeOperator::new(lattice, matrix, weights)
}

/// The `q -> 1` operator `lim H / (1 - q)` with linear coefficients,
/// self-adjoint for the multinomial weights. The value of `params.q` is
/// ignored.
pub fn build_toda_q1(cfg: LatticeConfig, params: &ModelParams) -> Result<LatticeOperator> {
    params.validate()?;
    let lattice = Lattice::new(cfg);
    let (n, m) = (cfg.n, cfg.m);
    let (ap, bp, am, bm) = (
        params.alpha_plus(),
        params.beta_plus(),
        params.alpha_minus(),
        params.beta_minus(),
    );
    let d = lattice.len();
    let mut matrix = Matrix::zeros(d, d);
    for (a, mu) in lattice.iter().enumerate() {
        matrix[(a, a)] = bp * (m - mu.part(1)) as f64 + bm * mu.part(n) as f64;
        for i in 1..=n {
            if let Some(up) = mu.raised(i) {
                let mut c = (mu.part(i - 1) - mu.part(i)) as f64;
                if i == 1 {
                    c *= 1.0 - ap;
                }
                let b = lattice.index_of(&up).expect("raised partition in lattice");
                matrix[(a, b)] += c;
            }
            if let Some(down) = mu.lowered(i) {
                let mut c = (mu.part(i) - mu.part(i + 1)) as f64;
                if i == n {
                    c *= 1.0 - am;
                }
                let b = lattice.index_of(&down).expect("lowered partition in lattice");
                matrix[(a, b)] += c;
            }
        }
    }
    let weights = WeightTable::build(WeightKind::Multinomial, &lattice, params)?;
    LatticeOperator::new(lattice, matrix, weights)
}

/// `sum_mu psi(mu) phi(mu) w_mu` for real-valued functions.
pub fn inner_product(psi: &[f64], phi: &[f64], w: &WeightTable) -> Result<f64> {
    if psi.len() != phi.len() || psi.len() != w.len() {
        return Err(Error::DimensionMismatch {
            left: psi.len(),
            right: if psi.len() != phi.len() { phi.len() } else { w.len() },
        });
    }
    Ok(psi
        .iter()
        .zip(phi)
        .zip(w.values())
        .map(|((a, b), w)| a * b * w)
        .sum())
}

/// `max_{mu,nu} |w_mu M_{mu nu} - w_nu M_{nu mu}|`.
pub fn check_self_adjoint(op: &LatticeOperator) -> f64 {
    let d = op.dimension();
    let w = op.weights.values();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..i {
            let r = w[i] * op.matrix[(i, j)] - w[j] * op.matrix[(j, i)];
            worst = worst.max(r.abs());
        }
    }
    worst
}
