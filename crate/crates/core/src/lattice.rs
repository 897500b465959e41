//! Configuration spaces of `n` ordered particles on the sites `{0, ..., m}`.
//!
//! A configuration is a partition `m >= mu_1 >= ... >= mu_n >= 0`. The set of
//! all of them is denoted `Lambda(n,m)`; transposing the Young diagram maps it
//! bijectively onto `Lambda(m,n)`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Particle count `n` and lattice extent `m` (sites `0..=m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeConfig {
    pub n: usize,
    pub m: usize,
}

impl LatticeConfig {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidConfig(format!(
                "need n >= 1 and m >= 1, got n = {n}, m = {m}"
            )));
        }
        Ok(Self { n, m })
    }

    /// The configuration space of the conjugate partitions, `Lambda(m,n)`.
    pub fn dual(self) -> Self {
        Self {
            n: self.m,
            m: self.n,
        }
    }

    /// `binomial(n + m, n)`.
    pub fn dimension(self) -> usize {
        binomial(self.n + self.m, self.n)
    }
}

pub(crate) fn binomial(total: usize, k: usize) -> usize {
    let k = k.min(total - k);
    (0..k).fold(1usize, |acc, i| acc * (total - i) / (i + 1))
}

/// A weakly decreasing vector of parts bounded by `max`.
///
/// The partition remembers its box so that conjugation is total: a partition
/// with `n` parts in `0..=m` conjugates to one with `m` parts in `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
    max: usize,
}

impl Partition {
    pub fn new(parts: Vec<usize>, max: usize) -> Result<Self> {
        let decreasing = parts.windows(2).all(|w| w[0] >= w[1]);
        let bounded = parts.first().is_none_or(|&p| p <= max);
        if parts.is_empty() || !decreasing || !bounded {
            return Err(Error::NotInBox {
                rows: parts.len(),
                parts,
                max,
            });
        }
        Ok(Self { parts, max })
    }

    /// The all-zero partition `(0^len)` in a box of height `max`.
    pub fn zero(len: usize, max: usize) -> Self {
        Self {
            parts: vec![0; len],
            max,
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Upper bound on the parts (the lattice extent).
    pub fn max(&self) -> usize {
        self.max
    }

    pub fn config(&self) -> LatticeConfig {
        LatticeConfig {
            n: self.parts.len(),
            m: self.max,
        }
    }

    /// Part `i` with the boundary conventions `mu_0 = max`, `mu_{len+1} = 0`.
    pub fn part(&self, i: usize) -> usize {
        match i {
            0 => self.max,
            i if i > self.parts.len() => 0,
            i => self.parts[i - 1],
        }
    }

    /// `mu_i - mu_{i+1}` for `i` in `0..=len`.
    pub fn gap(&self, i: usize) -> usize {
        self.part(i) - self.part(i + 1)
    }

    /// All gaps `(mu_0 - mu_1, ..., mu_len - mu_{len+1})`; they sum to `max`.
    pub fn gaps(&self) -> Vec<usize> {
        (0..=self.parts.len()).map(|i| self.gap(i)).collect()
    }

    /// Number of parts equal to `i`, for `0 <= i <= max`.
    pub fn multiplicity(&self, i: usize) -> Result<usize> {
        if i > self.max {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.max,
            });
        }
        Ok(self.parts.iter().filter(|&&p| p == i).count())
    }

    /// Multiplicities of `0, 1, ..., max`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max + 1];
        for &p in &self.parts {
            counts[p] += 1;
        }
        counts
    }

    /// The transposed partition `0^{m-mu_1} 1^{mu_1-mu_2} ... n^{mu_n}`, i.e.
    /// the unique element of the dual box whose multiplicity of `i` is
    /// `mu_i - mu_{i+1}`.
    pub fn conjugate(&self) -> Partition {
        let rows = self.parts.len();
        let mut parts = Vec::with_capacity(self.max);
        for i in (0..=rows).rev() {
            parts.extend(std::iter::repeat_n(i, self.gap(i)));
        }
        Partition {
            parts,
            max: rows,
        }
    }

    /// `mu + e_i` (1-based `i`) if it stays in the box.
    pub fn raised(&self, i: usize) -> Option<Partition> {
        debug_assert!((1..=self.parts.len()).contains(&i));
        if self.part(i) + 1 > self.part(i - 1) {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[i - 1] += 1;
        Some(Partition {
            parts,
            max: self.max,
        })
    }

    /// `mu - e_i` (1-based `i`) if it stays in the box.
    pub fn lowered(&self, i: usize) -> Option<Partition> {
        debug_assert!((1..=self.parts.len()).contains(&i));
        if self.part(i) == self.part(i + 1) {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[i - 1] -= 1;
        Some(Partition {
            parts,
            max: self.max,
        })
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All of `Lambda(n,m)` in reverse lexicographic order of the parts,
/// e.g. `(2,2), (2,1), (2,0), (1,1), (1,0), (0,0)` for `n = m = 2`.
pub fn enumerate(cfg: LatticeConfig) -> Vec<Partition> {
    fn extend(prefix: &mut Vec<usize>, len: usize, bound: usize, max: usize, out: &mut Vec<Partition>) {
        if prefix.len() == len {
            out.push(Partition {
                parts: prefix.clone(),
                max,
            });
            return;
        }
        for p in (0..=bound).rev() {
            prefix.push(p);
            extend(prefix, len, p, max, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(cfg.dimension());
    extend(&mut Vec::with_capacity(cfg.n), cfg.n, cfg.m, cfg.m, &mut out);
    out
}

/// An enumerated configuration space with a reverse index.
#[derive(Debug, Clone)]
pub struct Lattice {
    cfg: LatticeConfig,
    points: Vec<Partition>,
    index: HashMap<Vec<usize>, usize>,
}

impl Lattice {
    pub fn new(cfg: LatticeConfig) -> Self {
        let points = enumerate(cfg);
        let index = points
            .iter()
            .enumerate()
            .map(|(k, p)| (p.parts.clone(), k))
            .collect();
        Self { cfg, points, index }
    }

    pub fn config(&self) -> LatticeConfig {
        self.cfg
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Partition] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Partition> {
        self.points.iter()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        if p.max != self.cfg.m {
            return None;
        }
        self.index.get(&p.parts).copied()
    }

    pub fn get(&self, k: usize) -> &Partition {
        &self.points[k]
    }
}
