//! Gradient flow `d xi / dt = -grad V_kappa(xi)` with adaptive Dormand-Prince 5(4).

use std::io::Write;

use serde::Serialize;

use super::{k_bounds, MorseProblem};
use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::hall_littlewood::SpectralPoint;
use crate::linalg::max_abs;

const RTOL: f64 = 1e-10;
const ATOL: f64 = 1e-12;
const MIN_STEP: f64 = 1e-14;
const STABILITY_EDGE: f64 = 3.0;

// Dormand-Prince tableau; the system is autonomous so the nodes are not needed
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Flow samples on a uniform output grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub grad_norms: Vec<f64>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.points.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// CSV with header `t,xi_1,...,xi_m,grad_norm`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let m = self.points.first().map_or(0, Vec::len);
        let mut header = vec!["t".to_string()];
        header.extend((1..=m).map(|j| format!("xi_{j}")));
        header.push("grad_norm".into());
        writeln!(out, "{}", header.join(","))?;
        for ((t, xi), g) in self.times.iter().zip(&self.points).zip(&self.grad_norms) {
            let mut row = vec![fmt_f64(*t)];
            row.extend(xi.iter().map(|&x| fmt_f64(x)));
            row.push(fmt_f64(*g));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn rhs(prob: &MorseProblem, xi: &[f64]) -> Vec<f64> {
    prob.gradient(xi).into_iter().map(|g| -g).collect()
}

/// Integrate from `start` to `t_end`, recording `steps + 1` equally spaced samples.
pub fn gradient_flow(prob: &MorseProblem, start: &SpectralPoint, t_end: f64, steps: usize) -> Result<Trajectory> {
    if !(t_end > 0.0) || steps == 0 {
        return Err(Error::InvalidConfig(format!(
            "flow needs t_end > 0 and steps >= 1, got {t_end} and {steps}"
        )));
    }
    let dim = start.len();
    let mut y = start.as_slice().to_vec();
    let mut t = 0.0;
    // the hessian spectrum lies in [2(n+K_-), 2(n+K_+)]; keep h inside the
    // real stability interval of the pair so the flow settles at equilibrium
    let stiffness = 2.0 * (prob.config().n as f64 + k_bounds(prob.params(), prob.config()).plus);
    let h_max = STABILITY_EDGE / stiffness;
    let mut h = (t_end / steps as f64).min(h_max);
    let mut traj = Trajectory {
        times: vec![0.0],
        points: vec![y.clone()],
        grad_norms: vec![max_abs(&prob.gradient(&y))],
    };
    let mut k = vec![vec![0.0; dim]; 7];
    k[0] = rhs(prob, &y);
    for s in 1..=steps {
        let target = t_end * s as f64 / steps as f64;
        while t < target {
            let last = target - t <= h;
            let step = if last { target - t } else { h };
            for stage in 1..7 {
                let yi: Vec<f64> = (0..dim)
                    .map(|i| y[i] + step * (0..stage).map(|l| A[stage][l] * k[l][i]).sum::<f64>())
                    .collect();
                k[stage] = rhs(prob, &yi);
            }
            let y5: Vec<f64> = (0..dim)
                .map(|i| y[i] + step * (0..7).map(|l| B5[l] * k[l][i]).sum::<f64>())
                .collect();
            let err = (0..dim)
                .map(|i| {
                    let e = step * (0..7).map(|l| (B5[l] - B4[l]) * k[l][i]).sum::<f64>();
                    let scale = ATOL + RTOL * y[i].abs().max(y5[i].abs());
                    (e / scale).powi(2)
                })
                .sum::<f64>();
            let err = (err / dim.max(1) as f64).sqrt();
            if err <= 1.0 {
                t = if last { target } else { t + step };
                y = y5;
                // first-same-as-last: the seventh stage is f at the new point
                k[0] = k[6].clone();
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 && last {
                h = h.max(step * factor).min(h_max);
            } else {
                h = (step * factor).min(h_max);
            }
            if h < MIN_STEP {
                return Err(Error::StepUnderflow { t });
            }
        }
        traj.times.push(target);
        traj.grad_norms.push(max_abs(&prob.gradient(&y)));
        traj.points.push(y.clone());
    }
    Ok(traj)
}

/// Least-squares slope of `ln ||xi(t) - xi*||_inf` against `t` over samples
/// with distance above `floor`; returns `-slope`.
pub fn decay_rate(traj: &Trajectory, target: &[f64], floor: f64) -> Option<f64> {
    let samples: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&traj.points)
        .filter(|(t, _)| **t > 0.0)
        .filter_map(|(&t, xi)| {
            let d = xi.iter().zip(target).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            (d > floor).then(|| (t, d.ln()))
        })
        .collect();
    if samples.len() < 3 {
        return None;
    }
    let n = samples.len() as f64;
    let (st, sl) = samples.iter().fold((0.0, 0.0), |(a, b), (t, l)| (a + t, b + l));
    let (mt, ml) = (st / n, sl / n);
    let (num, den) = samples.iter().fold((0.0, 0.0), |(a, b), (t, l)| {
        (a + (t - mt) * (l - ml), b + (t - mt).powi(2))
    });
    Some(-num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bethe::{solve_bethe, DEFAULT_TOL};
    use crate::lattice::{LatticeConfig, Partition};
    use crate::measures::ModelParams;

    #[test]
    fn schur_flow_is_linear_relaxation() {
        // grad = 2(n+m+1)(xi - xi*) at the Schur point, so the flow is exact exponential decay
        let cfg = LatticeConfig::new(1, 1).unwrap();
        let prob = MorseProblem::new(cfg, ModelParams::schur(), Partition::zero(1, 1)).unwrap();
        let star = prob.schur_point().as_slice()[0];
        let traj = gradient_flow(&prob, &SpectralPoint::new(vec![0.0]), 2.0, 20).unwrap();
        for (t, xi) in traj.times.iter().zip(&traj.points) {
            let exact = star * (1.0 - (-6.0 * t).exp());
            assert!((xi[0] - exact).abs() < 1e-9, "t={t}: {} vs {exact}", xi[0]);
        }
        let rate = decay_rate(&traj, &[star], 1e-8).unwrap();
        assert!((rate - 6.0).abs() < 1e-4);
    }

    #[test]
    fn flow_reaches_the_newton_minimum() {
        let cfg = LatticeConfig::new(2, 2).unwrap();
        let p = ModelParams::new(0.6, -0.5, 0.25, 0.25, 0.6).unwrap();
        let prob = MorseProblem::new(cfg, p, Partition::new(vec![2, 1], 2).unwrap()).unwrap();
        let sol = solve_bethe(&prob, DEFAULT_TOL).unwrap();
        let traj = gradient_flow(&prob, &SpectralPoint::new(vec![0.1, -0.4]), 10.0, 50).unwrap();
        for (x, y) in traj.last().iter().zip(&sol.xi) {
            assert!((x - y).abs() < 1e-8);
        }
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,xi_1,xi_2,grad_norm\n"));
        assert_eq!(text.lines().count(), 52);
    }

    #[test]
    fn stationary_at_the_minimum() {
        let cfg = LatticeConfig::new(2, 2).unwrap();
        let p = ModelParams::new(0.4, 0.3, -0.2, 0.3, -0.2).unwrap();
        let prob = MorseProblem::new(cfg, p, Partition::new(vec![1, 0], 2).unwrap()).unwrap();
        let sol = solve_bethe(&prob, DEFAULT_TOL).unwrap();
        let traj = gradient_flow(&prob, &sol.point(), 5.0, 10).unwrap();
        for xi in &traj.points {
            for (x, y) in xi.iter().zip(&sol.xi) {
                assert!((x - y).abs() < 1e-12, "{x} {y} {:?}", traj.grad_norms);
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let cfg = LatticeConfig::new(1, 1).unwrap();
        let prob = MorseProblem::new(cfg, ModelParams::schur(), Partition::zero(1, 1)).unwrap();
        let start = SpectralPoint::new(vec![0.0]);
        assert!(gradient_flow(&prob, &start, 0.0, 10).is_err());
        assert!(gradient_flow(&prob, &start, 1.0, 0).is_err());
    }
}
