//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use qtoda::bethe::{check_bounds, decay_rate, gradient_flow, k_bounds, solve_bethe, MorseProblem, DEFAULT_TOL};
use qtoda::hall_littlewood::{poincare_value, wave_function, SpectralPoint};
use qtoda::hamiltonian::{build_toda, check_self_adjoint};
use qtoda::lattice::{enumerate, Lattice, LatticeConfig};
use qtoda::linalg::symmetric_eigenvalues;
use qtoda::measures::{multinomial_distribution, ModelParams, WeightKind, WeightTable};
use qtoda::q1_limit::{aw_roots, energy_q1, q1_bethe_solution, verify_q1_eigensystem};
use qtoda::spectrum::{
    assemble_eigensystem, compare_spectra, conjugate_orthogonality, eigenbasis_singular_values, max_offdiag,
    normalize_gram, EigenSystem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID: [f64; 3] = [-0.5, 0.25, 0.6];
const CONFIGS: [(usize, usize); 5] = [(1, 1), (2, 2), (2, 3), (3, 2), (4, 3)];

const SELF_ADJOINT_TOL: f64 = 1e-12;
const GRAD_TOL: f64 = 1e-12;
const BAE_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-9;
const SPECTRUM_TOL: f64 = 1e-9;
const COMPLETENESS_RATIO: f64 = 1e-8;
const ORTHOGONALITY_TOL: f64 = 1e-9;
const POINCARE_TOL: f64 = 1e-11;
const POINCARE_SAMPLES: usize = 20;
// chord distance to the nearest wall; closer points lose digits to cancellation among the signed-permutation terms
const WALL_MARGIN: f64 = 0.3;
const FLOW_ENDPOINT_TOL: f64 = 1e-8;
const FLOW_RATE_FACTOR: f64 = 0.9;
const GRAD_FD_TOL: f64 = 1e-6;
const HESS_FD_TOL: f64 = 1e-5;
const CALCULUS_SAMPLES: usize = 100;
const NORMALIZATION_TOL: f64 = 1e-12;
const BRIDGE_EPS: [f64; 3] = [1e-3, 1e-4, 1e-5];
/// Per-decade shrink factor must lie in `[10^{7/8}, 10^{9/8}]`.
const BRIDGE_RATIO: (f64, f64) = (7.498942093324558, 13.335214321633241);
/// Errors below these floors at every `eps` mean the limit is reached exactly
/// (the `q` dependence drops out for `m = 1`). The energy floor absorbs the
/// `1/eps` amplification of rounding in `E / eps`.
const BRIDGE_FLOOR: f64 = 1e-12;
const BRIDGE_ENERGY_FLOOR: f64 = 1e-9;
const DEGENERACY_GAP: f64 = 1e-8;

fn configs() -> impl Iterator<Item = LatticeConfig> {
    CONFIGS.iter().map(|&(n, m)| LatticeConfig::new(n, m).unwrap())
}

/// `q`, `p_+ = p_-`, `q_+ = q_-` over the grid.
fn sweep() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for &q in &GRID {
        for &p in &GRID {
            for &qb in &GRID {
                out.push(ModelParams::symmetric(q, p, qb).unwrap());
            }
        }
    }
    out
}

fn label(cfg: LatticeConfig, p: &ModelParams) -> String {
    format!(
        "(n,m)=({},{}) q={} p+={} q+={} p-={} q-={}",
        cfg.n, cfg.m, p.q, p.p_plus, p.q_plus, p.p_minus, p.q_minus
    )
}

/// Largest value seen and where.
#[derive(Default)]
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at();
        }
    }
}

struct Criterion {
    name: &'static str,
    passed: bool,
    detail: String,
    notes: Vec<String>,
}

fn criterion(name: &'static str, passed: bool, detail: String) -> Criterion {
    Criterion {
        name,
        passed,
        detail,
        notes: Vec::new(),
    }
}

fn self_adjointness() -> Criterion {
    let mut worst = Worst::default();
    for cfg in configs() {
        for p in sweep() {
            let op = build_toda(cfg, &p).unwrap();
            let rel = check_self_adjoint(&op) / op.matrix().max_abs();
            worst.record(rel, || label(cfg, &p));
        }
    }
    criterion(
        "self-adjointness",
        worst.value <= SELF_ADJOINT_TOL,
        format!("max residual / ||M||_max = {:.2e} (tol {SELF_ADJOINT_TOL:.0e}) at {}", worst.value, worst.at),
    )
}

fn eigensystems() -> Vec<(LatticeConfig, ModelParams, EigenSystem)> {
    let mut out = Vec::new();
    for cfg in configs() {
        for p in sweep() {
            let es = assemble_eigensystem(cfg, &p, DEFAULT_TOL).unwrap();
            out.push((cfg, p, es));
        }
    }
    out
}

fn bethe_solvability(systems: &[(LatticeConfig, ModelParams, EigenSystem)]) -> Criterion {
    let mut grad = Worst::default();
    let mut bae = Worst::default();
    let mut bounds = Worst {
        value: f64::NEG_INFINITY,
        at: String::new(),
    };
    let mut outside = 0;
    let mut count = 0;
    for (cfg, p, es) in systems {
        for (kappa, sol) in enumerate(cfg.dual()).into_iter().zip(&es.solutions) {
            count += 1;
            let at = || format!("{} kappa={kappa}", label(*cfg, p));
            grad.record(sol.grad_norm, at);
            bae.record(sol.bae_residual, at);
            if !sol.point().in_alcove() {
                outside += 1;
            }
            let b = check_bounds(&MorseProblem::new(*cfg, *p, kappa.clone()).unwrap(), &sol.xi);
            bounds.record(b.coordinate.max(b.difference), at);
        }
    }
    let passed = grad.value <= GRAD_TOL && bae.value <= BAE_TOL && outside == 0 && bounds.value <= 0.0;
    criterion(
        "Bethe solvability",
        passed,
        format!(
            "{count} solves; max ||grad||_inf = {:.2e}, max BAE residual = {:.2e} at {}, {outside} outside alcove, \
             largest bound violation = {:.2e}",
            grad.value, bae.value, bae.at, bounds.value
        ),
    )
}

fn eigenvalue_equation(systems: &[(LatticeConfig, ModelParams, EigenSystem)]) -> Criterion {
    let mut worst = Worst::default();
    for (cfg, p, es) in systems {
        worst.record(es.max_residual(), || label(*cfg, p));
    }
    criterion(
        "eigenvalue equation",
        worst.value <= EIGEN_TOL,
        format!("max relative residual = {:.2e} (tol {EIGEN_TOL:.0e}) at {}", worst.value, worst.at),
    )
}

fn completeness(systems: &[(LatticeConfig, ModelParams, EigenSystem)]) -> Criterion {
    let mut dev = Worst::default();
    let mut smallest_ratio = f64::INFINITY;
    let mut degenerate = 0;
    for (cfg, p, es) in systems {
        let cmp = compare_spectra(es).unwrap();
        dev.record(cmp.max_deviation / cmp.scale, || label(*cfg, p));
        if cmp.degenerate {
            degenerate += 1;
        }
        let sv = eigenbasis_singular_values(&es.eigenvectors, es.operator.weights()).unwrap();
        smallest_ratio = smallest_ratio.min(sv[sv.len() - 1] / sv[0]);
    }
    let passed = dev.value <= SPECTRUM_TOL && smallest_ratio > COMPLETENESS_RATIO;
    let mut c = criterion(
        "spectrum completeness",
        passed,
        format!(
            "max |E_bethe - E_oracle| / max(1,||S||) = {:.2e} at {}; min s_min/s_max = {:.2e}",
            dev.value, dev.at, smallest_ratio
        ),
    );
    c.notes.push(format!("{degenerate} sweep points with an eigenvalue gap below {DEGENERACY_GAP:.0e}"));
    c
}

fn gram_offdiag(es: &EigenSystem) -> (f64, f64) {
    let direct = max_offdiag(&normalize_gram(&es.gram), |_, _| true);
    let conj = max_offdiag(&conjugate_orthogonality(es).unwrap(), |_, _| true);
    (direct, conj)
}

fn orthogonality(systems: &[(LatticeConfig, ModelParams, EigenSystem)]) -> Criterion {
    let mut regime_a = Worst::default();
    let mut regime_b = Worst::default();
    for cfg in configs() {
        for &p in &GRID {
            for &qb in &GRID {
                let params = ModelParams::symmetric(0.0, p, qb).unwrap();
                let es = assemble_eigensystem(cfg, &params, DEFAULT_TOL).unwrap();
                let (d, c) = gram_offdiag(&es);
                regime_a.record(d.max(c), || label(cfg, &params));
            }
        }
        for &q in &[0.25, 0.6] {
            for &b in &GRID {
                // alpha = p q = 0 with beta = q_+- = b
                let params = ModelParams::symmetric(q, 0.0, b).unwrap();
                let es = assemble_eigensystem(cfg, &params, DEFAULT_TOL).unwrap();
                let (d, c) = gram_offdiag(&es);
                regime_b.record(d.max(c), || label(cfg, &params));
            }
        }
    }
    let mut general = Worst::default();
    let mut checked = 0;
    for (cfg, p, es) in systems {
        if compare_spectra(es).unwrap().degenerate {
            continue;
        }
        checked += 1;
        let (d, c) = gram_offdiag(es);
        general.record(d.max(c), || label(*cfg, p));
    }
    let worst = regime_a.value.max(regime_b.value).max(general.value);
    criterion(
        "orthogonality",
        worst <= ORTHOGONALITY_TOL,
        format!(
            "max normalized off-diagonal: q=0 {:.2e}, alpha=0 {:.2e}, distinct-spectrum sweep {:.2e} ({checked}/{} points)",
            regime_a.value,
            regime_b.value,
            general.value,
            systems.len()
        ),
    )
}

fn random_regular(rng: &mut ChaCha8Rng, m: usize) -> SpectralPoint {
    loop {
        let xi = SpectralPoint::new((0..m).map(|_| rng.gen_range(-10.0..10.0)).collect());
        if xi.wall_distance() >= WALL_MARGIN {
            return xi;
        }
    }
}

fn poincare() -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = Worst::default();
    let mut samples = 0;
    for cfg in configs() {
        for p in sweep() {
            let r0 = poincare_value(cfg.m, &p);
            for _ in 0..POINCARE_SAMPLES {
                let xi = random_regular(&mut rng, cfg.m);
                let origin = wave_function(&xi, cfg, &p).unwrap().origin_value;
                samples += 1;
                worst.record((origin - r0).abs() / r0.abs(), || label(cfg, &p));
            }
        }
    }
    criterion(
        "Poincare value",
        worst.value <= POINCARE_TOL,
        format!("{samples} random regular points; max relative error = {:.2e} at {}", worst.value, worst.at),
    )
}

fn schur_limit() -> Criterion {
    let mut worst = Worst::default();
    for cfg in configs() {
        for kappa in enumerate(cfg.dual()) {
            let prob = MorseProblem::new(cfg, ModelParams::schur(), kappa.clone()).unwrap();
            let sol = solve_bethe(&prob, DEFAULT_TOL).unwrap();
            let denom = (cfg.m + cfg.n + 1) as f64;
            for (j, x) in sol.xi.iter().enumerate() {
                let exact = PI * (cfg.m - j + kappa.part(j + 1)) as f64 / denom;
                worst.record((x - exact).abs(), || format!("({},{}) kappa={kappa}", cfg.n, cfg.m));
            }
        }
    }
    criterion(
        "Schur-limit closed form",
        worst.value <= DEFAULT_TOL,
        format!("max |xi - pi(m+1-j+kappa_j)/(m+n+1)| = {:.2e}", worst.value),
    )
}

fn gradient_flow_criterion() -> Criterion {
    let mut endpoint = Worst::default();
    let mut rate_margin = f64::INFINITY;
    let mut rate_at = String::new();
    let mut flows = 0;
    for cfg in configs() {
        for p in sweep() {
            let k = k_bounds(&p, cfg);
            let bound = 2.0 * (cfg.n as f64 + k.minus);
            let t_end = 30.0 / bound;
            for kappa in enumerate(cfg.dual()) {
                let prob = MorseProblem::new(cfg, p, kappa.clone()).unwrap();
                let sol = solve_bethe(&prob, DEFAULT_TOL).unwrap();
                let traj = gradient_flow(&prob, &prob.schur_point(), t_end, 300).unwrap();
                flows += 1;
                let at = || format!("{} kappa={kappa}", label(cfg, &p));
                let end = traj
                    .last()
                    .iter()
                    .zip(&sol.xi)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                endpoint.record(end, at);
                if let Some(rate) = decay_rate(&traj, &sol.xi, 1e-7) {
                    let margin = rate / bound;
                    if margin < rate_margin {
                        rate_margin = margin;
                        rate_at = at();
                    }
                }
            }
        }
    }
    let passed = endpoint.value <= FLOW_ENDPOINT_TOL && rate_margin >= FLOW_RATE_FACTOR;
    criterion(
        "gradient flow",
        passed,
        format!(
            "{flows} flows; max endpoint error = {:.2e}; min fitted rate / 2(n+K_-) = {rate_margin:.3} at {rate_at}",
            endpoint.value
        ),
    )
}

fn calculus() -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut grad_err = Worst::default();
    let mut hess_err = Worst::default();
    let mut eig_margin = f64::INFINITY;
    for cfg in configs() {
        for p in sweep() {
            let bound = 2.0 * (cfg.n as f64 + k_bounds(&p, cfg).minus);
            let kappas = enumerate(cfg.dual());
            for s in 0..CALCULUS_SAMPLES {
                let kappa = kappas[s % kappas.len()].clone();
                let prob = MorseProblem::new(cfg, p, kappa).unwrap();
                let xi: Vec<f64> = (0..cfg.m).map(|_| rng.gen_range(-2.0 * PI..2.0 * PI)).collect();
                let g = prob.gradient(&xi);
                let h = prob.hessian(&xi);
                let step = 1e-5;
                for j in 0..cfg.m {
                    let mut a = xi.clone();
                    let mut b = xi.clone();
                    a[j] += step;
                    b[j] -= step;
                    let fd = (prob.value(&a) - prob.value(&b)) / (2.0 * step);
                    grad_err.record((fd - g[j]).abs(), || label(cfg, &p));
                    let (ga, gb) = (prob.gradient(&a), prob.gradient(&b));
                    for k in 0..cfg.m {
                        let fd = (ga[k] - gb[k]) / (2.0 * step);
                        hess_err.record((fd - h[(k, j)]).abs(), || label(cfg, &p));
                    }
                }
                let min_eig = symmetric_eigenvalues(&h, 1e-15).unwrap()[0];
                eig_margin = eig_margin.min(min_eig - bound);
            }
        }
    }
    let passed = grad_err.value <= GRAD_FD_TOL && hess_err.value <= HESS_FD_TOL && eig_margin >= -1e-12;
    criterion(
        "calculus checks",
        passed,
        format!(
            "max |grad - fd| = {:.2e}, max |hess - fd| = {:.2e}, min (lambda_min - 2(n+K_-)) = {eig_margin:.3e}",
            grad_err.value, hess_err.value
        ),
    )
}

fn q1_theory() -> Criterion {
    let mut schur_roots: f64 = 0.0;
    for n in 1..=6 {
        let r = aw_roots(n, &ModelParams::schur()).unwrap();
        for (k, t) in r.thetas.iter().enumerate() {
            schur_roots = schur_roots.max((t - PI * (k + 1) as f64 / (n + 2) as f64).abs());
        }
    }
    let mut failures = Vec::new();
    let mut worst = std::collections::BTreeMap::<&'static str, f64>::new();
    let mut runs = 0;
    for cfg in configs() {
        for &p in &GRID {
            for &qb in &GRID {
                for params in [
                    ModelParams::symmetric(0.0, p, qb).unwrap(),
                    ModelParams::new(0.0, p, qb, -qb, 0.5 * p).unwrap(),
                ] {
                    runs += 1;
                    let (_, checks) = verify_q1_eigensystem(cfg, &params, EIGEN_TOL).unwrap();
                    for c in checks {
                        let w = worst.entry(c.name).or_insert(0.0);
                        *w = w.max(c.value);
                        if !c.passed {
                            failures.push(format!("{} at {}", c.name, label(cfg, &params)));
                        }
                    }
                    let dist = multinomial_distribution(cfg.n, cfg.m, &params);
                    let w = WeightTable::build(WeightKind::Multinomial, &Lattice::new(cfg), &params).unwrap();
                    let rel = (w.total() - dist.normalizer).abs() / dist.normalizer;
                    if rel > NORMALIZATION_TOL {
                        failures.push(format!("normalization at {}", label(cfg, &params)));
                    }
                }
            }
        }
    }
    let passed = schur_roots <= 1e-14 && failures.is_empty();
    let summary: Vec<String> = worst.iter().map(|(k, v)| format!("{k} {v:.1e}")).collect();
    let mut c = criterion(
        "q -> 1 theory",
        passed,
        format!("{runs} configurations; zero-parameter roots off by {schur_roots:.1e}; {}", summary.join(", ")),
    );
    c.notes.extend(failures);
    c
}

fn max_rel_weight_error(cfg: LatticeConfig, base: &ModelParams, eps: f64) -> f64 {
    let lattice = Lattice::new(cfg);
    let limit = WeightTable::build(WeightKind::Multinomial, &lattice, base).unwrap();
    let near = WeightTable::build(WeightKind::Toda, &lattice, &base.with_q(1.0 - eps)).unwrap();
    near.values()
        .iter()
        .zip(limit.values())
        .map(|(a, b)| (a - b).abs() / b.abs())
        .fold(0.0, f64::max)
}

fn ratios_ok(errors: &[f64], floor: f64) -> bool {
    if errors.iter().all(|&e| e <= floor) {
        return true;
    }
    errors
        .windows(2)
        .all(|w| w[0] / w[1] >= BRIDGE_RATIO.0 && w[0] / w[1] <= BRIDGE_RATIO.1)
}

fn fmt_ratios(errors: &[f64]) -> String {
    let r: Vec<String> = errors.windows(2).map(|w| format!("{:.2}", w[0] / w[1])).collect();
    r.join("/")
}

fn continuity_bridge() -> Criterion {
    let bases = [
        ModelParams::symmetric(0.0, 0.3, -0.2).unwrap(),
        ModelParams::new(0.0, 0.3, -0.2, 0.25, 0.6).unwrap(),
    ];
    let mut failing_kappas = Vec::new();
    let mut energy_fail = Vec::new();
    let mut weight_fail = Vec::new();
    let mut total = 0;
    for cfg in configs() {
        for base in &bases {
            let roots = aw_roots(cfg.n, base).unwrap();
            let werr: Vec<f64> = BRIDGE_EPS.iter().map(|&e| max_rel_weight_error(cfg, base, e)).collect();
            if !ratios_ok(&werr, BRIDGE_FLOOR) {
                weight_fail.push(format!("({},{}) ratios {}", cfg.n, cfg.m, fmt_ratios(&werr)));
            }
            for kappa in enumerate(cfg.dual()) {
                total += 1;
                let limit = q1_bethe_solution(&kappa, &roots).unwrap();
                let mut xi_err = Vec::new();
                let mut e_err = Vec::new();
                for &eps in &BRIDGE_EPS {
                    let prob = MorseProblem::new(cfg, base.with_q(1.0 - eps), kappa.clone()).unwrap();
                    let sol = solve_bethe(&prob, DEFAULT_TOL).unwrap();
                    xi_err.push(
                        sol.xi
                            .iter()
                            .zip(limit.as_slice())
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max),
                    );
                    e_err.push((sol.energy / eps - energy_q1(limit.as_slice())).abs());
                }
                if !ratios_ok(&e_err, BRIDGE_ENERGY_FLOOR) {
                    energy_fail.push(format!(
                        "({},{}) kappa={kappa} energy errors {:.1e}/{:.1e}/{:.1e}",
                        cfg.n, cfg.m, e_err[0], e_err[1], e_err[2]
                    ));
                }
                let repeated = kappa.parts().windows(2).any(|w| w[0] == w[1]);
                if !ratios_ok(&xi_err, BRIDGE_FLOOR) {
                    failing_kappas.push(format!(
                        "({},{}) kappa={kappa}{} errors {:.1e}/{:.1e}/{:.1e} ratios {}",
                        cfg.n,
                        cfg.m,
                        if repeated { " (repeated parts)" } else { "" },
                        xi_err[0],
                        xi_err[1],
                        xi_err[2],
                        fmt_ratios(&xi_err)
                    ));
                }
            }
        }
    }
    let passed = failing_kappas.is_empty() && weight_fail.is_empty();
    let mut c = criterion(
        "continuity bridges",
        passed,
        format!(
            "{total} (config, kappa) pairs; xi error ratio outside [{:.2}, {:.2}] for {} of them; \
             weight ratio failures {}; energy ratio failures {}",
            BRIDGE_RATIO.0,
            BRIDGE_RATIO.1,
            failing_kappas.len(),
            weight_fail.len(),
            energy_fail.len()
        ),
    );
    let all_repeated = failing_kappas.iter().all(|s| s.contains("repeated parts"));
    if !failing_kappas.is_empty() && all_repeated {
        c.notes.push(
            "every failing kappa has repeated parts; their coinciding limit roots split like sqrt(eps), \
             while distinct-part kappa and all energies converge at rate eps"
                .into(),
        );
    }
    c.notes.extend(failing_kappas.into_iter().take(6));
    c.notes.extend(weight_fail);
    c.notes.extend(energy_fail);
    c
}

fn main() -> ExitCode {
    let systems = eigensystems();
    let results = vec![
        self_adjointness(),
        bethe_solvability(&systems),
        eigenvalue_equation(&systems),
        completeness(&systems),
        orthogonality(&systems),
        poincare(),
        schur_limit(),
        gradient_flow_criterion(),
        calculus(),
        q1_theory(),
        continuity_bridge(),
    ];
    let mut all = true;
    for (i, c) in results.iter().enumerate() {
        all &= c.passed;
        println!(
            "criterion {:>2} {:<24} {}  {}",
            i + 1,
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        );
        for note in &c.notes {
            println!("             {note}");
        }
    }
    let failed = results.iter().filter(|c| !c.passed).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
