//! Command-line configuration and dispatch.
//!
//! Values come from three layers, later ones winning: built-in defaults
//! (all parameters zero), the JSON file given by `--config`, and explicit
//! flags.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bethe::{gradient_flow, solve_all, MorseProblem, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::format::{fmt_f64, write_json};
use crate::hall_littlewood::MAX_M;
use crate::hamiltonian::build_toda;
use crate::lattice::{LatticeConfig, Partition};
use crate::measures::ModelParams;
use crate::q1_limit::{q1_report, verify_q1_eigensystem};
use crate::spectrum::{build_eigensystem, spectrum_report};
use crate::verify::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    Spectrum,
    Verify,
    Flow,
    Q1,
    DumpMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Fully resolved run configuration. The JSON config file uses these field
/// names; any subset may be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub n: usize,
    pub m: usize,
    pub q: f64,
    pub p_plus: f64,
    pub q_plus: f64,
    pub p_minus: f64,
    pub q_minus: f64,
    pub kappa: Option<Vec<usize>>,
    pub tol: f64,
    pub output_path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub t_end: f64,
    pub steps: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            n: 1,
            m: 1,
            q: 0.0,
            p_plus: 0.0,
            q_plus: 0.0,
            p_minus: 0.0,
            q_minus: 0.0,
            kappa: None,
            tol: DEFAULT_TOL,
            output_path: None,
            format: None,
            t_end: 5.0,
            steps: 100,
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.q, self.p_plus, self.q_plus, self.p_minus, self.q_minus)
    }

    pub fn lattice(&self) -> Result<LatticeConfig> {
        if self.m > MAX_M {
            return Err(Error::TooLarge { m: self.m, cap: MAX_M });
        }
        LatticeConfig::new(self.n, self.m)
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice()?;
        self.params()?;
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.command.is_none() {
            return Err(Error::InvalidConfig("no command given".into()));
        }
        Ok(())
    }

    /// Default format: CSV for `flow` and `dump-matrix`, JSON otherwise.
    pub fn output_format(&self) -> OutputFormat {
        self.format.unwrap_or(match self.command {
            Some(Command::Flow) | Some(Command::DumpMatrix) => OutputFormat::Csv,
            _ => OutputFormat::Json,
        })
    }
}

/// Flags; each one, when present, overrides the config file.
#[derive(Debug, Parser)]
#[command(name = "qtoda", version, about = "Bethe Ansatz spectrum of the open q-difference Toda chain")]
pub struct Cli {
    /// What to run.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Number of sites minus one (particle positions range over 0..=m).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pp: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub qp: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub qm: Option<f64>,
    /// Quantum numbers for `flow`, e.g. `2,1,0`.
    #[arg(long, value_delimiter = ',')]
    pub kappa: Option<Vec<usize>>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// JSON file with `RunConfig` fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

impl Cli {
    pub fn resolve(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($flag:ident => $field:ident),*) => {
                $(if let Some(v) = self.$flag { cfg.$field = v; })*
            };
        }
        set!(n => n, m => m, q => q, pp => p_plus, qp => q_plus, pm => p_minus, qm => q_minus,
             tol => tol, t_end => t_end, steps => steps);
        if self.command.is_some() {
            cfg.command = self.command;
        }
        if self.kappa.is_some() {
            cfg.kappa = self.kappa;
        }
        if self.out.is_some() {
            cfg.output_path = self.out;
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 1,
        }
    }
}

#[derive(Serialize)]
struct SolveReport<'a> {
    n: usize,
    m: usize,
    params: crate::spectrum::ReportParams,
    solutions: &'a [crate::bethe::BetheSolution],
}

#[derive(Serialize)]
struct Q1Output {
    passed: bool,
    checks: Vec<crate::q1_limit::Q1Check>,
    report: crate::spectrum::SpectrumReport,
}

fn kappa_label(parts: &[usize]) -> String {
    let inner: Vec<String> = parts.iter().map(usize::to_string).collect();
    format!("\"({})\"", inner.join(","))
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::InvalidConfig(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(e: io::Error) -> Error {
    Error::InvalidConfig(format!("write failed: {e}"))
}

/// Execute a validated configuration.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let lattice = cfg.lattice()?;
    let params = cfg.params()?;
    let format = cfg.output_format();
    let mut out = open_output(&cfg.output_path)?;
    let mut outcome = Outcome::Success;
    match cfg.command.expect("validated") {
        Command::Solve => {
            let sols = solve_all(lattice, &params, cfg.tol)?;
            match format {
                OutputFormat::Json => write_json(
                    &mut out,
                    &SolveReport {
                        n: lattice.n,
                        m: lattice.m,
                        params: (&params).into(),
                        solutions: &sols,
                    },
                )
                .map_err(io_err)?,
                OutputFormat::Csv => {
                    let mut header = vec!["kappa".to_string()];
                    header.extend((1..=lattice.m).map(|j| format!("xi_{j}")));
                    header.extend(
                        ["energy", "grad_norm", "hessian_min_eig", "bae_residual", "iterations"].map(String::from),
                    );
                    writeln!(out, "{}", header.join(",")).map_err(io_err)?;
                    for s in &sols {
                        let mut row = vec![kappa_label(&s.kappa)];
                        row.extend(s.xi.iter().map(|&x| fmt_f64(x)));
                        row.extend([s.energy, s.grad_norm, s.hessian_min_eig, s.bae_residual].map(fmt_f64));
                        row.push(s.iterations.to_string());
                        writeln!(out, "{}", row.join(",")).map_err(io_err)?;
                    }
                }
            }
        }
        Command::Spectrum => {
            let report = spectrum_report(&build_eigensystem(lattice, &params, cfg.tol)?)?;
            match format {
                OutputFormat::Json => write_json(&mut out, &report).map_err(io_err)?,
                OutputFormat::Csv => {
                    writeln!(out, "kappa,energy,grad_norm,bae_residual,eigen_residual").map_err(io_err)?;
                    for k in &report.kappas {
                        let r = &k.residuals;
                        let vals = [k.energy, r.grad_norm, r.bae, r.eigen].map(fmt_f64);
                        writeln!(out, "{},{}", kappa_label(&k.kappa), vals.join(",")).map_err(io_err)?;
                    }
                }
            }
        }
        Command::Verify => {
            let report = verify(lattice, &params, cfg.tol)?;
            if !report.passed {
                outcome = Outcome::VerificationFailed;
            }
            match format {
                OutputFormat::Json => write_json(&mut out, &report).map_err(io_err)?,
                OutputFormat::Csv => {
                    writeln!(out, "check,value,threshold,passed").map_err(io_err)?;
                    for c in &report.checks {
                        writeln!(out, "{},{},{},{}", c.name, fmt_f64(c.value), fmt_f64(c.threshold), c.passed)
                            .map_err(io_err)?;
                    }
                }
            }
        }
        Command::Flow => {
            let kappa = match &cfg.kappa {
                Some(parts) => Partition::new(parts.clone(), lattice.n)?,
                None => Partition::zero(lattice.m, lattice.n),
            };
            let prob = MorseProblem::new(lattice, params, kappa)?;
            let traj = gradient_flow(&prob, &prob.schur_point(), cfg.t_end, cfg.steps)?;
            match format {
                OutputFormat::Json => write_json(&mut out, &traj).map_err(io_err)?,
                OutputFormat::Csv => traj.write_csv(&mut out).map_err(io_err)?,
            }
        }
        Command::Q1 => {
            let (es, checks) = verify_q1_eigensystem(lattice, &params, cfg.tol.max(1e-9))?;
            let passed = checks.iter().all(|c| c.passed);
            if !passed {
                outcome = Outcome::VerificationFailed;
            }
            let report = q1_report(&es)?;
            match format {
                OutputFormat::Json => write_json(
                    &mut out,
                    &Q1Output {
                        passed,
                        checks,
                        report,
                    },
                )
                .map_err(io_err)?,
                OutputFormat::Csv => {
                    writeln!(out, "check,value,threshold,passed").map_err(io_err)?;
                    for c in &checks {
                        writeln!(out, "{},{},{},{}", c.name, fmt_f64(c.value), fmt_f64(c.tol), c.passed)
                            .map_err(io_err)?;
                    }
                }
            }
        }
        Command::DumpMatrix => {
            let op = build_toda(lattice, &params)?;
            match format {
                OutputFormat::Csv => op.write_csv(&mut out).map_err(io_err)?,
                OutputFormat::Json => {
                    let rows: Vec<&[f64]> = (0..op.dimension()).map(|i| op.matrix().row(i)).collect();
                    let labels: Vec<String> = op.lattice().iter().map(|p| p.to_string()).collect();
                    #[derive(Serialize)]
                    struct Dump<'a> {
                        lattice: Vec<String>,
                        weights: &'a [f64],
                        matrix: Vec<&'a [f64]>,
                    }
                    write_json(
                        &mut out,
                        &Dump {
                            lattice: labels,
                            weights: op.weights().values(),
                            matrix: rows,
                        },
                    )
                    .map_err(io_err)?
                }
            }
        }
    }
    out.flush().map_err(io_err)?;
    Ok(outcome)
}

/// Parse flags, run, and map the result to an exit code: 0 success,
/// 1 failed verification, 2 invalid configuration or solver error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.resolve().and_then(|cfg| run(&cfg)) {
        Ok(outcome) => outcome.code(),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig> {
        Cli::try_parse_from(std::iter::once("qtoda").chain(args.iter().copied()))
            .unwrap()
            .resolve()
    }

    #[test]
    fn defaults_are_the_schur_point() {
        let cfg = parse(&["solve"]).unwrap();
        assert_eq!(cfg.params().unwrap(), ModelParams::schur());
        assert_eq!((cfg.n, cfg.m), (1, 1));
        assert_eq!(cfg.output_format(), OutputFormat::Json);
    }

    #[test]
    fn rejects_out_of_range_q() {
        let err = parse(&["verify", "--q", "1.5"]).unwrap_err();
        assert!(err.to_string().contains("q outside (−1,1)"), "{err}");
        assert!(parse(&["verify", "--m", "9"]).is_err());
        assert!(parse(&["verify", "--tol", "0"]).is_err());
        assert!(parse(&["--n", "2"]).is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"command":"spectrum","n":3,"m":2,"q":0.4,"p_plus":0.1}"#).unwrap();
        let cfg = parse(&["--config", path.to_str().unwrap(), "--q", "-0.25"]).unwrap();
        assert_eq!(cfg.command, Some(Command::Spectrum));
        assert_eq!((cfg.n, cfg.m), (3, 2));
        assert_eq!(cfg.q, -0.25);
        assert_eq!(cfg.p_plus, 0.1);
        std::fs::write(&path, r#"{"command":"spectrum","bogus":1}"#).unwrap();
        assert!(parse(&["--config", path.to_str().unwrap()]).is_err());
    }

    #[test]
    fn kappa_list() {
        let cfg = parse(&["flow", "--n", "2", "--m", "3", "--kappa", "2,1,1"]).unwrap();
        assert_eq!(cfg.kappa, Some(vec![2, 1, 1]));
        assert_eq!(cfg.output_format(), OutputFormat::Csv);
    }
}
