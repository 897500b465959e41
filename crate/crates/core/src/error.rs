use thiserror::Error;

/// Errors raised across the solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice configuration: {0}")]
    InvalidConfig(String),

    #[error("{name} outside (−1,1): {value}")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("partition {parts:?} does not lie in the ({rows},{max}) box")]
    NotInBox {
        parts: Vec<usize>,
        rows: usize,
        max: usize,
    },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("weight for {parts:?} is not positive ({value})")]
    NonPositiveWeight { parts: Vec<usize>, value: f64 },

    #[error("near-singular denominator |{modulus:e}| at spectral point {xi:?}")]
    NearSingular { modulus: f64, xi: Vec<f64> },

    #[error("imaginary residue {imag:e} exceeds tolerance relative to magnitude {scale:e}")]
    ImaginaryResidue { imag: f64, scale: f64 },

    #[error("m = {m} exceeds the supported maximum of {cap}")]
    TooLarge { m: usize, cap: usize },

    #[error("Newton iteration did not converge for kappa {kappa:?} after {iterations} steps (|grad| = {grad_norm:e})")]
    NoConvergence {
        kappa: Vec<usize>,
        iterations: usize,
        grad_norm: f64,
    },

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    JacobiNoConvergence { sweeps: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("{what} residual {residual:e} exceeds {tol:e} for kappa {kappa:?}")]
    ResidualExceeded {
        what: &'static str,
        kappa: Vec<usize>,
        residual: f64,
        tol: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
