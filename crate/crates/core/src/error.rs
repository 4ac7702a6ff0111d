use std::fmt;

use crate::complex_poly::SpherePoint;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid root specification: {0}")]
    InvalidSpec(String),

    #[error("degenerate map: {0}")]
    DegenerateMap(String),

    #[error("numerical indeterminacy (0/0) at {0}")]
    Indeterminate(SpherePoint),

    #[error("root finder did not converge after {sweeps} sweeps (max residual {max_residual:e})")]
    RootFinding { sweeps: usize, max_residual: f64, residuals: Vec<f64> },

    #[error("not a Newton map: {reason}")]
    NotNewtonMap { reason: String, multiplier: Option<Complex> },

    #[error("ray tracing stalled at {last_good}: {reason}")]
    RayTracing { last_good: Complex, reason: String },

    #[error("lift ambiguity: {0}")]
    LiftAmbiguity(String),

    #[error("lift step failed near {at}: {reason}")]
    LiftStep { at: Complex, reason: String },

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("pullback failed on edge {edge}: {reason}")]
    Pullback { edge: usize, reason: String },

    #[error("not postcritically fixed: {0}")]
    NotPostcriticallyFixed(String),

    #[error("inconsistent pipeline result: {0}")]
    Inconsistent(String),

    #[error("no termination up to level {max_level}: {reason}")]
    NonTermination { max_level: usize, reason: String },

    #[error("no convergence: {reason} (last estimate {estimate})")]
    Convergence { reason: String, estimate: f64 },

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Display wrapper so complex values read naturally in messages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex(pub num_complex::Complex64);

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        if z.im < 0.0 {
            write!(f, "{}-{}i", z.re, -z.im)
        } else {
            write!(f, "{}+{}i", z.re, z.im)
        }
    }
}

impl From<num_complex::Complex64> for Complex {
    fn from(z: num_complex::Complex64) -> Self {
        Complex(z)
    }
}

impl Error {
    /// Process exit code for the CLI: 1 usage/IO, 2 negative verdict, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Json(_) | Error::Input(_) | Error::InvalidSpec(_) => 1,
            Error::NotNewtonMap { .. }
            | Error::NotPostcriticallyFixed(_)
            | Error::DegenerateMap(_)
            | Error::MalformedGraph(_) => 2,
            Error::Indeterminate(_)
            | Error::RootFinding { .. }
            | Error::RayTracing { .. }
            | Error::LiftAmbiguity(_)
            | Error::LiftStep { .. }
            | Error::Pullback { .. }
            | Error::Inconsistent(_)
            | Error::Convergence { .. }
            | Error::NonTermination { .. } => 3,
        }
    }
}
