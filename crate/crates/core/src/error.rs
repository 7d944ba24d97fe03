use thiserror::Error;

/// Errors raised by constructors, solvers and field evaluations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-domain argument (non-finite value, zero count, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A mathematical side condition of a construction does not hold.
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// Physical admissibility: density and pressure must be positive.
    #[error("non-physical state: {0}")]
    NonPhysical(String),

    /// A denominator or Jacobian is singular at the requested point.
    #[error("singular: {0}")]
    Singular(String),

    #[error("no sign change of the residual on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    /// More than one root was found inside the search interval.
    #[error("multiple roots; sign changes bracketed by {brackets:?}")]
    MultipleRoots { brackets: Vec<(f64, f64)> },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Adaptive quadrature hit its subdivision cap.
    #[error("quadrature on [{a}, {b}] exceeded the subdivision cap")]
    QuadratureCap { a: f64, b: f64 },

    #[error("evaluation failed at {0}")]
    Evaluation(String),

    #[error("config: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Monotonicity of Cauchy data fails at a sample.
    #[error("Cauchy data not strictly monotone at sample {index}")]
    NotMonotone { index: usize },

    /// The curve tangent lies in the annihilator of one of the wave forms.
    #[error(
        "solvability condition 2 (transversality) failed at sample {index}: \
         curve tangent is annihilated by lambda^{form} (margin {margin:e})"
    )]
    NotTransversal {
        index: usize,
        form: usize,
        margin: f64,
    },
}

impl Error {
    /// Whether the failure is a violated mathematical precondition rather
    /// than malformed input.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::InvalidInput(_) | Error::Config(_) | Error::Parse { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
