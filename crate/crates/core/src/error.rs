use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid spin: {0}")]
    InvalidSpin(String),

    #[error("invalid sector: {0}")]
    InvalidSector(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension {dim} exceeds the dense cap {cap}; use sector decomposition or the extremal solver")]
    Infeasible { dim: usize, cap: usize },

    #[error("configuration space too large: {0}")]
    TooLarge(String),

    #[error("extremal eigensolver did not converge: best estimate {estimate}, residual {residual:e}")]
    NonConvergence { estimate: f64, residual: f64 },

    #[error("operators do not commute: max commutator entry {0:e}")]
    NonCommuting(f64),

    #[error("spectrum covers {covered} of {expected} basis states")]
    IncompleteCoverage { covered: usize, expected: usize },

    #[error("requested tolerance {requested:e} not reached, achieved {achieved:e}")]
    ToleranceUnachievable { requested: f64, achieved: f64 },

    #[error("C0 evaluations disagree: quadrature {quadrature}, zeta series {closed_form}")]
    C0Disagreement { quadrature: f64, closed_form: f64 },

    #[error("spin and boson spectra differ by {deviation:e} in block total_n = {total_n}")]
    EquivalenceViolated { total_n: u64, deviation: f64 },

    #[error("bound violated: {what} (value {value:e})")]
    BoundViolated { what: String, value: f64 },

    #[error("truncation n_max = {n_max} too small: relative tail mass {tail:e}")]
    TruncationTooSmall { n_max: u32, tail: f64 },

    #[error("eigenvectors are required for this operation")]
    MissingEigenvectors,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidLattice(_)
            | Error::InvalidSpin(_)
            | Error::InvalidSector(_)
            | Error::Config(_)
            | Error::Io(_) => 2,
            Error::Infeasible { .. } | Error::TooLarge(_) => 3,
            _ => 4,
        }
    }
}
