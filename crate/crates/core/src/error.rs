use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("capacitor {a}-{b}: capacitance must be positive, got {value:e} F")]
    NonPositiveCapacitance { a: String, b: String, value: f64 },
    #[error("node `{0}` has no capacitive path to ground")]
    FloatingNode(String),
    #[error("capacitance matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("topology mismatch: {0}")]
    Topology(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("target frequency unreachable: {0}")]
    Unreachable(String),
    #[error("no SNAIL equilibrium bracketed in [{lo:.4}, {hi:.4}] rad")]
    Bracketing { lo: f64, hi: f64 },
    #[error("SNAIL equilibrium is not a potential minimum (c2 = {0:.6})")]
    UnstableEquilibrium(f64),
    #[error("modes {0} and {1} are degenerate but coupled")]
    Degenerate(usize, usize),
    #[error("coupling outside the perturbative regime: |mixing| = {0:.3} for modes {1} and {2}")]
    Nonperturbative(f64, usize, usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("ill-conditioned design matrix (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("Hilbert-space dimension {dim} exceeds the limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("ambiguous state identification for {label}: overlap {overlap:.3} < 0.5")]
    AmbiguousState { label: String, overlap: f64 },
    #[error("no crossing found in the scan range")]
    NoCrossing,
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
}

impl Error {
    /// Stable machine-readable code used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "E_PARSE",
            Error::Io(_) => "E_IO",
            Error::DuplicateNode(_)
            | Error::UnknownNode(_)
            | Error::NonPositiveCapacitance { .. }
            | Error::FloatingNode(_)
            | Error::NotPositiveDefinite
            | Error::Topology(_) => "E_NETLIST",
            Error::InvalidParameter(_) | Error::Unreachable(_) => "E_PARAM",
            Error::Bracketing { .. } | Error::UnstableEquilibrium(_) => "E_SNAIL",
            Error::Degenerate(..) | Error::Nonperturbative(..) => "E_PERTURB",
            Error::DegenerateInput(_) | Error::IllConditioned(_) | Error::InvalidData(_) => {
                "E_DATA"
            }
            Error::DimensionTooLarge { .. }
            | Error::AmbiguousState { .. }
            | Error::NoCrossing
            | Error::Eigensolver(_) => "E_ORACLE",
        }
    }
}
