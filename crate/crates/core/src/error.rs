use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("every stored coefficient vanishes")]
    AllZero,
    #[error("degree violation: {0}")]
    DegreeViolation(String),
    #[error("no convergence after {iterations} iterations: {what}")]
    NonConvergence { what: String, iterations: usize },
    #[error("need {needed} moments, have {available}")]
    InsufficientMoments { needed: usize, available: usize },
    #[error("series order exhausted at step {step}")]
    ExhaustedOrder { step: usize },
    #[error("order budget exceeded: only {completed} steps could be completed")]
    OrderBudgetExceeded { completed: usize },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("evaluation hit a pole at {0}")]
    PoleHit(String),
    #[error("index {0} is not admissible")]
    NotAdmissible(usize),
    #[error("remainder of Christoffel division is not negligible at index {0}")]
    NonDivisible(usize),
    #[error("linear system for the [{l}/{m}] approximant is singular")]
    SystemSingular { l: usize, m: usize },
    #[error("P-fraction is not classical (some block has size > 1 or a negative sign)")]
    NotClassical,
    #[error("series is not normalized: {0}")]
    NotNormalized(String),
    #[error("inconsistent results: {0}")]
    Inconsistent(String),
    #[error("invalid gap: need -1 < alpha < 0 < beta < 1, got alpha={alpha}, beta={beta}")]
    InvalidGap { alpha: String, beta: String },
    #[error("elliptic modulus out of range: {0}")]
    ModulusOutOfRange(String),
    #[error("root bracket failure: {0}")]
    RootBracketFailure(String),
    #[error("evaluation point {0} is too close to the support")]
    TooCloseToSupport(String),
    #[error("evaluation point {0} is a pole of the rational perturbation")]
    PoleOfPerturbation(String),
    #[error("quadrature did not converge after {doublings} node doublings")]
    QuadratureNonConvergence { doublings: usize },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
