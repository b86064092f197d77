use thiserror::Error;

/// Errors produced while building or analysing communication graphs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("agent count must be positive")]
    Empty,
    #[error("weight matrix must be {n}x{n}, got {rows}x{cols}")]
    Shape { n: usize, rows: usize, cols: usize },
    #[error("weights[{row}][{col}] = {value} is negative or not finite")]
    NegativeWeight { row: usize, col: usize, value: f64 },
    #[error("weights[{index}][{index}] = {value}: diagonal entries must be zero")]
    NonzeroDiagonal { index: usize, value: f64 },
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("weights are not symmetric")]
    Asymmetric,
    #[error("no vertex with zero in-weights leads the graph")]
    NoLeader,
    #[error("vector length {got} does not match agent count {expected}")]
    Dimension { expected: usize, got: usize },
}

/// Errors from the dense eigensolver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (asymmetry {asymmetry:e} exceeds tolerance)")]
    Asymmetric { asymmetry: f64 },
    #[error("Jacobi sweeps did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

/// Errors from protocol and exponent validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("{protocol} requires {expected} exponents")]
    ProfileMismatch {
        protocol: &'static str,
        expected: &'static str,
    },
    #[error("exponent {value} at {location} must lie strictly between 0 and 1")]
    ExponentRange { location: String, value: f64 },
    #[error("the linear protocol requires every exponent to equal 1")]
    LinearExponent,
    #[error("exponent profile covers {got} agents but the graph has {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("alpha[{i}][{j}] = {a} differs from alpha[{j}][{i}] = {b}; symmetric exponents are required")]
    AsymmetricExponents { i: usize, j: usize, a: f64, b: f64 },
}

/// Errors from the fixed-step integrator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("initial state has {got} entries but the schedule has {expected} agents")]
    Dimension { expected: usize, got: usize },
    #[error("invalid integrator configuration: {0}")]
    Config(String),
    #[error("invalid switching schedule: {0}")]
    Schedule(String),
    #[error("state became non-finite at t = {time} (agent {agent})")]
    Diverged { time: f64, agent: usize },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// Errors from the bound and constant computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("exponent {0} must lie strictly between 0 and 1")]
    ExponentRange(f64),
    #[error("exponents must satisfy 0 < low < high < 1, got low = {low}, high = {high}")]
    ExponentOrder { low: f64, high: f64 },
    #[error("initial state is zero; the constant is undefined")]
    ZeroState,
    #[error("initial state is constant while exponents are non-uniform; range factor 0^0 is undefined")]
    DegenerateRange,
    #[error("vector lengths disagree: {0}")]
    Dimension(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("no finite-time bound applies: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Scenario ingestion and orchestration errors.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {reason}")]
    Invalid { path: String, reason: String },
    #[error("malformed JSON at {path}: {message}")]
    Json { path: String, message: String },
    #[error("unknown built-in scenario `{name}`; valid names: {}", valid.join(", "))]
    UnknownBuiltin { name: String, valid: Vec<&'static str> },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ScenarioError {
    pub(crate) fn invalid(path: impl Into<String>, reason: impl Into<String>) -> Self {
        ScenarioError::Invalid {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
