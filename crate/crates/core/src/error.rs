use thiserror::Error;

/// Errors raised by the fracton library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// At h = 2 the distribution diverges unless xi > 1 (mu < epsilon).
    #[error("Bose divergence: h = 2 requires xi > 1, got xi = {xi}")]
    BoseDivergence { xi: f64 },

    /// The requested particle number exceeds what the class admits in `states` states.
    #[error("infeasible occupancy: {particles} particles in {states} states at h = {h} (y = {y} < 0)")]
    InfeasibleOccupancy {
        states: u64,
        particles: u64,
        h: f64,
        y: f64,
    },

    /// The root-finder did not reach the requested tolerance.
    #[error("solver did not converge for h = {h}, xi = {xi} after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        h: f64,
        xi: f64,
        iterations: usize,
        residual: f64,
    },

    /// The class has no integer per-mode cap 1/(2 - h).
    #[error("unsupported class h = {0}: per-mode cap 1/(2 - h) is not a positive integer")]
    UnsupportedClass(String),

    /// The occupation is divergent (h = 2, or an even-integer filling factor).
    #[error("divergent occupation: {0}")]
    Divergent(String),

    /// Amplitudes do not sum to unit probability.
    #[error("amplitude vector not normalized: sum |c|^2 = {0}")]
    NotNormalized(f64),

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
