use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("radius {r} outside the domain of {what}")]
    Domain { what: &'static str, r: f64 },

    #[error("closed form not available for state n={n}, l={l}; use the quadrature routines")]
    UnsupportedState { n: u32, l: u32 },

    #[error("unsupported truncation order {0}")]
    UnsupportedOrder(u32),

    #[error("quadrature did not reach tolerance: estimated relative error {estimate:e} > {tolerance:e}")]
    Accuracy { estimate: f64, tolerance: f64 },

    #[error("r = {r} lies within {distance:e} of a wavefunction node at {node}")]
    SingularPoint { r: f64, node: f64, distance: f64 },

    #[error("no bound state with {nodes} nodes: {reason}")]
    NoBoundState { nodes: u32, reason: String },

    #[error("eigenvalue search did not converge after {iterations} bisections (bracket width {width:e})")]
    NoConvergence { iterations: usize, width: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
