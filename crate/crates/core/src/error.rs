use thiserror::Error;

/// Failure modes shared by every evaluation route.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument sits on a pole of a gamma-family function.
    #[error("pole of {function} at x = {at}")]
    Pole { function: &'static str, at: f64 },

    /// A formula's hypotheses are not met by the inputs.
    #[error("{formula} requires {hypothesis} (got nu = {nu}, z = {z})")]
    Domain {
        formula: &'static str,
        hypothesis: &'static str,
        nu: f64,
        z: f64,
    },

    /// Generic precondition failure on a structured input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("intermediate value overflowed in {0}")]
    Overflow(&'static str),

    #[error("no vertical line separates the pole families ({0})")]
    NoSeparatingLine(String),

    #[error("contour quadrature disagreed by {relative:e} after refinement")]
    ContourNonConvergence { relative: f64 },

    #[error("quadrature tolerance not met: achieved error {achieved:e}")]
    QuadratureTolerance { achieved: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
