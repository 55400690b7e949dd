//! Derivatives of Bessel functions with respect to the order, computed by
//! several independent routes that can be cross-checked against each other.

pub mod bessel;
pub mod dd;
pub mod derivs;
pub mod error;
pub mod harness;
pub mod hypergeom;
pub mod integrals;
pub mod meijer;
pub mod quad;
pub mod result;
pub mod scalar;

pub use error::{Error, Result};
pub use result::{EvalResult, Warning};
pub use scalar::{RealArgument, RealOrder};
