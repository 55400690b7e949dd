use std::fmt;

use serde::Serialize;

/// Non-fatal conditions attached to a computed value.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Partial sums exceeded the result by this factor before cancelling.
    Cancellation { amplification: f64 },
    /// A quadrature or contour rule stopped short of its target accuracy.
    Accuracy { achieved: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::Cancellation { amplification } => write!(
                f,
                "cancellation: partial sums reached {amplification:.1e} times the result"
            ),
            Warning::Accuracy { achieved } => {
                write!(f, "accuracy target missed, estimated error {achieved:.1e}")
            }
        }
    }
}

/// A computed value with its error estimate and diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Short name of the route that produced the value.
    pub route: &'static str,
    /// Terms, nodes or cells consumed.
    pub terms: usize,
    pub warnings: Vec<Warning>,
}

impl EvalResult {
    pub fn new(value: f64, error_estimate: f64, route: &'static str) -> Self {
        Self {
            value,
            error_estimate,
            route,
            terms: 0,
            warnings: Vec::new(),
        }
    }

    pub fn with_terms(mut self, terms: usize) -> Self {
        self.terms = terms;
        self
    }

    pub fn has_cancellation(&self) -> bool {
        self.warnings
            .iter()
            .any(|w| matches!(w, Warning::Cancellation { .. }))
    }
}

/// Accumulates `Σ c_i·r_i` over several results, tracking error and warnings.
#[derive(Clone, Debug)]
pub(crate) struct Combination {
    value: f64,
    error: f64,
    magnitude: f64,
    terms: usize,
    warnings: Vec<Warning>,
}

impl Combination {
    pub fn new() -> Self {
        Self {
            value: 0.0,
            error: 0.0,
            magnitude: 0.0,
            terms: 0,
            warnings: Vec::new(),
        }
    }

    pub fn add(&mut self, coef: f64, r: &EvalResult) {
        self.value += coef * r.value;
        self.magnitude += (coef * r.value).abs();
        self.error += (coef * r.error_estimate).abs();
        self.terms += r.terms;
        for w in &r.warnings {
            if !self.warnings.contains(w) {
                self.warnings.push(w.clone());
            }
        }
    }

    /// Adds an exactly known scalar contribution.
    pub fn add_scalar(&mut self, v: f64) {
        self.value += v;
        self.magnitude += v.abs();
        self.error += v.abs() * f64::EPSILON;
    }

    pub fn finish(mut self, route: &'static str) -> EvalResult {
        // rounding in the final sum scales with the largest contributions
        let error = self.error + self.magnitude * f64::EPSILON;
        let amplification = self.magnitude / self.value.abs();
        if amplification > crate::hypergeom::CANCELLATION_THRESHOLD {
            self.warnings.push(Warning::Cancellation { amplification });
        }
        EvalResult {
            value: self.value,
            error_estimate: error,
            route,
            terms: self.terms,
            warnings: self.warnings,
        }
    }
}
