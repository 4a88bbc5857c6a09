use thiserror::Error;

/// Errors produced by the numeric kernels, optimizers, and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input fell outside its mathematical domain.
    #[error("domain error: {what} = {value} must be {expected}")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// An objective returned NaN during optimization. Carries the best
    /// point seen before the failure so callers can report progress.
    #[error("objective returned NaN at {at}; best so far f({best_x}) = {best_value}")]
    Evaluation {
        at: f64,
        best_x: f64,
        best_value: f64,
    },

    /// Two bit sequences of different lengths were combined.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite_nonneg(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "finite and non-negative",
        })
    }
}

pub(crate) fn check_probability(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "a probability in [0, 1]",
        })
    }
}
