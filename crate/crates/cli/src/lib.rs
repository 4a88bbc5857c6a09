//! Command implementations behind the `poisson-wiretap` binary: capacity
//! evaluation, parameter sweeps to CSV, crossover and optimal-signal
//! finders, and Monte Carlo validation runs to JSON.

pub mod args;
pub mod ops;

use std::fmt;

/// CLI failure modes mapped onto the binary's exit codes: I/O errors exit
/// 1, usage errors 2, simulation-validation failures 3. Computation
/// outcomes that cannot be produced from the given inputs (e.g. a
/// crossover bracket without a sign change) exit 1.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Usage(String),
    Validation(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Compute(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Validation(msg) => write!(f, "validation failure: {msg}"),
            CliError::Compute(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<poisson_wiretap::Error> for CliError {
    fn from(err: poisson_wiretap::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

/// Reporting units for information quantities. Internally everything is
/// in nats; bits divide by ln 2 at the output boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    pub fn convert(&self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

/// Comparison that rejects NaN endpoints along with unordered brackets.
pub(crate) fn strictly_increasing(lo: f64, hi: f64) -> bool {
    matches!(lo.partial_cmp(&hi), Some(std::cmp::Ordering::Less))
}
