//! Secrecy capacities of the on-off-keyed Poisson wiretap channel.
//!
//! A binary symbol drives a slotted Poisson photon-counting channel to a
//! legitimate receiver and, with its own gain and noise ratios, to an
//! eavesdropper. This crate computes:
//!
//! - the one-way secrecy capacities under threshold and photon-number-
//!   resolving (PNR) detection, including the pre-index optimization
//!   needed when neither channel degrades the other;
//! - the two-way (public-discussion) secrecy capacities for both
//!   eavesdropper detectors, which stay positive even against a stronger
//!   interceptor;
//! - degradation classification of the wiretap pair;
//! - a seeded Monte Carlo validation of the analytic two-way rates.
//!
//! All information quantities are in nats.

pub mod capacity;
pub mod channel;
pub mod degradation;
mod error;
pub mod infotheory;
pub mod simulate;

pub use capacity::{FormulaPath, PosteriorDecomposition, Regime, SecrecyResult};
pub use channel::{BinaryChannel, ChannelParams, DetectorConfig, Side};
pub use degradation::{Classification, DegradationClass};
pub use error::{Error, Result};
pub use infotheory::{InputDistribution, PreIndex};
pub use simulate::{SimulationConfig, SimulationReport};
