//! Shared fixtures for the benchmark targets.

use poisson_wiretap::ChannelParams;

/// The working point used throughout the numerical comparisons: a twice-
/// as-strong interceptor with a matched dark count.
pub fn interception_point() -> ChannelParams {
    ChannelParams::new(1.35, 0.5, 2.0, 1.0).expect("valid parameters")
}

/// A stronger-signal point that exercises long counting series.
pub fn strong_signal_point() -> ChannelParams {
    ChannelParams::new(20.0, 0.5, 2.0, 1.0).expect("valid parameters")
}
