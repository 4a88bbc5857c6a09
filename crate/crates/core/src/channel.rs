//! Slotted Poisson photon-counting model for on-off keying.
//!
//! Input bit 1 sends a light pulse, bit 0 sends nothing; each receiver
//! observes a photon count drawn from a Poisson distribution whose mean
//! depends on the input bit. A threshold detector with count threshold
//! `kappa` reduces the count to a bit: output 0 when the count is <= kappa.
//! All means are dimensionless expected photon counts per symbol slot.

use crate::error::{check_finite_nonneg, Result};
use std::sync::LazyLock;

/// Upper-tail mass below which Poisson series are truncated.
pub const TAIL_MASS: f64 = 1e-12;

/// Physical parameters of the wiretap pair.
///
/// The legitimate receiver sees mean `zeta` for bit 0 and `xi + zeta` for
/// bit 1. The eavesdropper sees `gamma_np * zeta` and
/// `gamma_gp * xi + gamma_np * zeta`: `gamma_gp` scales the signal pulse it
/// intercepts, `gamma_np` its dark/scatter count relative to the legitimate
/// detector. An interceptor closer to the beam than the legitimate receiver
/// has `gamma_gp > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    xi: f64,
    zeta: f64,
    gamma_gp: f64,
    gamma_np: f64,
}

impl ChannelParams {
    pub fn new(xi: f64, zeta: f64, gamma_gp: f64, gamma_np: f64) -> Result<Self> {
        Ok(Self {
            xi: check_finite_nonneg("xi", xi)?,
            zeta: check_finite_nonneg("zeta", zeta)?,
            gamma_gp: check_finite_nonneg("gamma_gp", gamma_gp)?,
            gamma_np: check_finite_nonneg("gamma_np", gamma_np)?,
        })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn gamma_gp(&self) -> f64 {
        self.gamma_gp
    }

    pub fn gamma_np(&self) -> f64 {
        self.gamma_np
    }

    /// Mean photon counts at the legitimate receiver for input bits (0, 1).
    pub fn legitimate_means(&self) -> (f64, f64) {
        (self.zeta, self.xi + self.zeta)
    }

    /// Mean photon counts at the eavesdropper for input bits (0, 1).
    pub fn eavesdropper_means(&self) -> (f64, f64) {
        let dark = self.gamma_np * self.zeta;
        (dark, self.gamma_gp * self.xi + dark)
    }

    /// The eavesdropper's channel expressed as its own signal/dark pair,
    /// so it can be fed back through the same single-receiver formulas.
    pub fn eavesdropper_as_legitimate(&self) -> (f64, f64) {
        (self.gamma_gp * self.xi, self.gamma_np * self.zeta)
    }
}

/// Receiver front-end: hard threshold on the count, or the full count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorConfig {
    /// Output bit 0 when the count is <= the threshold. Threshold 0 is the
    /// on-off detector.
    Threshold(u32),
    /// Photon-number-resolving: the raw count is the output.
    Pnr,
}

/// Which receiver of the wiretap pair to reduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Legitimate,
    Eavesdropper,
}

/// A binary-input binary-output channel described by
/// `r0 = P(out = 0 | in = 0)` and `r1 = P(out = 0 | in = 1)`.
///
/// Poisson threshold reductions always give `r1 <= r0` since the bit-1 mean
/// is at least the bit-0 mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryChannel {
    pub r0: f64,
    pub r1: f64,
}

static LN_FACTORIAL_TABLE: LazyLock<[f64; 256]> = LazyLock::new(|| {
    let mut table = [0.0_f64; 256];
    for n in 1..256 {
        table[n] = table[n - 1] + (n as f64).ln();
    }
    table
});

/// ln(n!), exact cumulative sums below 256 and a Stirling series beyond
/// (error far below f64 resolution for n >= 256).
pub(crate) fn ln_factorial(n: u32) -> f64 {
    if (n as usize) < LN_FACTORIAL_TABLE.len() {
        return LN_FACTORIAL_TABLE[n as usize];
    }
    let x = n as f64;
    let x2 = x * x;
    (x + 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x * x2 * x2)
}

/// Poisson probability mass `e^(-lambda) lambda^y / y!`.
///
/// Evaluated as `exp(y ln lambda - lambda - ln y!)` so large counts neither
/// overflow `lambda^y` nor `y!`. A zero mean is the point mass at count 0.
pub fn poisson_pmf(lambda: f64, y: u32) -> Result<f64> {
    check_finite_nonneg("lambda", lambda)?;
    if lambda == 0.0 {
        return Ok(if y == 0 { 1.0 } else { 0.0 });
    }
    Ok((y as f64 * lambda.ln() - lambda - ln_factorial(y)).exp())
}

/// Probability that a Poisson count with mean `zeta` is at most `kappa`:
/// `e^(-zeta) * sum_{n=0}^{kappa} zeta^n / n!`.
///
/// Strictly decreasing in `zeta` for fixed `kappa`, non-decreasing in
/// `kappa`. The true value lies in (0, 1] but underflows to 0 in f64 for
/// very large means; callers that compare ratios of `tau` values use
/// cross-multiplied forms for that reason.
pub fn tau(zeta: f64, kappa: u32) -> Result<f64> {
    check_finite_nonneg("zeta", zeta)?;
    if zeta == 0.0 {
        return Ok(1.0);
    }
    if zeta < 600.0 {
        // Term recurrence from e^(-zeta); one multiply-add per count.
        let mut term = (-zeta).exp();
        let mut sum = term;
        for n in 1..=kappa {
            term *= zeta / n as f64;
            sum += term;
        }
        Ok(sum.min(1.0))
    } else {
        // e^(-zeta) underflows; sum the log-space terms against their max.
        let ln_zeta = zeta.ln();
        let log_terms: Vec<f64> = (0..=kappa)
            .map(|n| n as f64 * ln_zeta - zeta - ln_factorial(n))
            .collect();
        let max = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = log_terms.iter().map(|&t| (t - max).exp()).sum();
        Ok((max + sum.ln()).exp())
    }
}

/// Reduce one side of the wiretap pair to its binary channel under a
/// threshold detector: `(r0, r1) = (tau(mean_0, kappa), tau(mean_1, kappa))`
/// where the means are the side's bit-0 and bit-1 photon counts.
pub fn reduce_to_binary(params: &ChannelParams, side: Side, kappa: u32) -> BinaryChannel {
    let (mean0, mean1) = match side {
        Side::Legitimate => params.legitimate_means(),
        Side::Eavesdropper => params.eavesdropper_means(),
    };
    // Means are finite and non-negative by ChannelParams construction.
    BinaryChannel {
        r0: tau(mean0, kappa).expect("validated mean"),
        r1: tau(mean1, kappa).expect("validated mean"),
    }
}

/// Smallest count `N` whose upper-tail Poisson mass is below [`TAIL_MASS`],
/// plus a two-count margin absorbing the rounding gap between the
/// recurrence used here and log-space pmf summation, capped at
/// `ceil(lambda + 12 sqrt(lambda + 1) + 30)`. Series over Poisson counts
/// are summed up to and including this index.
pub fn n_trunc(lambda: f64) -> u32 {
    debug_assert!(lambda.is_finite() && lambda >= 0.0);
    if lambda == 0.0 {
        return 0;
    }
    let cap = (lambda + 12.0 * (lambda + 1.0).sqrt() + 30.0).ceil() as u32;
    if lambda > 500.0 {
        // The 12-sigma cap leaves tail mass many orders below TAIL_MASS.
        return cap;
    }
    let mut term = (-lambda).exp();
    let mut cum = term;
    let mut n = 0;
    while 1.0 - cum >= TAIL_MASS && n < cap {
        n += 1;
        term *= lambda / n as f64;
        cum += term;
    }
    (n + 2).min(cap)
}
