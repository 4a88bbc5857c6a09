//! Seeded Monte Carlo execution of the two-way protocol's first round.
//!
//! Bob broadcasts a random bit over the Poisson channel; Alice threshold-
//! detects her count while the eavesdropper observes an independent count
//! (raw, or threshold-detected). The empirical secrecy rate is the plug-in
//! conditional mutual information between Alice's and Bob's bits given the
//! eavesdropper's observation, with a nonparametric bootstrap standard
//! error, and is compared against the analytic rate at the same input
//! distribution.
//!
//! Determinism contract: identical `(config, seed)` produce a bit-identical
//! report. Sampling draws from ChaCha stream 0 of the seed in the fixed
//! order (Bob's bit, Alice's count, eavesdropper's count); the bootstrap
//! draws from stream 1.

use crate::capacity::{rate_twoway_pnr, rate_twoway_threshold};
use crate::channel::{n_trunc, ChannelParams, DetectorConfig};
use crate::error::{check_probability, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;
use std::collections::BTreeMap;

const BOOTSTRAP_RESAMPLES: usize = 200;

/// One Monte Carlo run: channel, detectors, Bob's bit distribution, sample
/// count, and seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub params: ChannelParams,
    /// Alice's detection threshold on the legitimate channel.
    pub kappa: u32,
    /// The eavesdropper's detector.
    pub eve_mode: DetectorConfig,
    /// Probability that Bob's bit is 0.
    pub p: f64,
    pub samples: u64,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        check_probability("p", self.p)?;
        if self.samples == 0 {
            return Err(Error::Domain {
                what: "samples",
                value: 0.0,
                expected: "at least 1",
            });
        }
        Ok(())
    }
}

/// What the eavesdropper records for one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveObservation {
    Bit(u8),
    Count(u32),
}

/// Empirical rate estimate with its provenance. `counts` is the joint
/// histogram keyed `"a,b,e"` where `e` is the eavesdropper bit or binned
/// count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    /// Plug-in rate estimate in nats.
    pub empirical_rate: f64,
    /// Analytic two-way rate at the same input distribution, in nats.
    pub analytic_rate: f64,
    /// Bootstrap standard error of the empirical rate.
    pub standard_error: f64,
    pub samples: u64,
    pub seed: u64,
    /// Set when some observed eavesdropper bin holds fewer than two
    /// samples; the estimate is still returned.
    pub degenerate_cells: bool,
    pub counts: BTreeMap<String, u64>,
}

/// RNG for replica `index` of a run seeded with `seed`. Replicas draw from
/// disjoint ChaCha streams of the same seed, so concurrently simulated
/// replicas stay reproducible and merge by adding histograms.
pub fn replica_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draw one Poisson count. Sequential-search inversion below mean 10 (one
/// uniform per draw), transformed rejection with squeeze above it; both
/// consume the RNG stream deterministically.
pub(crate) fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u32 {
    debug_assert!(lambda.is_finite() && lambda >= 0.0);
    if lambda == 0.0 {
        return 0;
    }
    if lambda < 10.0 {
        let u: f64 = rng.random();
        let mut k = 0u32;
        let mut term = (-lambda).exp();
        let mut cumulative = term;
        let cap = n_trunc(lambda) + 30;
        while u > cumulative && k < cap {
            k += 1;
            term *= lambda / k as f64;
            cumulative += term;
        }
        k
    } else {
        // Transformed rejection from a Laplace-style envelope; the squeeze
        // accepts most candidates without evaluating the log density.
        let b = 0.931 + 2.53 * lambda.sqrt();
        let a = -0.059 + 0.02483 * b;
        let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        let v_r = 0.9277 - 3.6224 / (b - 2.0);
        let ln_lambda = lambda.ln();
        loop {
            let u = rng.random::<f64>() - 0.5;
            let v: f64 = rng.random();
            let us = 0.5 - u.abs();
            let k = ((2.0 * a / us + b) * u + lambda + 0.43).floor();
            if us >= 0.07 && v <= v_r {
                return k as u32;
            }
            if k < 0.0 || (us < 0.013 && v > us) {
                continue;
            }
            if v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln()
                <= k * ln_lambda - lambda - crate::channel::ln_factorial(k as u32)
            {
                return k as u32;
            }
        }
    }
}

/// Execute one protocol round: Bob's bit, Alice's detected bit, and the
/// eavesdropper's observation. The two counts are independent given Bob's
/// bit. Callers pass a validated config.
pub fn sample_round<R: Rng + ?Sized>(
    config: &SimulationConfig,
    rng: &mut R,
) -> (u8, u8, EveObservation) {
    let b: u8 = if rng.random::<f64>() < config.p { 0 } else { 1 };
    let (l0, l1) = config.params.legitimate_means();
    let (e0, e1) = config.params.eavesdropper_means();
    let (legit_mean, eve_mean) = if b == 0 { (l0, e0) } else { (l1, e1) };
    let y = sample_poisson(legit_mean, rng);
    let z = sample_poisson(eve_mean, rng);
    let a = (y > config.kappa) as u8;
    let eve = match config.eve_mode {
        DetectorConfig::Threshold(kappa_prime) => EveObservation::Bit((z > kappa_prime) as u8),
        DetectorConfig::Pnr => EveObservation::Count(z),
    };
    (a, b, eve)
}

/// XOR a detected bit sequence into a message sequence, as sent over the
/// public channel in the second round. Involutive; Bob's reconstruction
/// flips exactly where the two detected bit streams disagree.
pub fn simulate_public_round(a_bits: &[u8], x_bits: &[u8]) -> Result<Vec<u8>> {
    if a_bits.len() != x_bits.len() {
        return Err(Error::LengthMismatch {
            left: a_bits.len(),
            right: x_bits.len(),
        });
    }
    Ok(a_bits.iter().zip(x_bits).map(|(a, x)| a ^ x).collect())
}

type Cell = (u8, u8, u32);

fn plugin_mi(
    cells: &[(Cell, u64)],
    total: u64,
    key_x: fn(Cell) -> u32,
    key_y: fn(Cell) -> u32,
) -> f64 {
    let n = total as f64;
    let mut joint: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    let mut marg_x: BTreeMap<u32, u64> = BTreeMap::new();
    let mut marg_y: BTreeMap<u32, u64> = BTreeMap::new();
    for &(cell, count) in cells {
        if count == 0 {
            continue;
        }
        *joint.entry((key_x(cell), key_y(cell))).or_insert(0) += count;
        *marg_x.entry(key_x(cell)).or_insert(0) += count;
        *marg_y.entry(key_y(cell)).or_insert(0) += count;
    }
    let mut mi = 0.0;
    for (&(x, y), &c) in &joint {
        let pxy = c as f64 / n;
        let px = marg_x[&x] as f64 / n;
        let py = marg_y[&y] as f64 / n;
        mi += pxy * (pxy / (px * py)).ln();
    }
    mi.max(0.0)
}

/// Plug-in I(A;B|E) over the joint histogram.
fn plugin_conditional_mi(cells: &[(Cell, u64)], total: u64) -> f64 {
    let n = total as f64;
    let mut by_e: BTreeMap<u32, Vec<(Cell, u64)>> = BTreeMap::new();
    for &(cell, count) in cells {
        if count > 0 {
            by_e.entry(cell.2).or_default().push((cell, count));
        }
    }
    let mut cmi = 0.0;
    for slice in by_e.values() {
        let n_e: u64 = slice.iter().map(|&(_, c)| c).sum();
        cmi += n_e as f64 / n * plugin_mi(slice, n_e, |c| c.0 as u32, |c| c.1 as u32);
    }
    cmi
}

fn estimator(cells: &[(Cell, u64)], total: u64, eve_mode: DetectorConfig) -> f64 {
    match eve_mode {
        DetectorConfig::Threshold(_) => plugin_conditional_mi(cells, total),
        // With a counting eavesdropper the rate is I(A;B) - I(A;Z').
        DetectorConfig::Pnr => {
            plugin_mi(cells, total, |c| c.0 as u32, |c| c.1 as u32)
                - plugin_mi(cells, total, |c| c.0 as u32, |c| c.2)
        }
    }
}

/// Multinomial resample of the histogram by conditional binomials.
fn multinomial_resample<R: Rng + ?Sized>(
    cells: &[(Cell, u64)],
    total: u64,
    rng: &mut R,
) -> Vec<(Cell, u64)> {
    let mut out = Vec::with_capacity(cells.len());
    let mut remaining = total;
    let mut remaining_p = 1.0_f64;
    for (i, &(cell, count)) in cells.iter().enumerate() {
        if remaining == 0 {
            out.push((cell, 0));
            continue;
        }
        let p_cell = count as f64 / total as f64;
        let draw = if i + 1 == cells.len() {
            remaining
        } else {
            let p = if remaining_p > 0.0 {
                (p_cell / remaining_p).clamp(0.0, 1.0)
            } else {
                1.0
            };
            Binomial::new(remaining, p)
                .expect("valid binomial")
                .sample(rng)
        };
        out.push((cell, draw));
        remaining -= draw;
        remaining_p -= p_cell;
    }
    out
}

/// Run the configured number of rounds and estimate the two-way secrecy
/// rate. PNR observations are binned at raw counts up to the shared tail
/// cutoff with one overflow bin beyond it.
pub fn estimate_conditional_mi(config: &SimulationConfig) -> Result<SimulationReport> {
    config.validate()?;
    let overflow_bin = match config.eve_mode {
        DetectorConfig::Pnr => {
            let (e0, e1) = config.params.eavesdropper_means();
            n_trunc(e0.max(e1)) + 1
        }
        DetectorConfig::Threshold(_) => 1,
    };

    let mut rng = replica_rng(config.seed, 0);
    let mut histogram: BTreeMap<Cell, u64> = BTreeMap::new();
    for _ in 0..config.samples {
        let (a, b, eve) = sample_round(config, &mut rng);
        let e = match eve {
            EveObservation::Bit(bit) => bit as u32,
            EveObservation::Count(z) => z.min(overflow_bin),
        };
        *histogram.entry((a, b, e)).or_insert(0) += 1;
    }
    let cells: Vec<(Cell, u64)> = histogram.iter().map(|(&k, &v)| (k, v)).collect();

    let empirical_rate = estimator(&cells, config.samples, config.eve_mode);

    let mut bootstrap_rng = replica_rng(config.seed, 1);
    let replicates: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            let resampled = multinomial_resample(&cells, config.samples, &mut bootstrap_rng);
            estimator(&resampled, config.samples, config.eve_mode)
        })
        .collect();
    let mean = replicates.iter().sum::<f64>() / replicates.len() as f64;
    let variance = replicates
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / (replicates.len() - 1) as f64;
    let standard_error = variance.sqrt();

    let analytic_rate = match config.eve_mode {
        DetectorConfig::Threshold(kappa_prime) => {
            rate_twoway_threshold(&config.params, config.kappa, kappa_prime, config.p)?
        }
        DetectorConfig::Pnr => rate_twoway_pnr(&config.params, config.kappa, config.p)?,
    };

    let mut eve_totals: BTreeMap<u32, u64> = BTreeMap::new();
    for &((_, _, e), count) in &cells {
        *eve_totals.entry(e).or_insert(0) += count;
    }
    let degenerate_cells = eve_totals.values().any(|&c| c < 2);

    let counts = cells
        .iter()
        .map(|&((a, b, e), count)| (format!("{a},{b},{e}"), count))
        .collect();

    Ok(SimulationReport {
        empirical_rate,
        analytic_rate,
        standard_error,
        samples: config.samples,
        seed: config.seed,
        degenerate_cells,
        counts,
    })
}
