//! One-way and two-way secrecy rates and capacities, with the scalar and
//! pre-index optimizers that back them.
//!
//! One-way capacities depend on the degradation class: a degraded pair is
//! optimized over the input distribution alone, an anti-degraded pair has
//! capacity zero, and everything else is optimized jointly over the input
//! and a two-branch pre-index randomization.
//!
//! Two-way capacities score the first protocol round: Bob broadcasts a
//! random bit over the Poisson channel, Alice threshold-detects it, and the
//! public second round reduces the secrecy rate to the conditional mutual
//! information between Alice's and Bob's bits given the eavesdropper's
//! observation. That quantity decomposes over the eavesdropper's
//! observation into a weighted sum of legitimate-channel informations at
//! the posterior input distributions.

use crate::channel::{n_trunc, poisson_pmf, reduce_to_binary, tau, ChannelParams, Side};
use crate::degradation::{classify_pnr, classify_threshold, DegradationClass};
use crate::error::{check_probability, Error, Result};
use crate::infotheory::{g_closed_form, BinaryMi, PnrKernel};

/// Default interval width at which golden-section refinement stops.
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Protocol direction and eavesdropper detector of a capacity figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    OwThreshold,
    OwPnr,
    TwThreshold,
    TwPnr,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::OwThreshold => "ow-threshold",
            Regime::OwPnr => "ow-pnr",
            Regime::TwThreshold => "tw-threshold",
            Regime::TwPnr => "tw-pnr",
        })
    }
}

/// Which optimization produced a capacity value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaPath {
    /// Maximum over the input distribution alone.
    Plain,
    /// Joint maximum over the input distribution and a pre-index channel.
    PreIndex,
}

/// A capacity (or optimized rate) with its achieving distribution and
/// classification diagnostics. `value` is clamped to be non-negative and
/// never exceeds ln 2 for these binary-input channels.
#[derive(Debug, Clone, PartialEq)]
pub struct SecrecyResult {
    /// Capacity in nats.
    pub value: f64,
    /// Achieving input probability of bit 0; absent when the capacity is
    /// zero by anti-degradation and no maximizer is meaningful.
    pub p_opt: Option<f64>,
    /// Achieving pre-index branch probabilities `(p0, p1)` when the
    /// pre-index path was taken.
    pub preindex_opt: Option<(f64, f64)>,
    pub degradation: DegradationClass,
    pub regime: Regime,
    pub formula_path: FormulaPath,
}

/// Decomposition of the two-way rate over the eavesdropper's observation:
/// branch `i` occurs with probability `weights[i]` and leaves posterior
/// `posteriors[i] = P(B = 0 | observation i)` on Bob's bit. Zero-weight
/// branches carry posterior 0 by convention and contribute nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDecomposition {
    pub weights: Vec<f64>,
    pub posteriors: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Optimizers
// ---------------------------------------------------------------------------

/// Maximize a continuous function on [0, 1]: coarse 101-point grid, then
/// golden-section refinement inside the best grid cell until the interval
/// is narrower than `tolerance`.
///
/// Deterministic tie-breaking: grid ties resolve toward the midpoint first
/// (a flat objective reports 0.5), then toward the smaller abscissa; the
/// refined point replaces the grid point only when it strictly improves.
pub fn optimize_scalar(f: impl Fn(f64) -> f64, tolerance: f64) -> Result<(f64, f64)> {
    grid_then_golden(&f, 101, tolerance)
}

fn grid_then_golden<F: Fn(f64) -> f64>(f: &F, n: usize, tolerance: f64) -> Result<(f64, f64)> {
    debug_assert!(n >= 3 && n % 2 == 1);
    let step = 1.0 / (n - 1) as f64;
    let mut vals = vec![0.0_f64; n];
    for (i, v) in vals.iter_mut().enumerate() {
        let x = i as f64 * step;
        *v = f(x);
        if v.is_nan() {
            return Err(Error::Evaluation {
                at: x,
                best_x: 0.5,
                best_value: f64::NEG_INFINITY,
            });
        }
    }
    let mid = (n - 1) / 2;
    let mut best_i = mid;
    let mut best_v = vals[mid];
    for d in 1..=mid {
        for i in [mid - d, mid + d] {
            if vals[i] > best_v {
                best_v = vals[i];
                best_i = i;
            }
        }
    }
    let best_x = best_i as f64 * step;
    let lo = if best_i == 0 {
        0.0
    } else {
        (best_i - 1) as f64 * step
    };
    let hi = if best_i == n - 1 {
        1.0
    } else {
        (best_i + 1) as f64 * step
    };
    let (gx, gv) = golden_max(f, lo, hi, tolerance, (best_x, best_v))?;
    if gv > best_v {
        Ok((gx, gv))
    } else {
        Ok((best_x, best_v))
    }
}

fn golden_max<F: Fn(f64) -> f64>(
    f: &F,
    mut a: f64,
    mut b: f64,
    tolerance: f64,
    best_so_far: (f64, f64),
) -> Result<(f64, f64)> {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_nan() {
            Err(Error::Evaluation {
                at: x,
                best_x: best_so_far.0,
                best_value: best_so_far.1,
            })
        } else {
            Ok(v)
        }
    };
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    let mut iterations = 0;
    while b - a > tolerance && iterations < 200 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = eval(d)?;
        }
        iterations += 1;
    }
    let x = 0.5 * (a + b);
    let v = eval(x)?;
    if fc >= fd && fc > v {
        Ok((c, fc))
    } else if fd > v {
        Ok((d, fd))
    } else {
        Ok((x, v))
    }
}

/// Maximize a rate over `(p, p0, p1)` in the unit cube: a 21-per-axis
/// coarse grid seeded with the identity-pre-index scalar optimum
/// `(p*, 1, 0)`, then golden-section coordinate descent (three sweeps, or
/// until a sweep improves by less than `tolerance`).
///
/// Seeding guarantees the returned value is never below the plain scalar
/// optimum of `rate(p, 1, 0)`.
pub fn optimize_preindex(
    rate: impl Fn(f64, f64, f64) -> f64,
    tolerance: f64,
) -> Result<((f64, f64, f64), f64)> {
    let (p_seed, v_seed) = optimize_scalar(|p| rate(p, 1.0, 0.0), tolerance)?;
    let mut best_x = (p_seed, 1.0, 0.0);
    let mut best_v = v_seed;

    const G: usize = 21;
    for i in 0..G {
        let p = i as f64 / (G - 1) as f64;
        for j in 0..G {
            let p0 = j as f64 / (G - 1) as f64;
            for k in 0..G {
                let p1 = k as f64 / (G - 1) as f64;
                let v = rate(p, p0, p1);
                if v.is_nan() {
                    return Err(Error::Evaluation {
                        at: p,
                        best_x: best_x.0,
                        best_value: best_v,
                    });
                }
                if v > best_v {
                    best_v = v;
                    best_x = (p, p0, p1);
                }
            }
        }
    }

    for _sweep in 0..3 {
        let sweep_start = best_v;
        for coord in 0..3 {
            let anchor = best_x;
            let line = |t: f64| match coord {
                0 => rate(t, anchor.1, anchor.2),
                1 => rate(anchor.0, t, anchor.2),
                _ => rate(anchor.0, anchor.1, t),
            };
            let (t, v) = grid_then_golden(&line, 41, tolerance)?;
            if v > best_v {
                best_v = v;
                match coord {
                    0 => best_x.0 = t,
                    1 => best_x.1 = t,
                    _ => best_x.2 = t,
                }
            }
        }
        if best_v - sweep_start < tolerance {
            break;
        }
    }
    Ok((best_x, best_v))
}

// ---------------------------------------------------------------------------
// One-way rates and capacities
// ---------------------------------------------------------------------------

/// Signed one-way secrecy rate under threshold detection on both sides:
/// legitimate information minus eavesdropper information at input
/// distribution `(p, 1-p)`.
pub fn rate_oneway_threshold(
    params: &ChannelParams,
    kappa: u32,
    kappa_prime: u32,
    p: f64,
) -> Result<f64> {
    check_probability("p", p)?;
    let legit = BinaryMi::new(reduce_to_binary(params, Side::Legitimate, kappa));
    let eve = BinaryMi::new(reduce_to_binary(params, Side::Eavesdropper, kappa_prime));
    Ok(legit.eval(p) - eve.eval(p))
}

/// Signed one-way secrecy rate under PNR detection on both sides.
pub fn rate_oneway_pnr(params: &ChannelParams, p: f64) -> Result<f64> {
    check_probability("p", p)?;
    let legit = PnrKernel::new(params.xi(), params.zeta())?;
    let (exi, ezeta) = params.eavesdropper_as_legitimate();
    let eve = PnrKernel::new(exi, ezeta)?;
    Ok(legit.mi(p) - eve.mi(p))
}

fn oneway_result(
    class: DegradationClass,
    regime: Regime,
    plain: impl Fn(f64) -> f64,
    preindexed: impl Fn(f64, f64, f64) -> f64,
) -> Result<SecrecyResult> {
    match class {
        DegradationClass::AntiDegraded | DegradationClass::Both => Ok(SecrecyResult {
            value: 0.0,
            p_opt: None,
            preindex_opt: None,
            degradation: class,
            regime,
            formula_path: FormulaPath::Plain,
        }),
        DegradationClass::Degraded => {
            let (p, v) = optimize_scalar(plain, DEFAULT_TOLERANCE)?;
            Ok(SecrecyResult {
                value: v.max(0.0),
                p_opt: Some(p),
                preindex_opt: None,
                degradation: class,
                regime,
                formula_path: FormulaPath::Plain,
            })
        }
        DegradationClass::Neither => {
            let ((p, p0, p1), v) = optimize_preindex(preindexed, DEFAULT_TOLERANCE)?;
            Ok(SecrecyResult {
                value: v.max(0.0),
                p_opt: Some(p),
                preindex_opt: Some((p0, p1)),
                degradation: class,
                regime,
                formula_path: FormulaPath::PreIndex,
            })
        }
    }
}

/// One-way secrecy capacity under threshold detection: classify the pair,
/// then maximize the plain rate (degraded), report zero (anti-degraded),
/// or maximize the pre-index rate (neither).
pub fn capacity_oneway_threshold(
    params: &ChannelParams,
    kappa: u32,
    kappa_prime: u32,
) -> Result<SecrecyResult> {
    let cls = classify_threshold(params, kappa, kappa_prime);
    let legit = BinaryMi::new(reduce_to_binary(params, Side::Legitimate, kappa));
    let eve = BinaryMi::new(reduce_to_binary(params, Side::Eavesdropper, kappa_prime));
    oneway_result(
        cls.class,
        Regime::OwThreshold,
        |p| legit.eval(p) - eve.eval(p),
        |p, p0, p1| legit.eval_preindex(p0, p1, p) - eve.eval_preindex(p0, p1, p),
    )
}

/// One-way secrecy capacity under PNR detection on both sides.
pub fn capacity_oneway_pnr(params: &ChannelParams) -> Result<SecrecyResult> {
    let cls = classify_pnr(params);
    let legit = PnrKernel::new(params.xi(), params.zeta())?;
    let (exi, ezeta) = params.eavesdropper_as_legitimate();
    let eve = PnrKernel::new(exi, ezeta)?;
    oneway_result(
        cls.class,
        Regime::OwPnr,
        |p| legit.mi(p) - eve.mi(p),
        |p, p0, p1| legit.mi_preindex(p0, p1, p) - eve.mi_preindex(p0, p1, p),
    )
}

/// One-way PNR capacity via the closed-form integrand
/// `max_p (g(xi, 1-p) - g(gamma_gp xi, 1-p))_+`, defined for matched dark
/// counts (`gamma_np = 1`).
///
/// The closed form is the continuous-observation limit of the
/// photon-counting channel: it coincides with the slotted series formula
/// only as the per-slot intensities tend to zero, and overstates it at
/// moderate intensity. See the series route [`capacity_oneway_pnr`] for
/// the slotted model itself.
pub fn capacity_oneway_pnr_closedform(params: &ChannelParams) -> Result<SecrecyResult> {
    if (params.gamma_np() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain {
            what: "gamma_np",
            value: params.gamma_np(),
            expected: "exactly 1 for the closed form",
        });
    }
    let (xi, zeta, g) = (params.xi(), params.zeta(), params.gamma_gp());
    // Arguments stay inside the validated domain for every p in [0, 1].
    let f = |p: f64| {
        g_closed_form(xi, 1.0 - p, zeta).unwrap() - g_closed_form(g * xi, 1.0 - p, zeta).unwrap()
    };
    let (p, v) = optimize_scalar(f, DEFAULT_TOLERANCE)?;
    Ok(SecrecyResult {
        value: v.max(0.0),
        p_opt: Some(p),
        preindex_opt: None,
        degradation: classify_pnr(params).class,
        regime: Regime::OwPnr,
        formula_path: FormulaPath::Plain,
    })
}

// ---------------------------------------------------------------------------
// Two-way rates and capacities
// ---------------------------------------------------------------------------

/// Posterior decomposition of Bob's bit given a threshold-detecting
/// eavesdropper: branch `i` is the eavesdropper bit `i`.
pub fn posterior_decomposition_threshold(
    params: &ChannelParams,
    kappa_prime: u32,
    p: f64,
) -> Result<PosteriorDecomposition> {
    check_probability("p", p)?;
    let (e0, e1) = params.eavesdropper_means();
    let t0 = tau(e0, kappa_prime)?;
    let t1 = tau(e1, kappa_prime)?;
    let q0 = p * t0 + (1.0 - p) * t1;
    let q1 = 1.0 - q0;
    let post0 = if q0 > 0.0 {
        (p * t0 / q0).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let post1 = if q1 > 0.0 {
        (p * (1.0 - t0) / q1).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(PosteriorDecomposition {
        weights: vec![q0, q1],
        posteriors: vec![post0, post1],
    })
}

/// Posterior decomposition of Bob's bit given a PNR eavesdropper: branch
/// `n` is the observed count, truncated at the shared tail rule.
pub fn posterior_decomposition_pnr(
    params: &ChannelParams,
    p: f64,
) -> Result<PosteriorDecomposition> {
    check_probability("p", p)?;
    let (e0, e1) = params.eavesdropper_means();
    let len = n_trunc(e0.max(e1)) as usize + 1;
    let mut weights = Vec::with_capacity(len);
    let mut posteriors = Vec::with_capacity(len);
    for n in 0..len {
        let a = p * poisson_pmf(e0, n as u32)?;
        let b = (1.0 - p) * poisson_pmf(e1, n as u32)?;
        let q = a + b;
        weights.push(q);
        posteriors.push(if q > 0.0 {
            (a / q).clamp(0.0, 1.0)
        } else {
            0.0
        });
    }
    Ok(PosteriorDecomposition {
        weights,
        posteriors,
    })
}

fn twoway_posterior_sum(legit: &BinaryMi, decomposition: &PosteriorDecomposition) -> f64 {
    decomposition
        .weights
        .iter()
        .zip(&decomposition.posteriors)
        .filter(|(&q, _)| q > 0.0)
        .map(|(&q, &post)| q * legit.eval(post))
        .sum()
}

/// Two-way secrecy rate with a threshold-detecting eavesdropper at Bob's
/// bit distribution `(p, 1-p)`: the conditional mutual information between
/// Alice's detected bit and Bob's bit given the eavesdropper's bit.
pub fn rate_twoway_threshold(
    params: &ChannelParams,
    kappa: u32,
    kappa_prime: u32,
    p: f64,
) -> Result<f64> {
    let decomposition = posterior_decomposition_threshold(params, kappa_prime, p)?;
    let legit = BinaryMi::new(reduce_to_binary(params, Side::Legitimate, kappa));
    Ok(twoway_posterior_sum(&legit, &decomposition))
}

/// Two-way secrecy rate with a PNR eavesdropper at Bob's bit distribution
/// `(p, 1-p)`.
pub fn rate_twoway_pnr(params: &ChannelParams, kappa: u32, p: f64) -> Result<f64> {
    let decomposition = posterior_decomposition_pnr(params, p)?;
    let legit = BinaryMi::new(reduce_to_binary(params, Side::Legitimate, kappa));
    Ok(twoway_posterior_sum(&legit, &decomposition))
}

/// Two-way secrecy capacity with a threshold-detecting eavesdropper;
/// strictly positive whenever the signal is non-trivial and the
/// eavesdropper's reduced channel is not noiseless, and never below the
/// one-way threshold capacity.
pub fn capacity_twoway_threshold(
    params: &ChannelParams,
    kappa: u32,
    kappa_prime: u32,
) -> Result<SecrecyResult> {
    let legit = BinaryMi::new(reduce_to_binary(params, Side::Legitimate, kappa));
    let (e0, e1) = params.eavesdropper_means();
    let t0 = tau(e0, kappa_prime)?;
    let t1 = tau(e1, kappa_prime)?;
    let rate = |p: f64| {
        let q0 = p * t0 + (1.0 - p) * t1;
        let q1 = 1.0 - q0;
        let mut s = 0.0;
        if q0 > 0.0 {
            s += q0 * legit.eval((p * t0 / q0).clamp(0.0, 1.0));
        }
        if q1 > 0.0 {
            s += q1 * legit.eval((p * (1.0 - t0) / q1).clamp(0.0, 1.0));
        }
        s
    };
    let (p, v) = optimize_scalar(rate, DEFAULT_TOLERANCE)?;
    Ok(SecrecyResult {
        value: v.max(0.0),
        p_opt: Some(p),
        preindex_opt: None,
        degradation: classify_threshold(params, kappa, kappa_prime).class,
        regime: Regime::TwThreshold,
        formula_path: FormulaPath::Plain,
    })
}

/// Two-way secrecy capacity with a PNR eavesdropper; never above the
/// threshold-eavesdropper two-way capacity, since the threshold bit is a
/// function of the count.
pub fn capacity_twoway_pnr(params: &ChannelParams, kappa: u32) -> Result<SecrecyResult> {
    let legit = BinaryMi::new(reduce_to_binary(params, Side::Legitimate, kappa));
    let (e0, e1) = params.eavesdropper_means();
    let len = n_trunc(e0.max(e1)) as usize + 1;
    let pmf_e0: Vec<f64> = (0..len)
        .map(|n| poisson_pmf(e0, n as u32).unwrap())
        .collect();
    let pmf_e1: Vec<f64> = (0..len)
        .map(|n| poisson_pmf(e1, n as u32).unwrap())
        .collect();
    let rate = |p: f64| {
        let mut s = 0.0;
        for n in 0..len {
            let a = p * pmf_e0[n];
            let b = (1.0 - p) * pmf_e1[n];
            let q = a + b;
            if q > 0.0 {
                s += q * legit.eval((a / q).clamp(0.0, 1.0));
            }
        }
        s
    };
    let (p, v) = optimize_scalar(rate, DEFAULT_TOLERANCE)?;
    Ok(SecrecyResult {
        value: v.max(0.0),
        p_opt: Some(p),
        preindex_opt: None,
        degradation: classify_pnr(params).class,
        regime: Regime::TwPnr,
        formula_path: FormulaPath::Plain,
    })
}
