//! Entropy and mutual-information kernels for the binary-input Poisson
//! channel.
//!
//! Everything is in nats; the reporting layer converts to bits on request.
//! Threshold detection reduces to a binary channel `(r0, r1)` and its
//! mutual information is the usual entropy difference
//! `h(p r0 + (1-p) r1) - p h(r0) - (1-p) h(r1)`. Photon-number-resolving
//! (PNR) detection keeps the count; its mixture-entropy series drops the
//! `ln n!` term, which cancels between the output entropy and the
//! conditional entropy and keeps every summand bounded.

use crate::channel::{ln_factorial, n_trunc, poisson_pmf, tau, BinaryChannel};
use crate::error::{check_finite_nonneg, check_probability, Result};

/// A binary input distribution: `p` is the probability of symbol 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputDistribution(f64);

impl InputDistribution {
    pub fn new(p: f64) -> Result<Self> {
        Ok(Self(check_probability("p", p)?))
    }

    pub fn p(&self) -> f64 {
        self.0
    }
}

/// A two-branch randomization prepended to the channel input: a binary
/// index `V` with `P(V=0) = p` selects the input law, `P(X=0 | V=i) = p_i`.
/// `(p0, p1) = (1, 0)` makes `V = X` and recovers the plain input
/// distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreIndex {
    p0: f64,
    p1: f64,
    p: f64,
}

impl PreIndex {
    pub fn new(p0: f64, p1: f64, p: f64) -> Result<Self> {
        Ok(Self {
            p0: check_probability("p0", p0)?,
            p1: check_probability("p1", p1)?,
            p: check_probability("p", p)?,
        })
    }

    /// The identity pre-index `(1, 0, p)`, under which `V = X`.
    pub fn identity(p: f64) -> Result<Self> {
        Self::new(1.0, 0.0, p)
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Binary entropy `-q ln q - (1-q) ln(1-q)` in nats, with `0 ln 0 = 0`.
pub fn binary_entropy(q: f64) -> Result<f64> {
    check_probability("q", q)?;
    Ok(binary_entropy_unchecked(q))
}

pub(crate) fn binary_entropy_unchecked(q: f64) -> f64 {
    if q <= 0.0 || q >= 1.0 {
        return 0.0;
    }
    -q * q.ln() - (1.0 - q) * (1.0 - q).ln()
}

/// A binary channel with its branch entropies cached, so mutual information
/// can be evaluated repeatedly over input distributions.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BinaryMi {
    r0: f64,
    r1: f64,
    h0: f64,
    h1: f64,
}

impl BinaryMi {
    pub(crate) fn new(channel: BinaryChannel) -> Self {
        Self {
            r0: channel.r0,
            r1: channel.r1,
            h0: binary_entropy_unchecked(channel.r0),
            h1: binary_entropy_unchecked(channel.r1),
        }
    }

    /// Mutual information at input distribution `(p, 1-p)`, clamped at 0
    /// against rounding noise. A useless channel (`r0 == r1`) is exactly 0
    /// rather than mixture-rounding noise.
    pub(crate) fn eval(&self, p: f64) -> f64 {
        if self.r0 == self.r1 {
            return 0.0;
        }
        let mix = p * self.r0 + (1.0 - p) * self.r1;
        (binary_entropy_unchecked(mix) - p * self.h0 - (1.0 - p) * self.h1).max(0.0)
    }

    /// Mutual information between the pre-index `V` and the output.
    pub(crate) fn eval_preindex(&self, p0: f64, p1: f64, p: f64) -> f64 {
        let t0 = p0 * self.r0 + (1.0 - p0) * self.r1;
        let t1 = p1 * self.r0 + (1.0 - p1) * self.r1;
        let mix = p * t0 + (1.0 - p) * t1;
        (binary_entropy_unchecked(mix)
            - p * binary_entropy_unchecked(t0)
            - (1.0 - p) * binary_entropy_unchecked(t1))
        .max(0.0)
    }
}

fn threshold_mi_kernel(xi: f64, zeta: f64, kappa: u32) -> Result<BinaryMi> {
    check_finite_nonneg("xi", xi)?;
    check_finite_nonneg("zeta", zeta)?;
    Ok(BinaryMi::new(BinaryChannel {
        r0: tau(zeta, kappa)?,
        r1: tau(xi + zeta, kappa)?,
    }))
}

/// Mutual information of the threshold-detected channel at input
/// distribution `(p, 1-p)`, in nats.
pub fn mi_threshold(xi: f64, zeta: f64, p: f64, kappa: u32) -> Result<f64> {
    check_probability("p", p)?;
    Ok(threshold_mi_kernel(xi, zeta, kappa)?.eval(p))
}

/// Mutual information between the pre-index variable and the
/// threshold-detected output. Reduces to [`mi_threshold`] at the identity
/// pre-index.
pub fn mi_threshold_preindex(xi: f64, zeta: f64, pre: &PreIndex, kappa: u32) -> Result<f64> {
    Ok(threshold_mi_kernel(xi, zeta, kappa)?.eval_preindex(pre.p0, pre.p1, pre.p))
}

/// Precomputed Poisson mass arrays for one channel, truncated at the tail
/// rule shared with [`n_trunc`] (the larger of the two means decides the
/// cutoff). Evaluates the PNR mixture entropy and mutual information for
/// any mixing weight without re-deriving the series.
#[derive(Debug, Clone)]
pub(crate) struct PnrKernel {
    pmf0: Vec<f64>,
    pmf1: Vec<f64>,
    ln_fact: Vec<f64>,
    h_pure0: f64,
    h_pure1: f64,
}

impl PnrKernel {
    pub(crate) fn new(xi: f64, zeta: f64) -> Result<Self> {
        check_finite_nonneg("xi", xi)?;
        check_finite_nonneg("zeta", zeta)?;
        let (mean0, mean1) = (zeta, xi + zeta);
        let len = n_trunc(mean0.max(mean1)) as usize + 1;
        let pmf0: Vec<f64> = (0..len)
            .map(|n| poisson_pmf(mean0, n as u32).unwrap())
            .collect();
        let pmf1: Vec<f64> = (0..len)
            .map(|n| poisson_pmf(mean1, n as u32).unwrap())
            .collect();
        let ln_fact: Vec<f64> = (0..len).map(|n| ln_factorial(n as u32)).collect();
        let mut kernel = Self {
            pmf0,
            pmf1,
            ln_fact,
            h_pure0: 0.0,
            h_pure1: 0.0,
        };
        kernel.h_pure0 = kernel.h(1.0);
        kernel.h_pure1 = kernel.h(0.0);
        Ok(kernel)
    }

    /// Mixture entropy with the `ln n!` factor cancelled:
    /// `-sum_n q_n (ln q_n + ln n!)` where `q_n` is the output mass under
    /// mixing weight `p` on the bit-0 branch.
    pub(crate) fn h(&self, p: f64) -> f64 {
        let mut s = 0.0;
        for n in 0..self.pmf0.len() {
            let q = p * self.pmf0[n] + (1.0 - p) * self.pmf1[n];
            if q > 0.0 {
                s -= q * (q.ln() + self.ln_fact[n]);
            }
        }
        s
    }

    pub(crate) fn mi(&self, p: f64) -> f64 {
        (self.h(p) - p * self.h_pure0 - (1.0 - p) * self.h_pure1).max(0.0)
    }

    /// Pre-index mutual information: the outer mixture carries overall
    /// weight `p p0 + (1-p) p1` on the bit-0 branch.
    pub(crate) fn mi_preindex(&self, p0: f64, p1: f64, p: f64) -> f64 {
        let w = p * p0 + (1.0 - p) * p1;
        (self.h(w) - p * self.h(p0) - (1.0 - p) * self.h(p1)).max(0.0)
    }
}

/// PNR mixture entropy in nats with the `ln n!` factor cancelled; `p` is
/// the weight of the bit-0 (mean `zeta`) branch.
pub fn h_pnr(xi: f64, zeta: f64, p: f64) -> Result<f64> {
    check_probability("p", p)?;
    Ok(PnrKernel::new(xi, zeta)?.h(p))
}

/// Mutual information of the PNR-detected channel at input distribution
/// `(p, 1-p)`, in nats. Dominates [`mi_threshold`] for every threshold
/// since the threshold bit is a function of the count.
pub fn mi_pnr(xi: f64, zeta: f64, p: f64) -> Result<f64> {
    check_probability("p", p)?;
    Ok(PnrKernel::new(xi, zeta)?.mi(p))
}

/// Pre-index mutual information for the PNR-detected channel. Reduces to
/// [`mi_pnr`] at the identity pre-index.
pub fn mi_pnr_preindex(xi: f64, zeta: f64, pre: &PreIndex) -> Result<f64> {
    Ok(PnrKernel::new(xi, zeta)?.mi_preindex(pre.p0, pre.p1, pre.p))
}

/// Closed-form capacity integrand
/// `q (xi+zeta) ln(xi+zeta) - (q xi + zeta) ln(q xi + zeta) + (1-q) zeta ln zeta`
/// with the `0 ln 0 = 0` convention covering the `zeta = 0` limit.
/// `q` is the duty cycle (probability of the on symbol).
pub fn g_closed_form(xi: f64, q: f64, zeta: f64) -> Result<f64> {
    check_finite_nonneg("xi", xi)?;
    check_probability("q", q)?;
    check_finite_nonneg("zeta", zeta)?;
    fn xlnx(x: f64) -> f64 {
        if x > 0.0 {
            x * x.ln()
        } else {
            0.0
        }
    }
    Ok(q * xlnx(xi + zeta) - xlnx(q * xi + zeta) + (1.0 - q) * xlnx(zeta))
}
