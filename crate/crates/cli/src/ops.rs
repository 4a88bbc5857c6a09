//! The work behind each subcommand, kept binary-free so the test suites
//! can call it directly.

use crate::{strictly_increasing, CliError, Units};
use poisson_wiretap::capacity::{
    capacity_oneway_pnr, capacity_oneway_threshold, capacity_twoway_pnr, capacity_twoway_threshold,
    SecrecyResult,
};
use poisson_wiretap::channel::{ChannelParams, DetectorConfig};
use poisson_wiretap::simulate::{estimate_conditional_mi, SimulationConfig, SimulationReport};
use rayon::prelude::*;

/// Capacity figures addressable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeSel {
    OwThreshold,
    OwPnr,
    TwThreshold,
    TwPnr,
}

impl RegimeSel {
    pub const ALL: [RegimeSel; 4] = [
        RegimeSel::OwThreshold,
        RegimeSel::OwPnr,
        RegimeSel::TwThreshold,
        RegimeSel::TwPnr,
    ];

    pub fn parse(token: &str) -> Result<Self, CliError> {
        match token {
            "ow-threshold" => Ok(RegimeSel::OwThreshold),
            "ow-pnr" => Ok(RegimeSel::OwPnr),
            "tw-threshold" => Ok(RegimeSel::TwThreshold),
            "tw-pnr" => Ok(RegimeSel::TwPnr),
            other => Err(CliError::Usage(format!(
                "unknown regime {other:?}; expected one of ow-threshold, ow-pnr, tw-threshold, tw-pnr"
            ))),
        }
    }

    pub fn token(&self) -> &'static str {
        match self {
            RegimeSel::OwThreshold => "ow-threshold",
            RegimeSel::OwPnr => "ow-pnr",
            RegimeSel::TwThreshold => "tw-threshold",
            RegimeSel::TwPnr => "tw-pnr",
        }
    }

    fn column_stem(&self) -> &'static str {
        match self {
            RegimeSel::OwThreshold => "ow_threshold",
            RegimeSel::OwPnr => "ow_pnr",
            RegimeSel::TwThreshold => "tw_threshold",
            RegimeSel::TwPnr => "tw_pnr",
        }
    }

    pub fn is_one_way(&self) -> bool {
        matches!(self, RegimeSel::OwThreshold | RegimeSel::OwPnr)
    }
}

/// The full parameter point a command evaluates at.
#[derive(Debug, Clone, Copy)]
pub struct BaseParams {
    pub xi: f64,
    pub zeta: f64,
    pub gamma_gp: f64,
    pub gamma_np: f64,
    pub kappa: u32,
    pub kappa_prime: u32,
}

impl BaseParams {
    pub fn channel(&self) -> Result<ChannelParams, CliError> {
        Ok(ChannelParams::new(
            self.xi,
            self.zeta,
            self.gamma_gp,
            self.gamma_np,
        )?)
    }

    fn with_xi(mut self, xi: f64) -> Self {
        self.xi = xi;
        self
    }

    fn with_gamma_gp(mut self, gamma_gp: f64) -> Self {
        self.gamma_gp = gamma_gp;
        self
    }
}

/// Evaluate one capacity figure at a parameter point.
pub fn evaluate_regime(regime: RegimeSel, base: &BaseParams) -> Result<SecrecyResult, CliError> {
    let params = base.channel()?;
    let result = match regime {
        RegimeSel::OwThreshold => capacity_oneway_threshold(&params, base.kappa, base.kappa_prime)?,
        RegimeSel::OwPnr => capacity_oneway_pnr(&params)?,
        RegimeSel::TwThreshold => capacity_twoway_threshold(&params, base.kappa, base.kappa_prime)?,
        RegimeSel::TwPnr => capacity_twoway_pnr(&params, base.kappa)?,
    };
    Ok(result)
}

/// `%.6e`-style rendering: six fractional digits, explicit exponent sign,
/// at least two exponent digits.
pub fn fmt_e6(x: f64) -> String {
    if x == 0.0 {
        return "0.000000e+00".to_string();
    }
    let s = format!("{x:.6e}");
    let (mantissa, exponent) = s.split_once('e').expect("exponential format");
    let exp: i32 = exponent.parse().expect("integer exponent");
    format!(
        "{mantissa}e{}{:02}",
        if exp < 0 { "-" } else { "+" },
        exp.abs()
    )
}

/// Capacity cell rendering: optimizer noise below 1e-12 nats prints as
/// zero, everything else converts to the requested units.
fn capacity_cell(value_nats: f64, units: Units) -> String {
    if value_nats < 1e-12 {
        fmt_e6(0.0)
    } else {
        fmt_e6(units.convert(value_nats))
    }
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Xi,
    GammaGp,
}

impl SweepVariable {
    pub fn parse(token: &str) -> Result<Self, CliError> {
        match token {
            "xi" => Ok(SweepVariable::Xi),
            "gamma-gp" | "gamma_gp" => Ok(SweepVariable::GammaGp),
            other => Err(CliError::Usage(format!(
                "unknown sweep variable {other:?}; expected xi or gamma-gp"
            ))),
        }
    }

    fn column(&self) -> &'static str {
        match self {
            SweepVariable::Xi => "xi",
            SweepVariable::GammaGp => "gamma_gp",
        }
    }
}

/// A sweep over one parameter: grid definition, the fixed remaining
/// parameters, the capacity figures to tabulate, and output units.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub base: BaseParams,
    pub regimes: Vec<RegimeSel>,
    pub units: Units,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !strictly_increasing(self.start, self.stop) {
            return Err(CliError::Usage(format!(
                "sweep start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        if self.steps < 2 {
            return Err(CliError::Usage("sweep needs at least 2 steps".into()));
        }
        self.base.channel()?;
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    fn at(&self, value: f64) -> BaseParams {
        match self.variable {
            SweepVariable::Xi => self.base.with_xi(value),
            SweepVariable::GammaGp => self.base.with_gamma_gp(value),
        }
    }
}

/// Run the sweep and render the CSV: UTF-8, comma-separated, header row,
/// `%.6e` floats, LF line endings. Rows are ordered by the swept value;
/// grid points evaluate in parallel. Identical specs produce byte-identical
/// output.
pub fn run_sweep(spec: &SweepSpec) -> Result<String, CliError> {
    spec.validate()?;

    let mut header: Vec<String> = vec![spec.variable.column().to_string()];
    for regime in &spec.regimes {
        let stem = regime.column_stem();
        header.push(format!("{stem}_capacity"));
        header.push(format!("{stem}_p_opt"));
        if regime.is_one_way() {
            header.push(format!("{stem}_class"));
        }
    }
    let mut csv = header.join(",");
    csv.push('\n');
    if spec.regimes.is_empty() {
        return Ok(csv);
    }

    let rows: Result<Vec<String>, CliError> = spec
        .grid()
        .par_iter()
        .map(|&value| {
            let base = spec.at(value);
            let mut cells = vec![fmt_e6(value)];
            for regime in &spec.regimes {
                let result = evaluate_regime(*regime, &base)?;
                cells.push(capacity_cell(result.value, spec.units));
                cells.push(result.p_opt.map(fmt_e6).unwrap_or_default());
                if regime.is_one_way() {
                    cells.push(result.degradation.to_string());
                }
            }
            Ok(cells.join(","))
        })
        .collect();
    for row in rows? {
        csv.push_str(&row);
        csv.push('\n');
    }
    Ok(csv)
}

// ---------------------------------------------------------------------------
// Crossover and optimal-signal search
// ---------------------------------------------------------------------------

/// Where two capacity curves cross along `gamma_gp`.
#[derive(Debug, Clone, Copy)]
pub struct Crossover {
    pub gamma_gp: f64,
    pub capacity_a: f64,
    pub capacity_b: f64,
}

/// Bisection on `gamma_gp` for the crossing of two regime capacities.
/// The bracket must straddle a sign change of their difference; the search
/// stops when the bracket is narrower than 1e-5.
pub fn find_crossover(
    base: &BaseParams,
    regime_a: RegimeSel,
    regime_b: RegimeSel,
    bracket: (f64, f64),
) -> Result<Crossover, CliError> {
    let (mut lo, mut hi) = bracket;
    if !strictly_increasing(lo, hi) {
        return Err(CliError::Usage(format!(
            "bracket ({lo}, {hi}) must be increasing"
        )));
    }
    let gap = |gamma: f64| -> Result<f64, CliError> {
        let at = base.with_gamma_gp(gamma);
        Ok(evaluate_regime(regime_a, &at)?.value - evaluate_regime(regime_b, &at)?.value)
    };
    let gap_lo = gap(lo)?;
    let gap_hi = gap(hi)?;
    if gap_lo.signum() == gap_hi.signum() {
        return Err(CliError::Compute(format!(
            "no sign change of {}-{} difference over bracket: \
             difference {} at gamma_gp = {lo}, {} at gamma_gp = {hi}",
            regime_a.token(),
            regime_b.token(),
            fmt_e6(gap_lo),
            fmt_e6(gap_hi),
        )));
    }
    let mut sign_lo = gap_lo.signum();
    while hi - lo > 1e-5 {
        let mid = 0.5 * (lo + hi);
        let gap_mid = gap(mid)?;
        if gap_mid.signum() == sign_lo {
            lo = mid;
            sign_lo = gap_mid.signum();
        } else {
            hi = mid;
        }
    }
    let gamma_gp = 0.5 * (lo + hi);
    let at = base.with_gamma_gp(gamma_gp);
    Ok(Crossover {
        gamma_gp,
        capacity_a: evaluate_regime(regime_a, &at)?.value,
        capacity_b: evaluate_regime(regime_b, &at)?.value,
    })
}

/// Result of maximizing a capacity over the signal strength.
#[derive(Debug, Clone, Copy)]
pub struct XiOptimum {
    pub xi: f64,
    pub value: f64,
    /// Set when the coarse scan peaks at a bracket end: the objective is
    /// monotone over the bracket and the boundary is returned.
    pub monotone: bool,
}

/// Golden-section maximization of a regime capacity over `xi` in the
/// bracket, to an abscissa tolerance of 1e-4.
pub fn optimize_xi(
    base: &BaseParams,
    regime: RegimeSel,
    bracket: (f64, f64),
) -> Result<XiOptimum, CliError> {
    let (lo, hi) = bracket;
    if !strictly_increasing(lo, hi) || lo < 0.0 {
        return Err(CliError::Usage(format!(
            "bracket ({lo}, {hi}) must be increasing and non-negative"
        )));
    }
    let objective = |xi: f64| -> Result<f64, CliError> {
        Ok(evaluate_regime(regime, &base.with_xi(xi))?.value)
    };

    const COARSE: usize = 33;
    let mut values = Vec::with_capacity(COARSE);
    for i in 0..COARSE {
        let xi = lo + (hi - lo) * i as f64 / (COARSE - 1) as f64;
        values.push((xi, objective(xi)?));
    }
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("non-empty scan")
        .0;
    if best == 0 || best == COARSE - 1 {
        return Ok(XiOptimum {
            xi: values[best].0,
            value: values[best].1,
            monotone: true,
        });
    }

    let (mut a, mut b) = (values[best - 1].0, values[best + 1].0);
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    while b - a > 1e-4 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = objective(d)?;
        }
    }
    let xi = 0.5 * (a + b);
    Ok(XiOptimum {
        xi,
        value: objective(xi)?,
        monotone: false,
    })
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

/// Outcome of a validation run: the report, its JSON rendering, and
/// whether the empirical rate landed within three bootstrap standard
/// errors of the analytic rate.
pub struct SimulationOutcome {
    pub report: SimulationReport,
    pub json: String,
    pub within_band: bool,
}

/// Run the Monte Carlo validator and render the JSON report. Rates and
/// the standard error convert to the requested units; counts do not.
pub fn run_simulation(
    config: &SimulationConfig,
    units: Units,
) -> Result<SimulationOutcome, CliError> {
    let report = estimate_conditional_mi(config)?;
    let within_band =
        (report.empirical_rate - report.analytic_rate).abs() <= 3.0 * report.standard_error;
    let counts: serde_json::Map<String, serde_json::Value> = report
        .counts
        .iter()
        .map(|(k, &v)| (k.clone(), serde_json::Value::from(v)))
        .collect();
    let json = serde_json::json!({
        "empirical_rate": units.convert(report.empirical_rate),
        "analytic_rate": units.convert(report.analytic_rate),
        "standard_error": units.convert(report.standard_error),
        "samples": report.samples,
        "seed": report.seed,
        "degenerate_cells": report.degenerate_cells,
        "units": units.label(),
        "counts": serde_json::Value::Object(counts),
    });
    let json = serde_json::to_string_pretty(&json).expect("serializable report");
    Ok(SimulationOutcome {
        report,
        json,
        within_band,
    })
}

/// Human-readable rendering of a capacity evaluation.
pub fn render_capacity(result: &SecrecyResult, units: Units) -> String {
    let mut out = String::new();
    out.push_str(&format!("regime: {}\n", result.regime));
    out.push_str(&format!(
        "value: {} {}\n",
        fmt_e6(units.convert(result.value)),
        units.label()
    ));
    match result.p_opt {
        Some(p) => out.push_str(&format!("p_opt: {}\n", fmt_e6(p))),
        None => out.push_str("p_opt: -\n"),
    }
    if let Some((p0, p1)) = result.preindex_opt {
        out.push_str(&format!("preindex_p0: {}\n", fmt_e6(p0)));
        out.push_str(&format!("preindex_p1: {}\n", fmt_e6(p1)));
    }
    out.push_str(&format!("degradation: {}\n", result.degradation));
    out.push_str(&format!(
        "formula: {}\n",
        match result.formula_path {
            poisson_wiretap::FormulaPath::Plain => "plain",
            poisson_wiretap::FormulaPath::PreIndex => "pre-index",
        }
    ));
    out
}

/// Parse an eavesdropper detector token: `pnr` or `threshold` (threshold
/// count from `kappa_prime`).
pub fn parse_detector(token: &str, kappa_prime: u32) -> Result<DetectorConfig, CliError> {
    match token {
        "pnr" => Ok(DetectorConfig::Pnr),
        "threshold" => Ok(DetectorConfig::Threshold(kappa_prime)),
        other => Err(CliError::Usage(format!(
            "unknown eavesdropper detector {other:?}; expected threshold or pnr"
        ))),
    }
}
