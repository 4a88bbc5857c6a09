//! Flag parsing, config-file merging, and command dispatch.
//!
//! Every value flag can also come from a TOML config file passed with
//! `--config`; the file's keys equal the long flag names (`xi = 1.35`,
//! `gamma-gp = 2.0`, `regime = "tw-pnr"`). Explicit flags override file
//! values.

use crate::ops::{self, BaseParams, RegimeSel, SweepSpec, SweepVariable};
use crate::{CliError, Units};
use clap::{Args, Parser, Subcommand};
use poisson_wiretap::simulate::SimulationConfig;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "poisson-wiretap",
    version,
    about = "Secrecy capacities of the on-off-keyed Poisson wiretap channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate one secrecy capacity at a parameter point
    Capacity(CapacityArgs),
    /// Sweep xi or gamma-gp and tabulate capacities to CSV
    Sweep(SweepArgs),
    /// Locate the gamma-gp where two regime capacities cross
    Crossover(CrossoverArgs),
    /// Maximize a regime capacity over the signal strength xi
    OptimizeXi(OptimizeXiArgs),
    /// Validate the analytic two-way rate with a seeded Monte Carlo run
    Simulate(SimulateArgs),
}

/// Flags shared by every subcommand.
#[derive(Args, Debug)]
pub struct CommonArgs {
    /// TOML config file supplying any of the flags by name
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Report information quantities in bits instead of nats
    #[arg(long)]
    pub bits: bool,
    /// Mean signal photon count per slot
    #[arg(long)]
    pub xi: Option<f64>,
    /// Mean dark/scatter photon count per slot
    #[arg(long)]
    pub zeta: Option<f64>,
    /// Eavesdropper signal gain ratio
    #[arg(long = "gamma-gp")]
    pub gamma_gp: Option<f64>,
    /// Eavesdropper noise ratio
    #[arg(long = "gamma-np")]
    pub gamma_np: Option<f64>,
    /// Legitimate detection threshold (default 0, the on-off detector)
    #[arg(long)]
    pub kappa: Option<u32>,
    /// Eavesdropper detection threshold (default 0)
    #[arg(long = "kappa-prime")]
    pub kappa_prime: Option<u32>,
}

#[derive(Args, Debug)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Capacity figure: ow-threshold, ow-pnr, tw-threshold, tw-pnr
    #[arg(long)]
    pub regime: Option<String>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Swept parameter: xi or gamma-gp
    #[arg(long)]
    pub variable: Option<String>,
    #[arg(long)]
    pub start: Option<f64>,
    #[arg(long)]
    pub stop: Option<f64>,
    /// Number of grid points (at least 2)
    #[arg(long)]
    pub steps: Option<usize>,
    /// Comma-separated regimes to tabulate; empty for a header-only file
    #[arg(long)]
    pub regimes: Option<String>,
    /// CSV output path
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CrossoverArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// The two regimes whose capacities cross, e.g. tw-pnr,ow-pnr
    #[arg(long)]
    pub pair: Option<String>,
    /// gamma-gp search bracket, e.g. 0.05,3.0
    #[arg(long)]
    pub bracket: Option<String>,
}

#[derive(Args, Debug)]
pub struct OptimizeXiArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Capacity figure to maximize
    #[arg(long)]
    pub regime: Option<String>,
    /// xi search bracket, e.g. 0.1,10
    #[arg(long)]
    pub bracket: Option<String>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Eavesdropper detector: threshold or pnr
    #[arg(long)]
    pub eve: Option<String>,
    /// Probability that Bob's bit is 0
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON report path; stdout when omitted
    #[arg(long)]
    pub output: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Config-file merging
// ---------------------------------------------------------------------------

/// Values loaded from `--config`, looked up by flag name.
pub struct FileConfig(toml::Table);

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self(toml::Table::new())),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                let table = text
                    .parse::<toml::Table>()
                    .map_err(|e| CliError::Usage(format!("config file: {e}")))?;
                Ok(Self(table))
            }
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(v)) => Ok(Some(*v)),
            Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(other) => Err(bad_type(key, "a number", other)),
        }
    }

    fn integer<T: TryFrom<i64>>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) => T::try_from(*v)
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key {key:?}: {v} is out of range"))),
            Some(other) => Err(bad_type(key, "an integer", other)),
        }
    }

    fn string(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(toml::Value::String(v)) => Ok(Some(v.clone())),
            Some(other) => Err(bad_type(key, "a string", other)),
        }
    }

    fn boolean(&self, key: &str) -> Result<bool, CliError> {
        match self.0.get(key) {
            None => Ok(false),
            Some(toml::Value::Boolean(v)) => Ok(*v),
            Some(other) => Err(bad_type(key, "a boolean", other)),
        }
    }
}

fn bad_type(key: &str, expected: &str, got: &toml::Value) -> CliError {
    CliError::Usage(format!(
        "config key {key:?} must be {expected}, got {}",
        got.type_str()
    ))
}

fn need<T>(value: Option<T>, key: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required value for --{key}")))
}

/// Channel parameters and units after merging flags with the config file.
pub struct Resolved {
    pub file: FileConfig,
    pub units: Units,
    xi: Option<f64>,
    zeta: Option<f64>,
    gamma_gp: Option<f64>,
    gamma_np: Option<f64>,
    kappa: u32,
    kappa_prime: u32,
}

impl Resolved {
    pub fn from_common(common: &CommonArgs) -> Result<Self, CliError> {
        let file = FileConfig::load(common.config.as_deref())?;
        let units = if common.bits || file.boolean("bits")? {
            Units::Bits
        } else {
            Units::Nats
        };
        Ok(Self {
            units,
            xi: common.xi.or(file.f64("xi")?),
            zeta: common.zeta.or(file.f64("zeta")?),
            gamma_gp: common.gamma_gp.or(file.f64("gamma-gp")?),
            gamma_np: common.gamma_np.or(file.f64("gamma-np")?),
            kappa: common.kappa.or(file.integer("kappa")?).unwrap_or(0),
            kappa_prime: common
                .kappa_prime
                .or(file.integer("kappa-prime")?)
                .unwrap_or(0),
            file,
        })
    }

    /// All parameters present; used by point-evaluation commands.
    pub fn base(&self) -> Result<BaseParams, CliError> {
        Ok(BaseParams {
            xi: need(self.xi, "xi")?,
            zeta: need(self.zeta, "zeta")?,
            gamma_gp: need(self.gamma_gp, "gamma-gp")?,
            gamma_np: need(self.gamma_np, "gamma-np")?,
            kappa: self.kappa,
            kappa_prime: self.kappa_prime,
        })
    }

    /// Parameters with the swept variable's slot filled by a placeholder.
    pub fn base_for_sweep(&self, variable: SweepVariable) -> Result<BaseParams, CliError> {
        Ok(BaseParams {
            xi: match variable {
                SweepVariable::Xi => self.xi.unwrap_or(0.0),
                SweepVariable::GammaGp => need(self.xi, "xi")?,
            },
            zeta: need(self.zeta, "zeta")?,
            gamma_gp: match variable {
                SweepVariable::GammaGp => self.gamma_gp.unwrap_or(0.0),
                SweepVariable::Xi => need(self.gamma_gp, "gamma-gp")?,
            },
            gamma_np: need(self.gamma_np, "gamma-np")?,
            kappa: self.kappa,
            kappa_prime: self.kappa_prime,
        })
    }
}

fn parse_bracket(token: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = token.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "bracket {token:?} must be two comma-separated numbers"
        )));
    }
    let lo = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad bracket endpoint {:?}", parts[0])))?;
    let hi = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad bracket endpoint {:?}", parts[1])))?;
    Ok((lo, hi))
}

fn parse_regime_list(token: &str) -> Result<Vec<RegimeSel>, CliError> {
    if token.trim().is_empty() {
        return Ok(Vec::new());
    }
    token
        .split(',')
        .map(|t| RegimeSel::parse(t.trim()))
        .collect()
}

fn parse_pair(token: &str) -> Result<(RegimeSel, RegimeSel), CliError> {
    let regimes = parse_regime_list(token)?;
    if regimes.len() != 2 {
        return Err(CliError::Usage(format!(
            "pair {token:?} must name exactly two regimes"
        )));
    }
    Ok((regimes[0], regimes[1]))
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Capacity(args) => capacity_command(args),
        Command::Sweep(args) => sweep_command(args),
        Command::Crossover(args) => crossover_command(args),
        Command::OptimizeXi(args) => optimize_xi_command(args),
        Command::Simulate(args) => simulate_command(args),
    }
}

fn capacity_command(args: CapacityArgs) -> Result<(), CliError> {
    let resolved = Resolved::from_common(&args.common)?;
    let regime_token = need(args.regime.or(resolved.file.string("regime")?), "regime")?;
    let regime = RegimeSel::parse(&regime_token)?;
    let result = ops::evaluate_regime(regime, &resolved.base()?)?;
    print!("{}", ops::render_capacity(&result, resolved.units));
    Ok(())
}

fn sweep_command(args: SweepArgs) -> Result<(), CliError> {
    let resolved = Resolved::from_common(&args.common)?;
    let variable_token = need(
        args.variable.or(resolved.file.string("variable")?),
        "variable",
    )?;
    let variable = SweepVariable::parse(&variable_token)?;
    let regimes = parse_regime_list(
        &args
            .regimes
            .or(resolved.file.string("regimes")?)
            .unwrap_or_default(),
    )?;
    let spec = SweepSpec {
        variable,
        start: need(args.start.or(resolved.file.f64("start")?), "start")?,
        stop: need(args.stop.or(resolved.file.f64("stop")?), "stop")?,
        steps: need(args.steps.or(resolved.file.integer("steps")?), "steps")?,
        base: resolved.base_for_sweep(variable)?,
        regimes,
        units: resolved.units,
    };
    let csv = ops::run_sweep(&spec)?;
    let output = need(
        args.output
            .or(resolved.file.string("output")?.map(PathBuf::from)),
        "output",
    )?;
    write_output(&output, &csv)
}

fn crossover_command(args: CrossoverArgs) -> Result<(), CliError> {
    let resolved = Resolved::from_common(&args.common)?;
    let pair_token = need(args.pair.or(resolved.file.string("pair")?), "pair")?;
    let (regime_a, regime_b) = parse_pair(&pair_token)?;
    let bracket_token = need(args.bracket.or(resolved.file.string("bracket")?), "bracket")?;
    let bracket = parse_bracket(&bracket_token)?;
    let base = resolved.base_for_sweep(SweepVariable::GammaGp)?;
    let crossing = ops::find_crossover(&base, regime_a, regime_b, bracket)?;
    println!("gamma_gp_star: {}", ops::fmt_e6(crossing.gamma_gp));
    println!(
        "{}_capacity: {} {}",
        regime_a.token(),
        ops::fmt_e6(resolved.units.convert(crossing.capacity_a)),
        resolved.units.label()
    );
    println!(
        "{}_capacity: {} {}",
        regime_b.token(),
        ops::fmt_e6(resolved.units.convert(crossing.capacity_b)),
        resolved.units.label()
    );
    Ok(())
}

fn optimize_xi_command(args: OptimizeXiArgs) -> Result<(), CliError> {
    let resolved = Resolved::from_common(&args.common)?;
    let regime_token = need(args.regime.or(resolved.file.string("regime")?), "regime")?;
    let regime = RegimeSel::parse(&regime_token)?;
    let bracket_token = need(args.bracket.or(resolved.file.string("bracket")?), "bracket")?;
    let bracket = parse_bracket(&bracket_token)?;
    let base = resolved.base_for_sweep(SweepVariable::Xi)?;
    let optimum = ops::optimize_xi(&base, regime, bracket)?;
    println!("xi_star: {}", ops::fmt_e6(optimum.xi));
    println!(
        "value: {} {}",
        ops::fmt_e6(resolved.units.convert(optimum.value)),
        resolved.units.label()
    );
    println!("monotone: {}", optimum.monotone);
    Ok(())
}

fn simulate_command(args: SimulateArgs) -> Result<(), CliError> {
    let resolved = Resolved::from_common(&args.common)?;
    let base = resolved.base()?;
    let eve_token = need(args.eve.or(resolved.file.string("eve")?), "eve")?;
    let eve_mode = ops::parse_detector(&eve_token, base.kappa_prime)?;
    let config = SimulationConfig {
        params: base.channel()?,
        kappa: base.kappa,
        eve_mode,
        p: need(args.p.or(resolved.file.f64("p")?), "p")?,
        samples: need(
            args.samples.or(resolved.file.integer("samples")?),
            "samples",
        )?,
        seed: need(args.seed.or(resolved.file.integer("seed")?), "seed")?,
    };
    let outcome = ops::run_simulation(&config, resolved.units)?;
    match args
        .output
        .or(resolved.file.string("output")?.map(PathBuf::from))
    {
        Some(path) => write_output(&path, &outcome.json)?,
        None => {
            // Tolerate a closed pipe on the potentially large report.
            use std::io::Write;
            let _ = writeln!(std::io::stdout(), "{}", outcome.json);
        }
    }
    if outcome.within_band {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "empirical rate {} deviates from analytic rate {} by more than 3 standard errors ({})",
            outcome.report.empirical_rate,
            outcome.report.analytic_rate,
            outcome.report.standard_error
        )))
    }
}
