//! Scenario files: a small TOML schema describing one market, its demand
//! and congestion curves, and optional run parameters for sweeps and
//! threshold searches. Unknown keys are hard errors, and parse failures
//! carry a `file:line:column` anchor.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use lteu_market::{
    Bandwidth, CongestionFn, DemandCurve, EntrantRegime, MarketConfig, MarketError, Metric,
    ParamAxis,
};

/// CLI failure, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Scenario unreadable, malformed, or semantically invalid (exit 2).
    Parse(String),
    /// A solver or analysis routine failed (exit 3; a missing sign change
    /// in a threshold bracket exits 4).
    Solver(MarketError),
    /// Output could not be written (exit 1).
    Io(String),
    /// The deviation scan found a profitable deviation (exit 1).
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Solver(MarketError::NoSignChange { .. }) => 4,
            CliError::Solver(_) => 3,
            CliError::Io(_) | CliError::VerifyFailed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) | CliError::Io(msg) | CliError::VerifyFailed(msg) => {
                write!(f, "{msg}")
            }
            CliError::Solver(e) => write!(f, "solver error ({}): {e}", variant_name(e)),
        }
    }
}

impl From<MarketError> for CliError {
    fn from(e: MarketError) -> Self {
        CliError::Solver(e)
    }
}

/// Stable name of a solver error variant, for scripts matching stderr.
pub fn variant_name(e: &MarketError) -> &'static str {
    match e {
        MarketError::InvalidConfig(_) => "InvalidConfig",
        MarketError::DegenerateDenominator(_) => "DegenerateDenominator",
        MarketError::SolverNoConverge { .. } => "SolverNoConverge",
        MarketError::UnsupportedFunctions(_) => "UnsupportedFunctions",
        MarketError::NoSignChange { .. } => "NoSignChange",
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    market: MarketSection,
    #[serde(default)]
    functions: FunctionsSection,
    #[serde(default)]
    run: RunSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MarketSection {
    #[serde(rename = "B")]
    b: f64,
    /// Open-band width, or the string `"inf"` for the unbounded limit.
    #[serde(rename = "W")]
    w: BandwidthField,
    #[serde(default)]
    alpha: f64,
    #[serde(default)]
    beta: f64,
    #[serde(default = "default_gamma")]
    gamma: f64,
    /// `none`, `multi`, `one_licensed_sharing`, or `one_unlicensed_sharing`.
    regime: String,
    /// Defaults per regime: none -> 0, multi -> 2, one_* -> 1.
    n_entrants: Option<u32>,
    #[serde(default)]
    lteu: bool,
}

fn default_gamma() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BandwidthField {
    Width(f64),
    Keyword(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FunctionsSection {
    /// `linear` or `homogeneous`.
    demand: String,
    /// `linear` or `quadratic`.
    congestion: String,
    /// Homogeneous demand only.
    market_size: f64,
    /// Homogeneous demand only.
    valuation: f64,
}

impl Default for FunctionsSection {
    fn default() -> Self {
        FunctionsSection {
            demand: "linear".into(),
            congestion: "linear".into(),
            market_size: 1.0,
            valuation: 1.0,
        }
    }
}

/// Command-specific parameters; every field optional so one scenario can
/// serve several subcommands.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    /// Sweep/threshold axis: `W`, `alpha`, `beta`, `gamma`, or `B`.
    pub parameter: Option<String>,
    pub grid_start: Option<f64>,
    pub grid_stop: Option<f64>,
    pub grid_points: Option<usize>,
    /// Duty-cycle sweep at fixed utilization `k = alpha * beta`.
    pub fixed_k: Option<f64>,
    /// Threshold metric: `incumbent_revenue`, `consumer_surplus`,
    /// `social_welfare`, or `total_mass`.
    pub metric: Option<String>,
    pub bracket: Option<[f64; 2]>,
    /// CSV output path; stdout when omitted.
    pub out: Option<PathBuf>,
}

/// A loaded, validated scenario.
#[derive(Debug)]
pub struct Scenario {
    pub cfg: MarketConfig,
    pub congestion: CongestionFn,
    pub demand: DemandCurve,
    pub run: RunSection,
}

pub fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: cannot read scenario: {e}", path.display())))?;
    let file: ScenarioFile = toml::from_str(&text).map_err(|e| locate(path, &text, e))?;
    build(path, file)
}

/// Anchor a TOML error at `file:line:column`.
fn locate(path: &Path, text: &str, err: toml::de::Error) -> CliError {
    let place = match err.span() {
        Some(span) => {
            let upto = &text[..span.start.min(text.len())];
            let line = upto.bytes().filter(|&b| b == b'\n').count() + 1;
            let col = upto.len() - upto.rfind('\n').map_or(0, |i| i + 1) + 1;
            format!("{line}:{col}")
        }
        None => "?:?".into(),
    };
    CliError::Parse(format!("{}:{place}: {}", path.display(), err.message()))
}

fn bad_key(path: &Path, key: &str, msg: impl fmt::Display) -> CliError {
    CliError::Parse(format!("{}: key `{key}`: {msg}", path.display()))
}

fn build(path: &Path, file: ScenarioFile) -> Result<Scenario, CliError> {
    let m = file.market;
    let regime = match m.regime.as_str() {
        "none" => EntrantRegime::NoEntrants,
        "multi" => EntrantRegime::Multi,
        "one_licensed_sharing" => EntrantRegime::OneLicensedSharing,
        "one_unlicensed_sharing" => EntrantRegime::OneUnlicensedSharing,
        other => {
            return Err(bad_key(
                path,
                "market.regime",
                format!(
                    "unknown regime `{other}` (expected none, multi, one_licensed_sharing, or one_unlicensed_sharing)"
                ),
            ))
        }
    };
    let unlicensed_bw = match m.w {
        BandwidthField::Width(v) => Bandwidth::Finite(v),
        BandwidthField::Keyword(ref s) if s == "inf" => Bandwidth::Asymptotic,
        BandwidthField::Keyword(other) => {
            return Err(bad_key(
                path,
                "market.W",
                format!("expected a width or \"inf\", got \"{other}\""),
            ))
        }
    };
    let n_entrants = m.n_entrants.unwrap_or(match regime {
        EntrantRegime::NoEntrants => 0,
        EntrantRegime::Multi => 2,
        _ => 1,
    });
    let cfg = MarketConfig {
        licensed_bw: m.b,
        unlicensed_bw,
        duty_cycle: m.alpha,
        lteu_share: m.beta,
        efficiency: m.gamma,
        lteu_enabled: m.lteu,
        n_entrants,
        regime,
    };
    cfg.validate().map_err(|e| bad_key(path, "market", e))?;

    let demand = match file.functions.demand.as_str() {
        "linear" => DemandCurve::linear(),
        "homogeneous" => {
            DemandCurve::homogeneous(file.functions.market_size, file.functions.valuation)
        }
        other => {
            return Err(bad_key(
                path,
                "functions.demand",
                format!("unknown demand kind `{other}` (expected linear or homogeneous)"),
            ))
        }
    };
    let congestion = match file.functions.congestion.as_str() {
        "linear" => CongestionFn::linear(),
        "quadratic" => CongestionFn::quadratic(),
        other => {
            return Err(bad_key(
                path,
                "functions.congestion",
                format!("unknown congestion kind `{other}` (expected linear or quadratic)"),
            ))
        }
    };
    Ok(Scenario {
        cfg,
        congestion,
        demand,
        run: file.run,
    })
}

impl RunSection {
    pub fn axis(&self, path: &Path) -> Result<ParamAxis, CliError> {
        let name = self.parameter.as_deref().ok_or_else(|| {
            bad_key(
                path,
                "run.parameter",
                "missing (expected W, alpha, beta, gamma, or B)",
            )
        })?;
        match name {
            "W" => Ok(ParamAxis::UnlicensedBw),
            "alpha" => Ok(ParamAxis::DutyCycle),
            "beta" => Ok(ParamAxis::LteuShare),
            "gamma" => Ok(ParamAxis::Efficiency),
            "B" => Ok(ParamAxis::LicensedBw),
            other => Err(bad_key(
                path,
                "run.parameter",
                format!("unknown parameter `{other}` (expected W, alpha, beta, gamma, or B)"),
            )),
        }
    }

    pub fn grid(&self, path: &Path) -> Result<Vec<f64>, CliError> {
        let (Some(start), Some(stop), Some(points)) =
            (self.grid_start, self.grid_stop, self.grid_points)
        else {
            return Err(bad_key(
                path,
                "run",
                "sweep needs grid_start, grid_stop, and grid_points",
            ));
        };
        if points == 0 {
            return Err(bad_key(path, "run.grid_points", "must be at least 1"));
        }
        if points == 1 {
            return Ok(vec![start]);
        }
        // Negated on purpose: a NaN endpoint must land in the error branch.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(start < stop) {
            return Err(bad_key(
                path,
                "run",
                format!("grid_start {start} must be below grid_stop {stop}"),
            ));
        }
        Ok((0..points)
            .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
            .collect())
    }

    pub fn metric(&self, path: &Path) -> Result<Metric, CliError> {
        let name = self.metric.as_deref().ok_or_else(|| {
            bad_key(
                path,
                "run.metric",
                "missing (expected incumbent_revenue, consumer_surplus, social_welfare, or total_mass)",
            )
        })?;
        match name {
            "incumbent_revenue" => Ok(Metric::IncumbentRevenue),
            "consumer_surplus" => Ok(Metric::ConsumerSurplus),
            "social_welfare" => Ok(Metric::SocialWelfare),
            "total_mass" => Ok(Metric::TotalMass),
            other => Err(bad_key(
                path,
                "run.metric",
                format!("unknown metric `{other}`"),
            )),
        }
    }

    pub fn bracket(&self, path: &Path) -> Result<(f64, f64), CliError> {
        let [lo, hi] = self
            .bracket
            .ok_or_else(|| bad_key(path, "run.bracket", "missing (expected [lo, hi])"))?;
        Ok((lo, hi))
    }
}
