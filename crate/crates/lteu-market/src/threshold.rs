//! Threshold search (where does the duty-cycle carrier flip a metric's
//! sign?), duty-cycle optimization, the surplus-gain feasibility report,
//! and deterministic parameter sweeps.

use rayon::prelude::*;

use crate::config::{Bandwidth, EntrantRegime, MarketConfig};
use crate::equilibrium::{solve, solve_one_entrant_licensed, EquilibriumOutcome};
use crate::error::MarketError;
use crate::functions::{CongestionFn, DemandCurve};
use crate::numeric::golden_max;
use crate::welfare::{welfare_report, WelfareReport};

/// Absolute parameter tolerance of threshold bisection.
pub const THRESHOLD_TOL: f64 = 1e-8;

/// Scalar metric read off an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    IncumbentRevenue,
    ConsumerSurplus,
    SocialWelfare,
    TotalMass,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::IncumbentRevenue => "incumbent_revenue",
            Metric::ConsumerSurplus => "consumer_surplus",
            Metric::SocialWelfare => "social_welfare",
            Metric::TotalMass => "total_mass",
        }
    }

    pub fn extract(self, outcome: &EquilibriumOutcome, report: &WelfareReport) -> f64 {
        match self {
            Metric::IncumbentRevenue => outcome.incumbent_revenue,
            Metric::ConsumerSurplus => report.consumer_surplus,
            Metric::SocialWelfare => report.social_welfare,
            Metric::TotalMass => report.total_mass,
        }
    }
}

/// A config field that sweeps and threshold searches can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamAxis {
    /// Width of the open unlicensed band.
    UnlicensedBw,
    /// Carrier duty cycle alpha.
    DutyCycle,
    /// Carrier bandwidth share beta.
    LteuShare,
    /// Licensed spectral-efficiency factor gamma.
    Efficiency,
    /// Licensed bandwidth.
    LicensedBw,
}

impl ParamAxis {
    /// Short axis name used in CSV output and scenario files.
    pub fn name(self) -> &'static str {
        match self {
            ParamAxis::UnlicensedBw => "W",
            ParamAxis::DutyCycle => "alpha",
            ParamAxis::LteuShare => "beta",
            ParamAxis::Efficiency => "gamma",
            ParamAxis::LicensedBw => "B",
        }
    }

    /// Copy of `cfg` with this axis set to `value`.
    pub fn apply(self, cfg: &MarketConfig, value: f64) -> MarketConfig {
        let mut out = cfg.clone();
        match self {
            ParamAxis::UnlicensedBw => out.unlicensed_bw = Bandwidth::Finite(value),
            ParamAxis::DutyCycle => out.duty_cycle = value,
            ParamAxis::LteuShare => out.lteu_share = value,
            ParamAxis::Efficiency => out.efficiency = value,
            ParamAxis::LicensedBw => out.licensed_bw = value,
        }
        out
    }
}

/// What two market variants a threshold compares. Only one comparison
/// exists today: the duty-cycle carrier on versus off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Comparison {
    #[default]
    LteuVsOff,
}

/// A bracketed search for the parameter value where a metric difference
/// (carrier on minus carrier off) crosses zero.
#[derive(Debug, Clone)]
pub struct ThresholdQuery {
    pub metric: Metric,
    pub comparison: Comparison,
    /// Parameter varied: the open-band width, the duty cycle, or the
    /// efficiency factor.
    pub axis: ParamAxis,
    pub bracket: (f64, f64),
    /// Every field not on the search axis is taken from here; the carrier
    /// enable flag itself is overridden on each side of the comparison.
    pub base: MarketConfig,
}

/// Crossing point plus the metric differences at the original bracket ends.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdResult {
    pub value: f64,
    pub diff_lo: f64,
    pub diff_hi: f64,
}

fn metric_value(
    metric: Metric,
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<f64, MarketError> {
    let outcome = solve(cfg, g, demand)?;
    let report = welfare_report(&outcome, demand);
    Ok(metric.extract(&outcome, &report))
}

/// Metric difference (carrier on minus off) at one point of the search axis.
pub fn metric_difference(
    query: &ThresholdQuery,
    value: f64,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<f64, MarketError> {
    let Comparison::LteuVsOff = query.comparison;
    let cfg = query.axis.apply(&query.base, value);
    let mut on = cfg.clone();
    on.lteu_enabled = true;
    let off = cfg.without_lteu();
    Ok(metric_value(query.metric, &on, g, demand)? - metric_value(query.metric, &off, g, demand)?)
}

/// Locate the zero of the on-minus-off metric difference inside the
/// query's bracket by bisection, to absolute tolerance [`THRESHOLD_TOL`].
///
/// The difference must change sign across the bracket; if it does not,
/// the search reports the endpoint values instead of guessing.
pub fn find_threshold(
    query: &ThresholdQuery,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<ThresholdResult, MarketError> {
    let (mut lo, mut hi) = query.bracket;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(MarketError::InvalidConfig(format!(
            "bracket must be finite with lo < hi, got [{lo}, {hi}]"
        )));
    }
    if !matches!(
        query.axis,
        ParamAxis::UnlicensedBw | ParamAxis::DutyCycle | ParamAxis::Efficiency
    ) {
        return Err(MarketError::InvalidConfig(format!(
            "threshold search supports the W, alpha, and gamma axes, got {}",
            query.axis.name()
        )));
    }
    let diff = |x: f64| metric_difference(query, x, g, demand);
    let mut f_lo = diff(lo)?;
    let f_hi = diff(hi)?;
    let (diff_lo, diff_hi) = (f_lo, f_hi);
    let result = move |value: f64| ThresholdResult {
        value,
        diff_lo,
        diff_hi,
    };
    if f_lo == 0.0 {
        return Ok(result(lo));
    }
    if f_hi == 0.0 {
        return Ok(result(hi));
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(MarketError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= THRESHOLD_TOL {
            return Ok(result(mid));
        }
        let f_mid = diff(mid)?;
        if f_mid == 0.0 {
            return Ok(result(mid));
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(MarketError::SolverNoConverge {
        iterations: 200,
        context: "threshold bisection".into(),
    })
}

/// Duty cycle maximizing the incumbent's one-entrant revenue, with that
/// revenue.
///
/// On an unbounded open band the optimum is closed-form:
/// `alpha* = max(1 - 3 b / 4, 0)` with `b = efficiency * licensed_bw`
/// (the equivalent licensed band `b/(1-alpha)` is pushed to its
/// revenue-optimal width 4/3 when licensed spectrum alone is narrower
/// than that). On a finite band the revenue curve is scanned at 65 points
/// for unimodality and then refined by golden-section search; if the scan
/// is not unimodal the argmax of a dense 1e-3 grid is returned instead.
pub fn optimal_alpha(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<(f64, f64), MarketError> {
    cfg.validate()?;
    if cfg.regime != EntrantRegime::OneLicensedSharing {
        return Err(MarketError::InvalidConfig(format!(
            "duty-cycle optimization is defined for regime one_licensed_sharing, got {}",
            cfg.regime.name()
        )));
    }
    if !g.is_linear() || !demand.is_linear() {
        return Err(MarketError::UnsupportedFunctions(
            "duty-cycle optimization rides the closed-form one-entrant solution: congestion and demand must both be linear"
                .into(),
        ));
    }

    if cfg.unlicensed_bw.is_asymptotic() {
        let b = cfg.efficiency * cfg.licensed_bw;
        let alpha_star = (1.0 - 0.75 * b).max(0.0);
        let b_eff = if alpha_star > 0.0 {
            b / (1.0 - alpha_star)
        } else {
            b
        };
        let revenue = b_eff / (4.0 + 3.0 * b_eff).powi(2);
        return Ok((alpha_star, revenue));
    }

    let revenue_at = |alpha: f64| -> Result<f64, MarketError> {
        let run = cfg.clone().with_lteu(alpha, cfg.lteu_share);
        Ok(solve_one_entrant_licensed(&run, g, demand)?.incumbent_revenue)
    };
    let n = 64;
    let mut scan = Vec::with_capacity(n + 1);
    for i in 0..=n {
        scan.push(revenue_at(i as f64 / n as f64)?);
    }
    let scale = scan.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1e-300);
    let tol = 1e-12 * scale;
    let mut falling = false;
    let mut unimodal = true;
    for pair in scan.windows(2) {
        let d = pair[1] - pair[0];
        if d < -tol {
            falling = true;
        } else if d > tol && falling {
            unimodal = false;
            break;
        }
    }

    if unimodal {
        let (alpha, revenue) = golden_max(
            |a| revenue_at(a).unwrap_or(f64::NEG_INFINITY),
            0.0,
            1.0,
            1e-10,
            200,
        )?;
        return Ok((alpha, revenue));
    }
    let mut best = (0.0, revenue_at(0.0)?);
    for i in 1..=1000 {
        let alpha = i as f64 / 1000.0;
        let r = revenue_at(alpha)?;
        if r > best.1 {
            best = (alpha, r);
        }
    }
    Ok(best)
}

/// Feasibility report for the parameter region where running the carrier
/// raises consumer surplus in the shared-band (multi-entrant) market.
///
/// With `K = alpha*beta / (1 - beta*(1 - alpha))` and
/// `Delta = 2 alpha^2 beta^2 - [2 (1-K) B + alpha*beta]^2`, the region is
/// nonempty only if the licensed band stays under
/// `(sqrt(2)-1) * (1 - beta + alpha*beta) * alpha*beta / (2 (1-beta))` and
/// `Delta >= 0`; the efficiency factor must then fall inside
/// `[(alpha*beta - 2(1-K)B - sqrt(Delta)) / (4(1-K)),
///   (alpha*beta - 2(1-K)B + sqrt(Delta)) / (4(1-K))]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsGainRegion {
    pub k: f64,
    pub delta: f64,
    /// Largest licensed bandwidth admitting any gain region.
    pub b_bound: f64,
    pub feasible: bool,
    /// Efficiency interval `(lo, hi)` when feasible.
    pub gamma_interval: Option<(f64, f64)>,
}

/// Evaluate the consumer-surplus gain region for a market's
/// `(duty_cycle, lteu_share, licensed_bw)`. Report-valued: infeasible
/// parameter corners (zero duty cycle, full share, oversized band) come
/// back as `feasible: false` rather than errors.
pub fn cs_gain_region(cfg: &MarketConfig) -> CsGainRegion {
    let alpha = cfg.duty_cycle;
    let beta = cfg.lteu_share;
    let b = cfg.licensed_bw;
    let infeasible = |k: f64, delta: f64, b_bound: f64| CsGainRegion {
        k,
        delta,
        b_bound,
        feasible: false,
        gamma_interval: None,
    };

    let k_denom = 1.0 - beta * (1.0 - alpha);
    if k_denom <= 1e-12 || beta >= 1.0 {
        return infeasible(f64::INFINITY, f64::NEG_INFINITY, 0.0);
    }
    let k = alpha * beta / k_denom;
    let ab = alpha * beta;
    let delta = 2.0 * ab * ab - (2.0 * (1.0 - k) * b + ab).powi(2);
    let b_bound = (2.0_f64.sqrt() - 1.0) * (1.0 - beta + ab) * ab / (2.0 * (1.0 - beta));
    if 1.0 - k <= 1e-12 || b > b_bound || delta < 0.0 {
        return infeasible(k, delta, b_bound);
    }
    let root = delta.sqrt();
    let lo = (ab - 2.0 * (1.0 - k) * b - root) / (4.0 * (1.0 - k));
    let hi = (ab - 2.0 * (1.0 - k) * b + root) / (4.0 * (1.0 - k));
    CsGainRegion {
        k,
        delta,
        b_bound,
        feasible: true,
        gamma_interval: Some((lo, hi)),
    }
}

/// One solved grid point of a sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub outcome: EquilibriumOutcome,
    pub welfare: WelfareReport,
}

/// One sweep row: a parameter value, a carrier flag, and either a solved
/// point or the error that point produced.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub lteu: bool,
    pub point: Result<SweepPoint, MarketError>,
}

/// All rows of a sweep, in grid order, carrier-off before carrier-on at
/// each value.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub parameter: ParamAxis,
    pub rows: Vec<SweepRow>,
}

fn check_grid(grid: &[f64]) -> Result<(), MarketError> {
    for pair in grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(MarketError::InvalidConfig(format!(
                "sweep grid must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

fn solve_point(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<SweepPoint, MarketError> {
    let outcome = solve(cfg, g, demand)?;
    let welfare = welfare_report(&outcome, demand);
    Ok(SweepPoint { outcome, welfare })
}

/// Solve the market across `grid` values of `axis`, once with the carrier
/// off and once with it on per value.
///
/// Rows never abort the sweep: a failing point carries its error. Grid
/// points are independent and solved in parallel; assembly is in grid
/// order, so output is deterministic regardless of thread count.
pub fn sweep(
    cfg: &MarketConfig,
    axis: ParamAxis,
    grid: &[f64],
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<SweepResult, MarketError> {
    check_grid(grid)?;
    let rows = grid
        .par_iter()
        .map(|&value| {
            let at = axis.apply(cfg, value);
            let off = at.clone().without_lteu();
            let mut on = at;
            on.lteu_enabled = true;
            [
                SweepRow {
                    value,
                    lteu: false,
                    point: solve_point(&off, g, demand),
                },
                SweepRow {
                    value,
                    lteu: true,
                    point: solve_point(&on, g, demand),
                },
            ]
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SweepResult {
        parameter: axis,
        rows,
    })
}

/// Sweep the duty cycle at a fixed utilization `k = alpha * beta`,
/// re-deriving `beta = k / alpha` at every grid point.
///
/// Defined for the shared-band (multi-entrant) market; every grid alpha
/// must exceed `k` so that the implied share stays below one.
pub fn fixed_k_sweep(
    cfg: &MarketConfig,
    k: f64,
    alpha_grid: &[f64],
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<SweepResult, MarketError> {
    if !(k > 0.0 && k < 1.0) {
        return Err(MarketError::InvalidConfig(format!(
            "utilization k must lie in (0, 1), got {k}"
        )));
    }
    if cfg.regime != EntrantRegime::Multi {
        return Err(MarketError::InvalidConfig(format!(
            "fixed-utilization sweep is defined for regime multi, got {}",
            cfg.regime.name()
        )));
    }
    check_grid(alpha_grid)?;
    if let Some(&bad) = alpha_grid.iter().find(|&&a| a <= k) {
        return Err(MarketError::InvalidConfig(format!(
            "every grid duty cycle must exceed k = {k}, got {bad}"
        )));
    }
    let rows = alpha_grid
        .par_iter()
        .map(|&alpha| {
            let off = cfg.clone().with_lteu(alpha, k / alpha).without_lteu();
            let on = cfg.clone().with_lteu(alpha, k / alpha);
            [
                SweepRow {
                    value: alpha,
                    lteu: false,
                    point: solve_point(&off, g, demand),
                },
                SweepRow {
                    value: alpha,
                    lteu: true,
                    point: solve_point(&on, g, demand),
                },
            ]
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SweepResult {
        parameter: ParamAxis::DutyCycle,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bands::gamma_threshold;

    fn lin() -> (CongestionFn, DemandCurve) {
        (CongestionFn::linear(), DemandCurve::linear())
    }

    fn on_rows(result: &SweepResult) -> Vec<&SweepPoint> {
        result
            .rows
            .iter()
            .filter(|r| r.lteu)
            .map(|r| r.point.as_ref().expect("carrier-on row should solve"))
            .collect()
    }

    #[test]
    fn efficiency_crossover_matches_closed_form() {
        let (g, p) = lin();
        let base = MarketConfig::monopoly(1.0, 1.0).with_lteu(0.5, 0.5);
        let query = ThresholdQuery {
            metric: Metric::IncumbentRevenue,
            comparison: Comparison::LteuVsOff,
            axis: ParamAxis::Efficiency,
            bracket: (1.0, 10.0),
            base: base.clone(),
        };
        let found = find_threshold(&query, &g, &p).unwrap();
        let exact = gamma_threshold(&base).unwrap();
        assert!((exact - 5.0 / 3.0).abs() < 1e-12);
        assert!((found.value - exact).abs() < 1e-8);
        assert!(found.diff_lo < 0.0 && found.diff_hi > 0.0);
    }

    #[test]
    fn missing_crossover_reports_endpoints() {
        let (g, p) = lin();
        let query = ThresholdQuery {
            metric: Metric::IncumbentRevenue,
            comparison: Comparison::LteuVsOff,
            axis: ParamAxis::Efficiency,
            bracket: (1.0, 1.1),
            base: MarketConfig::monopoly(1.0, 1.0).with_lteu(0.5, 0.5),
        };
        match find_threshold(&query, &g, &p) {
            Err(MarketError::NoSignChange { lo, hi, f_lo, f_hi }) => {
                assert_eq!((lo, hi), (1.0, 1.1));
                assert!(f_lo < 0.0 && f_hi < 0.0);
            }
            other => panic!("expected NoSignChange, got {other:?}"),
        }
    }

    #[test]
    fn surplus_crossover_exceeds_licensed_band() {
        let (g, p) = lin();
        let query = ThresholdQuery {
            metric: Metric::ConsumerSurplus,
            comparison: Comparison::LteuVsOff,
            axis: ParamAxis::UnlicensedBw,
            bracket: (0.01, 100.0),
            base: MarketConfig::one_entrant_licensed(1.0, 1.0).with_lteu(0.5, 0.5),
        };
        let found = find_threshold(&query, &g, &p).unwrap();
        assert!(
            found.value > 1.0,
            "crossover at {} should exceed B = 1",
            found.value
        );
        // The crossing really brackets zero.
        let below = metric_difference(&query, found.value - 1e-6, &g, &p).unwrap();
        let above = metric_difference(&query, found.value + 1e-6, &g, &p).unwrap();
        assert!(below * above <= 0.0, "no bracket: {below} vs {above}");
    }

    #[test]
    fn welfare_crossover_multi_entrant() {
        let (g, p) = lin();
        let query = ThresholdQuery {
            metric: Metric::SocialWelfare,
            comparison: Comparison::LteuVsOff,
            axis: ParamAxis::UnlicensedBw,
            bracket: (0.01, 100.0),
            base: MarketConfig::multi_entrant(1.0, 1.0, 3).with_lteu(0.5, 0.5),
        };
        let found = find_threshold(&query, &g, &p).unwrap();
        assert!(
            found.diff_lo > 0.0,
            "welfare gain expected at small W, got {}",
            found.diff_lo
        );
        assert!(
            found.diff_hi < 0.0,
            "welfare loss expected at large W, got {}",
            found.diff_hi
        );
        assert!(found.value > 0.01 && found.value < 100.0);
    }

    #[test]
    fn rejects_unsupported_axis_and_bad_bracket() {
        let (g, p) = lin();
        let mut query = ThresholdQuery {
            metric: Metric::SocialWelfare,
            comparison: Comparison::LteuVsOff,
            axis: ParamAxis::LicensedBw,
            bracket: (0.1, 1.0),
            base: MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 0.5),
        };
        assert!(matches!(
            find_threshold(&query, &g, &p),
            Err(MarketError::InvalidConfig(_))
        ));
        query.axis = ParamAxis::UnlicensedBw;
        query.bracket = (1.0, 1.0);
        assert!(matches!(
            find_threshold(&query, &g, &p),
            Err(MarketError::InvalidConfig(_))
        ));
    }

    #[test]
    fn optimal_alpha_asymptotic_closed_form() {
        let (g, p) = lin();
        let cases = [(1.0, 0.25), (2.0, 0.0), (0.4, 0.7)];
        for (b, expect) in cases {
            let cfg = MarketConfig::one_entrant_licensed(b, 1.0)
                .with_lteu(0.5, 0.2)
                .with_asymptotic_unlicensed();
            let (alpha, revenue) = optimal_alpha(&cfg, &g, &p).unwrap();
            assert!(
                (alpha - expect).abs() < 1e-12,
                "B = {b}: alpha {alpha} != {expect}"
            );
            if expect > 0.0 {
                // At the optimum the equivalent band is 4/3 wide.
                assert!((revenue - (4.0 / 3.0) / 64.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn optimal_alpha_finite_band_approaches_asymptotic() {
        let (g, p) = lin();
        let cfg = MarketConfig::one_entrant_licensed(1.0, 1000.0).with_lteu(0.5, 0.2);
        let (alpha, revenue) = optimal_alpha(&cfg, &g, &p).unwrap();
        assert!((alpha - 0.25).abs() < 1e-2, "got alpha = {alpha}");
        assert!(revenue > 0.0);
    }

    #[test]
    fn cs_gain_region_reference_points() {
        let narrow = cs_gain_region(&MarketConfig::multi_entrant(0.01, 1.0, 2).with_lteu(0.5, 0.5));
        assert!((narrow.k - 1.0 / 3.0).abs() < 1e-12);
        let expect_delta = 0.125 - (2.0 * (2.0 / 3.0) * 0.01 + 0.25_f64).powi(2);
        assert!((narrow.delta - expect_delta).abs() < 1e-12);
        assert!(narrow.feasible);
        let (lo, hi) = narrow.gamma_interval.unwrap();
        assert!(lo < hi);

        let wide = cs_gain_region(&MarketConfig::multi_entrant(0.5, 1.0, 2).with_lteu(0.5, 0.5));
        assert!((wide.b_bound - 0.0776).abs() < 1e-4);
        assert!(!wide.feasible);
        assert!(wide.gamma_interval.is_none());

        let idle = cs_gain_region(&MarketConfig::multi_entrant(0.01, 1.0, 2).with_lteu(0.0, 0.5));
        assert!(!idle.feasible);
        assert!(idle.delta < 0.0);
    }

    #[test]
    fn fixed_k_narrow_band_revenue_falls_surplus_rises() {
        let (g, p) = lin();
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2);
        let grid: Vec<f64> = (0..15).map(|i| 0.25 + 0.05 * i as f64).collect();
        let result = fixed_k_sweep(&cfg, 0.2, &grid, &g, &p).unwrap();
        let points = on_rows(&result);
        for pair in points.windows(2) {
            assert!(
                pair[1].outcome.incumbent_revenue < pair[0].outcome.incumbent_revenue,
                "revenue should fall with alpha on a narrow band"
            );
            assert!(
                pair[1].welfare.consumer_surplus > pair[0].welfare.consumer_surplus,
                "surplus should rise with alpha at fixed utilization"
            );
        }
    }

    #[test]
    fn fixed_k_wide_band_revenue_rises_at_high_alpha() {
        // On a wide open band the revenue curve is no longer monotone
        // falling: it recovers as the duty cycle grows toward one (the
        // implied share k/alpha shrinks toward k).
        let (g, p) = lin();
        let cfg = MarketConfig::multi_entrant(1.0, 100.0, 2);
        let grid = [0.9, 0.95, 0.99];
        let result = fixed_k_sweep(&cfg, 0.2, &grid, &g, &p).unwrap();
        let points = on_rows(&result);
        assert!(points[1].outcome.incumbent_revenue > points[0].outcome.incumbent_revenue);
        assert!(points[2].outcome.incumbent_revenue > points[1].outcome.incumbent_revenue);
    }

    #[test]
    fn fixed_k_rejects_small_alpha() {
        let (g, p) = lin();
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2);
        let err = fixed_k_sweep(&cfg, 0.2, &[0.1, 0.5], &g, &p).unwrap_err();
        assert!(matches!(err, MarketError::InvalidConfig(_)));
    }

    #[test]
    fn sweep_empty_grid_is_empty() {
        let (g, p) = lin();
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 0.5);
        let result = sweep(&cfg, ParamAxis::UnlicensedBw, &[], &g, &p).unwrap();
        assert!(result.rows.is_empty());
    }

    #[test]
    fn sweep_rejects_unordered_grid() {
        let (g, p) = lin();
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 0.5);
        assert!(sweep(&cfg, ParamAxis::UnlicensedBw, &[0.5, 0.5], &g, &p).is_err());
        assert!(sweep(&cfg, ParamAxis::UnlicensedBw, &[0.5, 0.4], &g, &p).is_err());
    }

    #[test]
    fn sweep_rows_are_ordered_and_paired() {
        let (g, p) = lin();
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 0.5);
        let grid = [0.1, 0.2, 0.4, 0.8];
        let result = sweep(&cfg, ParamAxis::UnlicensedBw, &grid, &g, &p).unwrap();
        assert_eq!(result.rows.len(), 8);
        for (i, row) in result.rows.iter().enumerate() {
            assert_eq!(row.value, grid[i / 2]);
            assert_eq!(row.lteu, i % 2 == 1);
            assert!(row.point.is_ok());
        }
    }

    #[test]
    fn sweep_captures_row_errors_without_aborting() {
        let (g, p) = lin();
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 0.5);
        let result = sweep(&cfg, ParamAxis::LteuShare, &[0.5, 1.0], &g, &p).unwrap();
        // Share 1.0 starves the open band only when the carrier is on.
        let on_full: Vec<_> = result
            .rows
            .iter()
            .filter(|r| r.value == 1.0 && r.lteu)
            .collect();
        assert!(matches!(
            on_full[0].point,
            Err(MarketError::DegenerateDenominator(_))
        ));
        let off_full: Vec<_> = result
            .rows
            .iter()
            .filter(|r| r.value == 1.0 && !r.lteu)
            .collect();
        assert!(off_full[0].point.is_ok());
    }

    #[test]
    fn sweep_peak_matches_known_optimum() {
        let (g, p) = lin();
        let cfg = MarketConfig::one_entrant_licensed(1.0, 1.0)
            .with_lteu(0.5, 0.2)
            .with_asymptotic_unlicensed();
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 / 50.0).collect();
        let result = sweep(&cfg, ParamAxis::DutyCycle, &grid, &g, &p).unwrap();
        let best = result
            .rows
            .iter()
            .filter(|r| r.lteu)
            .max_by(|a, b| {
                let ra = a.point.as_ref().unwrap().outcome.incumbent_revenue;
                let rb = b.point.as_ref().unwrap().outcome.incumbent_revenue;
                ra.partial_cmp(&rb).unwrap()
            })
            .unwrap();
        assert!((best.value - 0.25).abs() < 0.021, "peak at {}", best.value);
    }
}
