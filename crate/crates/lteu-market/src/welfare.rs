//! Consumer surplus, social welfare, and two welfare-comparison tools:
//! the linear-approximation slopes of social welfare in the width of a
//! vanishing open band, and the asymptotic social-welfare gap from running
//! a duty-cycled carrier on an unbounded band.

use crate::bands::DENOM_TOL;
use crate::config::MarketConfig;
use crate::equilibrium::{solve_one_entrant_licensed, EquilibriumOutcome};
use crate::error::MarketError;
use crate::functions::{CongestionFn, DemandCurve};
use crate::numeric::{adaptive_simpson, bisect_root, inverse_nondecreasing};

/// Absolute tolerance of the consumer-surplus quadrature for custom demand.
const CS_QUAD_TOL: f64 = 1e-10;

/// Welfare decomposition of one equilibrium outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareReport {
    pub consumer_surplus: f64,
    /// Sum of all providers' price revenues (congestion is a real cost,
    /// not a transfer, so it appears in neither term).
    pub producer_revenue_total: f64,
    /// `consumer_surplus + producer_revenue_total`.
    pub social_welfare: f64,
    pub total_mass: f64,
}

/// Aggregate surplus `∫₀^Q P(q) dq − Q·P(Q)` of the users served at an
/// outcome.
///
/// Closed forms cover the linear kind (`Q²/2`) and the homogeneous step
/// (zero while the market is not exhausted); custom curves are integrated
/// by adaptive quadrature.
pub fn consumer_surplus(outcome: &EquilibriumOutcome, demand: &DemandCurve) -> f64 {
    let q = outcome.total_mass();
    if q <= 0.0 {
        return 0.0;
    }
    match demand {
        DemandCurve::Linear => q * q / 2.0,
        DemandCurve::Homogeneous {
            market_size,
            valuation,
        } => {
            // Flat willingness to pay: surplus appears only if someone is
            // served after the marginal value drops to zero.
            if q <= *market_size {
                0.0
            } else {
                market_size * valuation
            }
        }
        DemandCurve::Custom { .. } => {
            adaptive_simpson(&|t| demand.price(t), 0.0, q, CS_QUAD_TOL) - q * demand.price(q)
        }
    }
}

/// Assemble the welfare decomposition of an outcome.
pub fn welfare_report(outcome: &EquilibriumOutcome, demand: &DemandCurve) -> WelfareReport {
    let cs = consumer_surplus(outcome, demand);
    let revenue = outcome.total_revenue();
    WelfareReport {
        consumer_surplus: cs,
        producer_revenue_total: revenue,
        social_welfare: cs + revenue,
        total_mass: outcome.total_mass(),
    }
}

/// Linear-approximation slopes of social welfare in the open-band width as
/// that width goes to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallWSlopes {
    /// Slope when the added band is plain open spectrum.
    pub without_carrier: f64,
    /// Slope when the incumbent's carrier duty-cycles onto the added band
    /// with the configured `duty_cycle` and `lteu_share`.
    pub with_carrier: f64,
}

/// First-order effect of a vanishing open band on social welfare, with and
/// without the incumbent's carrier riding it.
///
/// Let `x*` be the incumbent's licensed-only optimum, the root of
///
/// ```text
/// x P'(x) + P(x) = g(x/b) + (x/b) g'(x/b),   b = efficiency * licensed_bw.
/// ```
///
/// A band of width `W` attracts mass `c⁻¹[P(x*)]·W`, where `c` is the
/// band's congestion at unit width: `g` itself for a plain band, or the
/// duty-cycle average `h(t) = (1−α)g(t) + αg(t/(1−β))` under the carrier.
/// Linearizing the incumbent's first-order condition around `x*` shifts its
/// mass by
///
/// ```text
/// Δx1/W = [P'(x*) + x* P''(x*)] · c⁻¹[P(x*)] / D,
/// D = 2g'(x*/b)/b + x* g''(x*/b)/b² − 2P'(x*) − x* P''(x*),
/// ```
///
/// and the welfare slope reported for each case is `[−x* P'(x*)]·(Δx1/W)`.
/// Note this is the standing linear approximation, not a sampled derivative
/// of full equilibrium solves; it drops second-order feedback (the band's
/// response to the shifted delivered price, and the carrier's own
/// congestion relief), which a finite-difference probe will register.
///
/// `c⁻¹` and `x*` are found by bisection. Both slopes use the same `x*`
/// and denominator; only the band-attraction coefficient differs, and
/// since `h > g` pointwise whenever `duty_cycle, lteu_share > 0`, the
/// with-carrier slope is never below the without-carrier one.
pub fn small_w_slopes(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<SmallWSlopes, MarketError> {
    cfg.validate()?;
    demand.validate()?;
    if demand.is_homogeneous() {
        return Err(MarketError::UnsupportedFunctions(
            "small-W slopes need a differentiable inverse demand, not the homogeneous step".into(),
        ));
    }
    let alpha = cfg.duty_cycle;
    let beta = cfg.lteu_share;
    if beta >= 1.0 - DENOM_TOL && alpha > 0.0 {
        return Err(MarketError::DegenerateDenominator(
            "lteu_share = 1 leaves the open band no off-carrier bandwidth in the carrier case"
                .into(),
        ));
    }
    let b = cfg.efficiency * cfg.licensed_bw;
    let q_max = demand.satiation_mass();
    let beta_used = if alpha > 0.0 { beta } else { 0.0 };
    g.validate_on(q_max / (b * (1.0 - beta_used)))?;

    // Licensed-only optimum of the incumbent.
    let foc =
        |x: f64| x * demand.deriv(x) + demand.price(x) - g.eval(x / b) - (x / b) * g.deriv(x / b);
    let x_star = bisect_root(foc, 0.0, q_max, 1e-15, 300)?;
    let p_star = demand.price(x_star);
    let dp = demand.deriv(x_star);
    let ddp = demand.deriv2(x_star);
    let denom = 2.0 * g.deriv(x_star / b) / b + x_star * g.deriv2(x_star / b) / (b * b)
        - 2.0 * dp
        - x_star * ddp;
    if denom.abs() < DENOM_TOL {
        return Err(MarketError::DegenerateDenominator(format!(
            "first-order-condition curvature vanished at x* = {x_star}"
        )));
    }

    let invert = |band_congestion: &dyn Fn(f64) -> f64| {
        inverse_nondecreasing(band_congestion, p_star, 1.0, 1e-14)
    };
    let phi_plain = invert(&|t| g.eval(t))?;
    let h = |t: f64| (1.0 - alpha) * g.eval(t) + alpha * g.eval(t / (1.0 - beta));
    let phi_carrier = if alpha > 0.0 && beta > 0.0 {
        invert(&h)?
    } else {
        phi_plain
    };

    let slope = |phi: f64| -x_star * dp * (dp + x_star * ddp) * phi / denom;
    Ok(SmallWSlopes {
        without_carrier: slope(phi_plain),
        with_carrier: slope(phi_carrier),
    })
}

/// Social-welfare gap `SW(on) − SW(off)` from duty-cycling the carrier onto
/// an unbounded open band in the one-entrant exclusive-band regime, per
/// duty cycle in `alphas`.
///
/// On an unbounded band the carrier's share is irrelevant and the whole
/// equilibrium depends only on the incumbent's equivalent licensed band
/// `b = efficiency·licensed_bw/(1−α)`; the gap is evaluated from the
/// asymptotic closed forms through [`welfare_report`] and is nondecreasing
/// in the duty cycle.
pub fn sw_gap_asymptotic(licensed_bw: f64, alphas: &[f64]) -> Result<Vec<f64>, MarketError> {
    if !(licensed_bw > 0.0) || !licensed_bw.is_finite() {
        return Err(MarketError::InvalidConfig(format!(
            "licensed_bw must be finite and > 0, got {licensed_bw}"
        )));
    }
    let g = CongestionFn::linear();
    let demand = DemandCurve::linear();
    let base = MarketConfig::one_entrant_licensed(licensed_bw, 1.0).with_asymptotic_unlicensed();
    let off = welfare_report(&solve_one_entrant_licensed(&base, &g, &demand)?, &demand);
    alphas
        .iter()
        .map(|&alpha| {
            if !(0.0..1.0).contains(&alpha) {
                return Err(MarketError::InvalidConfig(format!(
                    "duty cycle must lie in [0, 1) for an unbounded band, got {alpha}"
                )));
            }
            if alpha == 0.0 {
                return Ok(0.0);
            }
            let cfg = base.clone().with_lteu(alpha, 0.5);
            let on = welfare_report(&solve_one_entrant_licensed(&cfg, &g, &demand)?, &demand);
            Ok(on.social_welfare - off.social_welfare)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{solve_monopoly, solve_multi_entrant};

    fn lin() -> (CongestionFn, DemandCurve) {
        (CongestionFn::linear(), DemandCurve::linear())
    }

    fn empty_outcome() -> EquilibriumOutcome {
        EquilibriumOutcome {
            regime: crate::config::EntrantRegime::Multi,
            incumbent_price: 0.0,
            incumbent_mass: 0.0,
            open_band_price: 0.0,
            open_band_mass: 0.0,
            delivered_price: 1.0,
            incumbent_revenue: 0.0,
            entrant_revenue: 0.0,
        }
    }

    #[test]
    fn empty_market_has_zero_surplus_and_welfare() {
        let report = welfare_report(&empty_outcome(), &DemandCurve::linear());
        assert_eq!(report.consumer_surplus, 0.0);
        assert_eq!(report.social_welfare, 0.0);
    }

    #[test]
    fn multi_entrant_reference_welfare() {
        let (g, p) = lin();
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 3).with_lteu(0.5, 0.5);
        let out = solve_multi_entrant(&cfg, &g, &p).unwrap();
        let report = welfare_report(&out, &p);
        // Q = 113/215; CS = Q^2/2; revenue = 27/430.
        let q: f64 = 113.0 / 215.0;
        assert!((report.consumer_surplus - q * q / 2.0).abs() < 1e-12);
        assert!((report.consumer_surplus - 0.13812).abs() < 5e-6);
        assert!((report.producer_revenue_total - 27.0 / 430.0).abs() < 1e-12);
        assert!((report.social_welfare - (q * q / 2.0 + 27.0 / 430.0)).abs() < 1e-12);
        assert!((report.social_welfare - 0.20091).abs() < 5e-6);
    }

    #[test]
    fn monopoly_reference_welfare() {
        let (g, p) = lin();
        let out = solve_monopoly(&MarketConfig::monopoly(1.0, 1.0), &g, &p).unwrap();
        let report = welfare_report(&out, &p);
        assert!(
            (report.social_welfare - (1.0 / 6.0 + (1.0 / 3.0_f64).powi(2) / 2.0)).abs() < 1e-12
        );
        assert!((report.social_welfare - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_surplus_is_zero_until_saturation() {
        let mut out = empty_outcome();
        out.open_band_mass = 0.8;
        let demand = DemandCurve::homogeneous(1.0, 1.0);
        assert_eq!(consumer_surplus(&out, &demand), 0.0);
    }

    #[test]
    fn custom_demand_surplus_matches_closed_form() {
        // P(q) = 1 - q^2, Q = 1/2: CS = (Q - Q^3/3) - Q(1 - Q^2) = 1/12.
        let demand = DemandCurve::custom(|q| 1.0 - q * q, 1.0);
        let mut out = empty_outcome();
        out.incumbent_mass = 0.5;
        assert!((consumer_surplus(&out, &demand) - 1.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn surplus_is_nondecreasing_in_total_mass() {
        let demand = DemandCurve::custom(|q| (1.0 - q).powi(2), 1.0);
        let mut prev = 0.0;
        for i in 1..=20 {
            let mut out = empty_outcome();
            out.incumbent_mass = i as f64 / 20.0;
            let cs = consumer_surplus(&out, &demand);
            assert!(cs >= prev - 1e-12, "CS fell from {prev} to {cs}");
            prev = cs;
        }
    }

    #[test]
    fn small_w_slopes_linear_reference() {
        let (g, p) = lin();
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 0.5);
        let s = small_w_slopes(&cfg, &g, &p).unwrap();
        assert!((s.without_carrier - (-0.046875)).abs() < 1e-12);
        assert!((s.with_carrier - (-0.03125)).abs() < 1e-12);
        assert!(s.with_carrier > s.without_carrier);
    }

    #[test]
    fn small_w_slopes_coincide_without_carrier_use() {
        let (g, p) = lin();
        for cfg in [
            MarketConfig::multi_entrant(1.0, 1.0, 2),
            MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.0, 0.5),
            MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 0.0),
        ] {
            let s = small_w_slopes(&cfg, &g, &p).unwrap();
            assert_eq!(s.without_carrier, s.with_carrier);
        }
    }

    #[test]
    fn small_w_slopes_quadratic_congestion() {
        let p = DemandCurve::linear();
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 0.5);
        let s = small_w_slopes(&cfg, &CongestionFn::quadratic(), &p).unwrap();
        // x* = 1/3, P(x*) = 2/3, D = 4; phi_g = sqrt(2/3), phi_h = sqrt(4/15).
        let expect_without = -(1.0 / 3.0) * (2.0_f64 / 3.0).sqrt() / 4.0;
        let expect_with = -(1.0 / 3.0) * (4.0_f64 / 15.0).sqrt() / 4.0;
        assert!((s.without_carrier - expect_without).abs() < 1e-9);
        assert!((s.with_carrier - expect_with).abs() < 1e-9);
        assert!(s.with_carrier > s.without_carrier);
    }

    #[test]
    fn small_w_slopes_reject_full_share() {
        let (g, p) = lin();
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 1.0);
        assert!(matches!(
            small_w_slopes(&cfg, &g, &p),
            Err(MarketError::DegenerateDenominator(_))
        ));
    }

    #[test]
    fn sw_gap_reference_points() {
        let gaps = sw_gap_asymptotic(1.0, &[0.0, 0.5]).unwrap();
        assert_eq!(gaps[0], 0.0);
        // SW(b) = ((2+3b)/(4+3b))^2/2 + (4+5b)/(4+3b)^2: SW(2) = 0.46, SW(1) = 43/98.
        let expect = 0.46 - 43.0 / 98.0;
        assert!((gaps[1] - expect).abs() < 1e-12);
        assert!(gaps[1] > 0.0);
    }

    #[test]
    fn sw_gap_is_nondecreasing_in_duty_cycle() {
        let alphas = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99];
        for b in [0.3, 1.0, 2.5] {
            let gaps = sw_gap_asymptotic(b, &alphas).unwrap();
            for w in gaps.windows(2) {
                assert!(
                    w[1] >= w[0] - 1e-12,
                    "gap fell: {} -> {} at B = {b}",
                    w[0],
                    w[1]
                );
            }
        }
    }

    #[test]
    fn sw_gap_rejects_unit_duty_cycle() {
        assert!(matches!(
            sw_gap_asymptotic(1.0, &[1.0]),
            Err(MarketError::InvalidConfig(_))
        ));
    }
}
