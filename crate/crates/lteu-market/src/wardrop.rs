//! User equilibrium across priced, congestible services.
//!
//! Given posted prices, users spread themselves so that every service with
//! positive mass has the same delivered price `p_i + c_i(m_i)` and no empty
//! service is cheaper; the marginal user is indifferent, so the common
//! delivered price equals the inverse demand at the total mass. The split is
//! found by bisection on the total mass `Q`: excess demand
//! `sum_i c_i^{-1}(max(P(Q) - p_i, 0)) - Q` is strictly decreasing in `Q`.
//!
//! Homogeneous (step) demand breaks the strict monotonicity of `P`, so it is
//! handled by case analysis: either the marginal user is indifferent at the
//! common valuation, or the whole market is served and the delivered price
//! is found by bisection instead.

use crate::bands::open_band_width;
use crate::config::MarketConfig;
use crate::error::MarketError;
use crate::functions::{CongestionFn, DemandCurve};
use crate::numeric::inverse_nondecreasing;

/// Mass tolerance of the equilibrium bisection.
pub const WARDROP_TOL: f64 = 1e-12;

/// Who operates a service and on which spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServiceKind {
    /// The incumbent's licensed-technology service (duty-cycle augmented
    /// when the carrier is active).
    IncumbentLicensed,
    /// Service delivered over the open unlicensed band: the shared pool,
    /// an exclusive entrant band, or the incumbent's plain WiFi service,
    /// depending on the regime.
    OpenBand,
}

/// One priced service with duty-cycle-averaged congestion
/// `c(m) = on_share g(m / on_bw) + (1 - on_share) g(m / off_bw)`.
#[derive(Debug, Clone, Copy)]
pub struct Service {
    pub kind: ServiceKind,
    on_share: f64,
    on_bw: f64,
    off_bw: f64,
}

impl Service {
    /// Congestion felt by a mass `m` on this service.
    pub fn congestion(&self, m: f64, g: &CongestionFn) -> f64 {
        self.on_share * phase(m, self.on_bw, g) + (1.0 - self.on_share) * phase(m, self.off_bw, g)
    }

    /// True when no finite mass congests the service (every phase with
    /// positive airtime has unbounded bandwidth).
    fn uncongested(&self) -> bool {
        (self.on_share == 0.0 || self.on_bw == f64::INFINITY)
            && (self.on_share == 1.0 || self.off_bw == f64::INFINITY)
    }

    /// Mass at which congestion reaches `target` (0 for nonpositive
    /// targets, infinite for an uncongested service).
    fn inverse(&self, target: f64, g: &CongestionFn, hint: f64) -> Result<f64, MarketError> {
        if !(target > 0.0) {
            return Ok(0.0);
        }
        if self.uncongested() {
            return Ok(f64::INFINITY);
        }
        if (self.on_share > 0.0 && self.on_bw == 0.0) || (self.on_share < 1.0 && self.off_bw == 0.0)
        {
            return Ok(0.0);
        }
        if g.is_linear() {
            let slope = self.on_share / self.on_bw + (1.0 - self.on_share) / self.off_bw;
            return Ok(target / slope);
        }
        inverse_nondecreasing(
            |m| self.congestion(m, g),
            target,
            hint,
            WARDROP_TOL * hint.max(1.0),
        )
    }
}

/// Congestion of mass `m` on one phase of bandwidth `bw`.
fn phase(m: f64, bw: f64, g: &CongestionFn) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    if bw == 0.0 {
        return f64::INFINITY;
    }
    g.eval(m / bw)
}

/// Enumerate the priced services a config's market offers, in the fixed
/// order `[IncumbentLicensed, OpenBand]`; the open-band service is absent
/// when the unlicensed band has zero width.
pub fn services(cfg: &MarketConfig) -> Vec<Service> {
    let gamma = cfg.efficiency;
    let b = cfg.licensed_bw;
    let w = open_band_width(cfg);
    let mut out = Vec::with_capacity(2);
    if cfg.lteu_active() {
        out.push(Service {
            kind: ServiceKind::IncumbentLicensed,
            on_share: cfg.duty_cycle,
            on_bw: gamma * (b + cfg.lteu_share * w.min(f64::MAX)),
            off_bw: gamma * b,
        });
    } else {
        out.push(Service {
            kind: ServiceKind::IncumbentLicensed,
            on_share: 0.0,
            on_bw: gamma * b,
            off_bw: gamma * b,
        });
    }
    if w > 0.0 {
        if cfg.lteu_active() {
            let residual = if cfg.lteu_share >= 1.0 {
                0.0
            } else {
                (1.0 - cfg.lteu_share) * w
            };
            out.push(Service {
                kind: ServiceKind::OpenBand,
                on_share: cfg.duty_cycle,
                on_bw: residual,
                off_bw: w,
            });
        } else {
            out.push(Service {
                kind: ServiceKind::OpenBand,
                on_share: 0.0,
                on_bw: w,
                off_bw: w,
            });
        }
    }
    out
}

/// Split users across services at the given posted prices.
///
/// Returns one mass per service, aligned with [`services`]. All-zero masses
/// (no service attracts demand at the choke price) is a valid outcome, not
/// an error.
pub fn wardrop_split(
    prices: &[f64],
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<Vec<f64>, MarketError> {
    cfg.validate()?;
    demand.validate()?;
    let svcs = services(cfg);
    if prices.len() != svcs.len() {
        return Err(MarketError::InvalidConfig(format!(
            "expected {} prices for this market, got {}",
            svcs.len(),
            prices.len()
        )));
    }
    for (i, p) in prices.iter().enumerate() {
        if !p.is_finite() || *p < 0.0 {
            return Err(MarketError::InvalidConfig(format!(
                "price {i} must be finite and >= 0, got {p}"
            )));
        }
    }
    let q_max = demand.satiation_mass();
    g.validate_on(congestion_probe_hi(&svcs, q_max))?;

    if let DemandCurve::Homogeneous {
        market_size,
        valuation,
    } = demand
    {
        return homogeneous_split(prices, &svcs, g, *market_size, *valuation);
    }

    // Aggregate mass attracted when the delivered price is d.
    let attracted = |d: f64| -> Result<f64, MarketError> {
        let mut sum = 0.0;
        for (svc, p) in svcs.iter().zip(prices) {
            sum += svc.inverse(d - p, g, q_max)?;
            if sum == f64::INFINITY {
                return Ok(sum);
            }
        }
        Ok(sum)
    };

    if attracted(demand.price(0.0))? <= 0.0 {
        return Ok(vec![0.0; svcs.len()]);
    }
    let mut lo = 0.0;
    let mut hi = q_max;
    let tol = WARDROP_TOL * q_max.max(1.0);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let excess = attracted(demand.price(mid))? - mid;
        if excess > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = 0.5 * (lo + hi);
    assemble_masses(prices, &svcs, g, demand.price(q), q, q_max)
}

/// Step-demand split: serve the whole market only if congestion-inclusive
/// prices stay below the common valuation, otherwise ration at it.
fn homogeneous_split(
    prices: &[f64],
    svcs: &[Service],
    g: &CongestionFn,
    market_size: f64,
    valuation: f64,
) -> Result<Vec<f64>, MarketError> {
    let unconstrained: Result<Vec<f64>, MarketError> = svcs
        .iter()
        .zip(prices)
        .map(|(svc, p)| svc.inverse(valuation - p, g, market_size))
        .collect();
    let unconstrained = unconstrained?;
    let total: f64 = unconstrained.iter().sum();
    if total <= market_size {
        return Ok(unconstrained);
    }
    // Whole market served: find the delivered price d < valuation at which
    // exactly `market_size` users fit.
    let attracted = |d: f64| -> Result<f64, MarketError> {
        let mut sum = 0.0;
        for (svc, p) in svcs.iter().zip(prices) {
            sum += svc.inverse(d - p, g, market_size)?;
            if sum == f64::INFINITY {
                return Ok(sum);
            }
        }
        Ok(sum)
    };
    let mut lo = 0.0;
    let mut hi = valuation;
    let tol = WARDROP_TOL * valuation.max(1.0);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if attracted(mid)? < market_size {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let d = 0.5 * (lo + hi);
    assemble_masses(prices, svcs, g, d, market_size, market_size)
}

/// Per-service masses at delivered price `d`, with any residual of the
/// total `q` routed to uncongested services priced at (or below) `d`.
fn assemble_masses(
    prices: &[f64],
    svcs: &[Service],
    g: &CongestionFn,
    d: f64,
    q: f64,
    hint: f64,
) -> Result<Vec<f64>, MarketError> {
    let mut masses = Vec::with_capacity(svcs.len());
    let mut absorbers = Vec::new();
    let slack = 1e-9 * d.abs().max(1.0);
    for (i, (svc, p)) in svcs.iter().zip(prices).enumerate() {
        if svc.uncongested() && d - p > -slack {
            absorbers.push(i);
            masses.push(0.0);
        } else {
            masses.push(svc.inverse(d - p, g, hint)?);
        }
    }
    if !absorbers.is_empty() {
        let residual = (q - masses.iter().sum::<f64>()).max(0.0);
        let share = residual / absorbers.len() as f64;
        for i in absorbers {
            masses[i] = share;
        }
    }
    Ok(masses)
}

/// Common delivered price implied by prices and masses: the cheapest
/// congestion-inclusive price on offer.
pub fn delivered_price(
    prices: &[f64],
    masses: &[f64],
    cfg: &MarketConfig,
    g: &CongestionFn,
) -> f64 {
    services(cfg)
        .iter()
        .zip(prices.iter().zip(masses))
        .map(|(svc, (p, m))| p + svc.congestion(*m, g))
        .fold(f64::INFINITY, f64::min)
}

/// Probe-grid upper bound for validating a custom congestion function: the
/// worst load any service can see is the whole market on its narrowest
/// positive phase bandwidth.
pub(crate) fn congestion_probe_hi(svcs: &[Service], q_max: f64) -> f64 {
    let mut min_bw = f64::INFINITY;
    for svc in svcs {
        if svc.on_share > 0.0 && svc.on_bw > 0.0 {
            min_bw = min_bw.min(svc.on_bw);
        }
        if svc.on_share < 1.0 && svc.off_bw > 0.0 {
            min_bw = min_bw.min(svc.off_bw);
        }
    }
    if min_bw.is_finite() {
        q_max / min_bw
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_consistency(
        prices: &[f64],
        masses: &[f64],
        cfg: &MarketConfig,
        g: &CongestionFn,
        demand: &DemandCurve,
        tol: f64,
    ) {
        let svcs = services(cfg);
        let q: f64 = masses.iter().sum();
        let d = demand.price(q);
        for ((svc, p), m) in svcs.iter().zip(prices).zip(masses) {
            let full = p + svc.congestion(*m, g);
            if *m > tol {
                assert!(
                    (full - d).abs() < tol,
                    "active service off the common price: {full} vs {d}"
                );
            } else {
                assert!(full >= d - tol, "inactive service undercuts: {full} vs {d}");
            }
        }
    }

    #[test]
    fn symmetric_duopoly_splits_evenly() {
        let cfg = MarketConfig::monopoly(1.0, 1.0);
        let g = CongestionFn::linear();
        let p = DemandCurve::linear();
        let masses = wardrop_split(&[0.25, 0.25], &cfg, &g, &p).unwrap();
        assert!((masses[0] - 0.25).abs() < 1e-10);
        assert!((masses[1] - 0.25).abs() < 1e-10);
        check_consistency(&[0.25, 0.25], &masses, &cfg, &g, &p, 1e-9);
    }

    #[test]
    fn duty_cycle_equilibrium_masses() {
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 3).with_lteu(0.5, 0.5);
        let g = CongestionFn::linear();
        let p = DemandCurve::linear();
        let masses = wardrop_split(&[0.3, 0.0], &cfg, &g, &p).unwrap();
        assert!(
            (masses[0] - 9.0 / 43.0).abs() < 1e-9,
            "incumbent mass {}",
            masses[0]
        );
        assert!(
            (masses[1] - 68.0 / 215.0).abs() < 1e-9,
            "open-band mass {}",
            masses[1]
        );
        check_consistency(&[0.3, 0.0], &masses, &cfg, &g, &p, 1e-9);
    }

    #[test]
    fn overpriced_market_attracts_nobody() {
        let cfg = MarketConfig::monopoly(1.0, 1.0);
        let masses = wardrop_split(
            &[2.0, 2.0],
            &cfg,
            &CongestionFn::linear(),
            &DemandCurve::linear(),
        )
        .unwrap();
        assert_eq!(masses, vec![0.0, 0.0]);
    }

    #[test]
    fn price_vector_length_is_checked() {
        let cfg = MarketConfig::monopoly(1.0, 1.0);
        let err = wardrop_split(
            &[0.1],
            &cfg,
            &CongestionFn::linear(),
            &DemandCurve::linear(),
        )
        .unwrap_err();
        assert!(matches!(err, MarketError::InvalidConfig(_)));
        let err = wardrop_split(
            &[0.1, -0.2],
            &cfg,
            &CongestionFn::linear(),
            &DemandCurve::linear(),
        )
        .unwrap_err();
        assert!(matches!(err, MarketError::InvalidConfig(_)));
    }

    #[test]
    fn zero_width_band_drops_the_open_service() {
        let cfg = MarketConfig::monopoly(1.0, 0.0);
        assert_eq!(services(&cfg).len(), 1);
        let masses = wardrop_split(
            &[0.5, 0.0],
            &cfg,
            &CongestionFn::linear(),
            &DemandCurve::linear(),
        );
        assert!(masses.is_err(), "two prices against one service must fail");
        let masses = wardrop_split(
            &[0.5],
            &cfg,
            &CongestionFn::linear(),
            &DemandCurve::linear(),
        )
        .unwrap();
        // p + x/B = 1 - x at B = 1: x = (1 - 0.5) / 2.
        assert!((masses[0] - 0.25).abs() < 1e-10);
    }

    #[test]
    fn quadratic_congestion_split_is_consistent() {
        let cfg = MarketConfig::multi_entrant(1.0, 1.5, 2).with_lteu(0.4, 0.3);
        let g = CongestionFn::quadratic();
        let p = DemandCurve::linear();
        let prices = [0.2, 0.0];
        let masses = wardrop_split(&prices, &cfg, &g, &p).unwrap();
        assert!(masses.iter().all(|m| *m > 0.0));
        check_consistency(&prices, &masses, &cfg, &g, &p, 1e-8);
    }

    #[test]
    fn asymptotic_open_band_absorbs_residual_demand() {
        let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2)
            .with_lteu(0.5, 0.5)
            .with_asymptotic_unlicensed();
        let g = CongestionFn::linear();
        let p = DemandCurve::linear();
        let prices = [0.2, 0.0];
        let masses = wardrop_split(&prices, &cfg, &g, &p).unwrap();
        // Uncongested free pool drives the delivered price to P(Q) = 0.
        let q: f64 = masses.iter().sum();
        assert!((q - 1.0).abs() < 1e-9, "total mass {q}");
        assert_eq!(
            masses[0], 0.0,
            "a positive-price incumbent cannot compete with free service"
        );
        check_consistency(&prices, &masses, &cfg, &g, &p, 1e-9);
    }

    #[test]
    fn homogeneous_unconstrained_serves_at_valuation() {
        // Wide-open market: both services priced below T, capacity ample.
        let cfg = MarketConfig::monopoly(1.0, 1.0);
        let g = CongestionFn::linear();
        let demand = DemandCurve::homogeneous(10.0, 1.0);
        let masses = wardrop_split(&[0.4, 0.4], &cfg, &g, &demand).unwrap();
        // Each service fills until p + m = T: m = 0.6.
        assert!((masses[0] - 0.6).abs() < 1e-9);
        assert!((masses[1] - 0.6).abs() < 1e-9);
    }

    #[test]
    fn homogeneous_rationing_caps_total_mass() {
        let cfg = MarketConfig::monopoly(1.0, 1.0);
        let g = CongestionFn::linear();
        let demand = DemandCurve::homogeneous(0.5, 1.0);
        let masses = wardrop_split(&[0.1, 0.1], &cfg, &g, &demand).unwrap();
        let q: f64 = masses.iter().sum();
        assert!((q - 0.5).abs() < 1e-9, "whole market served, got {q}");
        // Symmetric services: equal split, delivered price 0.1 + 0.25 < T.
        assert!((masses[0] - 0.25).abs() < 1e-9);
    }
}
