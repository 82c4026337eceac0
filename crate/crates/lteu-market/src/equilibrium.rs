//! Equilibrium solvers for each entrant regime, a deviation-scan Nash
//! verifier, and the homogeneous-demand welfare case analysis.
//!
//! Regimes:
//! * no entrants: the incumbent prices both its licensed-technology service
//!   and (if present) a plain open-band service;
//! * `multi`: two or more entrants compete on the open band, driving its
//!   price to zero, and the incumbent best-responds;
//! * `one_licensed_sharing`: a single entrant with exclusive open-band
//!   access sets its own price (two-player pricing game);
//! * `one_unlicensed_sharing`: a single entrant on the open band that the
//!   incumbent can also serve, which pins the band price at zero.
//!
//! Linear congestion plus linear demand admits closed forms throughout, and
//! those are used verbatim. Otherwise the incumbent's problem is solved as
//! a one-dimensional concave program (free-band mass inverted by bisection)
//! or, for the two-service monopoly, by coordinate ascent.

use crate::bands::{effective_bands, open_band_width, DENOM_TOL};
use crate::config::{EntrantRegime, MarketConfig};
use crate::error::MarketError;
use crate::functions::{CongestionFn, DemandCurve};
use crate::numeric::{bisect_root, golden_max};
use crate::wardrop::{congestion_probe_hi, services, wardrop_split, ServiceKind, WARDROP_TOL};

/// Argument tolerance of the one-dimensional revenue searches.
const SEARCH_TOL: f64 = 1e-10;
/// Iteration budget for golden-section searches.
const SEARCH_ITERS: usize = 200;

/// Prices, masses, and revenues at a pricing equilibrium.
///
/// `open_band_price`/`open_band_mass` describe the service riding the open
/// unlicensed band: the zero-priced shared pool, the single entrant's
/// service, or the incumbent's own plain service in the no-entrant regime.
/// Both are zero when the band has zero width.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumOutcome {
    pub regime: EntrantRegime,
    pub incumbent_price: f64,
    pub incumbent_mass: f64,
    pub open_band_price: f64,
    pub open_band_mass: f64,
    /// Common congestion-inclusive price paid by every served user.
    pub delivered_price: f64,
    pub incumbent_revenue: f64,
    pub entrant_revenue: f64,
}

impl EquilibriumOutcome {
    pub fn total_mass(&self) -> f64 {
        self.incumbent_mass + self.open_band_mass
    }

    pub fn total_revenue(&self) -> f64 {
        self.incumbent_revenue + self.entrant_revenue
    }

    /// Posted prices aligned with [`services`] for this market.
    pub fn price_vector(&self, cfg: &MarketConfig) -> Vec<f64> {
        let n = services(cfg).len();
        let mut v = vec![self.incumbent_price, self.open_band_price];
        v.truncate(n);
        v
    }

    /// Largest violation of the user-equilibrium conditions at this
    /// outcome: active services must sit exactly at the delivered price,
    /// inactive ones at or above it, and the delivered price must match
    /// inverse demand at the total mass.
    pub fn max_wardrop_violation(
        &self,
        cfg: &MarketConfig,
        g: &CongestionFn,
        demand: &DemandCurve,
    ) -> f64 {
        let svcs = services(cfg);
        let prices = self.price_vector(cfg);
        let masses = [self.incumbent_mass, self.open_band_mass];
        let d = self.delivered_price;
        let mut worst = (demand.price(self.total_mass()) - d).abs();
        for (i, svc) in svcs.iter().enumerate() {
            let full = prices[i] + svc.congestion(masses[i], g);
            let viol = if masses[i] > 1e-12 {
                (full - d).abs()
            } else {
                (d - full).max(0.0)
            };
            if viol.is_finite() {
                worst = worst.max(viol);
            }
        }
        worst
    }
}

/// Solve whatever regime the config describes.
pub fn solve(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<EquilibriumOutcome, MarketError> {
    match cfg.regime {
        EntrantRegime::NoEntrants => solve_monopoly(cfg, g, demand),
        EntrantRegime::Multi => solve_multi_entrant(cfg, g, demand),
        EntrantRegime::OneLicensedSharing => solve_one_entrant_licensed(cfg, g, demand),
        EntrantRegime::OneUnlicensedSharing => solve_one_entrant_unlicensed(cfg, g, demand),
    }
}

/// Shared entry checks for all solvers.
fn check_inputs(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
    regime: EntrantRegime,
    op: &str,
) -> Result<(), MarketError> {
    cfg.validate()?;
    if cfg.regime != regime {
        return Err(MarketError::InvalidConfig(format!(
            "{op} requires regime {}, got {}",
            regime.name(),
            cfg.regime.name()
        )));
    }
    demand.validate()?;
    if demand.is_homogeneous() {
        return Err(MarketError::UnsupportedFunctions(format!(
            "{op} does not take step demand; use homogeneous_sw for identical-valuation markets"
        )));
    }
    g.validate_on(congestion_probe_hi(&services(cfg), demand.satiation_mass()))
}

/// Error out when an active carrier with `beta = 1` leaves a positive-width
/// open band with no on-phase bandwidth at all.
fn check_open_band_usable(cfg: &MarketConfig) -> Result<(), MarketError> {
    if cfg.lteu_active() && cfg.lteu_share >= 1.0 - DENOM_TOL && open_band_width(cfg) > 0.0 {
        return Err(MarketError::DegenerateDenominator(
            "lteu_share = 1 leaves the open band no on-phase bandwidth".into(),
        ));
    }
    Ok(())
}

/// Root of `P` (the mass at which demand chokes), used by asymptotic limits.
fn choke_mass(demand: &DemandCurve) -> Result<f64, MarketError> {
    if demand.is_linear() {
        return Ok(1.0);
    }
    let q_max = demand.satiation_mass();
    if demand.price(q_max) >= 0.0 {
        return Ok(q_max);
    }
    bisect_root(|q| demand.price(q), 0.0, q_max, WARDROP_TOL, 200)
}

// ---------------------------------------------------------------------------
// No entrants
// ---------------------------------------------------------------------------

/// Revenue-maximizing prices for an incumbent that owns every service.
///
/// With linear congestion the two-service problem collapses to one mass
/// variable: the optimum equalizes congestion across services, so revenue
/// is `x (P(x) - x / S)` with `S = b_e + w_e`. General congestion is solved
/// by coordinate ascent over the two service masses, golden-section per
/// coordinate.
pub fn solve_monopoly(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<EquilibriumOutcome, MarketError> {
    check_inputs(cfg, g, demand, EntrantRegime::NoEntrants, "solve_monopoly")?;
    let q_max = demand.satiation_mass();

    let open_dead = cfg.lteu_active() && cfg.lteu_share >= 1.0 - DENOM_TOL;
    if cfg.unlicensed_bw.is_asymptotic() && !open_dead {
        // An unbounded congestion-free band: the incumbent serves everything
        // there and extracts the pure monopoly price.
        let x = if demand.is_linear() {
            0.5
        } else {
            golden_max(
                |x| x * demand.price(x),
                0.0,
                q_max,
                SEARCH_TOL,
                SEARCH_ITERS,
            )?
            .0
        };
        let p = demand.price(x);
        return Ok(EquilibriumOutcome {
            regime: EntrantRegime::NoEntrants,
            incumbent_price: p,
            incumbent_mass: 0.0,
            open_band_price: p,
            open_band_mass: x,
            delivered_price: p,
            incumbent_revenue: p * x,
            entrant_revenue: 0.0,
        });
    }
    if open_band_width(cfg) == 0.0 || open_dead {
        let out = licensed_only_monopoly(cfg, g, demand)?;
        return Ok(out);
    }

    if g.is_linear() {
        let eb = effective_bands(cfg)?;
        let (b_e, w_e) = (eb.licensed, eb.unlicensed_finite());
        let s = b_e + w_e;
        let x = if demand.is_linear() {
            s / (2.0 * (s + 1.0))
        } else {
            golden_max(
                |x| x * (demand.price(x) - x / s),
                0.0,
                q_max,
                SEARCH_TOL,
                SEARCH_ITERS,
            )?
            .0
        };
        let p = demand.price(x) - x / s;
        return Ok(EquilibriumOutcome {
            regime: EntrantRegime::NoEntrants,
            incumbent_price: p,
            incumbent_mass: x * b_e / s,
            open_band_price: p,
            open_band_mass: x * w_e / s,
            delivered_price: demand.price(x),
            incumbent_revenue: p * x,
            entrant_revenue: 0.0,
        });
    }

    // General congestion: ascend the jointly concave revenue surface one
    // service mass at a time. Revenue at masses (m_0, m_1) is
    // q P(q) - sum_i m_i c_i(m_i) with q the total.
    let svcs = services(cfg);
    let mut masses = vec![0.0f64; svcs.len()];
    let mut last = 0.0;
    let mut converged = false;
    for _ in 0..200 {
        for j in 0..svcs.len() {
            let others: f64 = masses
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, m)| m)
                .sum();
            let fixed_cost: f64 = masses
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(i, m)| m * svcs[i].congestion(*m, g))
                .sum();
            if svcs[j].congestion(1e-9 * q_max.max(1.0), g) == f64::INFINITY {
                masses[j] = 0.0;
                continue;
            }
            // Largest own mass with a nonnegative own price.
            let price_slack = |m: f64| demand.price(others + m) - svcs[j].congestion(m, g);
            let cap = if price_slack(0.0) <= 0.0 {
                0.0
            } else if price_slack(q_max) >= 0.0 {
                q_max
            } else {
                bisect_root(price_slack, 0.0, q_max, WARDROP_TOL, 200)?
            };
            if cap <= 0.0 {
                masses[j] = 0.0;
                continue;
            }
            let objective = |m: f64| {
                let q = others + m;
                q * demand.price(q) - m * svcs[j].congestion(m, g) - fixed_cost
            };
            masses[j] = golden_max(objective, 0.0, cap, SEARCH_TOL, SEARCH_ITERS)?.0;
        }
        let q: f64 = masses.iter().sum();
        let now = q * demand.price(q)
            - masses
                .iter()
                .zip(&svcs)
                .map(|(m, svc)| m * svc.congestion(*m, g))
                .sum::<f64>();
        if (now - last).abs() <= 1e-12 * now.abs().max(1.0) {
            converged = true;
            break;
        }
        last = now;
    }
    if !converged {
        return Err(MarketError::SolverNoConverge {
            iterations: 200,
            context: "coordinate ascent on the two-service revenue surface".into(),
        });
    }
    let q: f64 = masses.iter().sum();
    let d = demand.price(q);
    let p_l = (d - svcs[0].congestion(masses[0], g)).max(0.0);
    let (p_u, x_u) = if svcs.len() > 1 {
        let c = svcs[1].congestion(masses[1], g);
        if c.is_finite() {
            ((d - c).max(0.0), masses[1])
        } else {
            (0.0, 0.0)
        }
    } else {
        (0.0, 0.0)
    };
    Ok(EquilibriumOutcome {
        regime: EntrantRegime::NoEntrants,
        incumbent_price: p_l,
        incumbent_mass: masses[0],
        open_band_price: p_u,
        open_band_mass: x_u,
        delivered_price: d,
        incumbent_revenue: p_l * masses[0] + p_u * x_u,
        entrant_revenue: 0.0,
    })
}

/// Monopoly restricted to the licensed-technology service (the open band is
/// absent or unusable).
fn licensed_only_monopoly(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<EquilibriumOutcome, MarketError> {
    let inc = services(cfg)[0];
    let q_max = demand.satiation_mass();
    let x1 = if g.is_linear() && demand.is_linear() {
        let b = effective_bands(cfg)?.licensed;
        b / (2.0 * (b + 1.0))
    } else {
        golden_max(
            |x| x * (demand.price(x) - inc.congestion(x, g)),
            0.0,
            q_max,
            SEARCH_TOL,
            SEARCH_ITERS,
        )?
        .0
    };
    let d = demand.price(x1);
    let p1 = (d - inc.congestion(x1, g)).max(0.0);
    Ok(EquilibriumOutcome {
        regime: EntrantRegime::NoEntrants,
        incumbent_price: p1,
        incumbent_mass: x1,
        open_band_price: 0.0,
        open_band_mass: 0.0,
        delivered_price: d,
        incumbent_revenue: p1 * x1,
        entrant_revenue: 0.0,
    })
}

// ---------------------------------------------------------------------------
// Many entrants (zero-priced shared band)
// ---------------------------------------------------------------------------

/// Incumbent's best response against a zero-priced open band.
///
/// Closed form for linear congestion and linear demand, with equivalent
/// bands `(b_e, w_e)`:
///
/// ```text
/// p1 = 1 / (2 (1 + w_e))
/// x1 = b_e / (2 (1 + b_e + w_e))
/// w_t = w_e (2 + 2 w_e + b_e) / (2 (1 + w_e) (1 + b_e + w_e))
/// ```
pub fn solve_multi_entrant(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<EquilibriumOutcome, MarketError> {
    check_inputs(cfg, g, demand, EntrantRegime::Multi, "solve_multi_entrant")?;
    solve_against_free_band(cfg, g, demand, EntrantRegime::Multi)
}

/// Shared implementation for every regime whose open band is priced at zero.
fn solve_against_free_band(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
    regime: EntrantRegime,
) -> Result<EquilibriumOutcome, MarketError> {
    if open_band_width(cfg) == 0.0 {
        // No open band at all: the incumbent is an unthreatened monopolist
        // on its licensed band.
        let out = licensed_only_monopoly(cfg, g, demand)?;
        return Ok(EquilibriumOutcome { regime, ..out });
    }
    check_open_band_usable(cfg)?;

    if cfg.unlicensed_bw.is_asymptotic() {
        // Unbounded free band: the delivered price collapses to zero and the
        // incumbent is priced out entirely.
        let q = choke_mass(demand)?;
        return Ok(EquilibriumOutcome {
            regime,
            incumbent_price: 0.0,
            incumbent_mass: 0.0,
            open_band_price: 0.0,
            open_band_mass: q,
            delivered_price: 0.0,
            incumbent_revenue: 0.0,
            entrant_revenue: 0.0,
        });
    }

    if g.is_linear() && demand.is_linear() {
        let eb = effective_bands(cfg)?;
        let (b_e, w_e) = (eb.licensed, eb.unlicensed_finite());
        let p1 = 1.0 / (2.0 * (1.0 + w_e));
        let x1 = b_e / (2.0 * (1.0 + b_e + w_e));
        let w_t = w_e * (2.0 + 2.0 * w_e + b_e) / (2.0 * (1.0 + w_e) * (1.0 + b_e + w_e));
        let q = x1 + w_t;
        return Ok(EquilibriumOutcome {
            regime,
            incumbent_price: p1,
            incumbent_mass: x1,
            open_band_price: 0.0,
            open_band_mass: w_t,
            delivered_price: 1.0 - q,
            incumbent_revenue: p1 * x1,
            entrant_revenue: 0.0,
        });
    }

    // Numeric path: revenue(x1) with the free-band mass w(x1) defined by
    // c_en(w) = P(x1 + w), inverted by bisection.
    let svcs = services(cfg);
    let (inc, open) = (svcs[0], svcs[1]);
    let q_max = demand.satiation_mass();
    let free_mass = |x1: f64| -> Result<f64, MarketError> {
        if demand.price(x1) <= 0.0 {
            return Ok(0.0);
        }
        let f = |w: f64| open.congestion(w, g) - demand.price(x1 + w);
        let hi = (q_max - x1).max(0.0);
        if hi == 0.0 || f(hi) <= 0.0 {
            return Ok(hi);
        }
        bisect_root(f, 0.0, hi, WARDROP_TOL, 200)
    };
    let revenue = |x1: f64| -> f64 {
        match free_mass(x1) {
            Ok(w) => x1 * (demand.price(x1 + w) - inc.congestion(x1, g)).max(0.0),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    // Search up to the mass at which the incumbent's price hits zero.
    let price_slack = |x1: f64| -> f64 {
        let w = free_mass(x1).unwrap_or(0.0);
        demand.price(x1 + w) - inc.congestion(x1, g)
    };
    let cap = if price_slack(0.0) <= 0.0 {
        0.0
    } else if price_slack(q_max) >= 0.0 {
        q_max
    } else {
        bisect_root(price_slack, 0.0, q_max, WARDROP_TOL, 200)?
    };
    let x1 = if cap > 0.0 {
        golden_max(revenue, 0.0, cap, SEARCH_TOL, SEARCH_ITERS)?.0
    } else {
        0.0
    };
    let w_t = free_mass(x1)?;
    let d = demand.price(x1 + w_t);
    let p1 = (d - inc.congestion(x1, g)).max(0.0);
    Ok(EquilibriumOutcome {
        regime,
        incumbent_price: p1,
        incumbent_mass: x1,
        open_band_price: 0.0,
        open_band_mass: w_t,
        delivered_price: d,
        incumbent_revenue: p1 * x1,
        entrant_revenue: 0.0,
    })
}

// ---------------------------------------------------------------------------
// One entrant
// ---------------------------------------------------------------------------

/// Two-player pricing equilibrium when a single entrant has exclusive use
/// of the open band. Closed form only (linear congestion, linear demand);
/// in equivalent bands `(b_e, w_e)` with `D = 4 + 4 b_e + 4 w_e + 3 b_e w_e`:
///
/// ```text
/// p1 = (2 + 2 b_e + w_e) / D    x1 = p1 b_e (1 + w_e) / (1 + b_e + w_e)
/// p2 = (2 + b_e + 2 w_e) / D    x2 = p2 w_e (1 + b_e) / (1 + b_e + w_e)
/// ```
///
/// On an asymptotic band the entrant is uncongested and the limits are
/// `p1 = 1/(4 + 3 b_e)`, `x1 = b_e p1`, `p2 = 2 p1`, `x2 = 2 (1 + b_e) p1`.
pub fn solve_one_entrant_licensed(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<EquilibriumOutcome, MarketError> {
    check_inputs(
        cfg,
        g,
        demand,
        EntrantRegime::OneLicensedSharing,
        "solve_one_entrant_licensed",
    )?;
    if !g.is_linear() || !demand.is_linear() {
        return Err(MarketError::UnsupportedFunctions(
            "the one-entrant pricing game is only solved in closed form: congestion and demand must both be linear"
                .into(),
        ));
    }
    let eb = effective_bands(cfg)?;
    let b_e = eb.licensed;

    if eb.unlicensed.is_asymptotic() {
        if cfg.lteu_active() && cfg.lteu_share >= 1.0 - DENOM_TOL {
            return check_open_band_usable(cfg).map(|_| unreachable!());
        }
        let p1 = 1.0 / (4.0 + 3.0 * b_e);
        let x1 = b_e * p1;
        let p2 = 2.0 * p1;
        let x2 = 2.0 * (1.0 + b_e) * p1;
        return Ok(EquilibriumOutcome {
            regime: EntrantRegime::OneLicensedSharing,
            incumbent_price: p1,
            incumbent_mass: x1,
            open_band_price: p2,
            open_band_mass: x2,
            delivered_price: p2,
            incumbent_revenue: p1 * x1,
            entrant_revenue: p2 * x2,
        });
    }

    let w_e = eb.unlicensed_finite();
    let d = 4.0 + 4.0 * b_e + 4.0 * w_e + 3.0 * b_e * w_e;
    let p1 = (2.0 + 2.0 * b_e + w_e) / d;
    let p2 = (2.0 + b_e + 2.0 * w_e) / d;
    let x1 = p1 * b_e * (1.0 + w_e) / (1.0 + b_e + w_e);
    let x2 = p2 * w_e * (1.0 + b_e) / (1.0 + b_e + w_e);
    Ok(EquilibriumOutcome {
        regime: EntrantRegime::OneLicensedSharing,
        incumbent_price: p1,
        incumbent_mass: x1,
        open_band_price: p2,
        open_band_mass: x2,
        delivered_price: 1.0 - x1 - x2,
        incumbent_revenue: p1 * x1,
        entrant_revenue: p2 * x2,
    })
}

/// Single entrant on the open unlicensed band. The incumbent's standing
/// offer to serve that band at zero keeps the band price at zero, so the
/// outcome coincides with the many-entrant equilibrium; the entrant earns
/// nothing.
pub fn solve_one_entrant_unlicensed(
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
) -> Result<EquilibriumOutcome, MarketError> {
    check_inputs(
        cfg,
        g,
        demand,
        EntrantRegime::OneUnlicensedSharing,
        "solve_one_entrant_unlicensed",
    )?;
    solve_against_free_band(cfg, g, demand, EntrantRegime::OneUnlicensedSharing)
}

// ---------------------------------------------------------------------------
// Nash verification
// ---------------------------------------------------------------------------

/// One scanned price coordinate in a deviation report.
#[derive(Debug, Clone)]
pub struct DeviationScan {
    /// Human-readable owner of the scanned price.
    pub actor: &'static str,
    /// Revenue the actor earns at the outcome's stated prices.
    pub base_revenue: f64,
    /// Best revenue found on the deviation grid.
    pub best_revenue: f64,
    /// Price achieving `best_revenue`.
    pub best_price: f64,
    /// `best_revenue - base_revenue`.
    pub improvement: f64,
}

/// Result of grid-scanning every strategic price for profitable deviations.
#[derive(Debug, Clone)]
pub struct DeviationReport {
    pub scans: Vec<DeviationScan>,
    pub eps: f64,
    pub max_improvement: f64,
    pub passed: bool,
}

/// Check an outcome for epsilon-Nash stability by re-solving the user split
/// at `grid` prices per strategic coordinate and comparing revenues.
///
/// Entrants on a zero-priced open band get no grid scan: with the band
/// still served free by others (or by the incumbent's standing offer), any
/// positive price keeps no customers, so their best deviation is exactly
/// zero and is reported as such.
pub fn verify_nash(
    outcome: &EquilibriumOutcome,
    cfg: &MarketConfig,
    g: &CongestionFn,
    demand: &DemandCurve,
    grid: usize,
    eps: f64,
) -> Result<DeviationReport, MarketError> {
    cfg.validate()?;
    if grid < 2 {
        return Err(MarketError::InvalidConfig(format!(
            "deviation grid must have >= 2 points, got {grid}"
        )));
    }
    if cfg.regime != outcome.regime {
        return Err(MarketError::InvalidConfig(format!(
            "outcome regime {} does not match config regime {}",
            outcome.regime.name(),
            cfg.regime.name()
        )));
    }
    let svcs = services(cfg);
    let base_prices = outcome.price_vector(cfg);
    let p_hi = demand.price(0.0);

    // Revenue of each side at a full price vector, from a fresh user split.
    let revenues = |prices: &[f64]| -> Result<(f64, f64), MarketError> {
        let masses = wardrop_split(prices, cfg, g, demand)?;
        let mut inc = 0.0;
        let mut ent = 0.0;
        for ((svc, p), m) in svcs.iter().zip(prices).zip(&masses) {
            match svc.kind {
                ServiceKind::IncumbentLicensed => inc += p * m,
                ServiceKind::OpenBand => match cfg.regime {
                    EntrantRegime::NoEntrants => inc += p * m,
                    _ => ent += p * m,
                },
            }
        }
        Ok((inc, ent))
    };

    let (base_inc, base_ent) = revenues(&base_prices)?;
    let mut scans = Vec::new();

    // Coordinates the incumbent controls.
    let incumbent_coords: Vec<usize> = match cfg.regime {
        EntrantRegime::NoEntrants => (0..svcs.len()).collect(),
        _ => vec![0],
    };
    for &j in &incumbent_coords {
        let actor = if incumbent_coords.len() > 1 {
            if j == 0 {
                "incumbent (licensed price)"
            } else {
                "incumbent (open-band price)"
            }
        } else {
            "incumbent"
        };
        let mut best = (base_prices[j], base_inc);
        let mut prices = base_prices.clone();
        for i in 0..grid {
            prices[j] = p_hi * i as f64 / (grid - 1) as f64;
            let (inc, _) = revenues(&prices)?;
            if inc > best.1 {
                best = (prices[j], inc);
            }
        }
        scans.push(DeviationScan {
            actor,
            base_revenue: base_inc,
            best_revenue: best.1,
            best_price: best.0,
            improvement: best.1 - base_inc,
        });
    }

    match cfg.regime {
        EntrantRegime::OneLicensedSharing => {
            let mut best = (base_prices[1], base_ent);
            let mut prices = base_prices.clone();
            for i in 0..grid {
                prices[1] = p_hi * i as f64 / (grid - 1) as f64;
                let (_, ent) = revenues(&prices)?;
                if ent > best.1 {
                    best = (prices[1], ent);
                }
            }
            scans.push(DeviationScan {
                actor: "entrant",
                base_revenue: base_ent,
                best_revenue: best.1,
                best_price: best.0,
                improvement: best.1 - base_ent,
            });
        }
        EntrantRegime::Multi | EntrantRegime::OneUnlicensedSharing => {
            scans.push(DeviationScan {
                actor: "entrant",
                base_revenue: 0.0,
                best_revenue: 0.0,
                best_price: 0.0,
                improvement: 0.0,
            });
        }
        EntrantRegime::NoEntrants => {}
    }

    let max_improvement = scans.iter().map(|s| s.improvement).fold(0.0, f64::max);
    Ok(DeviationReport {
        scans,
        eps,
        max_improvement,
        passed: max_improvement <= eps,
    })
}

// ---------------------------------------------------------------------------
// Homogeneous demand
// ---------------------------------------------------------------------------

/// Which of the three welfare cases a homogeneous market falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomogeneousRegion {
    /// Narrow open band: the free band congests up to the valuation, the
    /// incumbent serves its unconstrained monopoly mass, and part of the
    /// market stays unserved. All surplus is incumbent revenue.
    PartialCoverage,
    /// Mid-width band: the whole market is served, the incumbent picks up
    /// exactly the residual, and the delivered price still equals the
    /// valuation, so consumers keep no surplus.
    FullCoverageAtValuation,
    /// Wide band: the delivered price falls below the valuation and
    /// consumers retain surplus.
    FullCoverageInterior,
}

impl HomogeneousRegion {
    /// 1-based index in narrow-to-wide order.
    pub fn index(self) -> u8 {
        match self {
            HomogeneousRegion::PartialCoverage => 1,
            HomogeneousRegion::FullCoverageAtValuation => 2,
            HomogeneousRegion::FullCoverageInterior => 3,
        }
    }
}

/// Social welfare of the shared-band market with `market_size` identical
/// users of valuation `valuation`, evaluated in equivalent bands, with the
/// case boundaries
///
/// ```text
/// w1 = max(A/T - b/2, 0)
/// w2 = (sqrt(A^2 + b^2 T^2) - b T + A) / (2 T)
/// ```
pub fn homogeneous_sw(
    cfg: &MarketConfig,
    market_size: f64,
    valuation: f64,
) -> Result<(f64, HomogeneousRegion), MarketError> {
    cfg.validate()?;
    if cfg.regime != EntrantRegime::Multi {
        return Err(MarketError::InvalidConfig(format!(
            "homogeneous welfare is defined for the shared-band regime multi, got {}",
            cfg.regime.name()
        )));
    }
    DemandCurve::homogeneous(market_size, valuation).validate()?;
    if cfg.unlicensed_bw.is_asymptotic() {
        return Err(MarketError::InvalidConfig(
            "homogeneous welfare needs a finite unlicensed band".into(),
        ));
    }
    check_open_band_usable(cfg)?;
    let eb = effective_bands(cfg)?;
    let (b, w) = (eb.licensed, eb.unlicensed_finite());
    let (a, t) = (market_size, valuation);

    let w1 = (a / t - b / 2.0).max(0.0);
    if w <= w1 {
        return Ok((b * t * t / 4.0, HomogeneousRegion::PartialCoverage));
    }
    let w2 = ((a * a + b * b * t * t).sqrt() - b * t + a) / (2.0 * t);
    if w <= w2 {
        let x1 = a - w * t;
        return Ok((
            x1 * (t - x1 / b),
            HomogeneousRegion::FullCoverageAtValuation,
        ));
    }
    let sw = a * t - a * a * (b + 4.0 * w) / (4.0 * w * (b + w));
    Ok((sw, HomogeneousRegion::FullCoverageInterior))
}
