//! Equilibrium solver for price competition between a licensed incumbent
//! and entrants on shared unlicensed spectrum, where the incumbent may run
//! a duty-cycled carrier on a slice of the open band.
//!
//! The model: users buy service from whichever provider minimizes
//! price plus congestion, so active providers equalize their delivered
//! price (a Wardrop split). Providers then compete in prices over that
//! user response. The crate computes the resulting equilibrium prices,
//! user masses, revenues, consumer surplus, and social welfare for four
//! market shapes:
//!
//! * a single incumbent holding licensed spectrum plus the open band
//!   ([`solve_monopoly`]),
//! * an incumbent against a competitive fringe of entrants who price the
//!   open band to zero ([`solve_multi_entrant`]),
//! * an incumbent against one entrant, each holding separate spectrum
//!   ([`solve_one_entrant_licensed`]),
//! * an incumbent against one entrant who only has the open band
//!   ([`solve_one_entrant_unlicensed`]).
//!
//! A duty-cycled carrier with duty cycle `alpha` on a share `beta` of the
//! open band reshapes both sides' effective bandwidths
//! ([`effective_bands`]); [`find_threshold`], [`optimal_alpha`],
//! [`cs_gain_region`], and the sweep helpers answer when and how hard the
//! incumbent should run it.
//!
//! Closed forms are used wherever the model admits them (linear
//! congestion and demand); elsewhere the solvers fall back to nested
//! one-dimensional searches over the same Wardrop machinery, and
//! [`verify_nash`] can audit any returned equilibrium by grid-scanning
//! unilateral price deviations.
//!
//! ```
//! use lteu_market::{solve, welfare_report, CongestionFn, DemandCurve, MarketConfig};
//!
//! // Unit licensed and open bands; carrier on half the open band, half the time.
//! let cfg = MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 0.5);
//! let g = CongestionFn::linear();
//! let demand = DemandCurve::linear();
//!
//! let with_carrier = solve(&cfg, &g, &demand)?;
//! let without = solve(&cfg.clone().without_lteu(), &g, &demand)?;
//! assert!((with_carrier.incumbent_price - 0.3).abs() < 1e-12);
//! assert!(with_carrier.incumbent_revenue > without.incumbent_revenue);
//!
//! // ...but the cheaper carrier-free market serves more users.
//! let report = welfare_report(&with_carrier, &demand);
//! assert!(report.consumer_surplus < welfare_report(&without, &demand).consumer_surplus);
//! # Ok::<(), lteu_market::MarketError>(())
//! ```

// Validation guards are written `!(x > 0.0)` on purpose: the negated form
// sends NaN into the rejection branch, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bands;
pub mod config;
pub mod equilibrium;
pub mod error;
pub mod functions;
pub mod numeric;
pub mod threshold;
pub mod wardrop;
pub mod welfare;

pub use bands::{
    effective_bands, entrant_congestion, gamma_threshold, incumbent_congestion, EffectiveBands,
    DENOM_TOL,
};
pub use config::{Bandwidth, EntrantRegime, MarketConfig};
pub use equilibrium::{
    homogeneous_sw, solve, solve_monopoly, solve_multi_entrant, solve_one_entrant_licensed,
    solve_one_entrant_unlicensed, verify_nash, DeviationReport, DeviationScan, EquilibriumOutcome,
    HomogeneousRegion,
};
pub use error::MarketError;
pub use functions::{CongestionFn, DemandCurve};
pub use threshold::{
    cs_gain_region, find_threshold, fixed_k_sweep, metric_difference, optimal_alpha, sweep,
    Comparison, CsGainRegion, Metric, ParamAxis, SweepPoint, SweepResult, SweepRow, ThresholdQuery,
    ThresholdResult, THRESHOLD_TOL,
};
pub use wardrop::{delivered_price, services, wardrop_split, Service, ServiceKind, WARDROP_TOL};
pub use welfare::{
    consumer_surplus, small_w_slopes, sw_gap_asymptotic, welfare_report, SmallWSlopes,
    WelfareReport,
};
