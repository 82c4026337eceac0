//! Equivalent-bandwidth transform for a duty-cycled unlicensed carrier.
//!
//! With the carrier on a fraction `alpha` of the time and claiming a share
//! `beta` of the open band while on, both the incumbent's and the entrants'
//! time-averaged congestion behave, for linear congestion, exactly as if the
//! incumbent owned a wider licensed band `b_e` and the entrants a narrower
//! open band `w_e`:
//!
//! ```text
//! b_e = gamma * (B + alpha beta W / (1 + beta (1 - alpha) W / B))
//! w_e = W - alpha beta W / (1 - beta (1 - alpha))
//! ```
//!
//! `b_e` is the harmonic mean of the on/off incumbent bandwidths weighted by
//! airtime, so for convex congestion the true time-averaged congestion is at
//! least the equivalent-band congestion (Jensen), with equality in the
//! linear case. The transform strictly shrinks total bandwidth:
//! `b_e + w_e < B + W` whenever it is not the identity (gamma = 1).

use crate::config::{Bandwidth, MarketConfig};
use crate::error::MarketError;
use crate::functions::CongestionFn;

/// Below this, a sharing denominator counts as vanished.
pub const DENOM_TOL: f64 = 1e-12;

/// Equivalent exclusive bandwidths induced by duty-cycle sharing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveBands {
    /// Incumbent-equivalent band `b_e` (already scaled by gamma).
    pub licensed: f64,
    /// Entrant-equivalent band `w_e`; asymptotic iff the physical band is.
    pub unlicensed: Bandwidth,
}

impl EffectiveBands {
    /// Finite `w_e`, panicking on the asymptotic case; use where the caller
    /// has already dispatched on finiteness.
    pub fn unlicensed_finite(&self) -> f64 {
        self.unlicensed
            .finite()
            .expect("caller must handle the asymptotic band separately")
    }
}

/// Compute the equivalent bands for a config.
///
/// With the carrier inactive (disabled, or alpha = 0, or beta = 0) this is
/// the identity up to efficiency: `(gamma B, W)`.
pub fn effective_bands(cfg: &MarketConfig) -> Result<EffectiveBands, MarketError> {
    cfg.validate()?;
    let b = cfg.licensed_bw;
    let gamma = cfg.efficiency;
    if !cfg.lteu_active() {
        return Ok(EffectiveBands {
            licensed: gamma * b,
            unlicensed: cfg.unlicensed_bw,
        });
    }
    let alpha = cfg.duty_cycle;
    let beta = cfg.lteu_share;
    match cfg.unlicensed_bw {
        Bandwidth::Asymptotic => {
            if 1.0 - alpha <= DENOM_TOL {
                return Err(MarketError::InvalidConfig(
                    "duty_cycle = 1 on an asymptotic band makes the licensed-equivalent band unbounded"
                        .into(),
                ));
            }
            Ok(EffectiveBands {
                licensed: gamma * b / (1.0 - alpha),
                unlicensed: Bandwidth::Asymptotic,
            })
        }
        Bandwidth::Finite(w) => {
            if w == 0.0 {
                return Ok(EffectiveBands {
                    licensed: gamma * b,
                    unlicensed: Bandwidth::Finite(0.0),
                });
            }
            let denom = 1.0 - beta * (1.0 - alpha);
            if denom <= DENOM_TOL {
                return Err(MarketError::DegenerateDenominator(format!(
                    "1 - beta (1 - alpha) = {denom} with a nonzero unlicensed band"
                )));
            }
            let licensed = gamma * (b + alpha * beta * w / (1.0 + beta * (1.0 - alpha) * w / b));
            let unlicensed = w - alpha * beta * w / denom;
            Ok(EffectiveBands {
                licensed,
                unlicensed: Bandwidth::Finite(unlicensed),
            })
        }
    }
}

/// Physical width of the open band as an f64 (infinite when asymptotic).
pub(crate) fn open_band_width(cfg: &MarketConfig) -> f64 {
    match cfg.unlicensed_bw {
        Bandwidth::Finite(w) => w,
        Bandwidth::Asymptotic => f64::INFINITY,
    }
}

/// Congestion of `load` on a band of width `bw` (zero load on an infinite
/// band is free; positive load on a zero band is infinitely congested).
fn band_congestion(load: f64, bw: f64, g: &CongestionFn) -> f64 {
    if load == 0.0 {
        return 0.0;
    }
    if bw == 0.0 {
        return f64::INFINITY;
    }
    g.eval(load / bw)
}

/// Time-averaged congestion felt by the incumbent's customers when a mass
/// `x1` rides its licensed-technology service.
pub fn incumbent_congestion(x1: f64, cfg: &MarketConfig, g: &CongestionFn) -> f64 {
    let b = cfg.efficiency * cfg.licensed_bw;
    if !cfg.lteu_active() {
        return band_congestion(x1, b, g);
    }
    let w = open_band_width(cfg);
    let on = cfg.efficiency * (cfg.licensed_bw + cfg.lteu_share * w);
    let alpha = cfg.duty_cycle;
    alpha * band_congestion(x1, on, g) + (1.0 - alpha) * band_congestion(x1, b, g)
}

/// Time-averaged congestion felt by a total mass `w_t` on the open band.
///
/// Errors with `DegenerateDenominator` when the duty-cycle carrier claims
/// the whole band (`beta = 1`) for a positive fraction of time while `w_t`
/// is positive: the on-phase congestion is unbounded.
pub fn entrant_congestion(
    w_t: f64,
    cfg: &MarketConfig,
    g: &CongestionFn,
) -> Result<f64, MarketError> {
    let w = open_band_width(cfg);
    if !cfg.lteu_active() {
        return Ok(band_congestion(w_t, w, g));
    }
    let alpha = cfg.duty_cycle;
    let beta = cfg.lteu_share;
    if beta >= 1.0 - DENOM_TOL && w_t > 0.0 && w > 0.0 {
        return Err(MarketError::DegenerateDenominator(
            "lteu_share = 1 leaves entrants no on-phase bandwidth".into(),
        ));
    }
    let on = (1.0 - beta) * w;
    Ok(alpha * band_congestion(w_t, on, g) + (1.0 - alpha) * band_congestion(w_t, w, g))
}

/// Efficiency level above which duty-cycle sharing enlarges total
/// equivalent bandwidth: `b_e + w_e > gamma B + W` iff `gamma` exceeds
///
/// ```text
/// gamma* = (1 + beta (1 - alpha) W / B) / (1 - beta (1 - alpha))
/// ```
pub fn gamma_threshold(cfg: &MarketConfig) -> Result<f64, MarketError> {
    cfg.validate()?;
    let w = match cfg.unlicensed_bw {
        Bandwidth::Finite(w) if w > 0.0 => w,
        Bandwidth::Finite(_) => {
            return Err(MarketError::InvalidConfig(
                "efficiency threshold needs a nonzero unlicensed band".into(),
            ))
        }
        Bandwidth::Asymptotic => {
            return Err(MarketError::InvalidConfig(
                "efficiency threshold needs a finite unlicensed band".into(),
            ))
        }
    };
    let denom = 1.0 - cfg.lteu_share * (1.0 - cfg.duty_cycle);
    if denom <= DENOM_TOL {
        return Err(MarketError::DegenerateDenominator(format!(
            "1 - beta (1 - alpha) = {denom} in the efficiency threshold"
        )));
    }
    Ok((1.0 + cfg.lteu_share * (1.0 - cfg.duty_cycle) * w / cfg.licensed_bw) / denom)
}
