//! Congestion and demand primitives.
//!
//! Both come in a closed-form `Linear` kind, which unlocks every closed-form
//! solver path in this crate, and a `Custom` kind wrapping user closures.
//! Custom derivatives fall back to central finite differences. Shape
//! requirements (increasing convex congestion, decreasing concave demand)
//! cannot be proven from a closure, so they are spot-checked on a 128-point
//! probe grid before a solve trusts the function.

use std::fmt;
use std::sync::Arc;

use crate::error::MarketError;
use crate::numeric::{fd_deriv, fd_deriv2};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const PROBE_POINTS: usize = 128;
/// Slack for finite-difference noise in probe-grid shape checks.
const PROBE_TOL: f64 = 1e-6;

/// Congestion cost `g(load)` of a band carrying `load = mass / bandwidth`.
///
/// Must satisfy `g(0) = 0`, `g' >= 0`, `g'' >= 0`.
#[derive(Clone)]
pub enum CongestionFn {
    /// `g(x) = x`. Enables every closed-form equilibrium in the crate.
    Linear,
    Custom {
        eval: RealFn,
        deriv: Option<RealFn>,
        deriv2: Option<RealFn>,
    },
}

impl CongestionFn {
    pub fn linear() -> Self {
        CongestionFn::Linear
    }

    /// Custom congestion with finite-difference derivatives.
    pub fn custom(eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CongestionFn::Custom {
            eval: Arc::new(eval),
            deriv: None,
            deriv2: None,
        }
    }

    /// Custom congestion with analytic first and second derivatives.
    pub fn custom_with_derivs(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CongestionFn::Custom {
            eval: Arc::new(eval),
            deriv: Some(Arc::new(deriv)),
            deriv2: Some(Arc::new(deriv2)),
        }
    }

    /// `g(x) = x^2`, a convenient strictly convex probe function.
    pub fn quadratic() -> Self {
        Self::custom_with_derivs(|x| x * x, |x| 2.0 * x, |_| 2.0)
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, CongestionFn::Linear)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            CongestionFn::Linear => x,
            CongestionFn::Custom { eval, .. } => eval(x),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match self {
            CongestionFn::Linear => 1.0,
            CongestionFn::Custom { eval, deriv, .. } => match deriv {
                Some(d) => d(x),
                None => fd_deriv(&|t| eval(t), x),
            },
        }
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        match self {
            CongestionFn::Linear => 0.0,
            CongestionFn::Custom { eval, deriv2, .. } => match deriv2 {
                Some(d) => d(x),
                None => fd_deriv2(&|t| eval(t), x),
            },
        }
    }

    /// Probe-grid shape check on `[0, hi]`: `g(0) = 0`, nondecreasing,
    /// convex. `Linear` passes by construction.
    pub fn validate_on(&self, hi: f64) -> Result<(), MarketError> {
        if self.is_linear() {
            return Ok(());
        }
        if self.eval(0.0).abs() > 1e-12 {
            return Err(MarketError::InvalidConfig(format!(
                "congestion must vanish at zero load, got g(0) = {}",
                self.eval(0.0)
            )));
        }
        let hi = if hi > 0.0 { hi } else { 1.0 };
        for i in 0..PROBE_POINTS {
            let x = hi * (i as f64 + 0.5) / PROBE_POINTS as f64;
            let d = self.deriv(x);
            if !(d >= -PROBE_TOL) {
                return Err(MarketError::InvalidConfig(format!(
                    "congestion must be nondecreasing, g'({x}) = {d}"
                )));
            }
            let d2 = self.deriv2(x);
            if !(d2 >= -PROBE_TOL) {
                return Err(MarketError::InvalidConfig(format!(
                    "congestion must be convex, g''({x}) = {d2}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CongestionFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CongestionFn::{}", self.kind_name())
    }
}

/// Inverse demand `P(q)`: the price at which a mass `q` of users buys.
#[derive(Clone)]
pub enum DemandCurve {
    /// `P(q) = 1 - q` on `[0, 1]` (unit normalization).
    Linear,
    /// A mass `market_size` of identical users, each valuing service at
    /// `valuation`. The inverse demand is a step, so solvers treat this
    /// kind by case analysis instead of generic root finding.
    Homogeneous { market_size: f64, valuation: f64 },
    /// User-supplied decreasing concave inverse demand. `q_max` bounds the
    /// relevant domain and must satisfy `P(q_max) <= 0`.
    Custom {
        price: RealFn,
        deriv: Option<RealFn>,
        deriv2: Option<RealFn>,
        q_max: f64,
    },
}

impl DemandCurve {
    pub fn linear() -> Self {
        DemandCurve::Linear
    }

    pub fn homogeneous(market_size: f64, valuation: f64) -> Self {
        DemandCurve::Homogeneous {
            market_size,
            valuation,
        }
    }

    /// Custom inverse demand with finite-difference derivatives.
    pub fn custom(price: impl Fn(f64) -> f64 + Send + Sync + 'static, q_max: f64) -> Self {
        DemandCurve::Custom {
            price: Arc::new(price),
            deriv: None,
            deriv2: None,
            q_max,
        }
    }

    /// Custom inverse demand with analytic derivatives.
    pub fn custom_with_derivs(
        price: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        q_max: f64,
    ) -> Self {
        DemandCurve::Custom {
            price: Arc::new(price),
            deriv: Some(Arc::new(deriv)),
            deriv2: Some(Arc::new(deriv2)),
            q_max,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, DemandCurve::Linear)
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(self, DemandCurve::Homogeneous { .. })
    }

    pub fn price(&self, q: f64) -> f64 {
        match self {
            DemandCurve::Linear => 1.0 - q,
            DemandCurve::Homogeneous {
                market_size,
                valuation,
            } => {
                if q <= *market_size {
                    *valuation
                } else {
                    0.0
                }
            }
            DemandCurve::Custom { price, .. } => price(q),
        }
    }

    /// `P'(q)`; zero on the flat part of a homogeneous step.
    pub fn deriv(&self, q: f64) -> f64 {
        match self {
            DemandCurve::Linear => -1.0,
            DemandCurve::Homogeneous { .. } => 0.0,
            DemandCurve::Custom { price, deriv, .. } => match deriv {
                Some(d) => d(q),
                None => fd_deriv(&|t| price(t), q),
            },
        }
    }

    pub fn deriv2(&self, q: f64) -> f64 {
        match self {
            DemandCurve::Linear | DemandCurve::Homogeneous { .. } => 0.0,
            DemandCurve::Custom { price, deriv2, .. } => match deriv2 {
                Some(d) => d(q),
                None => fd_deriv2(&|t| price(t), q),
            },
        }
    }

    /// Largest mass any equilibrium can serve: where the price support ends.
    pub fn satiation_mass(&self) -> f64 {
        match self {
            DemandCurve::Linear => 1.0,
            DemandCurve::Homogeneous { market_size, .. } => *market_size,
            DemandCurve::Custom { q_max, .. } => *q_max,
        }
    }

    /// Probe-grid shape check: positive at zero, nonincreasing, concave,
    /// and nonpositive at `q_max` for the custom kind.
    pub fn validate(&self) -> Result<(), MarketError> {
        match self {
            DemandCurve::Linear => Ok(()),
            DemandCurve::Homogeneous {
                market_size,
                valuation,
            } => {
                if !(*market_size > 0.0) || !market_size.is_finite() {
                    return Err(MarketError::InvalidConfig(format!(
                        "homogeneous market_size must be finite and > 0, got {market_size}"
                    )));
                }
                if !(*valuation > 0.0) || !valuation.is_finite() {
                    return Err(MarketError::InvalidConfig(format!(
                        "homogeneous valuation must be finite and > 0, got {valuation}"
                    )));
                }
                Ok(())
            }
            DemandCurve::Custom { q_max, .. } => {
                if !(*q_max > 0.0) || !q_max.is_finite() {
                    return Err(MarketError::InvalidConfig(format!(
                        "custom demand q_max must be finite and > 0, got {q_max}"
                    )));
                }
                if !(self.price(0.0) > 0.0) {
                    return Err(MarketError::InvalidConfig(format!(
                        "demand must price a zero mass positively, got P(0) = {}",
                        self.price(0.0)
                    )));
                }
                if self.price(*q_max) > 0.0 {
                    return Err(MarketError::InvalidConfig(format!(
                        "custom demand must satisfy P(q_max) <= 0, got P({q_max}) = {}",
                        self.price(*q_max)
                    )));
                }
                for i in 0..PROBE_POINTS {
                    let q = q_max * (i as f64 + 0.5) / PROBE_POINTS as f64;
                    let d = self.deriv(q);
                    if !(d <= PROBE_TOL) {
                        return Err(MarketError::InvalidConfig(format!(
                            "demand must be nonincreasing, P'({q}) = {d}"
                        )));
                    }
                    let d2 = self.deriv2(q);
                    if !(d2 <= PROBE_TOL) {
                        return Err(MarketError::InvalidConfig(format!(
                            "demand must be concave, P''({q}) = {d2}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for DemandCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DemandCurve::{}", self.kind_name())
    }
}

impl CongestionFn {
    fn kind_name(&self) -> &'static str {
        match self {
            CongestionFn::Linear => "Linear",
            CongestionFn::Custom { .. } => "Custom",
        }
    }
}

impl DemandCurve {
    fn kind_name(&self) -> &'static str {
        match self {
            DemandCurve::Linear => "Linear",
            DemandCurve::Homogeneous { .. } => "Homogeneous",
            DemandCurve::Custom { .. } => "Custom",
        }
    }
}
