//! Market primitives: bands, the incumbent's duty-cycle technology, and the
//! entrant structure under study.
//!
//! A [`MarketConfig`] is pure data. Validation is explicit ([`MarketConfig::validate`])
//! and every solver calls it on entry, so a config built by hand cannot
//! silently smuggle an inconsistent regime into a solve.

use crate::error::MarketError;

/// Width of the unlicensed band. `Asymptotic` models the limit of an
/// arbitrarily wide band; solvers switch to closed-form limits for it
/// rather than chasing a divergent bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    Finite(f64),
    Asymptotic,
}

impl Bandwidth {
    /// Finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            Bandwidth::Finite(w) => Some(w),
            Bandwidth::Asymptotic => None,
        }
    }

    pub fn is_asymptotic(self) -> bool {
        matches!(self, Bandwidth::Asymptotic)
    }

    /// True for a zero-width (absent) band.
    pub fn is_zero(self) -> bool {
        matches!(self, Bandwidth::Finite(w) if w == 0.0)
    }
}

/// Who competes with the incumbent, and on which spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntrantRegime {
    /// No entrants; the incumbent prices every service it operates.
    NoEntrants,
    /// Two or more entrants share the unlicensed band; price competition
    /// among them drives the shared-band price to zero.
    Multi,
    /// Exactly one entrant holds exclusive use of the unlicensed band
    /// (licensed-style sharing) and sets its own price.
    OneLicensedSharing,
    /// Exactly one entrant on the open unlicensed band; the incumbent may
    /// also serve there, which pins the band price at zero.
    OneUnlicensedSharing,
}

impl EntrantRegime {
    /// Stable lowercase name, used by the CLI and in error messages.
    pub fn name(self) -> &'static str {
        match self {
            EntrantRegime::NoEntrants => "none",
            EntrantRegime::Multi => "multi",
            EntrantRegime::OneLicensedSharing => "one_licensed_sharing",
            EntrantRegime::OneUnlicensedSharing => "one_unlicensed_sharing",
        }
    }
}

/// Full description of one market instance.
///
/// * `licensed_bw` (B): incumbent's licensed band, B > 0.
/// * `unlicensed_bw` (W): open band, W >= 0 or asymptotic.
/// * `duty_cycle` (alpha in [0, 1]): fraction of time the incumbent's
///   unlicensed carrier is on.
/// * `lteu_share` (beta in [0, 1]): fraction of the unlicensed band the
///   carrier occupies while on.
/// * `efficiency` (gamma >= 1): spectral-efficiency advantage of the
///   incumbent's licensed technology.
/// * `lteu_enabled`: whether the duty-cycle carrier is deployed at all.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketConfig {
    pub licensed_bw: f64,
    pub unlicensed_bw: Bandwidth,
    pub duty_cycle: f64,
    pub lteu_share: f64,
    pub efficiency: f64,
    pub lteu_enabled: bool,
    pub n_entrants: u32,
    pub regime: EntrantRegime,
}

impl MarketConfig {
    /// Incumbent-only market on (B, W), duty-cycle carrier off.
    pub fn monopoly(licensed_bw: f64, unlicensed_bw: f64) -> Self {
        MarketConfig {
            licensed_bw,
            unlicensed_bw: Bandwidth::Finite(unlicensed_bw),
            duty_cycle: 0.0,
            lteu_share: 0.0,
            efficiency: 1.0,
            lteu_enabled: false,
            n_entrants: 0,
            regime: EntrantRegime::NoEntrants,
        }
    }

    /// Incumbent plus `n >= 2` entrants on the open unlicensed band.
    pub fn multi_entrant(licensed_bw: f64, unlicensed_bw: f64, n_entrants: u32) -> Self {
        MarketConfig {
            n_entrants,
            regime: EntrantRegime::Multi,
            ..Self::monopoly(licensed_bw, unlicensed_bw)
        }
    }

    /// Incumbent plus a single entrant with exclusive unlicensed access.
    pub fn one_entrant_licensed(licensed_bw: f64, unlicensed_bw: f64) -> Self {
        MarketConfig {
            n_entrants: 1,
            regime: EntrantRegime::OneLicensedSharing,
            ..Self::monopoly(licensed_bw, unlicensed_bw)
        }
    }

    /// Incumbent plus a single entrant on the open unlicensed band.
    pub fn one_entrant_unlicensed(licensed_bw: f64, unlicensed_bw: f64) -> Self {
        MarketConfig {
            n_entrants: 1,
            regime: EntrantRegime::OneUnlicensedSharing,
            ..Self::monopoly(licensed_bw, unlicensed_bw)
        }
    }

    /// Turn the duty-cycle carrier on with the given (alpha, beta).
    pub fn with_lteu(mut self, duty_cycle: f64, lteu_share: f64) -> Self {
        self.duty_cycle = duty_cycle;
        self.lteu_share = lteu_share;
        self.lteu_enabled = true;
        self
    }

    /// Turn the duty-cycle carrier off, keeping (alpha, beta) for later
    /// comparison sweeps.
    pub fn without_lteu(mut self) -> Self {
        self.lteu_enabled = false;
        self
    }

    /// Set the licensed spectral-efficiency factor gamma.
    pub fn with_efficiency(mut self, efficiency: f64) -> Self {
        self.efficiency = efficiency;
        self
    }

    /// Replace the unlicensed band with the wide-band limit.
    pub fn with_asymptotic_unlicensed(mut self) -> Self {
        self.unlicensed_bw = Bandwidth::Asymptotic;
        self
    }

    /// True when the duty-cycle carrier actually claims unlicensed airtime:
    /// enabled with alpha > 0 and beta > 0. With either at zero the market
    /// is indistinguishable from one without the carrier.
    pub fn lteu_active(&self) -> bool {
        self.lteu_enabled && self.duty_cycle > 0.0 && self.lteu_share > 0.0
    }

    /// Check all field ranges and cross-field consistency.
    pub fn validate(&self) -> Result<(), MarketError> {
        fn bad(msg: String) -> Result<(), MarketError> {
            Err(MarketError::InvalidConfig(msg))
        }
        if !(self.licensed_bw > 0.0) || !self.licensed_bw.is_finite() {
            return bad(format!(
                "licensed_bw must be finite and > 0, got {}",
                self.licensed_bw
            ));
        }
        if let Bandwidth::Finite(w) = self.unlicensed_bw {
            if !(w >= 0.0) || !w.is_finite() {
                return bad(format!("unlicensed_bw must be finite and >= 0, got {w}"));
            }
        }
        if !(0.0..=1.0).contains(&self.duty_cycle) {
            return bad(format!(
                "duty_cycle must lie in [0, 1], got {}",
                self.duty_cycle
            ));
        }
        if !(0.0..=1.0).contains(&self.lteu_share) {
            return bad(format!(
                "lteu_share must lie in [0, 1], got {}",
                self.lteu_share
            ));
        }
        if !(self.efficiency >= 1.0) || !self.efficiency.is_finite() {
            return bad(format!(
                "efficiency must be finite and >= 1, got {}",
                self.efficiency
            ));
        }
        match self.regime {
            EntrantRegime::NoEntrants if self.n_entrants != 0 => bad(format!(
                "regime none requires n_entrants = 0, got {}",
                self.n_entrants
            )),
            EntrantRegime::Multi if self.n_entrants < 2 => bad(format!(
                "regime multi requires n_entrants >= 2, got {}",
                self.n_entrants
            )),
            EntrantRegime::OneLicensedSharing | EntrantRegime::OneUnlicensedSharing
                if self.n_entrants != 1 =>
            {
                bad(format!(
                    "regime {} requires n_entrants = 1, got {}",
                    self.regime.name(),
                    self.n_entrants
                ))
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_validate() {
        assert!(MarketConfig::monopoly(1.0, 1.0).validate().is_ok());
        assert!(MarketConfig::multi_entrant(1.0, 1.0, 3).validate().is_ok());
        assert!(MarketConfig::one_entrant_licensed(1.0, 1.0)
            .validate()
            .is_ok());
        assert!(MarketConfig::one_entrant_unlicensed(1.0, 1.0)
            .with_lteu(0.5, 0.5)
            .validate()
            .is_ok());
    }

    #[test]
    fn rejects_out_of_range_fields() {
        assert!(MarketConfig::monopoly(0.0, 1.0).validate().is_err());
        assert!(MarketConfig::monopoly(1.0, -0.5).validate().is_err());
        let cfg = MarketConfig::monopoly(1.0, 1.0).with_lteu(1.5, 0.5);
        assert!(cfg.validate().is_err());
        let cfg = MarketConfig::monopoly(1.0, 1.0).with_lteu(0.5, -0.1);
        assert!(cfg.validate().is_err());
        let cfg = MarketConfig::monopoly(1.0, 1.0).with_efficiency(0.9);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_regime_count_mismatch() {
        let mut cfg = MarketConfig::multi_entrant(1.0, 1.0, 2);
        cfg.n_entrants = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = MarketConfig::one_entrant_licensed(1.0, 1.0);
        cfg.n_entrants = 2;
        assert!(cfg.validate().is_err());
        let mut cfg = MarketConfig::monopoly(1.0, 1.0);
        cfg.n_entrants = 1;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn lteu_active_requires_positive_shares() {
        let cfg = MarketConfig::monopoly(1.0, 1.0).with_lteu(0.5, 0.5);
        assert!(cfg.lteu_active());
        assert!(!cfg.clone().without_lteu().lteu_active());
        let cfg = MarketConfig::monopoly(1.0, 1.0).with_lteu(0.0, 0.5);
        assert!(!cfg.lteu_active());
        let cfg = MarketConfig::monopoly(1.0, 1.0).with_lteu(0.5, 0.0);
        assert!(!cfg.lteu_active());
    }
}
