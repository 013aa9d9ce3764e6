use serde::{Deserialize, Serialize};

use super::rates::{bisect_decreasing, h, h_censored, h_tilde, rate_i, tau};
use crate::error::{Error, Result};
use crate::sbm::{SbmParams, Variant};

/// Safety margin applied to rate inequalities and constant restrictions.
pub const DEFAULT_MARGIN: f64 = 0.1;

/// Constants of the concentration inequalities for each model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ConcentrationConstants {
    Basbm { c1: f64, c2: f64, c3: f64, c4: f64 },
    Cbsbm { c1: f64, c2: f64 },
    Gssbm { c1: f64, c2: f64, c3: f64, c4: f64, c5: f64 },
}

impl ConcentrationConstants {
    pub fn variant(&self) -> Variant {
        match self {
            ConcentrationConstants::Basbm { .. } => Variant::Basbm,
            ConcentrationConstants::Cbsbm { .. } => Variant::Cbsbm,
            ConcentrationConstants::Gssbm { .. } => Variant::Gssbm,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            ConcentrationConstants::Basbm { c1, c2, c3, c4 } => vec![c1, c2, c3, c4],
            ConcentrationConstants::Cbsbm { c1, c2 } => vec![c1, c2],
            ConcentrationConstants::Gssbm { c1, c2, c3, c4, c5 } => vec![c1, c2, c3, c4, c5],
        }
    }

    /// `b + 2 c2` for the general model.
    pub fn tau_tilde(&self, b: f64) -> Option<f64> {
        match self {
            ConcentrationConstants::Gssbm { c2, .. } => Some(b + 2.0 * c2),
            _ => None,
        }
    }

    /// Positivity plus the per-model upper restrictions on `c2`.
    pub fn validate(&self, params: &SbmParams) -> Result<()> {
        if self.variant() != params.variant() {
            return Err(Error::InvalidParams(format!(
                "{} constants for the {} model",
                self.variant(),
                params.variant()
            )));
        }
        if let Some(v) = self.values().iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidShift(format!("constant {v} is not positive")));
        }
        match *self {
            ConcentrationConstants::Basbm { c2, .. } => {
                let limit = tau(params.a(), params.b())? - params.b();
                if c2 >= limit {
                    return Err(Error::InvalidShift(format!("c2 = {c2} must stay below tau - b = {limit}")));
                }
            }
            ConcentrationConstants::Cbsbm { c2, .. } => {
                if c2 >= params.a() {
                    return Err(Error::InvalidShift(format!("c2 = {c2} must stay below a = {}", params.a())));
                }
            }
            ConcentrationConstants::Gssbm { .. } => {}
        }
        Ok(())
    }
}

fn infeasible(msg: String) -> Error {
    Error::InfeasibleRegime(msg)
}

/// Spectral slack `c1` shared by every model.
fn spectral_slack(a: f64) -> f64 {
    3.0 * a.sqrt()
}

/// Constants for which every concentration condition holds with high
/// probability and which survive `c_delta / eps` shifts.
///
/// `c_delta = 0` gives constants for non-private use.
pub fn default_constants(params: &SbmParams, eps: f64, c_delta: f64) -> Result<ConcentrationConstants> {
    default_constants_with_margin(params, eps, c_delta, DEFAULT_MARGIN)
}

pub fn default_constants_with_margin(
    params: &SbmParams,
    eps: f64,
    c_delta: f64,
    margin: f64,
) -> Result<ConcentrationConstants> {
    params.validate()?;
    if !(eps > 0.0) || c_delta < 0.0 {
        return Err(Error::InvalidParams(format!("need eps > 0 and c_delta >= 0, got {eps}, {c_delta}")));
    }
    let shift = c_delta / eps;
    let a = params.a();
    let c1 = spectral_slack(a);
    match params {
        SbmParams::Basbm { b, rho, .. } => {
            let (b, rho) = (*b, *rho);
            let t = tau(a, b)?;
            // h~ peaks at tau (1 - 2 rho) and decreases afterwards
            let peak_at = t * (1.0 - 2.0 * rho);
            let peak = h(0.0, a, b, rho)?;
            let target = 1.0 + margin;
            if peak <= target {
                return Err(infeasible(format!(
                    "degree rate peaks at {peak:.4} <= 1 + margin (sqrt(a rho) - sqrt(b (1 - rho)) too small)"
                )));
            }
            let at_shift = h_tilde(shift, a, b, rho)?;
            if shift > 0.0 && at_shift <= 1.0 {
                return Err(infeasible(format!("h~(c/eps) = {at_shift:.4} <= 1")));
            }
            let ratio = (a / b).ln();
            let lhs = a.sqrt() - (b * (1.0 + ratio)).sqrt();
            let rhs = (shift * ratio).sqrt();
            if lhs <= rhs {
                return Err(infeasible(format!(
                    "sqrt(a) - sqrt(b (1 + ln(a/b))) = {lhs:.4} <= sqrt(c ln(a/b) / eps) = {rhs:.4}"
                )));
            }
            let mut hi = peak_at + 1.0;
            while h_tilde(hi, a, b, rho)? > target {
                hi = peak_at + 2.0 * (hi - peak_at);
            }
            let c4 = bisect_decreasing(peak_at, hi, |x| h_tilde(x, a, b, rho).unwrap() - target);
            if c4 <= shift {
                return Err(infeasible(format!("c4 = {c4:.4} does not exceed c/eps = {shift:.4}")));
            }
            let gap = t - b;
            if gap <= shift {
                return Err(infeasible(format!("tau - b = {gap:.4} does not exceed c/eps = {shift:.4}")));
            }
            let mut c2 = (shift + margin).min(gap - margin);
            if c2 <= shift {
                c2 = 0.5 * (shift + gap);
            }
            let c3 = 2.0 * a.sqrt();
            Ok(ConcentrationConstants::Basbm { c1, c2, c3, c4 })
        }
        SbmParams::Cbsbm { xi, .. } => {
            let hc = h_censored(*xi, a)?;
            if hc <= 1.0 {
                return Err(infeasible(format!("h(xi, a) = {hc:.4} <= 1")));
            }
            if shift >= a {
                return Err(infeasible(format!("c/eps = {shift:.4} >= a = {a}")));
            }
            let mut c2 = (shift + margin).min(a - margin);
            if c2 <= shift {
                c2 = 0.5 * (shift + a);
            }
            Ok(ConcentrationConstants::Cbsbm { c1, c2 })
        }
        SbmParams::Gssbm { b, .. } => {
            let b = *b;
            let rho_min = params.rho_min();
            let target = 1.0 / rho_min + margin;
            let t = tau(a, b)?;
            let c2 = (0.5 * (t - b)).max(shift / rho_min + margin);
            let ia = rate_i(a, b + 2.0 * c2)?;
            if b + 2.0 * c2 >= a || ia <= target {
                return Err(infeasible(format!(
                    "I(a, b + 2 c2) = {ia:.4} <= 1/rho_min + margin = {target:.4}"
                )));
            }
            // smallest y > b with I(b, y) = target
            let mut hi = 2.0 * b + 1.0;
            while rate_i(b, hi)? < target {
                hi *= 2.0;
            }
            let y = bisect_decreasing(b, hi, |y| target - rate_i(b, y).unwrap());
            let c3 = rho_min * (b + c2 - y);
            let c5 = rho_min * (b + 2.0 * c2 - y);
            if c3 <= shift {
                return Err(infeasible(format!(
                    "largest admissible c3 = {c3:.4} does not exceed c/eps = {shift:.4}"
                )));
            }
            if c5 <= shift {
                return Err(infeasible(format!(
                    "largest admissible c5 = {c5:.4} does not exceed c/eps = {shift:.4}"
                )));
            }
            Ok(ConcentrationConstants::Gssbm {
                c1,
                c2,
                c3,
                c4: 1.0,
                c5,
            })
        }
    }
}

/// Constants that remain valid after `floor(c_delta ln n / eps)` entry flips.
pub fn shift_constants(
    constants: &ConcentrationConstants,
    c_delta: f64,
    eps: f64,
    params: &SbmParams,
) -> Result<ConcentrationConstants> {
    if !(eps > 0.0) || c_delta < 0.0 {
        return Err(Error::InvalidParams(format!("need eps > 0 and c_delta >= 0, got {eps}, {c_delta}")));
    }
    let s = c_delta / eps;
    let out = match *constants {
        ConcentrationConstants::Basbm { c1, c2, c3, c4 } => {
            let rho = params.rho_min();
            ConcentrationConstants::Basbm {
                c1: c1 + (2.0 * s).sqrt(),
                c2: c2 - s,
                c3: c3 + (2.0 * s * (1.0 - rho) / rho).sqrt(),
                c4: c4 - s,
            }
        }
        ConcentrationConstants::Cbsbm { c1, c2 } => ConcentrationConstants::Cbsbm {
            c1: c1 + (8.0 * s).sqrt(),
            c2: c2 - s,
        },
        ConcentrationConstants::Gssbm { c1, c2, c3, c4, c5 } => ConcentrationConstants::Gssbm {
            c1: c1 + (2.0 * s).sqrt(),
            c2: c2 - s / params.rho_min(),
            c3: c3 - s,
            c4: c4 + s,
            c5: c5 - s,
        },
    };
    if let Some(v) = out.values().iter().find(|&&v| v <= 0.0) {
        return Err(Error::InvalidShift(format!("shifted constant {v} is not positive")));
    }
    Ok(out)
}

/// Scales every constant by `1 ± 2 alpha` in the direction that makes its
/// condition stricter.
pub fn tighten_constants(constants: &ConcentrationConstants, alpha: f64) -> Result<ConcentrationConstants> {
    if !(alpha > 0.0 && alpha <= 0.01) {
        return Err(Error::InvalidParams(format!("alpha = {alpha} must lie in (0, 0.01]")));
    }
    let up = 1.0 + 2.0 * alpha;
    let down = 1.0 - 2.0 * alpha;
    let out = match *constants {
        // upper bounds: c1, c3; lower bounds: c2, c4
        ConcentrationConstants::Basbm { c1, c2, c3, c4 } => ConcentrationConstants::Basbm {
            c1: c1 * down,
            c2: c2 * up,
            c3: c3 * down,
            c4: c4 * up,
        },
        ConcentrationConstants::Cbsbm { c1, c2 } => ConcentrationConstants::Cbsbm {
            c1: c1 * down,
            c2: c2 * up,
        },
        // c2 raises the degree floor, c3 and c5 lower the cross-edge ceilings,
        // c4 is subtracted from a lower bound
        ConcentrationConstants::Gssbm { c1, c2, c3, c4, c5 } => ConcentrationConstants::Gssbm {
            c1: c1 * down,
            c2: c2 * up,
            c3: c3 * up,
            c4: c4 * down,
            c5: c5 * up,
        },
    };
    if let Some(v) = out.values().iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::InvalidShift(format!("tightened constant {v} is not positive")));
    }
    Ok(out)
}
