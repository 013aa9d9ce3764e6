use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::estimate::{param_estimate_with, EstimatorForm};
use super::instability::{distance_to_instability_memo, Memo};
use super::laplace::sample_laplace;
use crate::concentration::{check, default_constants, tighten_constants};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sbm::{GroundTruth, SbmParams};
use crate::sdp::{recover, SolveStatus, SolverOptions};

/// Scaling of the constants toward strictness before checking concentration
/// under estimated parameters.
pub const TIGHTEN_ALPHA: f64 = 0.001;

/// Extra search radius of the stability mechanism, in units of `1 / eps`.
pub const STBL_SLACK: f64 = 20.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams {
    pub eps: f64,
    pub delta: f64,
}

impl PrivacyParams {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParams(format!("eps = {eps} must be positive")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParams(format!("delta = {delta} must lie in (0, 1)")));
        }
        Ok(PrivacyParams { eps, delta })
    }

    /// `delta = n^(-exponent)`.
    pub fn with_exponent(eps: f64, n: usize, exponent: f64) -> Result<Self> {
        Self::new(eps, (n as f64).powf(-exponent))
    }

    /// Release threshold `ln(1 / delta) / eps`.
    pub fn threshold(&self) -> f64 {
        (1.0 / self.delta).ln() / self.eps
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MechanismTrace {
    pub d_hat: f64,
    pub noise: f64,
    pub threshold: f64,
    /// `None` for the stability mechanism, which checks nothing.
    pub concentration_pass: Option<bool>,
    pub solver_status: Option<SolveStatus>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MechanismOutcome {
    /// The released partition, `None` for the bottom symbol.
    pub result: Option<GroundTruth>,
    pub trace: MechanismTrace,
}

impl MechanismOutcome {
    pub fn is_bottom(&self) -> bool {
        self.result.is_none()
    }
}

/// Search radius of the stability mechanism: `ceil(T) + ceil(20 / eps)`.
pub fn stbl_cap(privacy: &PrivacyParams) -> usize {
    (privacy.threshold().ceil() + (STBL_SLACK / privacy.eps).ceil()) as usize
}

/// Stability mechanism: releases `f(g)` iff `d_f(g) + Lap(1 / eps)` exceeds
/// the threshold.
pub fn stbl<F, R>(g: &Graph, f: F, privacy: &PrivacyParams, rng: &mut R, budget: Option<Duration>) -> Result<MechanismOutcome>
where
    F: FnMut(&Graph) -> Option<GroundTruth>,
    R: Rng + ?Sized,
{
    let noise = sample_laplace(1.0 / privacy.eps, rng)?;
    stbl_with_noise(g, f, privacy, noise, budget)
}

/// [`stbl`] with the Laplace draw supplied by the caller.
pub fn stbl_with_noise<F>(g: &Graph, mut f: F, privacy: &PrivacyParams, noise: f64, budget: Option<Duration>) -> Result<MechanismOutcome>
where
    F: FnMut(&Graph) -> Option<GroundTruth>,
{
    let mut memo = Memo::new();
    let output = f(g);
    if let Some(t) = &output {
        memo.insert(g.clone(), Some(t.canonical()));
    } else {
        memo.insert(g.clone(), None);
    }
    let d = distance_to_instability_memo(g, &mut f, stbl_cap(privacy), budget, &mut memo)? as f64;
    let threshold = privacy.threshold();
    let release = d + noise > threshold;
    Ok(MechanismOutcome {
        result: if release { output } else { None },
        trace: MechanismTrace {
            d_hat: d,
            noise,
            threshold,
            concentration_pass: None,
            solver_status: None,
        },
    })
}

/// Where the fast mechanism takes the density constants from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamSource {
    /// Use `a` and `b` from the model parameters.
    Known,
    /// Estimate `a` and `b` from degrees (binary asymmetric model only;
    /// other models use the given values). On a degenerate estimate, fall
    /// back to the given values if `fallback`, else fail the check.
    Estimate { form: EstimatorForm, fallback: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FastConfig {
    /// Model structure; `a` and `b` are read only under [`ParamSource::Known`]
    /// or as a fallback.
    pub params: SbmParams,
    pub source: ParamSource,
    /// Stability multiplier: the mechanism aims for `c_delta ln n / eps`.
    pub c_delta: f64,
    pub solver: SolverOptions,
    /// Wall-clock guard on the distance search.
    pub budget: Option<Duration>,
}

impl FastConfig {
    pub fn known(params: SbmParams, c_delta: f64) -> Self {
        FastConfig {
            params,
            source: ParamSource::Known,
            c_delta,
            solver: SolverOptions::default(),
            budget: None,
        }
    }
}

/// Internal quantities of the fast mechanism before noise is added.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FastDistance {
    pub d_hat: f64,
    pub concentration_pass: bool,
    /// Rounded relaxation output at `g`.
    pub output: Option<GroundTruth>,
    pub solver_status: Option<SolveStatus>,
}

fn clustering<'a>(params: &'a SbmParams, solver: &'a SolverOptions) -> impl Fn(&Graph) -> Option<GroundTruth> + 'a {
    move |h: &Graph| recover(h, params, solver).ok().map(|(t, _)| t)
}

fn estimated_params(g: &Graph, config: &FastConfig) -> Option<SbmParams> {
    match (config.source, &config.params) {
        (ParamSource::Known, p) => Some(p.clone()),
        (ParamSource::Estimate { form, fallback }, p @ SbmParams::Basbm { .. }) => match param_estimate_with(g, form) {
            Ok(e) if e.a > e.b && e.b > 0.0 => Some(p.with_densities(e.a, e.b)),
            _ if fallback => Some(p.clone()),
            _ => None,
        },
        (ParamSource::Estimate { .. }, p) => Some(p.clone()),
    }
}

/// The fast mechanism's `d^`: `c ln n / eps` when `g` is concentrated around
/// its own rounded output under tightened constants, else
/// `min(c ln n / eps, d(g))` with the search capped at `ceil(c ln n / eps)`.
pub fn fast_distance(g: &Graph, config: &FastConfig, privacy: &PrivacyParams) -> Result<FastDistance> {
    fast_distance_memo(g, config, privacy, &mut Memo::new())
}

pub fn fast_distance_memo(g: &Graph, config: &FastConfig, privacy: &PrivacyParams, memo: &mut Memo) -> Result<FastDistance> {
    let n = g.n();
    if n != config.params.n() {
        return Err(Error::ShapeMismatch(format!("graph n = {n}, model n = {}", config.params.n())));
    }
    let target = config.c_delta * (n as f64).ln() / privacy.eps;
    let solved = recover(g, &config.params, &config.solver).ok();
    let solver_status = solved.as_ref().map(|(_, s)| s.status);
    let output = solved.map(|(t, _)| t);
    memo.insert(g.clone(), output.as_ref().map(GroundTruth::canonical));

    let pass = match &output {
        Some(y) => estimated_params(g, config)
            .and_then(|p| {
                let c = default_constants(&p, privacy.eps, config.c_delta).ok()?;
                let c = tighten_constants(&c, TIGHTEN_ALPHA).ok()?;
                check(g, y, &p, &c).ok()
            })
            .is_some_and(|r| r.pass),
        None => false,
    };
    let d_hat = if pass {
        target
    } else {
        let f = clustering(&config.params, &config.solver);
        let d = distance_to_instability_memo(g, f, target.ceil() as usize, config.budget, memo)?;
        target.min(d as f64)
    };
    Ok(FastDistance {
        d_hat,
        concentration_pass: pass,
        output,
        solver_status,
    })
}

/// Fast stability mechanism.
pub fn stbl_fast<R: Rng + ?Sized>(g: &Graph, config: &FastConfig, privacy: &PrivacyParams, rng: &mut R) -> Result<MechanismOutcome> {
    let noise = sample_laplace(1.0 / privacy.eps, rng)?;
    stbl_fast_with_noise(g, config, privacy, noise)
}

/// [`stbl_fast`] with the Laplace draw supplied by the caller.
pub fn stbl_fast_with_noise(g: &Graph, config: &FastConfig, privacy: &PrivacyParams, noise: f64) -> Result<MechanismOutcome> {
    let fd = fast_distance(g, config, privacy)?;
    let threshold = privacy.threshold();
    let release = fd.d_hat + noise > threshold;
    Ok(MechanismOutcome {
        result: if release { fd.output } else { None },
        trace: MechanismTrace {
            d_hat: fd.d_hat,
            noise,
            threshold,
            concentration_pass: Some(fd.concentration_pass),
            solver_status: fd.solver_status,
        },
    })
}
