use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{Cell, Mode};
use crate::certificates::certify;
use crate::concentration::{check, default_constants};
use crate::error::Result;
use crate::privacy::{stbl, stbl_fast, FastConfig, ParamSource, PrivacyParams};
use crate::sbm::{generate, GroundTruth, SbmParams};
use crate::sdp::{recover, SolverOptions};

/// Solver and mechanism settings shared by every trial of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOptions {
    pub mode: Mode,
    pub solver: SolverOptions,
    pub source: ParamSource,
    pub budget: Option<Duration>,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions {
            mode: Mode::Nonprivate,
            solver: SolverOptions::default(),
            source: ParamSource::Known,
            budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub cell: Cell,
    pub mode: Mode,
    pub seed: u64,
    pub recovered: bool,
    pub bottom: bool,
    /// Concentration of the sampled graph around its planted partition under
    /// the default constants of the cell; `None` when those constants are
    /// infeasible.
    pub conc_pass: Option<bool>,
    /// Dual certificate for the planted partition. The general model takes
    /// its multiplier scale from the constants at `c_delta = 0`.
    pub cert_valid: Option<bool>,
    pub ms: f64,
    /// Set when the trial failed; the flags above are then all negative.
    pub error: Option<String>,
}

/// Samples a graph for `cell` from `seed` and runs the selected estimator on
/// it. Failures are recorded in the result instead of being returned.
pub fn run_trial(cell: &Cell, seed: u64, opts: &TrialOptions) -> TrialResult {
    let start = Instant::now();
    let mut result = TrialResult {
        cell: cell.clone(),
        mode: opts.mode,
        seed,
        recovered: false,
        bottom: false,
        conc_pass: None,
        cert_valid: None,
        ms: 0.0,
        error: None,
    };
    if let Err(e) = fill(&mut result, cell, seed, opts) {
        result.recovered = false;
        result.bottom = false;
        result.error = Some(e.to_string());
    }
    result.ms = start.elapsed().as_secs_f64() * 1e3;
    result
}

fn fill(result: &mut TrialResult, cell: &Cell, seed: u64, opts: &TrialOptions) -> Result<()> {
    let params = &cell.params;
    let (g, truth) = generate(params, seed)?;
    let constants = default_constants(params, cell.eps, cell.c_delta).ok();
    if let Some(c) = &constants {
        result.conc_pass = Some(check(&g, &truth, params, c)?.pass);
    }
    result.cert_valid = match params {
        SbmParams::Gssbm { b, .. } => match default_constants(params, cell.eps, 0.0).ok().and_then(|c| c.tau_tilde(*b)) {
            Some(t) => Some(certify(&g, &truth, params, Some(t))?),
            None => None,
        },
        _ => Some(certify(&g, &truth, params, None)?),
    };

    let released: Option<GroundTruth> = match opts.mode {
        Mode::Nonprivate => recover(&g, params, &opts.solver).ok().map(|(t, _)| t),
        Mode::Stbl | Mode::Fast => {
            let privacy = PrivacyParams::with_exponent(cell.eps, params.n(), cell.delta_exp)?;
            // the noise stream is keyed apart from the graph stream
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
            let outcome = if opts.mode == Mode::Stbl {
                let f = |h: &crate::graph::Graph| recover(h, params, &opts.solver).ok().map(|(t, _)| t);
                stbl(&g, f, &privacy, &mut rng, opts.budget)?
            } else {
                let config = FastConfig {
                    params: params.clone(),
                    source: opts.source,
                    c_delta: cell.c_delta,
                    solver: opts.solver.clone(),
                    budget: opts.budget,
                };
                stbl_fast(&g, &config, &privacy, &mut rng)?
            };
            result.bottom = outcome.is_bottom();
            outcome.result
        }
    };
    result.recovered = released.is_some_and(|t| t.canonical() == truth.canonical());
    Ok(())
}
