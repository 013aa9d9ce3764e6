//! Laplace noise, distance to instability, the stability mechanisms and the
//! degree-based parameter estimator.

mod estimate;
mod instability;
mod laplace;
mod mechanism;

pub use estimate::{param_estimate, param_estimate_with, EstimatorForm, ParamEstimate};
pub use instability::{distance_to_instability, distance_to_instability_memo, Memo};
pub use laplace::{laplace_quantile, sample_laplace};
pub use mechanism::{
    fast_distance, fast_distance_memo, stbl, stbl_cap, stbl_fast, stbl_fast_with_noise, stbl_with_noise,
    FastConfig, FastDistance, MechanismOutcome, MechanismTrace, ParamSource, PrivacyParams, STBL_SLACK,
    TIGHTEN_ALPHA,
};
