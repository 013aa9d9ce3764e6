//! Concentration conditions, their constants and the scalar rate functions
//! that constrain them.

mod checks;
mod constants;
mod derived;
pub mod rates;

pub use checks::{
    check, check_adjacency, check_basbm, check_basbm_adjacency, check_cbsbm, check_cbsbm_adjacency,
    check_gssbm, check_gssbm_adjacency, ConcentrationReport, ConditionResult, Relation,
};
pub(crate) use checks::vertex_cluster_counts;
pub use constants::{
    default_constants, default_constants_with_margin, shift_constants, tighten_constants,
    ConcentrationConstants, DEFAULT_MARGIN,
};
pub use derived::{x_check, BasbmDerived};
pub use rates::{g_rate, h, h_censored, h_tilde, rate_i, tau};
