//! Differentially private exact community recovery in stochastic block
//! models: graph containers, model samplers, a dense SDP solver, concentration
//! checks, dual certificates and the stability mechanisms.

pub mod certificates;
pub mod concentration;
pub mod error;
pub mod graph;
pub mod harness;
pub mod privacy;
pub mod sbm;
pub mod sdp;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Alphabet, Graph, GraphDelta};
pub use sbm::{GroundTruth, SbmParams, Variant};
