//! Coherent risk measures on empirical loss distributions.
//!
//! The crate evaluates distortion (spectral) risk measures, sup-type norms
//! built from a concave distortion, and suprema over Kusuoka families, and
//! uses spectral weights to minimise risk over model parameters.

pub mod cli;
pub mod combination;
pub mod distortion;
pub mod empirical;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod kusuoka;
pub mod optimizer;
pub mod quasiconcave;
pub mod risk;
pub mod selftest;

pub use combination::Combiner;
pub use distortion::{Distortion, DistortionKind};
pub use empirical::{Block, LossSample, Rearrangement};
pub use error::{Result, RiskError};
pub use evaluation::{Curve, CurveKind};
pub use kusuoka::{KusuokaMember, KusuokaSet};
pub use quasiconcave::QuasiconcaveFn;
pub use risk::RiskSpec;
