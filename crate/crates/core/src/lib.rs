//! Zero-block detection (ZMD) for sub-Nyquist wideband spectrum sensing.
//!
//! A wideband spectrum of `L` sub-channels is observed through `M << L`
//! measurements taken with a block-sparse sensing operator whose support is a
//! bipartite *sensing graph*. A measurement that is (near) zero certifies every
//! sub-channel attached to it as vacant. The crate provides:
//!
//! - [`graph`]: regular, irregular and one-to-one sensing-graph ensembles;
//! - [`spectrum`]: block-sparse spectrum realizations;
//! - [`operator`]: the block sensing matrix, measurements and the time-domain
//!   sampling waveforms that realize it;
//! - [`detector`]: the noiseless, likelihood-ratio and threshold detectors plus
//!   threshold calibration;
//! - [`analysis`]: closed-form detection probabilities;
//! - [`experiments`]: the seeded Monte Carlo harness, figure presets and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod detector;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod operator;
pub mod rng;
pub mod spectrum;

pub use error::{Result, ZmdError};
