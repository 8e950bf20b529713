//! Diversity-multiplexing tradeoff (DMT) analysis of half-duplex relay
//! channels with unequal average link strengths.
//!
//! The library models a source-relay-destination network whose three links
//! (S-R, R-D, S-D) operate at average SNRs `rho^a`, `rho^b`, `rho^c`. As
//! `rho` grows, the probability that a relaying strategy falls into outage
//! at rate `r log rho` decays like `rho^(-d(r))`; the curve `d(r)` is the
//! diversity-multiplexing tradeoff. Three independent routes to that curve
//! live here:
//!
//! * [`dmt`] — closed-form piecewise tradeoff curves for each strategy
//!   (full-duplex cut-set, static quantize-map-and-forward, dynamic
//!   decode-and-forward, CSI-based upper bounds, the two-relay parallel
//!   network).
//! * [`solver`] — a numerical outage-exponent optimizer that minimizes the
//!   exponent cost over piecewise-min/max outage regions, via exact
//!   polyhedral decomposition and refined grid scans. It reproduces the
//!   closed forms without sharing any algebra with them.
//! * [`strategy`] and [`mc`] — finite-SNR rate functionals plus a seeded
//!   Rayleigh Monte Carlo sampler that estimates outage probabilities over
//!   an SNR ladder and fits the diversity slope.

pub mod dmt;
pub mod error;
pub mod mc;
pub mod solver;
pub mod strategy;

pub use dmt::{
    ChannelExponents, DmtCurve, ExponentVector, MultiplexingGain, ParallelExponentVector, Regime,
    Scheme,
};
pub use error::{Error, Result};
