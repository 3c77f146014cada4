//! Spatial throughput of a single-cell multiuser network aided by randomly
//! deployed intelligent reflecting surfaces (IRSs).
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: UE/IRS/relay placement and nearest-IRS association.
//! - [`channel`]: path-loss gains, fading samplers, composite IRS channel
//!   statistics, Gamma moment matching and the IRS coverage range.
//! - [`numerics`]: exponential integral, adaptive quadrature and the Gamma
//!   ergodic-rate expectation.
//! - [`analytic`]: closed-form link rates and the three-region spatial
//!   throughput integral.
//! - [`montecarlo`]: ground-truth simulation of the IRS-aided, relay-aided
//!   and BS-only systems.
//! - [`optimizer`]: deployment-range search and the M-vs-N tradeoff sweep.
//! - [`config`] and [`experiments`] (feature `cli`): configuration files and
//!   CSV-producing experiment drivers used by the `irs-throughput` binary.

pub mod analytic;
pub mod channel;
mod error;
pub mod geometry;
pub mod montecarlo;
pub mod numerics;
pub mod optimizer;
pub mod rng;

#[cfg(feature = "cli")]
pub mod config;
#[cfg(feature = "cli")]
pub mod experiments;

pub use error::{Error, Result};
