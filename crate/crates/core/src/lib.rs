//! Simulation and thermodynamic analysis of a heat-pumped quantized piston.
//!
//! A two-level working medium is coupled dispersively to a harmonic piston
//! mode and permanently to a hot and a cold bath. The crate propagates the
//! joint open system, reduces it to a drift-diffusion channel for the
//! piston, and measures the piston's work capacity through passive states
//! and ergotropy.

pub mod bath;
pub mod channel;
pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod joint;
pub mod passivity;
pub mod quantum;
pub mod report;

pub use error::{Error, Result};
