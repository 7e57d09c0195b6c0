//! Invariants and decision procedures for weak solenoids and their
//! odometer fibers.
//!
//! - [`supernatural`]: bonding sequences and their supernatural characteristic
//! - [`odometer`]: truncated profinite fibers, the adding machine, clopen sets
//! - [`pseudogroup`]: collapsible windows, isotropy, depth-bounded interleaving
//! - [`bundles`]: surface-group words, holonomy, Euler characteristics of covers
//! - [`toral`]: integer matrix chains, Smith and Hermite normal forms
//! - [`classify`]: homeomorphism verdicts and counterexample construction
//! - [`presentation`]: the versioned TOML presentation format

pub mod bundles;
pub mod classify;
pub mod error;
pub mod odometer;
pub mod presentation;
pub mod pseudogroup;
pub mod supernatural;
pub mod toral;

pub use error::{Error, Result};
