//! Separability analysis of two-mode Gaussian states.

pub mod analysis;
pub mod error;
pub mod identities;
pub mod indicators;
pub mod oracle;
pub mod sfii;
pub mod state_gen;
pub mod sweep;
pub mod symplectic;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
