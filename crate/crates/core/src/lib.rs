//! A signature-parametric display-calculus kernel for lattice-expansion
//! logics: cut-free proof search, derivation checking and constructive
//! extraction of Lyndon/Maehara interpolants.

pub mod calculus;
pub mod display;
pub mod error;
pub mod generate;
pub mod interpolate;
pub mod oracle;
pub mod presets;
pub mod prover;
pub mod signature;
pub mod syntax;

pub use error::{Error, Result};
