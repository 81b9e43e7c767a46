//! Strictly temporally periodic points of one-dimensional cellular automata.
//!
//! The crate decides, for additive cellular automata over Z_m, whether the
//! set of configurations that are temporally but not spatially periodic is
//! residual, dense or empty, and backs every verdict with exact brute-force
//! checks on eventually periodic configurations.

pub mod additive;
pub mod arith;
pub mod cli;
pub mod configs;
pub mod engine;
pub mod error;
pub mod oracles;
pub mod periodicity;
pub mod rules;
pub mod sweep;

/// A cell state, one of `0..|A|`.
pub type Letter = u8;

pub use configs::{Config, Configuration, CyclicConfig, Distance, EpConfig};
pub use error::{CaError, Result};
pub use rules::{AdditiveRule, Rule, TableRule};
