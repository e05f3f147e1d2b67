//! File formats and command-line front end for `ksn-core`.
//!
//! * [`numtext`]: exact decimal / fraction literals and output formatting.
//! * [`dataset`]: the `x1,...,xd,f` CSV format and lattice generators.
//! * [`netfile`]: canonical JSON network files.
//! * [`cli`]: the `ksn` command.

pub mod cli;
pub mod dataset;
mod error;
pub mod netfile;
pub mod numtext;

pub use error::{KsnError, Result};
