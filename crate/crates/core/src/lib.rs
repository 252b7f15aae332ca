//! Bilinear-complexity workbench for matrix product over finite fields.

pub mod circuits;
pub mod cli;
pub mod embed;
pub mod error;
pub mod field;
pub mod formats;
pub mod lemmas;
pub mod lowerbound;
pub mod matcodes;
pub mod matspace;
pub mod rank_oracle;

pub use error::{Error, Result};
