//! migmap: mine library migrations from git histories and recommend
//! method-level mappings between a retired library and its replacement.
//!
//! The pipeline has three phases — collect repository histories (`corpus`),
//! detect migration segments and change fragments (`detect`), and reduce
//! fragments to method mappings with the substitution engine (`mapping`),
//! scored against baselines by the evaluation harness (`eval`).

pub mod baselines;
pub mod catalog;
pub mod cli;
pub mod corpus;
pub mod detect;
pub mod error;
pub mod eval;
pub mod fragment;
pub mod mapping;
pub mod method;
pub mod simdoc;
pub mod util;

pub use error::{Error, Result};
