//! File formats, configuration and the command-line front end for the
//! `hazsim-core` simulation engine.
//!
//! - [`dataio`]: covariate CSV input and dataset CSV output.
//! - [`config`]: the JSON run configuration.
//! - [`runner`]: parallel, thread-count-independent execution.
//! - [`validate`]: goodness-of-fit reports against the generating model.
//! - [`cli`]: the `hazsim` binary.

pub mod cli;
pub mod config;
pub mod dataio;
pub mod runner;
pub mod validate;
