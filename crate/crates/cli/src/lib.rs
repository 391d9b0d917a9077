//! Command-line front end and experiment drivers for `graphspectra`.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod output;
pub mod roc;
