//! Spectral analysis of random graphs: generators, adjacency spectra, kernel
//! density estimates of spectra, entropy and divergences, and the inference
//! procedures built on them (parameter fitting, model selection and a
//! bootstrap two-sample test).

mod error;
pub mod density;
pub mod divergence;
pub mod estimation;
pub mod graph;
pub mod jstest;
pub mod rng;
pub mod selection;
pub mod spectrum;

pub use error::{Error, Result};
