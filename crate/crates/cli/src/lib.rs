//! Command-line operations on trusty URIs: checking and creating trusty
//! files, batch execution, the corruption fuzzer and synthetic data.

pub mod batch;
pub mod commands;
pub mod fuzz;
pub mod synth;
