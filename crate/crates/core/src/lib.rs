pub mod aoi_metrics;
pub mod channel;
pub mod cli;
pub mod energy;
mod error;
pub mod pep;
pub mod scenario;
pub mod simkit;
pub mod specfun;
pub mod sweep;

pub use error::{Error, Result};
