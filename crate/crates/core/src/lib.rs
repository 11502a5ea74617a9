pub mod acquisition;
pub mod algorithms;
pub mod bax;
pub mod domain;
pub mod error;
pub mod gp;
pub mod harness;
pub mod metrics;
pub mod problems;

pub use error::{BaxError, Result};
