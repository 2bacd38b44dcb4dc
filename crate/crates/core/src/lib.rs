pub mod algebra;
pub mod catalog;
pub mod coeff;
pub mod error;
pub mod expmap;
pub mod grading;
pub mod linalg;
pub mod poly;
pub mod sample;

pub use error::{Error, Result};
