pub mod dsl;
pub mod equation;
pub mod error;
pub mod exponent;
pub mod polygon;
pub mod scalar;
pub mod series;
pub mod solver;

pub use error::{Error, Result};
