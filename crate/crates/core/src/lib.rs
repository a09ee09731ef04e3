pub mod asymptotics;
pub mod error;
pub mod models;
pub mod quadrature;
pub mod sampling;
pub mod transforms;

pub use error::{Error, Result};
