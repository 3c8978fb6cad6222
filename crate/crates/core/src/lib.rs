pub mod analyzer;
pub mod error;
pub mod numeric;
pub mod reproduce;
pub mod samplers;
pub mod variance;

pub use error::{Error, Result};
