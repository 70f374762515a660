pub mod cli;
pub mod compression;
pub mod diagram;
pub mod error;
pub mod protocol;
pub mod qudit;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
