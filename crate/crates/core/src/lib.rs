pub mod data;
pub mod elliptic;
pub mod error;
pub mod fibre;
pub mod number;

pub use error::{Error, ErrorClass, Result};
