pub mod error;
pub mod index;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub mod tensor;
pub mod sheffer;
pub mod norms;
pub mod families;
pub mod cli;
