pub mod error;
pub mod linalg;
pub mod macdonald;
pub mod opcalc;
pub mod qtcoeff;
pub mod symfunc;

pub use error::{Error, Result};
