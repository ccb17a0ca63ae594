pub mod calculus;
pub mod caps;
pub mod convolution;
pub mod error;
pub mod gegenbauer;
pub mod schoenberg;
pub mod special;
pub mod sphere;

pub use error::{Error, Result};
