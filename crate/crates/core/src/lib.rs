pub mod bounds;
pub mod channels;
pub mod cli;
pub mod divergences;
pub mod error;
pub mod exponents;
pub mod io;
pub mod linalg;
pub mod strategies;

pub use error::{Error, Result};
