pub mod channels;
pub mod checks;
pub mod codes;
pub mod error;
pub mod linalg;
pub mod pauli;
pub mod protocol;
pub mod reconstruction;

pub use error::{Error, Result};
