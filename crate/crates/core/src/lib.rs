pub mod closedform;
pub mod error;
pub mod greens;
pub mod phasefn;
pub mod quad;
pub mod solver;
pub mod specfun;
pub mod verify;

pub use error::{Error, ParseError, Result};
