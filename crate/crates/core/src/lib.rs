//! Exact quasimap I-functions of toric GIT quotients, Birkhoff factorization
//! into genus-zero J-functions, and invariant extraction.

pub mod assets;
pub mod cli;
pub mod error;
pub mod exactalg;
pub mod ifunction;
pub mod mirror;
pub mod oracles;
pub mod target;

pub use error::{Error, Result};
