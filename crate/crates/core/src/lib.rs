pub mod arith;
pub mod asm;
pub mod config;
pub mod detlib;
pub mod dyson;
pub mod error;
pub mod hyper;
pub mod laurent;
pub mod symfun;
pub mod verify;

pub use config::Limits;
pub use error::{Error, Result};
