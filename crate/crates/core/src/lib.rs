pub mod arith;
pub mod eqchar;
pub mod error;
pub mod ffield;
pub mod gmod;
pub mod group;
pub mod linalg;
pub mod mixed;
pub mod report;
pub mod structure;
pub mod suite;

pub use error::{Error, Result};
