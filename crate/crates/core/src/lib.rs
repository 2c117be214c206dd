pub mod arith;
pub mod bounds;
pub mod campaign;
pub mod cli;
pub mod cyclotomic;
pub mod det;
pub mod error;
pub mod factor;
pub mod finite_field;
pub mod minors;
pub mod modular;
pub mod structure;
pub mod symmetry;

pub use error::{Error, Result};
