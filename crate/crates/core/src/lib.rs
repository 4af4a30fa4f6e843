pub mod acceptance;
pub mod checks;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod instance_io;
pub mod linalg;
pub mod model;
pub mod polyhedra;
pub mod rational;
pub mod risk_engine;

pub use error::{Error, Result};
pub use rational::Rat;
