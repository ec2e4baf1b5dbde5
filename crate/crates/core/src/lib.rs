//! Sublinear, monotone and strongly translatable approximation operators on
//! `[0, 1]`, together with the machinery to measure their `L_p` errors and
//! check quantitative Korovkin-type bounds against them.

pub mod cli;
pub mod error;
pub mod funcspace;
pub mod korovkin;
pub mod operators;
pub mod smoothness;

pub use error::{Error, Result};
