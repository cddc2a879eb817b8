//! Detection, explanation and repair of infinitely ambiguous regexes.

pub mod budget;
pub mod error;
pub mod syntax;

pub use error::{Error, Result};
pub mod analysis;
pub mod antipatterns;
pub mod automata;
pub mod fixes;
pub mod harness;
pub mod selftest;
pub mod testgen;
pub mod theory;
