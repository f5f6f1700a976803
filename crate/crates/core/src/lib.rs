//! Exact class-level calculus for noncommutative T-duality over ℝⁿ/ℤⁿ.

pub mod bundles;
pub mod cocycle;
pub mod dim2;
pub mod error;
pub mod finite;
pub mod matrix;
pub mod rational;
pub mod sample;
pub mod transversality;

pub use error::{Error, Result};
pub use matrix::{Matrix, QMatrix};
pub use rational::Rational;
