//! Exact conditional expectations, subalgebra states and conjugation
//! dynamics for group von Neumann algebras, computed over `ℚ[Γ]`.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod expectation;
pub mod group;
pub mod measure;
pub mod rational;
pub mod scenarios;

pub use error::{Error, Result};
pub use rational::Rational;
