//! Exact computations on flag Dressians.

pub mod builtin;
pub mod error;
pub mod geometry;
pub mod io;
pub mod matroid;
pub mod rational;
pub mod realization;
pub mod sampling;
pub mod subset;
pub mod tropical;

pub use error::{Error, Result};
pub use rational::{ExtRational, Rational};
pub use subset::{enumerate_subsets, Subset};
