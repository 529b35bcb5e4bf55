//! Penner pseudo-Anosov stretch factors at the matrix level, and a search
//! pipeline producing certified Galois conjugates near chosen targets.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod curves;
pub mod densify;
pub mod error;
pub mod par;
pub mod proj;
pub mod twist;

pub use error::{Error, Result};
