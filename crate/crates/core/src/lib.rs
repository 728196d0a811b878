//! Exact rational geometry of Banach spaces generated by adequate families
//! of chains on trees: norms, dual norms, point classification, and
//! certificate-producing versions of the slice and neighbourhood
//! constructions on the binary tree space.

pub mod batch;
pub mod classify;
pub mod constructions;
pub mod dual;
pub mod error;
pub mod format;
pub mod functional;
pub mod gen;
pub mod norm;
pub mod rational;
pub mod signs;
pub mod tree;
pub mod vector;

pub use error::{Error, Result};
pub use rational::Rational;
