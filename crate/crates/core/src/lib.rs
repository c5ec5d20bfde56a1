//! Exact computations with fat flat subschemes of projective space: star
//! configurations and their relatives, initial degrees of symbolic powers,
//! bounds on Waldschmidt constants, and a classifier for non-reduced fat
//! points in the plane whose constant is below 5/2.

pub mod bounds;
pub mod checks;
pub mod classify;
pub mod combinatorics;
pub mod divisors;
pub mod error;
pub mod field;
pub mod interp;
pub mod json;
pub mod linalg;
pub mod projective;
pub mod scheme;

pub use error::{Error, Result};
