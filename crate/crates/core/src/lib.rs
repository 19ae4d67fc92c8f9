//! Exact computational toolkit for heights, Weil functions, Chow forms and
//! the effective subspace-theorem inequality chain over K = Q(t).

pub mod binary;
pub mod chow;
pub mod constants;
pub mod error;
pub mod expr;
pub mod funcfield;
pub mod heights;
pub mod mpoly;
pub mod varieties;
pub mod verifier;

pub use error::{Error, Result};
