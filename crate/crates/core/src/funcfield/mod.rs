//! Exact arithmetic in Q, Q[t] and K = Q(t); places of K over the projective
//! line, valuations, principal divisors and the sum formula.

mod divisor;
pub mod factor;
mod place;
mod poly;
mod ratfunc;

use num_rational::BigRational;

pub use divisor::{divisor, divisor_degree, Divisor};
pub use factor::{factor, is_irreducible, squarefree_decomposition, Factorization};
pub use place::{ord_at, place_degree, Place};
pub use poly::{Degree, Poly};
pub use ratfunc::RatFunc;

/// Elements of the constant field Q.
pub type Rat = BigRational;
