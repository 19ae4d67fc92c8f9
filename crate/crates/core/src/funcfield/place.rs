use std::fmt;

use super::factor::is_irreducible;
use super::{Poly, RatFunc};
use crate::error::{Error, Result};

/// A place of Q(t): a monic irreducible polynomial or the place at infinity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Poly),
    Infinite,
}

impl Place {
    /// Validated finite place. A non-monic polynomial is made monic first.
    pub fn finite(p: Poly) -> Result<Place> {
        let p = p.monic();
        if p.is_constant() || !is_irreducible(&p) {
            return Err(Error::InvalidPlace(p.to_string()));
        }
        Ok(Place::Finite(p))
    }

    /// The place `t - a`.
    pub fn linear(a: i64) -> Place {
        Place::Finite(Poly::from_ints(&[-a, 1]))
    }

    pub fn degree(&self) -> i64 {
        place_degree(self)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }
}

pub fn place_degree(p: &Place) -> i64 {
    match p {
        Place::Finite(f) => f.deg() as i64,
        Place::Infinite => 1,
    }
}

/// Order of a nonzero element of K at a place.
///
/// Finite places are handled by peeling the place polynomial off numerator
/// and denominator with exact divisions; nothing is factored.
pub fn ord_at(f: &RatFunc, p: &Place) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::OrderOfZero);
    }
    Ok(match p {
        Place::Finite(g) => {
            let (a, _) = f.num().peel(g);
            let (b, _) = f.den().peel(g);
            a as i64 - b as i64
        }
        Place::Infinite => f.den().deg() as i64 - f.num().deg() as i64,
    })
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}
