use std::collections::BTreeMap;
use std::fmt;

use super::factor::factor;
use super::{ord_at, place_degree, Place, RatFunc};
use crate::error::{Error, Result};

/// Finite formal sum of places with nonzero integer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    support: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn new() -> Self {
        Divisor::default()
    }

    pub fn add(&mut self, p: Place, k: i64) {
        let e = self.support.entry(p.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.support.remove(&p);
        }
    }

    pub fn multiplicity(&self, p: &Place) -> i64 {
        self.support.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.support.iter().map(|(p, &k)| (p, k))
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .support
            .iter()
            .map(|(p, k)| format!("{k}*[{p}]"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Principal divisor of a nonzero element of K.
pub fn divisor(f: &RatFunc) -> Result<Divisor> {
    if f.is_zero() {
        return Err(Error::OrderOfZero);
    }
    let mut d = Divisor::new();
    for (g, k) in factor(f.num())?.factors {
        d.add(Place::Finite(g), k as i64);
    }
    for (g, k) in factor(f.den())?.factors {
        d.add(Place::Finite(g), -(k as i64));
    }
    d.add(Place::Infinite, ord_at(f, &Place::Infinite)?);
    Ok(d)
}

pub fn divisor_degree(d: &Divisor) -> i64 {
    d.iter().map(|(p, k)| k * place_degree(p)).sum()
}
