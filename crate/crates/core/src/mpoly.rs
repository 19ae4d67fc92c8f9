//! Sparse multivariate polynomials with coefficients in K = Q(t).
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration is
//! lexicographic with variable 0 most significant and the leading term is the
//! last entry.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::funcfield::RatFunc;

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, RatFunc>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: RatFunc) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(e, RatFunc::one())
    }

    pub fn monomial(exp: Exponent, c: RatFunc) -> Self {
        let mut p = MPoly::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, RatFunc)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, RatFunc> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> RatFunc {
        self.terms.get(e).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &RatFunc> {
        self.terms.values()
    }

    pub fn add_term(&mut self, e: Exponent, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn leading(&self) -> Option<(&Exponent, &RatFunc)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Total degree when every term has the same one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &RatFunc) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> MPoly {
        let mut acc = MPoly::constant(self.nvars, RatFunc::one());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[RatFunc]) -> RatFunc {
        assert_eq!(point.len(), self.nvars, "evaluation point length");
        // cache powers per variable
        let mut powers: Vec<Vec<RatFunc>> = vec![vec![RatFunc::one()]; self.nvars];
        let mut acc = RatFunc::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &point[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; all images share a variable count.
    pub fn compose(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<MPoly>> =
            vec![vec![MPoly::constant(target, RatFunc::one())]; self.nvars];
        let mut acc = MPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Renames variables: variable `i` of `self` becomes `map[i]` in a ring of `nvars` variables.
    pub fn relabel(&self, nvars: usize, map: &[usize]) -> MPoly {
        let mut p = MPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            p.add_term(ne, c.clone());
        }
        p
    }

    /// Exact quotient; fails if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Result<MPoly> {
        let (le, lc) = divisor.leading().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((e, c)) = rem.leading() {
            if !e.iter().zip(le).all(|(a, b)| a >= b) {
                return Err(Error::InvalidArgument(
                    "inexact multivariate division".into(),
                ));
            }
            let qe: Exponent = e.iter().zip(le).map(|(a, b)| a - b).collect();
            let qc = c * &lc_inv;
            for (de, dc) in &divisor.terms {
                let e: Exponent = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                rem.add_term(e, -(&qc * dc));
            }
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }

    /// Makes the leading coefficient 1; the zero polynomial is returned unchanged.
    pub fn normalized(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: BTreeMap<Exponent, RatFunc> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly {
            nvars: self.nvars,
            terms: acc,
        }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_determinant(mut m: Vec<Vec<MPoly>>, nvars: usize) -> Result<MPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(MPoly::constant(nvars, RatFunc::one()));
    }
    let mut sign_negative = false;
    let mut prev = MPoly::constant(nvars, RatFunc::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_negative = !sign_negative;
                }
                None => return Ok(MPoly::zero(nvars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign_negative { -&det } else { det })
}
