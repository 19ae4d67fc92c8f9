//! Binary forms in (s0, s1) over K and their greatest common divisors.
//!
//! A binary form of degree `δ` is dehomogenized at `s1 = 1`; the multiplicity
//! of the root `[1:0]` is the drop in degree.

use crate::error::{Error, Result};
use crate::funcfield::RatFunc;
use crate::heights::{HomPoly, ProjPoint};
use crate::mpoly::MPoly;

/// Dense univariate polynomial over K, low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPoly(Vec<RatFunc>);

impl KPoly {
    pub fn new(mut c: Vec<RatFunc>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        KPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.0
    }

    fn monic(&self) -> KPoly {
        match self.0.last() {
            Some(lc) if !lc.is_one() => {
                let inv = lc.inv().expect("nonzero");
                KPoly(self.0.iter().map(|c| c * &inv).collect())
            }
            _ => self.clone(),
        }
    }

    pub fn rem(&self, d: &KPoly) -> KPoly {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let inv = d.0[dd].inv().expect("nonzero");
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = &r[top] * &inv;
            if !c.is_zero() {
                let shift = top - dd;
                for (j, dc) in d.0.iter().enumerate() {
                    r[shift + j] = &r[shift + j] - &(&c * dc);
                }
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        KPoly(r)
    }

    pub fn gcd(&self, other: &KPoly) -> KPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

fn check_binary(f: &HomPoly) -> Result<()> {
    if f.ambient_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: f.ambient_dim(),
        });
    }
    Ok(())
}

/// Coefficients of `f(x, 1)`, i.e. entry `j` is the coefficient of `s0^j s1^(δ-j)`.
pub fn dehomogenize(f: &HomPoly) -> Result<KPoly> {
    check_binary(f)?;
    let mut c = vec![RatFunc::zero(); f.degree() as usize + 1];
    for (e, v) in f.poly().terms() {
        c[e[0] as usize] = v.clone();
    }
    Ok(KPoly::new(c))
}

/// Binary form `s1^a * p(s0/s1) * s1^deg p` of total degree `deg p + a`.
pub fn homogenize(p: &KPoly, extra_s1: u32) -> HomPoly {
    let deg = p.degree().map(|d| d as u32).unwrap_or(0) + extra_s1;
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| (vec![j as u32, deg - j as u32], c.clone()));
    HomPoly::new(deg, MPoly::from_terms(2, terms)).expect("homogeneous by construction")
}

/// Greatest common divisor of binary forms over K (up to a scalar).
///
/// Zero forms are ignored; `None` means every form is zero. The degree of the
/// result counts common roots over the algebraic closure with multiplicity,
/// and is insensitive to extending the constant field.
pub fn gcd_forms(forms: &[HomPoly]) -> Result<Option<HomPoly>> {
    let mut acc: Option<KPoly> = None;
    let mut s1_mult: Option<u32> = None;
    for f in forms {
        check_binary(f)?;
        if f.is_zero() {
            continue;
        }
        let p = dehomogenize(f)?;
        let drop = f.degree() - p.degree().expect("nonzero") as u32;
        s1_mult = Some(s1_mult.map_or(drop, |m| m.min(drop)));
        acc = Some(match acc {
            None => p.monic(),
            Some(a) => a.gcd(&p),
        });
    }
    Ok(acc.map(|a| homogenize(&a, s1_mult.unwrap_or(0))))
}

/// Degree of the gcd; `None` when all forms vanish identically.
pub fn gcd_degree(forms: &[HomPoly]) -> Result<Option<u32>> {
    Ok(gcd_forms(forms)?.map(|g| g.degree()))
}

/// Value of a binary form at a parameter point `[a : b]`.
pub fn eval_form(f: &HomPoly, param: &[RatFunc; 2]) -> Result<RatFunc> {
    f.eval(&ProjPoint::new(param.to_vec())?)
}
