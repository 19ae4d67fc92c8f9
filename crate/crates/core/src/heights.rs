//! Local minima `e_p`, global heights of points, polynomials and polynomial
//! families, and Weil functions.
//!
//! Heights are exact integers: every place of Q(t) has integral degree and
//! every order is an integer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::funcfield::{factor, ord_at, Place, Poly, RatFunc};
use crate::mpoly::{Exponent, MPoly};

/// A point of P^M(K), stored as M+1 coordinates, not all zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<RatFunc>,
}

impl ProjPoint {
    pub fn new(coords: Vec<RatFunc>) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroPoint);
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_polys(coords: Vec<Poly>) -> Result<Self> {
        ProjPoint::new(coords.into_iter().map(RatFunc::from_poly).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[RatFunc] {
        &self.coords
    }

    pub fn scale(&self, alpha: &RatFunc) -> Result<ProjPoint> {
        ProjPoint::new(self.coords.iter().map(|c| c * alpha).collect())
    }

    /// Canonical representative: coprime polynomial coordinates whose first
    /// nonzero entry is monic.
    pub fn normalized(&self) -> ProjPoint {
        let den = self
            .coords
            .iter()
            .filter(|c| !c.is_zero())
            .fold(Poly::one(), |acc, c| {
                let g = acc.gcd(c.den());
                (&acc * c.den()).div_exact(&g).expect("gcd divides")
            });
        let polys: Vec<Poly> = self
            .coords
            .iter()
            .map(|c| {
                if c.is_zero() {
                    Poly::zero()
                } else {
                    c.num() * &den.div_exact(c.den()).expect("lcm")
                }
            })
            .collect();
        let g = polys.iter().fold(Poly::zero(), |acc, p| acc.gcd(p));
        let lead = polys
            .iter()
            .find(|p| !p.is_zero())
            .map(|p| p.leading())
            .expect("nonzero point");
        // g is monic, so dividing by it keeps leading coefficients
        let unit = lead.recip();
        let coords = polys
            .iter()
            .map(|p| RatFunc::from_poly(p.div_exact(&g).expect("gcd divides").scale(&unit)))
            .collect();
        ProjPoint { coords }
    }

    pub fn projectively_equal(&self, other: &ProjPoint) -> bool {
        self.coords.len() == other.coords.len() && self.normalized() == other.normalized()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjPoint{self}")
    }
}

/// A homogeneous polynomial of degree `degree` in X_0..X_M over K.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HomPoly {
    degree: u32,
    poly: MPoly,
}

impl HomPoly {
    /// Checks that every term has total degree `degree`.
    pub fn new(degree: u32, poly: MPoly) -> Result<Self> {
        for e in poly.terms().keys() {
            let got: u32 = e.iter().sum();
            if got != degree {
                return Err(Error::Inhomogeneous {
                    term: fmt_monomial(e, "X"),
                    expected: degree,
                    got,
                });
            }
        }
        Ok(HomPoly { degree, poly })
    }

    /// Degree read off the terms; the zero polynomial is rejected.
    pub fn from_mpoly(poly: MPoly) -> Result<Self> {
        let degree = poly
            .leading()
            .map(|(e, _)| e.iter().sum())
            .ok_or(Error::ZeroPolynomial("homogeneous polynomial"))?;
        HomPoly::new(degree, poly)
    }

    pub fn from_terms(
        ambient_dim: usize,
        terms: impl IntoIterator<Item = (Exponent, RatFunc)>,
    ) -> Result<Self> {
        HomPoly::from_mpoly(MPoly::from_terms(ambient_dim + 1, terms))
    }

    /// The coordinate form X_i in P^M.
    pub fn coordinate(ambient_dim: usize, i: usize) -> Self {
        HomPoly {
            degree: 1,
            poly: MPoly::var(ambient_dim + 1, i),
        }
    }

    /// A linear form with the given coefficients.
    pub fn linear(coeffs: &[RatFunc]) -> Result<Self> {
        let n = coeffs.len();
        HomPoly::from_mpoly(MPoly::from_terms(
            n,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            }),
        ))
    }

    pub fn ambient_dim(&self) -> usize {
        self.poly.nvars() - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &RatFunc> {
        self.poly.coefficients()
    }

    pub fn scale(&self, alpha: &RatFunc) -> HomPoly {
        HomPoly {
            degree: self.degree,
            poly: self.poly.scale(alpha),
        }
    }

    pub fn pow(&self, k: u32) -> HomPoly {
        HomPoly {
            degree: self.degree * k,
            poly: self.poly.pow(k),
        }
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        HomPoly {
            degree: self.degree + other.degree,
            poly: &self.poly * &other.poly,
        }
    }

    pub fn add(&self, other: &HomPoly) -> Result<HomPoly> {
        HomPoly::new(self.degree.max(other.degree), &self.poly + &other.poly)
    }

    pub fn eval(&self, x: &ProjPoint) -> Result<RatFunc> {
        if x.coords().len() != self.poly.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.poly.nvars() - 1,
                got: x.ambient_dim(),
            });
        }
        Ok(self.poly.eval(x.coords()))
    }
}

pub(crate) fn fmt_monomial(e: &[u32], var: &str) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("{var}{i}")
            } else {
                format!("{var}{i}^{k}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Prints a sparse polynomial in the expression grammar with the given
/// variable naming, highest term first.
pub(crate) fn fmt_mpoly(p: &MPoly, name: &dyn Fn(usize) -> String) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (e, c)) in p.terms().iter().rev().enumerate() {
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                if k == 1 {
                    name(i)
                } else {
                    format!("{}^{k}", name(i))
                }
            })
            .collect();
        let mono = mono.join("*");
        let (neg, abs) = match c.as_constant() {
            Some(r) if r.is_negative() => (true, RatFunc::from_rat(-r)),
            _ => (false, c.clone()),
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coeff = if abs.is_one() && !mono.is_empty() {
            String::new()
        } else if abs.is_constant() {
            abs.to_string()
        } else {
            format!("({abs})")
        };
        match (coeff.is_empty(), mono.is_empty()) {
            (true, _) => out.push_str(&mono),
            (false, true) => out.push_str(&coeff),
            (false, false) => {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    out
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_mpoly(&self.poly, &|i| format!("X{i}")))
    }
}

/// The places where some element of `values` has nonzero order, plus infinity.
pub fn support_places<'a>(values: impl IntoIterator<Item = &'a RatFunc>) -> BTreeSet<Place> {
    let mut polys: BTreeSet<Poly> = BTreeSet::new();
    for v in values {
        if v.is_zero() {
            continue;
        }
        for p in [v.num(), v.den()] {
            if !p.is_constant() {
                polys.insert(p.monic());
            }
        }
    }
    let mut places: BTreeSet<Place> = polys
        .iter()
        .flat_map(|p| factor(p).expect("nonzero").factors)
        .map(|(g, _)| Place::Finite(g))
        .collect();
    places.insert(Place::Infinite);
    places
}

/// Minimum order over the nonzero entries; `None` if all are zero.
fn min_order<'a>(p: &Place, values: impl IntoIterator<Item = &'a RatFunc>) -> Option<i64> {
    values
        .into_iter()
        .filter(|v| !v.is_zero())
        .map(|v| ord_at(v, p).expect("nonzero"))
        .min()
}

fn global_height(values: &[&RatFunc]) -> i64 {
    support_places(values.iter().copied())
        .iter()
        .map(|p| -min_order(p, values.iter().copied()).unwrap_or(0) * p.degree())
        .sum()
}

pub fn e_point(p: &Place, x: &ProjPoint) -> i64 {
    min_order(p, x.coords()).expect("point has a nonzero coordinate")
}

pub fn height_point(x: &ProjPoint) -> i64 {
    let vals: Vec<&RatFunc> = x.coords().iter().collect();
    global_height(&vals)
}

pub fn e_poly(p: &Place, q: &HomPoly) -> Result<i64> {
    min_order(p, q.coefficients()).ok_or(Error::ZeroPolynomial("e_poly"))
}

pub fn height_poly(q: &HomPoly) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial("height_poly"));
    }
    let vals: Vec<&RatFunc> = q.coefficients().collect();
    Ok(global_height(&vals))
}

fn check_family(qs: &[HomPoly]) -> Result<()> {
    let first = qs.first().ok_or(Error::EmptyFamily)?;
    for q in qs {
        if q.is_zero() {
            return Err(Error::ZeroPolynomial("polynomial family"));
        }
        if q.ambient_dim() != first.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: first.ambient_dim(),
                got: q.ambient_dim(),
            });
        }
    }
    Ok(())
}

pub fn e_family(p: &Place, qs: &[HomPoly]) -> Result<i64> {
    check_family(qs)?;
    qs.iter()
        .map(|q| e_poly(p, q))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().min().expect("nonempty"))
}

pub fn height_family(qs: &[HomPoly]) -> Result<i64> {
    check_family(qs)?;
    let vals: Vec<&RatFunc> = qs.iter().flat_map(|q| q.coefficients()).collect();
    Ok(global_height(&vals))
}

/// Height of an arbitrary finite list of elements of K viewed as projective
/// coordinates; all-zero lists have height 0.
pub fn height_of_values(values: &[RatFunc]) -> i64 {
    let vals: Vec<&RatFunc> = values.iter().filter(|v| !v.is_zero()).collect();
    if vals.is_empty() {
        return 0;
    }
    global_height(&vals)
}

/// `(ord_p(Q(x)) - d e_p(x) - e_p(Q)) deg p`, defined off the divisor `Q = 0`.
pub fn weil(p: &Place, q: &HomPoly, x: &ProjPoint) -> Result<i64> {
    let v = q.eval(x)?;
    if v.is_zero() {
        return Err(Error::PointOnDivisor);
    }
    let ord = ord_at(&v, p)?;
    Ok((ord - q.degree() as i64 * e_point(p, x) - e_poly(p, q)?) * p.degree())
}

/// `c_{p,i}(y) = (ord_p(y_i) - e_p(y)) deg p`; `None` marks a zero coordinate
/// (order +infinity).
pub fn coordinate_weight_vector(p: &Place, y: &ProjPoint) -> Vec<Option<i64>> {
    let e = e_point(p, y);
    y.coords()
        .iter()
        .map(|c| {
            if c.is_zero() {
                None
            } else {
                Some((ord_at(c, p).expect("nonzero") - e) * p.degree())
            }
        })
        .collect()
}

/// Per-place local minima over a support set, used by reports.
pub fn e_point_profile(x: &ProjPoint) -> BTreeMap<Place, i64> {
    support_places(x.coords())
        .into_iter()
        .map(|p| {
            let e = e_point(&p, x);
            (p, e)
        })
        .filter(|(_, e)| *e != 0)
        .collect()
}
