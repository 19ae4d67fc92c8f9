//! Multihomogeneous block polynomials, Sylvester resultants, Chow forms of
//! the supported variety families, Chow weights, and the two Chow-form
//! estimates used by the main inequality: the lower bound on Chow weights
//! under an emptiness hypothesis and the height bound under a finite
//! morphism.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::binary::{gcd_degree, gcd_forms};
use crate::error::{Error, Result};
use crate::funcfield::{Rat, RatFunc};
use crate::heights::{fmt_mpoly, height_of_values, HomPoly, ProjPoint};
use crate::mpoly::{bareiss_determinant, MPoly};

/// A polynomial in `blocks` blocks of `width` variables `u_{i,j}`, with the
/// same degree in every block across all terms. Variable `(i, j)` has index
/// `i * width + j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockPoly {
    blocks: usize,
    width: usize,
    poly: MPoly,
}

impl BlockPoly {
    pub fn new(blocks: usize, width: usize, poly: MPoly) -> Result<Self> {
        if poly.nvars() != blocks * width {
            return Err(Error::DimensionMismatch {
                expected: blocks * width,
                got: poly.nvars(),
            });
        }
        let b = BlockPoly {
            blocks,
            width,
            poly,
        };
        let mut degs = b.poly.terms().keys().map(|e| b.block_degrees_of(e));
        if let Some(first) = degs.next() {
            if degs.any(|d| d != first) {
                return Err(Error::InvalidArgument(
                    "block polynomial is not multihomogeneous".into(),
                ));
            }
        }
        Ok(b)
    }

    pub fn var_index(&self, block: usize, j: usize) -> usize {
        block * self.width + j
    }

    fn block_degrees_of(&self, e: &[u32]) -> Vec<u32> {
        e.chunks(self.width).map(|c| c.iter().sum()).collect()
    }

    /// Degree in each block; `None` for the zero polynomial.
    pub fn block_degrees(&self) -> Option<Vec<u32>> {
        self.poly
            .terms()
            .keys()
            .next()
            .map(|e| self.block_degrees_of(e))
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn poly(&self) -> &MPoly {
        &self.poly
    }

    /// Evaluates at concrete hyperplanes `u_0, ..., u_n`.
    pub fn eval(&self, us: &[Vec<RatFunc>]) -> Result<RatFunc> {
        if us.len() != self.blocks || us.iter().any(|u| u.len() != self.width) {
            return Err(Error::DimensionMismatch {
                expected: self.blocks * self.width,
                got: us.iter().map(|u| u.len()).sum(),
            });
        }
        let flat: Vec<RatFunc> = us.iter().flatten().cloned().collect();
        Ok(self.poly.eval(&flat))
    }
}

impl fmt::Display for BlockPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.width;
        write!(
            f,
            "{}",
            fmt_mpoly(&self.poly, &|k| format!("u_{}_{}", k / w, k % w))
        )
    }
}

/// The Chow form of an `n`-dimensional subvariety of `P^M`, normalized so the
/// lexicographically leading coefficient is 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChowForm {
    form: BlockPoly,
    dim: usize,
    ambient: usize,
    degree: u32,
}

impl ChowForm {
    /// Wraps a block polynomial; checks that its degree in every block is `degree`.
    pub fn new(form: BlockPoly, degree: u32) -> Result<Self> {
        if form.poly.is_zero() {
            return Err(Error::ZeroPolynomial("Chow form"));
        }
        let degs = form.block_degrees().expect("nonzero");
        if degs.iter().any(|&d| d != degree) {
            return Err(Error::InvalidArgument(format!(
                "Chow form has block degrees {degs:?}, expected {degree}"
            )));
        }
        let dim = form.blocks - 1;
        let ambient = form.width - 1;
        Ok(ChowForm {
            form: BlockPoly {
                poly: form.poly.normalized(),
                ..form
            },
            dim,
            ambient,
            degree,
        })
    }

    pub fn form(&self) -> &BlockPoly {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn to_record(&self) -> ChowFormRecord {
        ChowFormRecord {
            n: self.dim,
            ambient: self.ambient,
            degree: self.degree,
            form: self.form.to_string(),
        }
    }
}

/// File representation of a Chow form; `form` uses the `u_i_j` variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowFormRecord {
    pub n: usize,
    pub ambient: usize,
    pub degree: u32,
    pub form: String,
}

/// Resultant of two binary forms with coefficients in a polynomial ring.
///
/// `f[k]` is the coefficient of `s0^(a-k) s1^k`, so `f.len() = a + 1`.
pub fn sylvester_resultant(f: &[MPoly], g: &[MPoly], nvars: usize) -> Result<MPoly> {
    if f.len() < 2 || g.len() < 2 {
        return Err(Error::InvalidArgument(
            "resultant needs forms of degree >= 1".into(),
        ));
    }
    if f.iter().all(|c| c.is_zero()) || g.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroPolynomial("sylvester_resultant"));
    }
    let a = f.len() - 1;
    let b = g.len() - 1;
    let n = a + b;
    let zero = MPoly::zero(nvars);
    let mut m = vec![vec![zero; n]; n];
    for r in 0..b {
        for (k, c) in f.iter().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..a {
        for (k, c) in g.iter().enumerate() {
            m[b + r][r + k] = c.clone();
        }
    }
    bareiss_determinant(m, nvars)
}

/// Zero-dimensional Chow form `prod_j (u_0 . p_j)`.
pub fn chow_form_points(points: &[ProjPoint]) -> Result<ChowForm> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty point set".into()))?;
    let width = first.coords().len();
    for p in points {
        if p.coords().len() != width {
            return Err(Error::DimensionMismatch {
                expected: width - 1,
                got: p.ambient_dim(),
            });
        }
    }
    let normalized: Vec<ProjPoint> = points.iter().map(|p| p.normalized()).collect();
    for (i, p) in normalized.iter().enumerate() {
        if normalized[..i].contains(p) {
            return Err(Error::DuplicatePoints);
        }
    }
    let mut prod = MPoly::constant(width, RatFunc::one());
    for p in points {
        let lin = MPoly::from_terms(
            width,
            p.coords().iter().enumerate().map(|(j, c)| {
                let mut e = vec![0; width];
                e[j] = 1;
                (e, c.clone())
            }),
        );
        prod = &prod * &lin;
    }
    ChowForm::new(BlockPoly::new(1, width, prod)?, points.len() as u32)
}

/// Chow form of `P^M` itself: the determinant of the `(M+1) x (M+1)` matrix `u_{ij}`.
pub fn chow_form_fullspace(m: usize) -> Result<ChowForm> {
    let w = m + 1;
    let nvars = w * w;
    let mat: Vec<Vec<MPoly>> = (0..w)
        .map(|i| (0..w).map(|j| MPoly::var(nvars, i * w + j)).collect())
        .collect();
    let det = bareiss_determinant(mat, nvars)?;
    ChowForm::new(BlockPoly::new(w, w, det)?, 1)
}

/// Number of parameter values (with multiplicity) over a general point of the
/// image of the parametrization; 1 exactly when it is birational onto its image.
pub fn generic_fibre_size(g: &[HomPoly]) -> Result<u32> {
    let mut best: Option<u32> = None;
    for k in 0..6i64 {
        let star = [RatFunc::from_int(k), RatFunc::one()];
        let vals: Vec<RatFunc> = g
            .iter()
            .map(|gi| crate::binary::eval_form(gi, &star))
            .collect::<Result<_>>()?;
        let Some(i0) = vals.iter().position(|v| !v.is_zero()) else {
            continue;
        };
        let diffs: Vec<HomPoly> = g
            .iter()
            .zip(&vals)
            .enumerate()
            .filter(|(j, _)| *j != i0)
            .map(|(_, (gj, vj))| {
                let a = gj.scale(&vals[i0]);
                let b = g[i0].scale(vj);
                HomPoly::new(gj.degree(), a.poly() - b.poly())
            })
            .collect::<Result<_>>()?;
        let size = match gcd_degree(&diffs)? {
            Some(d) => d,
            // every g_j is proportional to g_i0: the image is a point
            None => return Err(Error::NotBirational(g[i0].degree() as usize)),
        };
        best = Some(best.map_or(size, |b| b.min(size)));
        if best == Some(1) {
            break;
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("parametrization vanishes identically".into()))
}

/// Validates a curve parametrization: binary forms of a common positive
/// degree without common zeros. Returns the common degree.
pub fn check_parametrization(g: &[HomPoly]) -> Result<u32> {
    let first = g
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty parametrization".into()))?;
    let delta = first.degree();
    if delta == 0 {
        return Err(Error::InvalidArgument("parametrization of degree 0".into()));
    }
    for gi in g {
        if gi.ambient_dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: gi.ambient_dim(),
            });
        }
        if gi.degree() != delta {
            return Err(Error::InvalidArgument(format!(
                "parametrization forms have degrees {} and {}",
                delta,
                gi.degree()
            )));
        }
    }
    match gcd_forms(g)? {
        Some(d) if d.degree() == 0 => Ok(delta),
        Some(d) => Err(Error::BasePoints(d.to_string().replace('X', "s"))),
        None => Err(Error::BasePoints("all forms vanish".into())),
    }
}

/// Chow form of the curve parametrized by `g = (g_0, ..., g_M)`, realized as
/// `Res_s(u_0 . g(s), u_1 . g(s))`.
pub fn chow_form_curve(g: &[HomPoly]) -> Result<ChowForm> {
    let delta = check_parametrization(g)?;
    let fibre = generic_fibre_size(g)?;
    if fibre != 1 {
        return Err(Error::NotBirational(fibre as usize));
    }
    let width = g.len();
    let nvars = 2 * width;
    // coefficient of s0^(δ-k) s1^k in u_i . g
    let block_coeffs = |i: usize| -> Vec<MPoly> {
        (0..=delta)
            .map(|k| {
                let e = vec![delta - k, k];
                let mut c = MPoly::zero(nvars);
                for (j, gj) in g.iter().enumerate() {
                    let v = gj.poly().coeff(&e);
                    if !v.is_zero() {
                        c = &c + &MPoly::var(nvars, i * width + j).scale(&v);
                    }
                }
                c
            })
            .collect()
    };
    let res = sylvester_resultant(&block_coeffs(0), &block_coeffs(1), nvars)?;
    ChowForm::new(BlockPoly::new(2, width, res)?, delta)
}

/// Nonnegative rational weights on the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVec(Vec<Rat>);

impl WeightVec {
    pub fn new(entries: Vec<Rat>) -> Result<Self> {
        if entries.iter().any(|c| c < &Rat::zero()) {
            return Err(Error::InvalidArgument("weights must be nonnegative".into()));
        }
        Ok(WeightVec(entries))
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        WeightVec::new(
            entries
                .iter()
                .map(|&c| Rat::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Largest `c`-weight over the monomials of the form: the top exponent of
/// the auxiliary variable after `u_{ij} -> s^{c_j} u_{ij}`.
pub fn chow_weight(f: &ChowForm, c: &WeightVec) -> Result<Rat> {
    let w = f.form.width;
    if c.len() != w {
        return Err(Error::DimensionMismatch {
            expected: w,
            got: c.len(),
        });
    }
    let weight = |e: &Vec<u32>| -> Rat {
        e.iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(idx, &k)| &c.0[idx % w] * Rat::from_integer(BigInt::from(k)))
            .fold(Rat::zero(), |a, b| a + b)
    };
    Ok(f.form
        .poly
        .terms()
        .keys()
        .map(weight)
        .max()
        .expect("Chow forms are nonzero"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBoundCheck {
    pub e: Rat,
    pub bound: Rat,
    pub holds: bool,
}

/// Compares the Chow weight with `Δ/(m-n+1) * sum_{i in indices} c_i`.
///
/// `emptiness_witness` must certify that the variety misses the common zero
/// set of the coordinate hyperplanes in `indices`.
pub fn chow_weight_lower_bound(
    f: &ChowForm,
    c: &WeightVec,
    indices: &[usize],
    m: usize,
    emptiness_witness: bool,
) -> Result<WeightBoundCheck> {
    if !emptiness_witness {
        return Err(Error::PreconditionViolated(
            "the coordinate hyperplanes meet the variety".into(),
        ));
    }
    if m < f.dim {
        return Err(Error::PreconditionViolated(format!(
            "m = {m} is smaller than the dimension {}",
            f.dim
        )));
    }
    if indices.len() != m + 1 || indices.iter().any(|&i| i >= c.len()) {
        return Err(Error::InvalidArgument(format!(
            "expected {} coordinate indices below {}",
            m + 1,
            c.len()
        )));
    }
    let e = chow_weight(f, c)?;
    let sum = indices.iter().fold(Rat::zero(), |acc, &i| acc + &c.0[i]);
    let bound = Rat::new(BigInt::from(f.degree), BigInt::from(m - f.dim + 1)) * sum;
    let holds = e >= bound;
    Ok(WeightBoundCheck { e, bound, holds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowHeightBound {
    pub bound: Rat,
    pub holds: bool,
}

/// `h(F_Y) <= d^{n+1} h(F_X) + (n+1) d^n Δ_X h(g_0, ..., g_R)`.
pub fn chow_height_bound(
    h_fx: i64,
    n: u32,
    d: u32,
    delta_x: u32,
    h_gs: i64,
    h_fy_computed: i64,
) -> ChowHeightBound {
    let d_big = BigInt::from(d);
    let bound = d_big.pow(n + 1) * BigInt::from(h_fx)
        + BigInt::from(n + 1) * d_big.pow(n) * BigInt::from(delta_x) * BigInt::from(h_gs);
    let holds = BigInt::from(h_fy_computed) <= bound;
    ChowHeightBound {
        bound: Rat::from_integer(bound),
        holds,
    }
}

/// `h(F)`: the height of the coefficient list of the form.
pub fn height_chow(f: &ChowForm) -> i64 {
    let coeffs: Vec<RatFunc> = f.form.poly.coefficients().cloned().collect();
    height_of_values(&coeffs)
}

impl fmt::Display for ChowForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.form)
    }
}
