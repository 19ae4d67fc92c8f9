//! Supported varieties, subgeneral-position checks, and the embedding that
//! sends `x` to all degree-`d` monomials followed by the powers `Q_i^{d/d_i}`.

use itertools::Itertools;
use num_integer::Integer;

use crate::binary::gcd_degree;
use crate::chow::{
    check_parametrization, chow_form_curve, chow_form_fullspace, chow_form_points, ChowForm,
};
use crate::error::{Error, Result};
use crate::funcfield::RatFunc;
use crate::heights::{HomPoly, ProjPoint};
use crate::mpoly::{Exponent, MPoly};

/// A projective variety with an extension-insensitive emptiness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variety {
    /// Image of P^1 under coprime binary forms of a common degree.
    ParamCurve(Vec<HomPoly>),
    /// All of P^N.
    FullSpace(usize),
    /// Finitely many distinct points.
    PointSet(Vec<ProjPoint>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarietyMeta {
    pub dim: usize,
    pub degree: u32,
}

impl Variety {
    pub fn param_curve(g: Vec<HomPoly>) -> Result<Self> {
        check_parametrization(&g)?;
        Ok(Variety::ParamCurve(g))
    }

    pub fn point_set(points: Vec<ProjPoint>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty point set".into()))?;
        let m = first.ambient_dim();
        for (i, p) in points.iter().enumerate() {
            if p.ambient_dim() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: p.ambient_dim(),
                });
            }
            if points[..i].iter().any(|q| q.projectively_equal(p)) {
                return Err(Error::DuplicatePoints);
            }
        }
        Ok(Variety::PointSet(points))
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Variety::ParamCurve(g) => g.len() - 1,
            Variety::FullSpace(n) => *n,
            Variety::PointSet(p) => p[0].ambient_dim(),
        }
    }

    pub fn chow_form(&self) -> Result<ChowForm> {
        match self {
            Variety::ParamCurve(g) => chow_form_curve(g),
            Variety::FullSpace(n) => chow_form_fullspace(*n),
            Variety::PointSet(p) => chow_form_points(p),
        }
    }
}

pub fn variety_meta(x: &Variety) -> VarietyMeta {
    match x {
        Variety::ParamCurve(g) => VarietyMeta {
            dim: 1,
            degree: g[0].degree(),
        },
        Variety::FullSpace(n) => VarietyMeta { dim: *n, degree: 1 },
        Variety::PointSet(p) => VarietyMeta {
            dim: 0,
            degree: p.len() as u32,
        },
    }
}

/// `Q(g_0(s), ..., g_N(s))`, a binary form of degree `deg Q * δ`.
pub fn pullback(q: &HomPoly, g: &[HomPoly]) -> Result<HomPoly> {
    if q.ambient_dim() + 1 != g.len() {
        return Err(Error::DimensionMismatch {
            expected: q.ambient_dim(),
            got: g.len().saturating_sub(1),
        });
    }
    let images: Vec<MPoly> = g.iter().map(|gi| gi.poly().clone()).collect();
    let delta = g.first().map_or(0, |g0| g0.degree());
    HomPoly::new(q.degree() * delta, q.poly().compose(&images))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionCheck {
    pub holds: bool,
    /// The first `(m+1)`-subset (in lexicographic order) whose zero sets meet `X`.
    pub witness: Option<Vec<usize>>,
}

/// Rank of a matrix over K by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<RatFunc>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for i in r + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let f = &rows[i][col] * &inv;
            for j in col..ncols {
                let v = &rows[i][j] - &(&f * &rows[r][j]);
                rows[i][j] = v;
            }
        }
        r += 1;
    }
    r
}

/// Per-variety emptiness test for `X ∩ {Q_i = 0 : i in subset}`.
enum Emptiness {
    Curve(Vec<HomPoly>),
    Points(Vec<ProjPoint>),
    Linear(Vec<Vec<RatFunc>>, usize),
}

impl Emptiness {
    fn new(qs: &[HomPoly], x: &Variety) -> Result<Self> {
        Ok(match x {
            Variety::ParamCurve(g) => {
                Emptiness::Curve(qs.iter().map(|q| pullback(q, g)).collect::<Result<_>>()?)
            }
            Variety::PointSet(p) => Emptiness::Points(p.clone()),
            Variety::FullSpace(n) => {
                let mut rows = Vec::with_capacity(qs.len());
                for q in qs {
                    if q.degree() != 1 {
                        return Err(Error::EmptinessUnsupported(format!(
                            "P^{n} with a form of degree {}",
                            q.degree()
                        )));
                    }
                    rows.push(
                        (0..=*n)
                            .map(|i| {
                                let mut e = vec![0; n + 1];
                                e[i] = 1;
                                q.poly().coeff(&e)
                            })
                            .collect(),
                    );
                }
                Emptiness::Linear(rows, n + 1)
            }
        })
    }

    fn is_empty(&self, qs: &[HomPoly], subset: &[usize]) -> Result<bool> {
        Ok(match self {
            Emptiness::Curve(pulled) => {
                let chosen: Vec<HomPoly> = subset.iter().map(|&i| pulled[i].clone()).collect();
                gcd_degree(&chosen)? == Some(0)
            }
            Emptiness::Points(points) => {
                for p in points {
                    let mut on_all = true;
                    for &i in subset {
                        if !qs[i].eval(p)?.is_zero() {
                            on_all = false;
                            break;
                        }
                    }
                    if on_all {
                        return Ok(false);
                    }
                }
                true
            }
            Emptiness::Linear(rows, width) => {
                rank(subset.iter().map(|&i| rows[i].clone()).collect()) == *width
            }
        })
    }
}

/// Whether any `m+1` of the hypersurfaces `Q_i = 0` have empty common
/// intersection with `X` over the algebraic closure.
pub fn in_subgeneral_position(qs: &[HomPoly], x: &Variety, m: usize) -> Result<PositionCheck> {
    let meta = variety_meta(x);
    if m < meta.dim {
        return Err(Error::PreconditionViolated(format!(
            "m = {m} is below dim X = {}",
            meta.dim
        )));
    }
    if qs.len() < m + 1 {
        return Err(Error::PreconditionViolated(format!(
            "{} hypersurfaces, need at least m + 1 = {}",
            qs.len(),
            m + 1
        )));
    }
    for q in qs {
        if q.ambient_dim() != x.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: x.ambient_dim(),
                got: q.ambient_dim(),
            });
        }
    }
    let test = Emptiness::new(qs, x)?;
    for subset in (0..qs.len()).combinations(m + 1) {
        if !test.is_empty(qs, &subset)? {
            return Ok(PositionCheck {
                holds: false,
                witness: Some(subset),
            });
        }
    }
    Ok(PositionCheck {
        holds: true,
        witness: None,
    })
}

/// Whether the coordinate hyperplanes `y_i = 0, i in indices` miss `X`.
pub fn coordinate_hyperplanes_miss(x: &Variety, indices: &[usize]) -> Result<bool> {
    let n = x.ambient_dim();
    let qs: Vec<HomPoly> = indices.iter().map(|&i| HomPoly::coordinate(n, i)).collect();
    let all: Vec<usize> = (0..qs.len()).collect();
    Emptiness::new(&qs, x)?.is_empty(&qs, &all)
}

/// Degree-`d` exponent vectors in `nvars` variables, lexicographically
/// descending (`X_0^d` first).
pub fn monomials(nvars: usize, d: u32) -> Vec<Exponent> {
    fn rec(nvars: usize, d: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == nvars {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(nvars, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, d, &mut Vec::new(), &mut out);
    }
    out
}

/// The forms `Q_i^{d/d_i}` with `d = lcm(d_i)`.
pub fn power_normalize(qs: &[HomPoly]) -> Result<(u32, Vec<HomPoly>)> {
    if qs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut d = 1u32;
    for q in qs {
        if q.degree() == 0 {
            return Err(Error::InvalidArgument("hypersurface of degree 0".into()));
        }
        d = d.lcm(&q.degree());
    }
    Ok((d, qs.iter().map(|q| q.pow(d / q.degree())).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingData {
    /// Ambient dimension N of the source.
    pub source_dim: usize,
    pub d: u32,
    pub monomials: Vec<Exponent>,
    pub qs: Vec<HomPoly>,
    /// `Q_i^{d/d_i}`, the last `q` coordinates.
    pub powers: Vec<HomPoly>,
}

impl EmbeddingData {
    /// `N_1`: the number of monomial coordinates minus one.
    pub fn n1(&self) -> usize {
        self.monomials.len() - 1
    }

    pub fn q(&self) -> usize {
        self.qs.len()
    }

    /// Ambient dimension `N_1 + q` of the target.
    pub fn target_dim(&self) -> usize {
        self.n1() + self.q()
    }

    /// All target coordinates as forms of degree `d` on P^N.
    pub fn coordinate_forms(&self) -> Vec<HomPoly> {
        let nv = self.source_dim + 1;
        self.monomials
            .iter()
            .map(|e| {
                HomPoly::new(self.d, MPoly::monomial(e.clone(), RatFunc::one()))
                    .expect("monomial of degree d")
            })
            .chain(self.powers.iter().cloned())
            .inspect(|f| debug_assert_eq!(f.poly().nvars(), nv))
            .collect()
    }
}

pub fn build_embedding(source_dim: usize, qs: &[HomPoly]) -> Result<EmbeddingData> {
    for q in qs {
        if q.ambient_dim() != source_dim {
            return Err(Error::DimensionMismatch {
                expected: source_dim,
                got: q.ambient_dim(),
            });
        }
    }
    let (d, powers) = power_normalize(qs)?;
    Ok(EmbeddingData {
        source_dim,
        d,
        monomials: monomials(source_dim + 1, d),
        qs: qs.to_vec(),
        powers,
    })
}

pub fn eval_embedding(e: &EmbeddingData, x: &ProjPoint) -> Result<ProjPoint> {
    let coords = e
        .coordinate_forms()
        .iter()
        .map(|f| f.eval(x))
        .collect::<Result<Vec<_>>>()?;
    ProjPoint::new(coords)
}

/// Parametrization of `ψ(X)`: every coordinate form pulled back along `g`.
pub fn image_curve(e: &EmbeddingData, g: &[HomPoly]) -> Result<Variety> {
    let forms = e
        .coordinate_forms()
        .iter()
        .map(|f| pullback(f, g))
        .collect::<Result<Vec<_>>>()?;
    Variety::param_curve(forms)
}
