//! Scenario files, per-point evaluation of the inequality chain, and
//! seeded experiments.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::binary::eval_form;
use crate::chow::{chow_form_curve, chow_height_bound, height_chow, ChowForm, WeightVec};
use crate::constants::{
    degree_bound_main, degree_chain, pipeline, DegreeBound, DegreeChain, ExternalConstants,
    Pipeline, ScenarioParams,
};
use crate::error::{Error, Result};
use crate::expr::{parse_binary_form, parse_form, parse_place, parse_point, parse_scalar};
use crate::funcfield::{ord_at, Place, Poly, Rat, RatFunc};
use crate::heights::{
    coordinate_weight_vector, e_point, e_poly, height_family, height_point, weil, HomPoly,
    ProjPoint,
};
use crate::varieties::{
    build_embedding, eval_embedding, image_curve, in_subgeneral_position, variety_meta,
    EmbeddingData, Variety,
};

fn rat(x: impl Into<BigInt>) -> Rat {
    Rat::from_integer(x.into())
}

fn ser_rat<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_rat<S: Serializer>(x: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_display<T: std::fmt::Display, S: Serializer>(
    x: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

// ---------------------------------------------------------------------------
// Scenario files

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum VarietySpec {
    ParamCurve { forms: Vec<String> },
    FullSpace { dim: usize },
    PointSet { points: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSpec {
    pub a: String,
    pub a_prime: String,
}

fn default_bound() -> i64 {
    5
}

fn default_degree() -> u32 {
    2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    #[serde(default)]
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
    /// Bound on the absolute value of the integer coefficients drawn.
    #[serde(default = "default_bound")]
    pub coeff_bound: i64,
    /// Degree in t of the drawn parameters or coordinates.
    #[serde(default = "default_degree")]
    pub param_degree: u32,
    /// Explicit curve parameters `[a, b]`, used before any random draws.
    #[serde(default)]
    pub params: Option<Vec<String>>,
    /// Explicit points, used before any random draws (not for curves).
    #[serde(default)]
    pub points: Option<Vec<String>>,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            count: 0,
            seed: 0,
            coeff_bound: default_bound(),
            param_degree: default_degree(),
            params: None,
            points: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub variety: VarietySpec,
    pub polys: Vec<String>,
    pub m: usize,
    pub places: Vec<String>,
    pub epsilon: String,
    pub constants: ConstantsSpec,
    #[serde(default)]
    pub sample: SampleSpec,
}

impl ScenarioSpec {
    /// The variety and hypersurfaces alone, without the position check.
    pub fn variety_and_polys(&self) -> Result<(Variety, Vec<HomPoly>)> {
        let variety = match &self.variety {
            VarietySpec::ParamCurve { forms } => Variety::param_curve(
                forms
                    .iter()
                    .map(|f| parse_binary_form(f))
                    .collect::<Result<_>>()?,
            )?,
            VarietySpec::FullSpace { dim } => Variety::FullSpace(*dim),
            VarietySpec::PointSet { points } => Variety::point_set(
                points
                    .iter()
                    .map(|p| parse_point(p))
                    .collect::<Result<_>>()?,
            )?,
        };
        let n = variety.ambient_dim();
        let qs = self
            .polys
            .iter()
            .map(|q| parse_form(q, n))
            .collect::<Result<_>>()?;
        Ok((variety, qs))
    }
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub variety: Variety,
    pub qs: Vec<HomPoly>,
    pub m: usize,
    pub places: Vec<Place>,
    pub epsilon: Rat,
    pub constants: ExternalConstants,
    pub sample: SampleSpec,
    /// Explicit curve parameters.
    pub params: Vec<[RatFunc; 2]>,
    /// Explicit points.
    pub points: Vec<ProjPoint>,
}

#[derive(Default)]
struct Errors(Vec<String>);

impl Errors {
    fn take<T>(&mut self, r: std::result::Result<T, String>) -> Option<T> {
        r.map_err(|e| self.0.push(e)).ok()
    }

    fn push(&mut self, msg: impl Into<String>) {
        self.0.push(msg.into());
    }
}

fn at<T>(loc: &str, r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{loc}: {e}"))
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ScenarioSpec =
            serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        Scenario::from_spec(&spec)
    }

    /// Parses and validates every field; all problems are reported together.
    pub fn from_spec(spec: &ScenarioSpec) -> Result<Self> {
        let mut errs = Errors::default();

        let variety = match &spec.variety {
            VarietySpec::ParamCurve { forms } => {
                let parsed: Vec<Option<HomPoly>> = forms
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        errs.take(at(&format!("variety.forms[{i}]"), parse_binary_form(f)))
                    })
                    .collect();
                if parsed.iter().all(|f| f.is_some()) {
                    let g: Vec<HomPoly> = parsed.into_iter().flatten().collect();
                    errs.take(at("variety.forms", Variety::param_curve(g)))
                } else {
                    None
                }
            }
            VarietySpec::FullSpace { dim } => Some(Variety::FullSpace(*dim)),
            VarietySpec::PointSet { points } => {
                let parsed: Vec<Option<ProjPoint>> = points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| errs.take(at(&format!("variety.points[{i}]"), parse_point(p))))
                    .collect();
                if parsed.iter().all(|p| p.is_some()) {
                    errs.take(at(
                        "variety.points",
                        Variety::point_set(parsed.into_iter().flatten().collect()),
                    ))
                } else {
                    None
                }
            }
        };

        let ambient = variety.as_ref().map(|v| v.ambient_dim());
        let mut qs = Vec::new();
        if let Some(n) = ambient {
            for (i, text) in spec.polys.iter().enumerate() {
                if let Some(q) = errs.take(at(&format!("polys[{i}]"), parse_form(text, n))) {
                    qs.push(q);
                }
            }
        }

        let mut places = Vec::new();
        for (i, text) in spec.places.iter().enumerate() {
            if let Some(p) = errs.take(at(&format!("places[{i}]"), parse_place(text))) {
                if places.contains(&p) {
                    errs.push(format!("places[{i}]: duplicate place {p}"));
                } else {
                    places.push(p);
                }
            }
        }
        if spec.places.is_empty() {
            errs.push("places: S must be nonempty");
        }

        let epsilon = errs.take(at("epsilon", parse_rational(&spec.epsilon)));
        if let Some(e) = &epsilon {
            if !e.is_positive() {
                errs.push("epsilon: must be positive");
            }
        }
        let a = errs.take(at("constants.a", parse_rational(&spec.constants.a)));
        let a_prime = errs.take(at(
            "constants.a_prime",
            parse_rational(&spec.constants.a_prime),
        ));
        let constants = match (a, a_prime) {
            (Some(a), Some(ap)) => errs.take(at("constants", ExternalConstants::new(a, ap))),
            _ => None,
        };

        let mut params = Vec::new();
        if let Some(list) = &spec.sample.params {
            if !matches!(variety, Some(Variety::ParamCurve(_)) | None) {
                errs.push("sample.params: only valid for param_curve");
            }
            for (i, text) in list.iter().enumerate() {
                let loc = format!("sample.params[{i}]");
                if let Some(p) = errs.take(at(&loc, parse_point(text))) {
                    if p.coords().len() != 2 {
                        errs.push(format!("{loc}: expected [a, b]"));
                    } else {
                        params.push([p.coords()[0].clone(), p.coords()[1].clone()]);
                    }
                }
            }
        }
        let mut points = Vec::new();
        if let Some(list) = &spec.sample.points {
            if matches!(variety, Some(Variety::ParamCurve(_))) {
                errs.push(
                    "sample.points: curve scenarios take parameters (sample.params), not points",
                );
            }
            for (i, text) in list.iter().enumerate() {
                let loc = format!("sample.points[{i}]");
                if let Some(p) = errs.take(at(&loc, parse_point(text))) {
                    match &variety {
                        Some(v) if p.ambient_dim() != v.ambient_dim() => {
                            errs.push(format!("{loc}: point not in P^{}", v.ambient_dim()));
                        }
                        Some(Variety::PointSet(set))
                            if !set.iter().any(|s| s.projectively_equal(&p)) =>
                        {
                            errs.push(format!("{loc}: point not on the variety"));
                        }
                        _ => points.push(p),
                    }
                }
            }
        }
        if spec.sample.coeff_bound < 0 {
            errs.push("sample.coeff_bound: must be nonnegative");
        }

        if let Some(v) = &variety {
            if qs.len() == spec.polys.len() {
                let meta = variety_meta(v);
                if spec.m < meta.dim {
                    errs.push(format!("m: m = {} is below dim X = {}", spec.m, meta.dim));
                } else if qs.len() < spec.m + 1 {
                    errs.push(format!(
                        "polys: {} given, need at least m + 1 = {}",
                        qs.len(),
                        spec.m + 1
                    ));
                } else {
                    match in_subgeneral_position(&qs, v, spec.m) {
                        Ok(r) if r.holds => {}
                        Ok(r) => {
                            errs.push(format!(
                                "polys: not in {}-subgeneral position; polys {:?} have a common zero on X",
                                spec.m,
                                r.witness.unwrap_or_default()
                            ));
                        }
                        Err(e) => {
                            errs.push(format!("polys: {e}"));
                        }
                    }
                }
            }
        }

        if !errs.0.is_empty() {
            return Err(Error::Scenario(errs.0.join("; ")));
        }
        Ok(Scenario {
            variety: variety.expect("validated"),
            qs,
            m: spec.m,
            places,
            epsilon: epsilon.expect("validated"),
            constants: constants.expect("validated"),
            sample: spec.sample.clone(),
            params,
            points,
        })
    }
}

/// A rational number in the expression grammar (`3/2`, `-1`, ...).
pub fn parse_rational(text: &str) -> Result<Rat> {
    let v = parse_scalar(text)?;
    v.as_constant()
        .ok_or_else(|| Error::InvalidArgument(format!("'{text}' is not a rational number")))
}

// ---------------------------------------------------------------------------
// Standalone checks

/// Per-place tail inequality for forms of a common degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailReport {
    /// Form indices sorted by decreasing order of `Q_i(x)`.
    pub order: Vec<usize>,
    /// `(ord_p(Q_i(x)) - d e_p(x)) deg p`, in the sorted order.
    pub values: Vec<i64>,
    #[serde(serialize_with = "ser_display")]
    pub bound: BigInt,
    pub holds: bool,
}

/// For `i > m` in the sorted order, `(ord_p(Q_i(x)) - d e_p(x)) deg p <= c2`.
pub fn tail_check(
    qs: &[HomPoly],
    p: &Place,
    x: &ProjPoint,
    m: usize,
    c2: &BigInt,
) -> Result<TailReport> {
    let d = qs.first().ok_or(Error::EmptyFamily)?.degree();
    if qs.iter().any(|q| q.degree() != d) {
        return Err(Error::InvalidArgument(
            "forms must share a common degree".into(),
        ));
    }
    let mut ords = Vec::with_capacity(qs.len());
    for q in qs {
        let v = q.eval(x)?;
        if v.is_zero() {
            return Err(Error::Excluded);
        }
        ords.push(ord_at(&v, p)?);
    }
    let ex = e_point(p, x);
    let order: Vec<usize> = (0..qs.len())
        .sorted_by_key(|&i| std::cmp::Reverse(ords[i]))
        .collect();
    let values: Vec<i64> = order
        .iter()
        .map(|&i| (ords[i] - d as i64 * ex) * p.degree())
        .collect();
    let holds = values.iter().skip(m).all(|&v| BigInt::from(v) <= *c2);
    Ok(TailReport {
        order,
        values,
        bound: c2.clone(),
        holds,
    })
}

fn coordinate_lambdas(p: &Place, y: &ProjPoint, i0: &[usize]) -> Result<Vec<i64>> {
    let c = coordinate_weight_vector(p, y);
    i0.iter()
        .map(|&i| c.get(i).copied().flatten().ok_or(Error::PointOnDivisor))
        .collect()
}

fn max_subset_sum(vals: &[i64], k: usize) -> i64 {
    // all values are >= 0, so the k largest give the maximum
    let mut v = vals.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v.iter().take(k).sum()
}

/// `sum_{p in S} max_I sum_{i in I} λ_{p,Y_i}(y)` over `(m+1)`-subsets `I` of `I0`.
pub fn subset_lhs(y: &ProjPoint, places: &[Place], i0: &[usize], m: usize) -> Result<Rat> {
    if i0.len() < m + 1 {
        return Err(Error::InvalidArgument(format!(
            "index set has {} elements, need at least m + 1 = {}",
            i0.len(),
            m + 1
        )));
    }
    if i0.iter().any(|&i| i > y.ambient_dim()) {
        return Err(Error::DimensionMismatch {
            expected: y.ambient_dim(),
            got: *i0.iter().max().expect("nonempty"),
        });
    }
    let mut total = 0i64;
    for p in places {
        total += max_subset_sum(&coordinate_lambdas(p, y, i0)?, m + 1);
    }
    Ok(rat(total))
}

/// `sum_i sum_{p in S} λ_{p,Q_i}(x) / d_i`.
pub fn main_lhs(x: &ProjPoint, qs: &[HomPoly], places: &[Place]) -> Result<Rat> {
    let mut total = Rat::zero();
    for q in qs {
        if q.eval(x)?.is_zero() {
            return Err(Error::Excluded);
        }
        let s: i64 = places.iter().map(|p| weil(p, q, x)).sum::<Result<i64>>()?;
        total += Rat::new(s.into(), q.degree().into());
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Scenario analysis

/// Largest degree of the image curve for which its Chow form is computed.
pub const MAX_IMAGE_DEGREE: u32 = 3;

/// Everything derived from a scenario before points are evaluated.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub scenario: Scenario,
    pub dim: usize,
    pub delta_x: u32,
    pub embedding: EmbeddingData,
    pub h_fx: i64,
    pub h_qfam: i64,
    pub params: ScenarioParams,
    pub pipeline: Pipeline,
    pub degree_bound: DegreeBound,
    /// Chow form of the image of the embedding, when it is a small curve.
    pub fy: Option<ChowForm>,
    pub fy_note: Option<String>,
    pub global_checks: Vec<Check>,
}

/// One evaluated inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub place: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(serialize_with = "ser_rat")]
    pub lhs: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub rhs: Rat,
    pub holds: bool,
    /// Whether a failure contradicts a proven statement, as opposed to
    /// marking a possible member of the exceptional set.
    pub required: bool,
}

impl Check {
    fn new(
        name: &str,
        place: Option<&Place>,
        index: Option<usize>,
        lhs: Rat,
        rhs: Rat,
        required: bool,
    ) -> Self {
        let holds = lhs <= rhs;
        Check {
            name: name.into(),
            place: place.map(|p| p.to_string()),
            index,
            lhs,
            rhs,
            holds,
            required,
        }
    }
}

pub fn analyze(sc: &Scenario) -> Result<Analysis> {
    let meta = variety_meta(&sc.variety);
    let big_n = sc.variety.ambient_dim();
    let embedding = build_embedding(big_n, &sc.qs)?;
    let h_fx = match &sc.variety {
        Variety::FullSpace(_) => 0,
        v => height_chow(&v.chow_form()?),
    };
    let h_qfam = height_family(&embedding.powers)?;
    let params = ScenarioParams {
        big_n: big_n as u32,
        n: meta.dim as u32,
        m: sc.m as u32,
        q: sc.qs.len() as u32,
        d: embedding.d,
        delta_x: meta.degree,
        h_fx,
        h_qfam,
        epsilon: sc.epsilon.clone(),
        s_size: sc.places.len() as u32,
        s_degree: sc.places.iter().map(|p| p.degree() as u64).sum(),
    };
    params.validate()?;
    let pl = pipeline(&params, &sc.constants);
    let degree_bound = degree_bound_main(&params)?;

    let mut global_checks = Vec::new();
    let mut fy = None;
    let mut fy_note = None;
    if let Variety::ParamCurve(g) = &sc.variety {
        let image_degree = embedding.d * meta.degree;
        if image_degree > MAX_IMAGE_DEGREE {
            fy_note = Some(format!(
                "image curve of degree {image_degree} exceeds the size limit {MAX_IMAGE_DEGREE}"
            ));
        } else {
            let Variety::ParamCurve(h) = image_curve(&embedding, g)? else {
                unreachable!("image of a curve is a curve")
            };
            match chow_form_curve(&h) {
                Ok(f) => fy = Some(f),
                Err(e) => fy_note = Some(e.to_string()),
            }
        }
    }
    if let Some(f) = &fy {
        let h_fy = height_chow(f);
        let rw = chow_height_bound(h_fx, params.n, params.d, params.delta_x, h_qfam, h_fy);
        global_checks.push(Check::new(
            "chow_height_bound",
            None,
            None,
            rat(h_fy),
            rw.bound,
            true,
        ));
        let deg_bound = BigInt::from(params.d).pow(params.n) * params.delta_x;
        global_checks.push(Check::new(
            "image_degree",
            None,
            None,
            rat(f.degree()),
            rat(deg_bound),
            true,
        ));
        let chain: DegreeChain = degree_chain(&params, f.degree(), embedding.target_dim() as u32)?;
        global_checks.push(Check::new(
            "exceptional_degree_chain",
            None,
            None,
            chain.lhs,
            chain.rhs,
            true,
        ));
    }

    Ok(Analysis {
        scenario: sc.clone(),
        dim: meta.dim,
        delta_x: meta.degree,
        embedding,
        h_fx,
        h_qfam,
        params,
        pipeline: pl,
        degree_bound,
        fy,
        fy_note,
        global_checks,
    })
}

// ---------------------------------------------------------------------------
// Per-point reports

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    SmallHeight,
    Inequality,
    Excluded,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::SmallHeight => "small_height",
            Branch::Inequality => "inequality",
            Branch::Excluded => "excluded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointReport {
    #[serde(serialize_with = "ser_display")]
    pub x: ProjPoint,
    pub h: Option<i64>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub lhs: Option<Rat>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub rhs: Option<Rat>,
    pub branch: Branch,
    /// Inequality branch with `lhs > rhs`: a candidate member of the exceptional set.
    pub candidate: bool,
    pub checks: Vec<Check>,
}

impl PointReport {
    /// Required checks that failed.
    pub fn failed_required(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.required && !c.holds)
    }
}

/// Evaluates the whole chain of intermediate inequalities at `x`.
pub fn chain_check(a: &Analysis, x: &ProjPoint) -> Result<PointReport> {
    let sc = &a.scenario;
    for q in &sc.qs {
        if q.eval(x)?.is_zero() {
            return Ok(PointReport {
                x: x.clone(),
                h: None,
                lhs: None,
                rhs: None,
                branch: Branch::Excluded,
                candidate: false,
                checks: Vec::new(),
            });
        }
    }
    let e = &a.embedding;
    let p = &a.params;
    let d = e.d as i64;
    let q = sc.qs.len();
    let c2 = &a.pipeline.c2;
    let c2r = Rat::from_integer(c2.clone());
    let m = sc.m;
    let h = height_point(x);
    let y = eval_embedding(e, x)?;
    let hy = height_point(&y);
    let i0: Vec<usize> = (e.n1() + 1..=e.n1() + q).collect();
    let mut checks = Vec::new();

    checks.push(Check::new(
        "sandwich_lower",
        None,
        None,
        rat(d * h),
        rat(hy),
        true,
    ));
    checks.push(Check::new(
        "sandwich_upper",
        None,
        None,
        rat(hy),
        rat(d * h + a.h_qfam),
        true,
    ));

    let mut subset_total = 0i64;
    for place in &sc.places {
        let deg = place.degree();
        let ex = e_point(place, x);
        let ey = e_point(place, &y);
        checks.push(Check::new(
            "embedded_local_min",
            Some(place),
            None,
            rat(ey * deg),
            rat(d * ex * deg),
            true,
        ));

        let tail = tail_check(&e.powers, place, x, m, c2)?;
        for (&i, &v) in tail.order.iter().zip(&tail.values).skip(m) {
            checks.push(Check::new(
                "tail_order",
                Some(place),
                Some(i),
                rat(v),
                c2r.clone(),
                true,
            ));
        }

        let lambdas_y = coordinate_lambdas(place, &y, &i0)?;
        for (i, power) in e.powers.iter().enumerate() {
            let ord = ord_at(&power.eval(x)?, place)?;
            let lower = (ord - d * ex) * deg;
            checks.push(Check::new(
                "embedded_weil",
                Some(place),
                Some(i),
                rat(lower),
                rat(lambdas_y[i]),
                true,
            ));
        }

        let mut local = Rat::zero();
        for qi in &sc.qs {
            let scale = Rat::new(BigInt::from(e.d), BigInt::from(qi.degree()));
            local += scale * rat(weil(place, qi, x)?);
        }
        let min_e = e
            .powers
            .iter()
            .map(|pw| e_poly(place, pw))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .expect("q >= 1");
        let best = max_subset_sum(&lambdas_y, m + 1);
        subset_total += best;
        let rhs = rat(best) - rat(q as i64 * min_e * deg) + rat((q - m) as i64) * &c2r;
        checks.push(Check::new(
            "place_reduction",
            Some(place),
            None,
            local,
            rhs,
            true,
        ));

        if let Some(fy) = &a.fy {
            // a zero coordinate has weight +infinity; Chow weights are
            // monotone in each entry, so any finite cap gives a valid bound
            let raw = coordinate_weight_vector(place, &y);
            let cap = raw.iter().flatten().copied().max().unwrap_or(0);
            let c =
                WeightVec::from_ints(&raw.iter().map(|v| v.unwrap_or(cap)).collect::<Vec<_>>())?;
            let ew = crate::chow::chow_weight(fy, &c)?;
            let rhs = Rat::new(BigInt::from(p.excess()), BigInt::from(fy.degree())) * ew;
            checks.push(Check::new(
                "chow_weight_bound",
                Some(place),
                None,
                rat(best),
                rhs,
                true,
            ));
        }
    }

    let slope = p.slope();
    let pl = &a.pipeline;
    let hfx1 = rat(a.h_fx + 1);
    if let Some(fy) = &a.fy {
        let hfy1 = rat(height_chow(fy) + 1);
        checks.push(Check::new(
            "embedded_small_height",
            None,
            None,
            rat(hy),
            &pl.b * &hfy1,
            false,
        ));
        checks.push(Check::new(
            "embedded_inequality",
            None,
            None,
            rat(subset_total),
            &slope * rat(hy) + &pl.b_prime * &hfy1,
            false,
        ));
    }
    let weighted: Rat = rat(d) * main_lhs(x, &sc.qs, &sc.places)?;
    checks.push(Check::new(
        "combined_inequality",
        None,
        None,
        weighted,
        &slope * rat(hy)
            + &pl.b_tilde_prime * &hfx1
            + rat(q as i64 * a.h_qfam)
            + rat((q - m) as i64 * sc.places.len() as i64) * &c2r,
        false,
    ));

    let lhs = main_lhs(x, &sc.qs, &sc.places)?;
    let rhs = &slope * rat(h) + &pl.c_prime;
    let (branch, candidate) = if rat(h) <= pl.c {
        (Branch::SmallHeight, false)
    } else {
        (Branch::Inequality, lhs > rhs)
    };
    Ok(PointReport {
        x: x.clone(),
        h: Some(h),
        lhs: Some(lhs),
        rhs: Some(rhs),
        branch,
        candidate,
        checks,
    })
}

// ---------------------------------------------------------------------------
// Sampling and experiments

fn random_poly(rng: &mut ChaCha8Rng, degree: u32, bound: i64) -> Poly {
    let c: Vec<i64> = (0..=degree)
        .map(|_| rng.gen_range(-bound..=bound))
        .collect();
    Poly::from_ints(&c)
}

/// Points to evaluate: explicit entries first, then seeded random draws up
/// to `sample.count` in total.
pub fn sample_points(sc: &Scenario) -> Result<Vec<ProjPoint>> {
    let s = &sc.sample;
    let mut out: Vec<ProjPoint> = Vec::new();
    match &sc.variety {
        Variety::ParamCurve(g) => {
            for par in &sc.params {
                out.push(curve_point(g, par)?);
            }
        }
        _ => out.extend(sc.points.iter().cloned()),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut misses = 0usize;
    while out.len() < s.count {
        let drawn = match &sc.variety {
            Variety::ParamCurve(g) => {
                let a = random_poly(&mut rng, s.param_degree, s.coeff_bound);
                let b = random_poly(&mut rng, s.param_degree, s.coeff_bound);
                if a.is_zero() && b.is_zero() {
                    None
                } else {
                    Some(curve_point(
                        g,
                        &[RatFunc::from_poly(a), RatFunc::from_poly(b)],
                    )?)
                }
            }
            Variety::FullSpace(n) => {
                let coords: Vec<Poly> = (0..=*n)
                    .map(|_| random_poly(&mut rng, s.param_degree, s.coeff_bound))
                    .collect();
                ProjPoint::from_polys(coords).ok()
            }
            Variety::PointSet(points) => Some(points[rng.gen_range(0..points.len())].clone()),
        };
        match drawn {
            Some(p) => out.push(p),
            None => {
                misses += 1;
                if misses > 10 * s.count + 100 {
                    return Err(Error::Scenario(
                        "sample: could not draw nonzero points".into(),
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// `[g_0(a, b) : ... : g_N(a, b)]`.
pub fn curve_point(g: &[HomPoly], param: &[RatFunc; 2]) -> Result<ProjPoint> {
    let coords = g
        .iter()
        .map(|f| eval_form(f, param))
        .collect::<Result<Vec<_>>>()?;
    ProjPoint::new(coords)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub small_height: usize,
    pub inequality: usize,
    pub excluded: usize,
    /// Indices of inequality-branch points with `lhs > rhs`.
    pub candidates: Vec<usize>,
    /// Indices of points where a required intermediate check failed.
    pub unexplained: Vec<usize>,
    pub global_checks_hold: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioInfo {
    pub n: usize,
    pub big_n: usize,
    pub delta_x: u32,
    pub m: usize,
    pub q: usize,
    pub d: u32,
    pub n1: usize,
    pub h_fx: i64,
    pub h_qfam: i64,
    #[serde(serialize_with = "ser_display")]
    pub c2: BigInt,
    #[serde(serialize_with = "ser_rat")]
    pub c: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub c_prime: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub slope: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub degree_bound: Rat,
    pub places: Vec<String>,
    pub image_chow_height: Option<i64>,
    pub image_degree: Option<u32>,
    pub image_note: Option<String>,
    pub global_checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub seed: u64,
    pub scenario: ScenarioInfo,
    pub points: Vec<PointReport>,
    pub summary: Summary,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per point: `index,x,h,lhs,rhs,branch`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "x", "h", "lhs", "rhs", "branch"])
            .expect("in-memory write");
        for (i, r) in self.points.iter().enumerate() {
            let opt = |v: &Option<Rat>| v.as_ref().map(|x| x.to_string()).unwrap_or_default();
            w.write_record([
                i.to_string(),
                r.x.to_string(),
                r.h.map(|h| h.to_string()).unwrap_or_default(),
                opt(&r.lhs),
                opt(&r.rhs),
                r.branch.as_str().to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// Evaluates every sampled point; deterministic for a given scenario and seed.
pub fn run_experiment(sc: &Scenario) -> Result<ExperimentReport> {
    let a = analyze(sc)?;
    let points = sample_points(sc)?;
    let reports = points
        .par_iter()
        .map(|x| chain_check(&a, x))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = Summary {
        total: reports.len(),
        small_height: 0,
        inequality: 0,
        excluded: 0,
        candidates: Vec::new(),
        unexplained: Vec::new(),
        global_checks_hold: a.global_checks.iter().all(|c| c.holds),
    };
    for (i, r) in reports.iter().enumerate() {
        match r.branch {
            Branch::SmallHeight => summary.small_height += 1,
            Branch::Inequality => summary.inequality += 1,
            Branch::Excluded => summary.excluded += 1,
        }
        if r.candidate {
            summary.candidates.push(i);
        }
        if r.failed_required().next().is_some() {
            summary.unexplained.push(i);
        }
    }
    let info = ScenarioInfo {
        n: a.dim,
        big_n: sc.variety.ambient_dim(),
        delta_x: a.delta_x,
        m: sc.m,
        q: sc.qs.len(),
        d: a.embedding.d,
        n1: a.embedding.n1(),
        h_fx: a.h_fx,
        h_qfam: a.h_qfam,
        c2: a.pipeline.c2.clone(),
        c: a.pipeline.c.clone(),
        c_prime: a.pipeline.c_prime.clone(),
        slope: a.params.slope(),
        degree_bound: a.degree_bound.exact.clone(),
        places: sc.places.iter().map(|p| p.to_string()).collect(),
        image_chow_height: a.fy.as_ref().map(height_chow),
        image_degree: a.fy.as_ref().map(|f| f.degree()),
        image_note: a.fy_note.clone(),
        global_checks: a.global_checks.clone(),
    };
    Ok(ExperimentReport {
        seed: sc.sample.seed,
        scenario: info,
        points: reports,
        summary,
    })
}
