//! Effective constants and degree bounds, in exact rational arithmetic.
//!
//! `a` and `a'` are external inputs: they belong to the underlying
//! subspace theorem for coordinate hyperplanes, evaluated at
//! `ε / (m - n + 1)`.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::funcfield::Rat;

fn int(x: impl Into<BigInt>) -> Rat {
    Rat::from_integer(x.into())
}

/// Smallest integer not below `x`.
pub fn ceil(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalConstants {
    pub a: Rat,
    pub a_prime: Rat,
}

impl ExternalConstants {
    pub fn new(a: Rat, a_prime: Rat) -> Result<Self> {
        if a.is_negative() || a_prime.is_negative() {
            return Err(Error::InvalidArgument(
                "a and a' must be nonnegative".into(),
            ));
        }
        Ok(ExternalConstants { a, a_prime })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioParams {
    /// Ambient dimension of X.
    pub big_n: u32,
    /// Dimension of X.
    pub n: u32,
    pub m: u32,
    pub q: u32,
    /// lcm of the degrees of the Q_i.
    pub d: u32,
    pub delta_x: u32,
    pub h_fx: i64,
    /// Height of the family `Q_i^{d/d_i}`.
    pub h_qfam: i64,
    pub epsilon: Rat,
    /// Number of places in S.
    pub s_size: u32,
    /// Sum of the degrees of the places in S.
    pub s_degree: u64,
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidArgument(msg));
        if self.m < self.n {
            return fail(format!("m = {} < n = {}", self.m, self.n));
        }
        if self.q < self.m + 1 {
            return fail(format!("q = {} < m + 1 = {}", self.q, self.m + 1));
        }
        if !self.epsilon.is_positive() {
            return fail("epsilon must be positive".into());
        }
        if self.d == 0 {
            return fail("d must be positive".into());
        }
        if self.h_fx < 0 || self.h_qfam < 0 {
            return fail("heights must be nonnegative".into());
        }
        Ok(())
    }

    /// `m - n + 1`.
    pub fn excess(&self) -> u32 {
        self.m - self.n + 1
    }

    /// `(m - n + 1)(n + 1) + ε`, the coefficient of `h(x)` in the main inequality.
    pub fn slope(&self) -> Rat {
        int(self.excess() * (self.n + 1)) + &self.epsilon
    }

    /// `d^{n+1} + (n+1) Δ_X d^n h(Q_1^{d/d_1}, ...)`.
    pub fn height_factor(&self) -> Rat {
        let d = BigInt::from(self.d);
        int(d.pow(self.n + 1)
            + BigInt::from(self.n + 1) * BigInt::from(self.delta_x) * d.pow(self.n) * self.h_qfam)
    }
}

/// `(6 max{(m+1)Δ_X, d})^{(n+1)(N^2+N)} (h(F_X) + h(Q family))`.
pub fn c2(p: &ScenarioParams) -> BigInt {
    let base = 6 * ((p.m as u64 + 1) * p.delta_x as u64).max(p.d as u64);
    let exp = (p.n + 1) * (p.big_n * p.big_n + p.big_n);
    BigInt::from(base).pow(exp) * (p.h_fx + p.h_qfam)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pipeline {
    pub b: Rat,
    pub b_prime: Rat,
    pub b_tilde: Rat,
    pub b_tilde_prime: Rat,
    pub c: Rat,
    pub c_prime: Rat,
    pub c2: BigInt,
}

pub fn pipeline(p: &ScenarioParams, a: &ExternalConstants) -> Pipeline {
    let d = int(p.d);
    let excess = int(p.excess());
    let b = a.a.clone();
    let b_prime = &excess * &a.a_prime;
    let factor = p.height_factor();
    let b_tilde = &b * &factor;
    let b_tilde_prime = &b_prime * &factor;
    let hfx1 = int(p.h_fx + 1);
    let c = &b_tilde * &hfx1 / &d;
    let c2 = c2(p);
    let c_prime = &b_tilde_prime * &hfx1 / &d
        + (int(p.q) + p.slope()) * int(p.h_qfam) / &d
        + int(p.q - p.m) * int(p.s_size) * Rat::from_integer(c2.clone()) / &d;
    Pipeline {
        b,
        b_prime,
        b_tilde,
        b_tilde_prime,
        c,
        c_prime,
        c2,
    }
}

/// A degree bound: the exact rational and its integer ceiling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBound {
    pub exact: Rat,
    pub ceiled: BigInt,
}

impl DegreeBound {
    fn new(exact: Rat) -> Self {
        let ceiled = ceil(&exact);
        DegreeBound { exact, ceiled }
    }

    pub fn was_ceiled(&self) -> bool {
        !self.exact.is_integer()
    }
}

/// `2(2n+1) d^{n+1} Δ_X (C(d+N, N) + q + 1) / ε + d`.
pub fn degree_bound_main(p: &ScenarioParams) -> Result<DegreeBound> {
    if !p.epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let d = BigInt::from(p.d);
    let monos = binomial(BigInt::from(p.d + p.big_n), BigInt::from(p.big_n));
    let lead = BigInt::from(2 * (2 * p.n + 1))
        * d.pow(p.n + 1)
        * BigInt::from(p.delta_x)
        * (monos + BigInt::from(p.q + 1));
    Ok(DegreeBound::new(int(lead) / &p.epsilon + int(d)))
}

/// `1 + 2(2n+1) Δ_Y (M+1) / ε`.
pub fn degree_bound_rw(n: u32, delta_y: u32, big_m: u32, epsilon: &Rat) -> Result<DegreeBound> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let lead = int(2 * (2 * n as u64 + 1) * delta_y as u64 * (big_m as u64 + 1));
    Ok(DegreeBound::new(int(1) + lead / epsilon))
}

/// Both sides of the comparison between the degree bound for the embedded
/// variety (`Δ_Y`, `M = N_1 + q`) and its expression in terms of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeChain {
    pub lhs: Rat,
    pub rhs: Rat,
    pub holds: bool,
}

pub fn degree_chain(p: &ScenarioParams, delta_y: u32, big_m: u32) -> Result<DegreeChain> {
    let lhs = degree_bound_rw(p.n, delta_y, big_m, &p.epsilon)?.exact;
    let monos = binomial(BigInt::from(p.d + p.big_n), BigInt::from(p.big_n));
    let lead = BigInt::from(2 * (2 * p.n + 1))
        * BigInt::from(p.d).pow(p.n)
        * BigInt::from(p.delta_x)
        * (monos + BigInt::from(p.q + 1));
    let rhs = int(lead) / &p.epsilon + int(1);
    let holds = lhs <= rhs;
    Ok(DegreeChain { lhs, rhs, holds })
}

/// Decimal rendering of a rational with the given number of fractional digits.
pub fn to_decimal(x: &Rat, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (a * Rat::from_integer(scale.clone())).round().to_integer();
    let ip = &scaled / &scale;
    let fp = &scaled % &scale;
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
    }
}

/// `{"exact": "p/q", "decimal": f64}`.
pub fn rat_json(x: &Rat) -> Value {
    json!({
        "exact": x.to_string(),
        "decimal": x.to_f64().unwrap_or(f64::NAN),
    })
}

pub fn report_json(p: &ScenarioParams, a: &ExternalConstants) -> Result<Value> {
    p.validate()?;
    let pl = pipeline(p, a);
    let main = degree_bound_main(p)?;
    Ok(json!({
        "inputs": {
            "N": p.big_n, "n": p.n, "m": p.m, "q": p.q, "d": p.d,
            "delta_x": p.delta_x, "h_fx": p.h_fx, "h_qfam": p.h_qfam,
            "epsilon": p.epsilon.to_string(),
            "s_size": p.s_size, "s_degree": p.s_degree,
            "a": a.a.to_string(), "a_prime": a.a_prime.to_string(),
        },
        "c2": rat_json(&int(pl.c2.clone())),
        "b": rat_json(&pl.b),
        "b_prime": rat_json(&pl.b_prime),
        "b_tilde": rat_json(&pl.b_tilde),
        "b_tilde_prime": rat_json(&pl.b_tilde_prime),
        "C": rat_json(&pl.c),
        "C_prime": rat_json(&pl.c_prime),
        "degree_bound_main": {
            "exact": main.exact.to_string(),
            "ceiled": main.ceiled.to_string(),
            "was_ceiled": main.was_ceiled(),
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ScenarioParams {
        ScenarioParams {
            big_n: 1,
            n: 1,
            m: 1,
            q: 2,
            d: 1,
            delta_x: 1,
            h_fx: 0,
            h_qfam: 0,
            epsilon: int(1),
            s_size: 2,
            s_degree: 2,
        }
    }

    #[test]
    fn c2_examples() {
        let mut p = params();
        assert!(c2(&p).is_zero());
        p = ScenarioParams {
            m: 2,
            big_n: 2,
            q: 3,
            h_qfam: 1,
            ..params()
        };
        assert_eq!(c2(&p), BigInt::from(18u64).pow(12));
        assert_eq!(c2(&p), BigInt::from(1156831381426176u64));
        p = ScenarioParams {
            d: 2,
            h_qfam: 1,
            ..params()
        };
        assert_eq!(c2(&p), BigInt::from(20736));
    }

    #[test]
    fn pipeline_zero_inputs() {
        let a = ExternalConstants::new(int(0), int(0)).unwrap();
        let pl = pipeline(&params(), &a);
        for v in [
            &pl.b,
            &pl.b_prime,
            &pl.b_tilde,
            &pl.b_tilde_prime,
            &pl.c,
            &pl.c_prime,
        ] {
            assert!(v.is_zero());
        }
    }

    #[test]
    fn small_height_constant() {
        let p = ScenarioParams {
            q: 3,
            d: 2,
            delta_x: 2,
            h_qfam: 1,
            ..params()
        };
        let a = ExternalConstants::new(int(1), int(1)).unwrap();
        let pl = pipeline(&p, &a);
        assert_eq!(pl.b_tilde, int(12));
        assert_eq!(pl.c, int(6));
    }

    #[test]
    fn degree_bounds() {
        assert_eq!(
            degree_bound_main(&ScenarioParams { q: 2, ..params() })
                .unwrap()
                .ceiled,
            BigInt::from(31)
        );
        let half = degree_bound_main(&ScenarioParams {
            epsilon: int(2),
            ..params()
        })
        .unwrap();
        assert_eq!(half.exact, int(16));
        let third = degree_bound_main(&ScenarioParams {
            epsilon: int(7),
            ..params()
        })
        .unwrap();
        assert_eq!(third.exact, Rat::new(37.into(), 7.into()));
        assert_eq!(third.ceiled, BigInt::from(6));
        assert!(third.was_ceiled());

        assert_eq!(
            degree_bound_rw(1, 1, 1, &int(1)).unwrap().ceiled,
            BigInt::from(13)
        );
        assert_eq!(
            degree_bound_rw(1, 2, 4, &int(1)).unwrap().ceiled,
            BigInt::from(61)
        );
        assert_eq!(
            degree_bound_rw(1, 1, 1, &int(6)).unwrap().ceiled,
            BigInt::from(3)
        );
        assert!(degree_bound_rw(1, 1, 1, &int(0)).is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&Rat::new(1.into(), 3.into()), 4), "0.3333");
        assert_eq!(to_decimal(&Rat::new((-5).into(), 2.into()), 1), "-2.5");
        assert_eq!(to_decimal(&int(7), 0), "7");
    }
}
