//! Factorization of univariate polynomials over Q.
//!
//! Squarefree decomposition (Yun), factorization of each squarefree part
//! modulo a small prime of good reduction (distinct-degree followed by
//! Cantor-Zassenhaus), multifactor Hensel lifting to a modulus above the
//! Mignotte bound, and recombination of lifted factors by subset search.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use super::Rat;
use crate::error::{Error, Result};

/// `unit * prod(factor^multiplicity)`; factors are monic, irreducible and
/// sorted by the [`Poly`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rat,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (f, k)| {
                &acc * &f.pow(*k as u32)
            })
    }
}

pub fn factor(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("factor"));
    }
    let unit = f.leading();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&f.monic()) {
        for g in factor_squarefree(&part) {
            factors.push((g, mult));
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Whether `f` is irreducible over Q (constants are not).
pub fn is_irreducible(f: &Poly) -> bool {
    match factor(f) {
        Ok(fac) => fac.factors.len() == 1 && fac.factors[0].1 == 1,
        Err(_) => false,
    }
}

/// Yun's algorithm: monic `f = prod a_i^i` with each `a_i` squarefree and
/// pairwise coprime. Trivial parts are dropped.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let f = f.monic();
    if f.is_constant() {
        return Vec::new();
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let c = df.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        b = b.div_exact(&a).expect("gcd divides");
        let c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Monic irreducible factors of a monic squarefree polynomial.
fn factor_squarefree(f: &Poly) -> Vec<Poly> {
    if f.deg() <= 1 {
        return vec![f.monic()];
    }
    let (_, prim) = f.primitive_part();
    // pull out the factor t first, it is cheap and common
    if prim[0].is_zero() {
        let rest = Poly::from_bigints(&prim[1..]);
        let mut out = vec![Poly::t()];
        if !rest.is_constant() {
            out.extend(factor_squarefree(&rest.monic()));
        }
        return out;
    }
    zassenhaus(&prim)
        .into_iter()
        .map(|g| Poly::from_bigints(&g).monic())
        .collect()
}

// ---------------------------------------------------------------------------
// arithmetic in F_p[x], coefficients low degree first, no trailing zeros

type Zp = Vec<u64>;

fn zp_trim(mut a: Zp) -> Zp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn zp_from_big(c: &[BigInt], p: u64) -> Zp {
    let pb = BigInt::from(p);
    zp_trim(
        c.iter()
            .map(|x| x.mod_floor(&pb).to_u64().expect("reduced"))
            .collect(),
    )
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

fn zp_sub(a: &Zp, b: &Zp, p: u64) -> Zp {
    let n = a.len().max(b.len());
    zp_trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn zp_add(a: &Zp, b: &Zp, p: u64) -> Zp {
    let n = a.len().max(b.len());
    zp_trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn zp_mul(a: &Zp, b: &Zp, p: u64) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    zp_trim(out)
}

fn zp_divrem(a: &Zp, b: &Zp, p: u64) -> (Zp, Zp) {
    assert!(!b.is_empty(), "division by zero in F_p[x]");
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let db = b.len() - 1;
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut rem = a.clone();
    let mut quot = vec![0u64; a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            rem[i + j] = (rem[i + j] + p - c * y % p) % p;
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (zp_trim(quot), zp_trim(rem))
}

fn zp_monic(a: &Zp, p: u64) -> Zp {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|&x| x * inv % p).collect()
        }
    }
}

fn zp_gcd(a: &Zp, b: &Zp, p: u64) -> Zp {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let (_, r) = zp_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    zp_monic(&a, p)
}

/// `(g, s, t)` with `s*a + t*b = g`, `g` monic.
fn zp_xgcd(a: &Zp, b: &Zp, p: u64) -> (Zp, Zp, Zp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = zp_divrem(&r0, &r1, p);
        let s2 = zp_sub(&s0, &zp_mul(&q, &s1, p), p);
        let t2 = zp_sub(&t0, &zp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().expect("nonzero gcd"), p);
    let sc = |v: &Zp| zp_trim(v.iter().map(|&x| x * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn zp_powmod(base: &Zp, e: &BigUint, modulus: &Zp, p: u64) -> Zp {
    let mut acc = vec![1u64];
    let base = zp_divrem(base, modulus, p).1;
    for i in (0..e.bits()).rev() {
        acc = zp_divrem(&zp_mul(&acc, &acc, p), modulus, p).1;
        if e.bit(i) {
            acc = zp_divrem(&zp_mul(&acc, &base, p), modulus, p).1;
        }
    }
    acc
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &Zp, p: u64) -> Vec<(Zp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Zp = vec![0, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 0;
    while f.len() > 2 * (d + 1) {
        d += 1;
        h = zp_powmod(&h, &pe, &f, p);
        let g = zp_gcd(&zp_sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = zp_divrem(&f, &g, p).0;
            h = zp_divrem(&h, &f, p).1;
        }
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((f, deg));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct degree-`d` factors.
fn equal_degree(f: &Zp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Zp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Zp = zp_trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = zp_sub(&zp_powmod(&a, &e, f, p), &vec![1u64], p);
        let g = zp_gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let rest = zp_monic(&zp_divrem(f, &g, p).0, p);
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&rest, d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &Zp, p: u64) -> Vec<Zp> {
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let f = zp_monic(f, p);
    distinct_degree(&f, p)
        .into_iter()
        .flat_map(|(g, d)| equal_degree(&g, d, p, &mut rng))
        .collect()
}

// ---------------------------------------------------------------------------
// Z[x] helpers

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| (2..).take_while(|k| k * k <= n).all(|k| n % k != 0))
}

fn reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn zadd_scaled(a: &[BigInt], b: &Zp, k: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_default() + k * BigInt::from(b.get(i).copied().unwrap_or(0))
        })
        .collect()
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let mut g = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if a.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

/// Lifts `f = g * h mod p` (with `g` monic) to `f = g * h mod p^k`, `p^k >= bound`.
fn hensel_lift(f: &[BigInt], g: &Zp, h: &Zp, p: u64, bound: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, s, t) = zp_xgcd(g, h, p);
    let pb = BigInt::from(p);
    let mut g_big: Vec<BigInt> = g.iter().map(|&c| BigInt::from(c)).collect();
    let mut h_big: Vec<BigInt> = h.iter().map(|&c| BigInt::from(c)).collect();
    let mut pk = pb.clone();
    while &pk < bound {
        let diff = zsub(f, &zmul(&g_big, &h_big));
        let e_big: Vec<BigInt> = diff.iter().map(|c| c / &pk).collect();
        let e = zp_from_big(&e_big, p);
        if !e.is_empty() {
            let (q, r) = zp_divrem(&zp_mul(&e, &t, p), g, p);
            let dh = zp_add(&zp_mul(&e, &s, p), &zp_mul(&q, h, p), p);
            g_big = zadd_scaled(&g_big, &r, &pk);
            h_big = zadd_scaled(&h_big, &dh, &pk);
        }
        pk *= &pb;
        g_big = reduce(&g_big, &pk);
        h_big = reduce(&h_big, &pk);
    }
    (g_big, h_big)
}

/// Irreducible factors of a squarefree primitive integer polynomial of degree >= 2
/// with nonzero constant term.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let lc = f[n].clone();
    let fp: Vec<BigInt> = f.to_vec();
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();

    // try a few good primes and keep the one with fewest modular factors
    let mut best: Option<(u64, Vec<Zp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fm = zp_from_big(&fp, p);
        let dm = zp_from_big(&df, p);
        if fm.len() != f.len() || zp_gcd(&fm, &dm, p).len() != 1 {
            continue;
        }
        let facs = factor_mod_p(&fm, p);
        if facs.len() == 1 {
            return vec![fp];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (p, mod_factors) = best.expect("some prime of good reduction");

    // coefficient bound for factors (Mignotte), scaled by the leading coefficient
    let norm2 = f.iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b);
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * (norm2.sqrt() + 1);

    // multifactor lift by peeling one factor at a time
    let pb = BigInt::from(p);
    let mut lifted = Vec::with_capacity(mod_factors.len());
    let mut cur = fp.clone();
    let lc_mod = lc.mod_floor(&pb).to_u64().unwrap();
    for i in 0..mod_factors.len() - 1 {
        let g = &mod_factors[i];
        let h = mod_factors[i + 1..]
            .iter()
            .fold(vec![lc_mod], |acc, x| zp_mul(&acc, x, p));
        let (gl, hl) = hensel_lift(&cur, g, &h, p, &bound);
        lifted.push(gl);
        cur = hl;
    }
    let mut modulus = pb.clone();
    while modulus < bound {
        modulus *= &pb;
    }
    // last factor is cur / lc mod p^k
    let lc_inv = lc.modinv(&modulus).expect("lc invertible mod p^k");
    lifted.push(reduce(
        &cur.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(),
        &modulus,
    ));

    recombine(fp, lifted, &modulus)
}

fn recombine(
    mut f: Vec<BigInt>,
    mut lifted: Vec<Vec<BigInt>>,
    modulus: &BigInt,
) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = None;
        let lc = f.last().unwrap().clone();
        for subset in (0..lifted.len()).combinations(s) {
            let prod = subset.iter().fold(vec![lc.clone()], |acc, &i| {
                reduce(&zmul(&acc, &lifted[i]), modulus)
            });
            let cand = primitive(&symmetric(&prod, modulus));
            if let Some(q) = Poly::from_bigints(&f).div_exact(&Poly::from_bigints(&cand)) {
                let (_, qi) = q.primitive_part();
                found = Some((subset, cand, qi));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                f = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => s += 1,
        }
    }
    if f.len() > 1 {
        out.push(f);
    }
    out
}
