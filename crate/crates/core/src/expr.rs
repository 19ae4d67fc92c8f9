//! Expression grammar shared by the command line and scenario files.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | 't' | 'X'k | 's0' | 's1' | 'u_'i'_'j | '(' expr ')'
//! ```
//!
//! Division is only allowed by subexpressions free of the form variables.

use num_bigint::BigInt;

use crate::chow::{BlockPoly, ChowForm};
use crate::error::{Error, Result};
use crate::funcfield::{Place, Poly, RatFunc};
use crate::heights::{HomPoly, ProjPoint};
use crate::mpoly::MPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Context {
    /// Elements of K; no form variables.
    Scalar,
    /// Forms in `X_0, ..., X_M`.
    Homogeneous(usize),
    /// Binary forms in `s0, s1`.
    Binary,
    /// Block polynomials in `u_i_j`, `i < blocks`, `j < width`.
    Chow { blocks: usize, width: usize },
}

impl Context {
    fn nvars(&self) -> usize {
        match *self {
            Context::Scalar => 0,
            Context::Homogeneous(m) => m + 1,
            Context::Binary => 2,
            Context::Chow { blocks, width } => blocks * width,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    T,
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn digits(s: &[u8], start: usize) -> (usize, usize) {
    let mut end = start;
    while end < s.len() && s[end].is_ascii_digit() {
        end += 1;
    }
    let v = std::str::from_utf8(&s[start..end])
        .ok()
        .and_then(|x| x.parse().ok())
        .unwrap_or(usize::MAX);
    (v, end)
}

fn tokenize(text: &str, ctx: Context) -> Result<Vec<(usize, Tok)>> {
    let s = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let c = s[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let mut end = i;
                while end < s.len() && s[end].is_ascii_digit() {
                    end += 1;
                }
                let v: BigInt = text[i..end].parse().expect("digits");
                i = end;
                Tok::Int(v)
            }
            b'+' => {
                i += 1;
                Tok::Plus
            }
            b'-' => {
                i += 1;
                Tok::Minus
            }
            b'*' => {
                i += 1;
                Tok::Star
            }
            b'/' => {
                i += 1;
                Tok::Slash
            }
            b'^' => {
                i += 1;
                Tok::Caret
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b't' => {
                i += 1;
                Tok::T
            }
            b'X' => {
                let (k, end) = digits(s, i + 1);
                if end == i + 1 {
                    return Err(syntax(i, "expected an index after 'X'"));
                }
                match ctx {
                    Context::Homogeneous(m) if k <= m => {}
                    Context::Homogeneous(m) => {
                        return Err(syntax(i, format!("variable X{k} outside X0..X{m}")))
                    }
                    _ => return Err(syntax(i, "X variables are not allowed here")),
                }
                i = end;
                Tok::Var(k)
            }
            b's' => {
                let (k, end) = digits(s, i + 1);
                if ctx != Context::Binary {
                    return Err(syntax(i, "s variables are not allowed here"));
                }
                if end == i + 1 || k > 1 {
                    return Err(syntax(i, "expected s0 or s1"));
                }
                i = end;
                Tok::Var(k)
            }
            b'u' => {
                let Context::Chow { blocks, width } = ctx else {
                    return Err(syntax(i, "u variables are not allowed here"));
                };
                let bad = || syntax(start, "expected u_<i>_<j>");
                if s.get(i + 1) != Some(&b'_') {
                    return Err(bad());
                }
                let (bi, e1) = digits(s, i + 2);
                if e1 == i + 2 || s.get(e1) != Some(&b'_') {
                    return Err(bad());
                }
                let (bj, e2) = digits(s, e1 + 1);
                if e2 == e1 + 1 {
                    return Err(bad());
                }
                if bi >= blocks || bj >= width {
                    return Err(syntax(
                        start,
                        format!("variable u_{bi}_{bj} outside {blocks} blocks of width {width}"),
                    ));
                }
                i = e2;
                Tok::Var(bi * width + bj)
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(i, format!("unexpected character '{ch}'")));
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.unary()?;
                    let c = match d.terms().len() {
                        0 => return Err(syntax(at, "division by zero")),
                        1 if d.total_degree() == Some(0) => d.coeff(&vec![0; self.nvars]),
                        _ => return Err(syntax(at, "division by a non-scalar expression")),
                    };
                    acc = acc.scale(&c.inv()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.here();
            match self.toks.get(self.pos) {
                Some((_, Tok::Int(k))) => {
                    let k: u32 = k.try_into().map_err(|_| syntax(at, "exponent too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(k));
                }
                _ => return Err(syntax(at, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly> {
        let at = self.here();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Int(v) => Ok(MPoly::constant(
                self.nvars,
                RatFunc::from_poly(Poly::from_bigints(&[v])),
            )),
            Tok::T => Ok(MPoly::constant(self.nvars, RatFunc::t())),
            Tok::Var(k) => Ok(MPoly::var(self.nvars, k)),
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.here(), "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(syntax(at, "expected a number, variable or '('")),
        }
    }
}

/// Parses `text` into a polynomial in the variables of `ctx`.
pub fn parse_mpoly(text: &str, ctx: Context) -> Result<MPoly> {
    let toks = tokenize(text, ctx)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        nvars: ctx.nvars(),
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.here(), "unexpected trailing input"));
    }
    Ok(v)
}

pub fn parse_scalar(text: &str) -> Result<RatFunc> {
    let p = parse_mpoly(text, Context::Scalar)?;
    Ok(p.coeff(&[]))
}

/// Parses an element of Q[t]; fails on proper fractions.
pub fn parse_poly(text: &str) -> Result<Poly> {
    let v = parse_scalar(text)?;
    if !v.is_poly() {
        return Err(Error::InvalidArgument(format!(
            "'{text}' is not a polynomial"
        )));
    }
    Ok(v.num().clone())
}

fn check_homogeneous(p: MPoly, var: &str) -> Result<HomPoly> {
    let Some((e, _)) = p.terms().iter().next_back() else {
        return Err(Error::ZeroPolynomial("form"));
    };
    let degree: u32 = e.iter().sum();
    for e in p.terms().keys() {
        let got: u32 = e.iter().sum();
        if got != degree {
            return Err(Error::Inhomogeneous {
                term: crate::heights::fmt_monomial(e, var),
                expected: degree,
                got,
            });
        }
    }
    HomPoly::new(degree, p)
}

/// A nonzero form in `X_0, ..., X_M`; every term must have the same degree.
pub fn parse_form(text: &str, m: usize) -> Result<HomPoly> {
    check_homogeneous(parse_mpoly(text, Context::Homogeneous(m))?, "X")
}

/// A nonzero binary form in `s0, s1`.
pub fn parse_binary_form(text: &str) -> Result<HomPoly> {
    check_homogeneous(parse_mpoly(text, Context::Binary)?, "s")
}

/// Prints a binary form with `s0, s1`.
pub fn fmt_binary_form(f: &HomPoly) -> String {
    crate::heights::fmt_mpoly(f.poly(), &|i| format!("s{i}"))
}

/// A bracketed, comma-separated list of scalars, e.g. `[1, t, t^2]`.
pub fn parse_point(text: &str) -> Result<ProjPoint> {
    let trimmed = text.trim();
    let offset = text.len() - text.trim_start().len();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| syntax(offset, "a point must be written as [a, b, ...]"))?;
    let mut coords = Vec::new();
    let mut start = 0;
    let mut depth = 0i32;
    let bytes = inner.as_bytes();
    for k in 0..=bytes.len() {
        let at_end = k == bytes.len();
        if !at_end {
            match bytes[k] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                _ => {}
            }
        }
        if at_end || (bytes[k] == b',' && depth == 0) {
            let piece = &inner[start..k];
            let base = offset + 1 + start;
            let v = parse_scalar(piece).map_err(|e| match e {
                Error::Syntax { pos, msg } => Error::Syntax {
                    pos: pos + base,
                    msg,
                },
                e => e,
            })?;
            coords.push(v);
            start = k + 1;
        }
    }
    ProjPoint::new(coords)
}

/// `inf` or the text of a monic irreducible polynomial (made monic if needed).
pub fn parse_place(text: &str) -> Result<Place> {
    let t = text.trim();
    if t == "inf" || t == "∞" {
        return Ok(Place::Infinite);
    }
    Place::finite(parse_poly(t)?)
}

/// A Chow form from its file representation.
pub fn parse_chow_form(n: usize, ambient: usize, degree: u32, text: &str) -> Result<ChowForm> {
    let ctx = Context::Chow {
        blocks: n + 1,
        width: ambient + 1,
    };
    let p = parse_mpoly(text, ctx)?;
    ChowForm::new(BlockPoly::new(n + 1, ambient + 1, p)?, degree)
}
