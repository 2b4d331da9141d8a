//! Text formats for polynomials, twists and rationals.
//!
//! Polynomials: `poly := term (('+'|'-') term)*`,
//! `term := coeff ('*'? var)* | var+`, `var := 'x' index ('^' exponent)?`,
//! `coeff := integer | integer '/' integer`, whitespace ignored. A
//! coefficient may also be a parenthesised polynomial in the parameters
//! `z, w, u, v` (same grammar), which is how generators with formal
//! exponents are printed.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use quasinv_core::exact::{ParamPoly, ParamRing, Rationals};
use quasinv_core::multipoly::{Monomial, MultiPoly};
use quasinv_core::twisted::{TwistFactor, TwistSpec};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected `{found}` at position {pos} in `{text}`")]
    Unexpected { text: String, pos: usize, found: String },
    #[error("unexpected end of input in `{0}`")]
    Eof(String),
    #[error("variable index must be at least 1")]
    ZeroIndex,
    #[error("polynomial uses x{used} but only {nvars} variables were requested")]
    TooManyVars { used: usize, nvars: usize },
    #[error("coefficient involves formal parameters; a rational polynomial is required")]
    Formal,
    #[error("invalid twist factor `{0}`")]
    BadFactor(String),
    #[error(transparent)]
    Twist(#[from] quasinv_core::twisted::TwistError),
    #[error("zero denominator")]
    ZeroDenominator,
}

const PARAMS: [char; 4] = ['z', 'w', 'u', 'v'];

#[derive(Clone, Copy, PartialEq)]
enum Level {
    Poly,
    Param,
}

struct Parser<'a> {
    text: &'a str,
    chars: Vec<char>,
    pos: usize,
}

type Term = (Vec<u32>, ParamPoly);

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text,
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(c) => ParseError::Unexpected {
                text: self.text.to_string(),
                pos: self.pos,
                found: c.to_string(),
            },
            None => ParseError::Eof(self.text.to_string()),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(BigInt::from_str(&s).expect("digits"))
    }

    fn small(&mut self) -> Result<u32, ParseError> {
        let v = self.integer()?;
        u32::try_from(v).map_err(|_| self.unexpected())
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let num = self.integer()?;
        if self.eat('/') {
            let den = self.integer()?;
            if den.is_zero() {
                return Err(ParseError::ZeroDenominator);
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn starts_var(&self, level: Level) -> bool {
        match (level, self.peek()) {
            (Level::Poly, Some('x')) => true,
            (Level::Param, Some(c)) => PARAMS.contains(&c),
            _ => false,
        }
    }

    /// Returns a 0-based variable index.
    fn var(&mut self, level: Level) -> Result<(usize, u32), ParseError> {
        let index = match level {
            Level::Poly => {
                self.pos += 1;
                let i = self.small()? as usize;
                if i == 0 {
                    return Err(ParseError::ZeroIndex);
                }
                i - 1
            }
            Level::Param => {
                let c = self.peek().expect("checked");
                self.pos += 1;
                if c == 'z' && self.peek().is_some_and(|d| d.is_ascii_digit()) {
                    self.small()? as usize
                } else {
                    PARAMS.iter().position(|&p| p == c).expect("checked")
                }
            }
        };
        let exp = if self.eat('^') { self.small()? } else { 1 };
        Ok((index, exp))
    }

    fn term(&mut self, level: Level) -> Result<Term, ParseError> {
        let mut coeff = ParamPoly::one();
        let mut has_coeff = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = ParamPoly::constant(self.rational()?);
            has_coeff = true;
        } else if level == Level::Poly && self.eat('(') {
            coeff = self.sum(Level::Param)?;
            if !self.eat(')') {
                return Err(self.unexpected());
            }
            has_coeff = true;
        }
        let mut exps: Vec<u32> = Vec::new();
        let mut any_var = false;
        loop {
            let star = self.peek() == Some('*');
            if star {
                self.pos += 1;
            }
            if !self.starts_var(level) {
                if star {
                    return Err(self.unexpected());
                }
                break;
            }
            let (i, e) = self.var(level)?;
            if exps.len() <= i {
                exps.resize(i + 1, 0);
            }
            exps[i] += e;
            any_var = true;
        }
        if !has_coeff && !any_var {
            return Err(self.unexpected());
        }
        Ok((exps, coeff))
    }

    fn sum(&mut self, level: Level) -> Result<ParamPoly, ParseError> {
        let terms = self.terms(level)?;
        Ok(terms.into_iter().fold(ParamPoly::zero(), |acc, (e, c)| {
            acc.add(&ParamPoly::from_terms([(e, BigRational::one())]).mul(&c))
        }))
    }

    fn terms(&mut self, level: Level) -> Result<Vec<Term>, ParseError> {
        let mut out = Vec::new();
        let mut negative = self.eat('-');
        if !negative {
            self.eat('+');
        }
        loop {
            let (e, c) = self.term(level)?;
            out.push((e, if negative { c.neg() } else { c }));
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        Ok(out)
    }
}

/// Parses a polynomial over the parameter ring. The variable count is the
/// largest index used, or `nvars` when given.
pub fn parse_param_poly(text: &str, nvars: Option<usize>) -> Result<MultiPoly<ParamRing>, ParseError> {
    let mut p = Parser::new(text);
    let terms = p.terms(Level::Poly)?;
    if p.pos != p.chars.len() {
        return Err(p.unexpected());
    }
    let used = terms.iter().map(|(e, _)| e.len()).max().unwrap_or(0);
    let n = match nvars {
        Some(n) if n < used => return Err(ParseError::TooManyVars { used, nvars: n }),
        Some(n) => n,
        None => used.max(1),
    };
    let mut out = MultiPoly::zero(ParamRing, n);
    for (mut e, c) in terms {
        e.resize(n, 0);
        out.add_term(Monomial::new(e), c);
    }
    Ok(out)
}

/// Parses a polynomial with rational coefficients.
pub fn parse_poly(text: &str, nvars: Option<usize>) -> Result<MultiPoly<Rationals>, ParseError> {
    let p = parse_param_poly(text, nvars)?;
    p.map_coeffs(Rationals, |c| c.constant_value().ok_or(ParseError::Formal))
}

/// Parses `a`, `-a`, `a/b`.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let mut p = Parser::new(text);
    let neg = p.eat('-');
    if !neg {
        p.eat('+');
    }
    let q = p.rational()?;
    if p.pos != p.chars.len() {
        return Err(p.unexpected());
    }
    Ok(if neg { -q } else { q })
}

fn parse_exponent(text: &str) -> Result<ParamPoly, ParseError> {
    if let Ok(q) = parse_rational(text) {
        return Ok(ParamPoly::constant(q));
    }
    let mut p = Parser::new(text);
    let e = p.sum(Level::Param)?;
    if p.pos != p.chars.len() {
        return Err(p.unexpected());
    }
    Ok(e)
}

/// Parses `(x-a)^b,(x-c)^d,...`; `(x+a)` and a missing `^b` (exponent 1)
/// are accepted. The empty string is the trivial twist.
pub fn parse_twist(text: &str) -> Result<TwistSpec, ParseError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Ok(TwistSpec::empty());
    }
    let mut factors = Vec::new();
    for part in compact.split(',') {
        let bad = || ParseError::BadFactor(part.to_string());
        let body = part.strip_prefix("(x").ok_or_else(bad)?;
        let close = body.find(')').ok_or_else(bad)?;
        let (root_text, rest) = body.split_at(close);
        let rest = &rest[1..];
        let root = match root_text.chars().next() {
            Some('-') => parse_rational(&root_text[1..]).map_err(|_| bad())?,
            Some('+') => -parse_rational(&root_text[1..]).map_err(|_| bad())?,
            None => BigRational::zero(),
            _ => return Err(bad()),
        };
        let exponent = if rest.is_empty() {
            ParamPoly::one()
        } else {
            let e = rest.strip_prefix('^').ok_or_else(bad)?;
            let e = e.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(e);
            parse_exponent(e).map_err(|_| bad())?
        };
        factors.push(TwistFactor { root, exponent });
    }
    Ok(TwistSpec::new(factors)?)
}

/// Parses a comma-separated list of integers, e.g. a monomial twist.
pub fn parse_int_list(text: &str) -> Result<Vec<i64>, ParseError> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<i64>().map_err(|_| ParseError::BadFactor(s.to_string()))
        })
        .collect()
}
