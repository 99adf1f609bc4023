//! Polynomials in the degree-2 generators of a cohomology ring.
//!
//! These are the "divisor lifts": explicit presentations of ring classes as
//! polynomials in first Chern classes, which the divisor shift rule acts on.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl DivisorPoly {
    pub fn zero(nvars: usize) -> Self {
        DivisorPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let slot = out.terms.entry(e.clone()).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        DivisorPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let slot = out.terms.entry(e).or_insert_with(Rational::zero);
                *slot += c1 * c2;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, Rational::one()), |acc, _| {
            acc.mul(self)
        })
    }

    /// Re-indexes variables: variable `i` of `self` becomes variable `map[i]`
    /// of a polynomial in `nvars` variables.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.terms.insert(ne, c.clone());
        }
        out
    }

    /// Parses expressions such as `"H1^2 - 3/2*H1*H2 + (H1+H2)^2"` over the
    /// given generator names.
    pub fn parse(src: &str, names: &[String]) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            names,
            src,
        };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(p.error("trailing input"));
        }
        Ok(out)
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut ordered: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        ordered.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), std::cmp::Reverse((*e).clone())));
        let mut s = String::new();
        for (n, (e, c)) in ordered.into_iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], k)),
                }
            }
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if n > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            if factors.is_empty() {
                s.push_str(&format_rational(&mag));
            } else {
                if !mag.is_one() {
                    let _ = write!(s, "{}*", format_rational(&mag));
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    names: &'a [String],
    src: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in polynomial {:?}", self.src))
    }

    fn peek_op(&self, c: char) -> bool {
        self.tokens.get(self.pos) == Some(&Tok::Op(c))
    }

    fn expr(&mut self) -> Result<DivisorPoly> {
        let n = self.names.len();
        let mut acc = DivisorPoly::zero(n);
        let mut sign = Rational::one();
        if self.peek_op('-') {
            sign = -sign;
            self.pos += 1;
        } else if self.peek_op('+') {
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = acc.add(&t.scale(&sign));
            if self.peek_op('+') {
                sign = Rational::one();
            } else if self.peek_op('-') {
                sign = -Rational::one();
            } else {
                return Ok(acc);
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<DivisorPoly> {
        let mut acc = self.power()?;
        loop {
            if self.peek_op('*') {
                self.pos += 1;
                acc = acc.mul(&self.power()?);
            } else if self.peek_op('/') {
                self.pos += 1;
                let d = self.integer()?;
                let d = parse_rational(&d)?;
                if d.is_zero() {
                    return Err(self.error("division by zero"));
                }
                acc = acc.scale(&(Rational::one() / d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn integer(&mut self) -> Result<String> {
        match self.tokens.get(self.pos) {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.error("expected integer")),
        }
    }

    fn power(&mut self) -> Result<DivisorPoly> {
        let base = self.atom()?;
        if self.peek_op('^') {
            self.pos += 1;
            let k: u32 = self
                .integer()?
                .parse()
                .map_err(|_| self.error("bad exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DivisorPoly> {
        let n = self.names.len();
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(DivisorPoly::constant(n, parse_rational(&s)?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self.names.iter().position(|x| *x == name).ok_or_else(|| {
                    Error::NoDivisorLift(format!(
                        "{name:?} is not a degree-2 generator (have {:?})",
                        self.names
                    ))
                })?;
                Ok(DivisorPoly::var(n, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.peek_op(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.error("expected number, generator or '('")),
        }
    }
}
