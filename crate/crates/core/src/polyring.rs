//! Multivariate polynomials over a prime field with the standard grading.
//!
//! Terms are kept sorted in descending degree-reverse-lexicographic order and
//! zero coefficients are never stored, so structural equality is ring equality.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default characteristic: large enough that random choices behave like
/// choices over an infinite field, small enough for single-word products.
pub const DEFAULT_CHARACTERISTIC: u32 = 32003;

/// Maximum number of variables a ring may have.
pub const MAX_VARS: usize = 8;

/// Maximum exponent of a single variable.
pub const MAX_EXPONENT: u32 = u8::MAX as u32;

/// Arithmetic in `Z/p`. Elements are `u32` residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidRing(format!(
                "characteristic {p} is not a prime below 2^31"
            )));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn characteristic(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        t.rem_euclid(self.p as i64) as u32
    }

    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Representative in `(-p/2, p/2]`, handy for display in tests.
    pub fn to_signed(self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent vector together with its total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    degree: u16,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::default();
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::InvalidRing(format!(
                "at most {MAX_VARS} variables are supported"
            )));
        }
        let mut m = Monomial::default();
        for (i, &e) in exps.iter().enumerate() {
            if e > MAX_EXPONENT {
                return Err(Error::ExponentOverflow { pos: 0, max: MAX_EXPONENT });
            }
            m.exps[i] = e as u8;
            m.degree += e as u16;
        }
        Ok(m)
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    /// Product; panics if an exponent exceeds [`MAX_EXPONENT`].
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = Monomial::default();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].checked_add(other.exps[i])?;
        }
        m.degree = self.degree + other.degree;
        Some(m)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && (0..MAX_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    /// `other / self`; caller guarantees divisibility.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial::default();
        for i in 0..MAX_VARS {
            m.exps[i] = other.exps[i] - self.exps[i];
        }
        m.degree = other.degree - self.degree;
        m
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial::default();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(other.exps[i]);
            m.degree += m.exps[i] as u16;
        }
        m
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial::default();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].min(other.exps[i]);
            m.degree += m.exps[i] as u16;
        }
        m
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    /// Variables with a positive exponent, as a bit mask.
    pub fn support(&self) -> u32 {
        (0..MAX_VARS).fold(0, |acc, i| if self.exps[i] > 0 { acc | (1 << i) } else { acc })
    }

    /// All monomials of total degree `d` in `nvars` variables, in descending
    /// degrevlex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; nvars];
        fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == exps.len() {
                exps[i] = left;
                out.push(Monomial::from_exponents(exps).expect("degree within bounds"));
                return;
            }
            for e in (0..=left).rev() {
                exps[i] = e;
                rec(i + 1, left - e, exps, out);
            }
        }
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::one());
            }
            return out;
        }
        rec(0, d, &mut exps, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }
}

impl Ord for Monomial {
    /// Degree reverse lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree.cmp(&other.degree) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..MAX_VARS).rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = (0..MAX_VARS).rev().find(|&i| self.exps[i] > 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

/// Order of an element, ideal or matrix: a natural number or `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrdValue {
    Finite(u32),
    Infinite,
}

impl OrdValue {
    pub fn finite(self) -> Option<u32> {
        match self {
            OrdValue::Finite(v) => Some(v),
            OrdValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, OrdValue::Infinite)
    }
}

impl fmt::Display for OrdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdValue::Finite(v) => write!(f, "{v}"),
            OrdValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for OrdValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OrdValue::Finite(v) => s.serialize_u32(*v),
            OrdValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for OrdValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(OrdValue::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(OrdValue::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("invalid ord `{s}`"))),
        }
    }
}

struct RingData {
    field: PrimeField,
    vars: Vec<String>,
}

/// Handle to a graded polynomial ring `F_p[x_1, ..., x_n]`. Cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl Ring {
    pub fn new<S: AsRef<str>>(p: u32, vars: &[S]) -> Result<Ring> {
        let field = PrimeField::new(p)?;
        if vars.len() > MAX_VARS {
            return Err(Error::InvalidRing(format!(
                "{} variables requested, at most {MAX_VARS} supported",
                vars.len()
            )));
        }
        let mut names: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref();
            let valid = v
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidRing(format!("invalid variable name `{v}`")));
            }
            if names.iter().any(|n| n == v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
            names.push(v.to_string());
        }
        Ok(Ring(Arc::new(RingData { field, vars: names })))
    }

    pub fn field(&self) -> PrimeField {
        self.0.field
    }

    pub fn characteristic(&self) -> u32 {
        self.0.field.p
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.0.vars
    }

    pub fn zero(&self) -> Poly {
        Poly { ring: self.clone(), terms: Vec::new() }
    }

    pub fn one(&self) -> Poly {
        self.constant(1)
    }

    pub fn constant(&self, c: i64) -> Poly {
        let c = self.field().from_i64(c);
        self.term(Monomial::one(), c)
    }

    pub fn var(&self, i: usize) -> Poly {
        assert!(i < self.nvars(), "variable index out of range");
        self.term(Monomial::var(i), 1)
    }

    pub fn term(&self, m: Monomial, c: u32) -> Poly {
        let c = c % self.characteristic();
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Poly { ring: self.clone(), terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, u32)>) -> Poly {
        let fp = self.field();
        let mut v: Vec<(Monomial, u32)> =
            terms.into_iter().map(|(m, c)| (m, c % fp.p)).collect();
        v.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = fp.add(*lc, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        Poly { ring: self.clone(), terms: out }
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        Parser::new(self, text).parse()
    }

    pub fn same(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.vars == other.0.vars)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.characteristic(), self.0.vars.join(","))
    }
}

/// A polynomial in a [`Ring`].
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Monomial, u32)>,
}

/// Parses `text` as a polynomial of `ring`.
pub fn poly_parse(text: &str, ring: &Ring) -> Result<Poly> {
    ring.parse(text)
}

/// Minimal degree of a nonzero term; `+inf` for zero.
pub fn ord_poly(p: &Poly) -> OrdValue {
    p.ord()
}

/// Lowest-degree homogeneous component.
pub fn initial_form(p: &Poly) -> Result<Poly> {
    p.initial_form()
}

pub fn poly_add(a: &Poly, b: &Poly) -> Result<Poly> {
    a.check_ring(b)?;
    Ok(a.add(b))
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly> {
    a.check_ring(b)?;
    Ok(a.mul(b))
}

impl Poly {
    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<(Monomial, u32)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Poly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }


    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn check_ring(&self, other: &Poly) -> Result<()> {
        if self.ring.same(&other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn leading_term(&self) -> Option<(Monomial, u32)> {
        self.terms.first().copied()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> u32 {
        match self.terms.last() {
            Some((m, c)) if m.degree() == 0 => *c,
            _ => 0,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() == 0)
    }

    /// Maximal total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.degree())
    }

    pub fn ord(&self) -> OrdValue {
        match self.terms.last() {
            Some((m, _)) => OrdValue::Finite(m.degree()),
            None => OrdValue::Infinite,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.terms.first(), self.terms.last()) {
            (Some(a), Some(b)) => a.0.degree() == b.0.degree(),
            _ => true,
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> Poly {
        let terms = self.terms.iter().filter(|t| t.0.degree() == d).copied().collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn initial_form(&self) -> Result<Poly> {
        match self.ord() {
            OrdValue::Finite(d) => Ok(self.homogeneous_component(d)),
            OrdValue::Infinite => Err(Error::ZeroPolynomial),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.add_scaled(1, &Monomial::one(), other)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let fp = self.ring.field();
        self.add_scaled(fp.neg(1), &Monomial::one(), other)
    }

    pub fn neg(&self) -> Poly {
        let fp = self.ring.field();
        let terms = self.terms.iter().map(|&(m, c)| (m, fp.neg(c))).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: u32) -> Poly {
        let fp = self.ring.field();
        let c = c % fp.p;
        if c == 0 {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|&(m, a)| (m, fp.mul(a, c))).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn mul_term(&self, m: &Monomial, c: u32) -> Poly {
        let fp = self.ring.field();
        let c = c % fp.p;
        if c == 0 {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|&(t, a)| (t.mul(m), fp.mul(a, c))).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    /// `self + c * m * other`.
    pub fn add_scaled(&self, c: u32, m: &Monomial, other: &Poly) -> Poly {
        let fp = self.ring.field();
        let terms = merge_scaled(fp, &self.terms, c, m, &other.terms);
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: Vec<(Monomial, u32)> = Vec::new();
        let fp = self.ring.field();
        for &(m, c) in &small.terms {
            acc = merge_scaled(fp, &acc, c, &m, &large.terms);
        }
        Poly { ring: self.ring.clone(), terms: acc }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = self.ring.one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Scales so the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            Some(&(_, c)) if c != 1 => self.scale(self.ring.field().inv(c)),
            _ => self.clone(),
        }
    }
}

/// Merge `a + c * m * b` for descending-sorted term lists.
pub(crate) fn merge_scaled(
    fp: PrimeField,
    a: &[(Monomial, u32)],
    c: u32,
    m: &Monomial,
    b: &[(Monomial, u32)],
) -> Vec<(Monomial, u32)> {
    if c == 0 || b.is_empty() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|&(t, bc)| (t.mul(m), fp.mul(bc, c))).peekable();
    while let Some(&(bm, bc)) = bi.peek() {
        if i < a.len() {
            match a[i].0.cmp(&bm) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bm, bc));
                    bi.next();
                }
                Ordering::Equal => {
                    let s = fp.add(a[i].1, bc);
                    if s != 0 {
                        out.push((bm, s));
                    }
                    i += 1;
                    bi.next();
                }
            }
        } else {
            out.push((bm, bc));
            bi.next();
        }
    }
    out.extend_from_slice(&a[i..]);
    out
}

impl fmt::Display for Poly {
    /// Canonical form: descending degrevlex, least nonnegative coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.var_names();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            let mut factors = Vec::new();
            for (i, name) in names.iter().enumerate() {
                match m.exponent(i) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{c}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

struct Parser<'a> {
    ring: &'a Ring,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    lex_error: Option<Error>,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Ring, text: &str) -> Self {
        let mut toks = Vec::new();
        let mut lex_error = None;
        let bytes: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let ch = bytes[i];
            if ch.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            let tok = match ch {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                c if c.is_ascii_digit() => {
                    while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                        i += 1;
                    }
                    Tok::Int(bytes[start..=i].iter().collect())
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    while i + 1 < bytes.len()
                        && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == '_')
                    {
                        i += 1;
                    }
                    Tok::Ident(bytes[start..=i].iter().collect())
                }
                c => {
                    lex_error = Some(Error::Syntax {
                        pos: start,
                        msg: format!("unexpected character `{c}`"),
                    });
                    break;
                }
            };
            toks.push((tok, start));
            i += 1;
        }
        Parser { ring, toks, pos: 0, end: bytes.len(), lex_error }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.here(), msg: msg.to_string() }
    }

    fn parse(mut self) -> Result<Poly> {
        if let Some(e) = self.lex_error.take() {
            return Err(e);
        }
        let fp = self.ring.field();
        let mut terms = Vec::new();
        let mut sign = 1u32;
        if self.peek() == Some(&Tok::Minus) {
            sign = fp.neg(1);
            self.pos += 1;
        }
        loop {
            let (m, c) = self.term()?;
            terms.push((m, fp.mul(c, sign)));
            match self.peek() {
                None => break,
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = fp.neg(1),
                Some(_) => return Err(self.syntax("expected `+`, `-` or end of input")),
            }
            self.pos += 1;
        }
        Ok(self.ring.from_terms(terms))
    }

    fn term(&mut self) -> Result<(Monomial, u32)> {
        match self.peek().cloned() {
            Some(Tok::Int(digits)) => {
                self.pos += 1;
                let c = reduce_digits(&digits, self.ring.characteristic());
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    let m = self.factors()?;
                    Ok((m, c))
                } else {
                    Ok((Monomial::one(), c))
                }
            }
            Some(Tok::Ident(_)) => Ok((self.factors()?, 1)),
            _ => Err(self.syntax("expected a coefficient or a variable")),
        }
    }

    fn factors(&mut self) -> Result<Monomial> {
        let mut exps = [0u32; MAX_VARS];
        loop {
            let pos = self.here();
            let name = match self.peek().cloned() {
                Some(Tok::Ident(name)) => name,
                _ => return Err(self.syntax("expected a variable")),
            };
            self.pos += 1;
            let idx = self
                .ring
                .var_names()
                .iter()
                .position(|v| *v == name)
                .ok_or(Error::UnknownVariable { name, pos })?;
            let mut e = 1u64;
            if self.peek() == Some(&Tok::Caret) {
                self.pos += 1;
                let epos = self.here();
                match self.peek().cloned() {
                    Some(Tok::Int(digits)) => {
                        e = digits
                            .parse::<u64>()
                            .map_err(|_| Error::ExponentOverflow { pos: epos, max: MAX_EXPONENT })?;
                        self.pos += 1;
                    }
                    _ => return Err(self.syntax("expected an exponent")),
                }
            }
            let total = exps[idx] as u64 + e;
            if total > MAX_EXPONENT as u64 {
                return Err(Error::ExponentOverflow { pos, max: MAX_EXPONENT });
            }
            exps[idx] = total as u32;
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Monomial::from_exponents(&exps)
    }
}

fn reduce_digits(digits: &str, p: u32) -> u32 {
    digits
        .bytes()
        .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p as u64) as u32
}
