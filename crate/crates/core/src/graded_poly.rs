//! Sparse multivariate polynomials graded by cohomological degree.
//!
//! Coefficients are arbitrary-precision integers, or elements of the field
//! with two elements. Every cohomology class in the engine is carried by a
//! [`Poly`]; quotient structure lives one level up in [`crate::quotient_ring`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientMode {
    Integers,
    Mod2,
}

impl CoefficientMode {
    /// Cohomological degree of the first characteristic class: 2 for Chern
    /// classes over the integers, 1 for Stiefel-Whitney classes mod 2.
    pub fn unit_degree(self) -> u32 {
        match self {
            CoefficientMode::Integers => 2,
            CoefficientMode::Mod2 => 1,
        }
    }

    fn reduce(self, c: BigInt) -> BigInt {
        match self {
            CoefficientMode::Integers => c,
            CoefficientMode::Mod2 => c.mod_floor(&BigInt::from(2)),
        }
    }
}

/// A ring generator. Identity is the pair `(space, name)`; the degree rides
/// along so monomial degrees can be computed without a lookup.
#[derive(Clone)]
pub struct Generator {
    name: Arc<str>,
    degree: u32,
    space: Arc<str>,
}

impl Generator {
    pub fn new(name: &str, degree: u32, space: &str) -> Self {
        assert!(degree >= 1, "generator {name} must have positive degree");
        Generator {
            name: name.into(),
            degree,
            space: space.into(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn space(&self) -> &str {
        &self.space
    }
}

impl PartialEq for Generator {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.space == other.space
    }
}

impl Eq for Generator {}

impl Hash for Generator {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.space.hash(state);
        self.name.hash(state);
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        (&*self.space, &*self.name).cmp(&(&*other.space, &*other.name))
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}[{}]", self.name, self.space, self.degree)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A power product of generators. Exponents are positive and factors are
/// sorted by generator, so structural equality is monomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: Vec<(Generator, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn generator(g: &Generator) -> Self {
        Monomial::power(g, 1)
    }

    pub fn power(g: &Generator, exp: u32) -> Self {
        if exp == 0 {
            return Monomial::one();
        }
        Monomial {
            degree: g.degree * exp,
            factors: vec![(g.clone(), exp)],
        }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Generator, u32)>) -> Self {
        factors.into_iter().fold(Monomial::one(), |acc, (g, e)| {
            acc.mul(&Monomial::power(&g, e))
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.factors
    }

    pub fn exponent(&self, g: &Generator) -> u32 {
        self.factors
            .binary_search_by(|(h, _)| h.cmp(g))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut a, mut b) = (
            self.factors.iter().peekable(),
            other.factors.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((ga, ea)), Some((gb, eb))) => match ga.cmp(gb) {
                    Ordering::Less => {
                        factors.push((ga.clone(), *ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        factors.push((gb.clone(), *eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        factors.push((ga.clone(), ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(x), None) => {
                    factors.push((*x).clone());
                    a.next();
                }
                (None, Some(y)) => {
                    factors.push((*y).clone());
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial {
            degree: self.degree + other.degree,
            factors,
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut factors = Vec::with_capacity(self.factors.len());
        let mut rest = other.factors.iter().peekable();
        for (g, e) in &self.factors {
            match rest.peek() {
                Some((h, f)) if h == g => {
                    if f > e {
                        return None;
                    }
                    if e > f {
                        factors.push((g.clone(), e - f));
                    }
                    rest.next();
                }
                Some((h, _)) if h < g => return None,
                _ => factors.push((g.clone(), *e)),
            }
        }
        if rest.next().is_some() {
            return None;
        }
        Some(Monomial {
            degree: self.degree - other.degree,
            factors,
        })
    }

    /// Degree contributed by generators of one space.
    pub fn space_degree(&self, space: &str) -> u32 {
        self.factors
            .iter()
            .filter(|(g, _)| g.space() == space)
            .map(|(g, e)| g.degree * e)
            .sum()
    }

    /// Splits off the factors that satisfy `pred`.
    pub fn split(&self, pred: impl Fn(&Generator) -> bool) -> (Monomial, Monomial) {
        let (yes, no): (Vec<_>, Vec<_>) = self.factors.iter().cloned().partition(|(g, _)| pred(g));
        let deg = |v: &[(Generator, u32)]| v.iter().map(|(g, e)| g.degree * e).sum();
        (
            Monomial {
                degree: deg(&yes),
                factors: yes,
            },
            Monomial {
                degree: deg(&no),
                factors: no,
            },
        )
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Graded lexicographic: total degree first, then the factor lists.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in canonical form: no zero coefficients, and in
/// [`CoefficientMode::Mod2`] every stored coefficient is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    mode: CoefficientMode,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(mode: CoefficientMode) -> Self {
        Poly {
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(mode: CoefficientMode) -> Self {
        Poly::constant(mode, 1)
    }

    pub fn constant(mode: CoefficientMode, c: impl Into<BigInt>) -> Self {
        Poly::term(mode, c, Monomial::one())
    }

    pub fn term(mode: CoefficientMode, c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = Poly::zero(mode);
        p.add_term(m, c.into());
        p
    }

    pub fn generator(mode: CoefficientMode, g: &Generator) -> Self {
        Poly::term(mode, 1, Monomial::generator(g))
    }

    pub fn from_terms(
        mode: CoefficientMode,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Self {
        let mut p = Poly::zero(mode);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn mode(&self) -> CoefficientMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coefficient(&Monomial::one()).is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, BigInt)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one())
    }

    /// Removes and returns the largest term in the graded order.
    pub fn pop_leading(&mut self) -> Option<(Monomial, BigInt)> {
        self.terms.pop_last()
    }

    /// Adds `c * m` in place, keeping the canonical form.
    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        let c = self.mode.reduce(c);
        if c.is_zero() {
            return;
        }
        let mode = self.mode;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = mode.reduce(o.get() + c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_mode(&self, other: &Poly) -> Result<()> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch(self.mode, other.mode));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_mode(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_mode(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_mode(other)?;
        let mut out = Poly::zero(self.mode);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        Poly::from_terms(
            self.mode,
            self.terms.iter().map(|(m, c)| (m.clone(), c * k)),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly::from_terms(
            self.mode,
            self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())),
        )
    }

    pub fn pow(&self, exp: u32) -> Poly {
        (0..exp).fold(Poly::one(self.mode), |acc, _| &acc * self)
    }

    /// Highest total degree present, or `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// `Some(d)` if every term has degree `d`; zero counts as homogeneous of
    /// any degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let first = self.terms.keys().next()?.degree;
        self.terms
            .keys()
            .all(|m| m.degree == first)
            .then_some(first)
    }

    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree == degree)
    }

    /// Keeps exactly the terms whose degree lies in `lo..=hi`.
    pub fn project_degrees(&self, lo: u32, hi: u32) -> Poly {
        Poly {
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (lo..=hi).contains(&m.degree))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn degree_part(&self, degree: u32) -> Poly {
        self.project_degrees(degree, degree)
    }

    pub fn retain(&self, pred: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Inverse of `self` up to and including degree `hi`, as a truncated
    /// geometric series. The constant term must be a unit.
    pub fn geometric_inverse(&self, hi: u32) -> Result<Poly> {
        let c0 = self.constant_term();
        let unit = match self.mode {
            CoefficientMode::Integers => c0.abs().is_one(),
            CoefficientMode::Mod2 => c0.is_one(),
        };
        if !unit {
            return Err(Error::NotAUnit(c0.to_string()));
        }
        // self = c0 (1 - t) with t of positive degree, so 1/self = c0 * sum t^k.
        let t = &Poly::one(self.mode) - &self.scale(&c0);
        let mut inv = Poly::one(self.mode);
        let mut power = Poly::one(self.mode);
        if t.is_zero() {
            return Ok(inv.scale(&c0));
        }
        loop {
            power = (&power * &t).project_degrees(0, hi);
            if power.is_zero() {
                break;
            }
            inv = &inv + &power;
        }
        Ok(inv.scale(&c0))
    }

    /// Exact quotient by `g` in the free polynomial ring.
    pub fn exact_divide_by_generator(&self, g: &Generator) -> Result<Poly> {
        let gm = Monomial::generator(g);
        let mut out = Poly::zero(self.mode);
        for (m, c) in &self.terms {
            let q = m.checked_div(&gm).ok_or_else(|| Error::NotDivisible {
                monomial: m.to_string(),
                generator: g.to_string(),
            })?;
            out.add_term(q, c.clone());
        }
        Ok(out)
    }

    /// Substitution homomorphism. Unassigned generators map to themselves;
    /// every image must be homogeneous of its generator's degree.
    pub fn map_generators(&self, assignment: &BTreeMap<Generator, Poly>) -> Result<Poly> {
        for (g, img) in assignment {
            self.check_mode(img)?;
            if !img.is_homogeneous_of(g.degree) {
                return Err(Error::InhomogeneousImage {
                    generator: g.to_string(),
                    degree: g.degree,
                    image: img.to_string(),
                });
            }
        }
        let mut out = Poly::zero(self.mode);
        for (m, c) in &self.terms {
            let mut img = Poly::constant(self.mode, c.clone());
            for (g, e) in &m.factors {
                let factor = match assignment.get(g) {
                    Some(p) => p.pow(*e),
                    None => Poly::term(self.mode, 1, Monomial::power(g, *e)),
                };
                img = &img * &factor;
                if img.is_zero() {
                    break;
                }
            }
            out = &out + &img;
        }
        Ok(out)
    }

    /// All generators appearing in some term.
    pub fn generators(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = self
            .terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|(g, _)| g.clone()))
            .collect();
        gens.sort();
        gens.dedup();
        gens
    }

    /// Largest exponent of `g` over all terms.
    pub fn max_exponent(&self, g: &Generator) -> u32 {
        self.terms.keys().map(|m| m.exponent(g)).max().unwrap_or(0)
    }

    /// Splits by the exponent of `g`: entry `j` holds the coefficient
    /// polynomial of `g^j`.
    pub fn coefficients_in(&self, g: &Generator) -> Vec<Poly> {
        let top = self.max_exponent(g) as usize;
        let mut out = vec![Poly::zero(self.mode); if self.is_zero() { 0 } else { top + 1 }];
        for (m, c) in &self.terms {
            let j = m.exponent(g);
            let rest = m
                .checked_div(&Monomial::power(g, j))
                .expect("exponent read from the monomial");
            out[j as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Parses a signed sum of terms `k*g1^a*g2^b`. `resolve` maps a name to
    /// its generator.
    pub fn parse(
        text: &str,
        mode: CoefficientMode,
        resolve: impl Fn(&str) -> Option<Generator>,
    ) -> std::result::Result<Poly, ParseError> {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            mode,
            resolve: &resolve,
        }
        .poly()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Terms in increasing graded order, e.g. `1 + 3*h - 2*h^2`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            /// Panics on a coefficient-mode mismatch; use the `checked_`
            /// form when mixing modes is possible.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("coefficient mode mismatch")
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_terms(self.mode, self.terms.iter().map(|(m, c)| (m.clone(), -c)))
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based column within the parsed string.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    mode: CoefficientMode,
    resolve: &'a dyn Fn(&str) -> Option<Generator>,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> std::result::Result<T, ParseError> {
        Err(ParseError {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .unwrap()
        })
    }

    fn ident(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphabetic() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            Some(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
        } else {
            None
        }
    }

    fn poly(&mut self) -> std::result::Result<Poly, ParseError> {
        let mut out = Poly::zero(self.mode);
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(c) => return self.err(format!("expected `+` or `-`, found `{}`", c as char)),
                None => break,
            };
            first = false;
            let (m, c) = self.term()?;
            out.add_term(m, c * sign);
        }
        Ok(out)
    }

    fn term(&mut self) -> std::result::Result<(Monomial, BigInt), ParseError> {
        let mut coeff = BigInt::one();
        let mut mono = Monomial::one();
        let mut expect_factor = true;
        if let Some(k) = self.integer() {
            coeff = k;
            expect_factor = false;
            if self.peek() == Some(b'*') {
                self.pos += 1;
                expect_factor = true;
            }
        }
        if !expect_factor {
            return Ok((mono, coeff));
        }
        loop {
            let col = self.pos;
            let Some(name) = self.ident() else {
                if let Some(k) = self.integer() {
                    coeff *= k;
                } else {
                    return self.err("expected a generator name or integer");
                }
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    continue;
                }
                break;
            };
            let name = name.to_owned();
            let Some(g) = (self.resolve)(&name) else {
                self.pos = col;
                self.skip_ws();
                return self.err(format!("unknown generator `{name}`"));
            };
            let mut exp = 1u32;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                match self.integer() {
                    Some(e) => match u32::try_from(e) {
                        Ok(e) => exp = e,
                        Err(_) => return self.err("exponent out of range"),
                    },
                    None => return self.err("expected an exponent after `^`"),
                }
            }
            mono = mono.mul(&Monomial::power(&g, exp));
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((mono, coeff))
    }
}
