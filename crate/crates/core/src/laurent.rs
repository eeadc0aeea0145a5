//! Integer Laurent polynomials in one variable `s`.
//!
//! This is the coefficient ring of everything else in the crate: the
//! degree-zero part of `S_n` is `Z[s, s^-1]`, and the coloring polynomials
//! live here as well.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("{0} is not a unit of Z[s, s^-1]")]
    NotUnit(String),
    #[error("cannot parse Laurent polynomial: {0}")]
    Parse(String),
}

/// Sparse Laurent polynomial `sum c_e s^e` with arbitrary-precision integer
/// coefficients. No stored coefficient is ever zero, so structural equality
/// is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * s^exp`
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// The variable `s`.
    pub fn s() -> Self {
        Self::monomial(1, 1)
    }

    /// `s^-1`.
    pub fn s_inv() -> Self {
        Self::monomial(1, -1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True iff the polynomial is `±s^k`, the unit group of `Z[s, s^-1]`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    pub fn inverse(&self) -> Result<Self, LaurentError> {
        if !self.is_unit() {
            return Err(LaurentError::NotUnit(self.to_string()));
        }
        let (e, c) = self.terms().next().expect("units are nonzero");
        Ok(Self::monomial(c.clone(), -e))
    }

    /// The substitution `s -> s^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplication by `s^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// `(s d/ds)^j` applied to the polynomial: `sum e^j c_e s^e`.
    pub fn euler_derivative(&self, j: u32) -> Self {
        if j == 0 {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| **e != 0)
            .map(|(e, c)| (*e, c * BigInt::from(*e).pow(j)))
            .collect();
        Self { terms }
    }

    /// The quotient `self / d` when it exists in `Z[s, s^-1]`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (d_lo, d_hi) = (d.min_exp()?, d.max_exp()?);
        let d_lead = &d.terms[&d_hi];
        let Some(lo) = self.min_exp() else {
            return Some(Self::zero());
        };
        let mut q = Self::zero();
        let mut r = self.clone();
        while let Some(r_hi) = r.max_exp() {
            let e = r_hi - d_hi;
            if e < lo - d_lo {
                return None;
            }
            let c = &r.terms[&r_hi];
            if !(c % d_lead).is_zero() {
                return None;
            }
            let term = Self::monomial(c / d_lead, e);
            r -= &(&term * d);
            q += term;
        }
        Some(q)
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }

    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for LaurentPoly {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;

    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;

    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |acc, p| acc + p)
    }
}

// Rendering: ascending exponents, e.g. `-s^-2 + 2*s^-1 - 1 - 2*s + s^2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match *e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if *e == 1 {
                        write!(f, "s")?;
                    } else {
                        write!(f, "s^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Grammar accepted by `FromStr` (whitespace is insignificant):
///
/// ```text
/// poly  := term (('+' | '-') term)*
/// term  := ['+' | '-'] (int ['*' mono] | mono)
/// mono  := 's' ['^' ['{'] ['-'] digits ['}']]
/// ```
///
/// This accepts everything `Display` produces, plus a few looser spellings
/// such as `s^{-2}` and `3s`.
impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(LaurentError::Parse("empty input".into()));
        }
        let mut p = Parser { chars: &chars, pos: 0 };
        let mut out = LaurentPoly::zero();
        let mut first = true;
        while p.pos < chars.len() {
            let sign = match p.peek() {
                Some('+') => {
                    p.pos += 1;
                    1
                }
                Some('-') => {
                    p.pos += 1;
                    -1
                }
                _ if first => 1,
                Some(c) => return Err(p.error(&format!("expected '+' or '-', found '{c}'"))),
                None => unreachable!(),
            };
            first = false;
            let (exp, coeff) = p.term()?;
            out.add_term(exp, coeff * sign);
        }
        Ok(out)
    }
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, msg: &str) -> LaurentError {
        let text: String = self.chars.iter().collect();
        LaurentError::Parse(format!("{msg} at offset {} in '{text}'", self.pos))
    }

    fn digits(&mut self) -> Result<BigInt, LaurentError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn term(&mut self) -> Result<(i64, BigInt), LaurentError> {
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.digits()?;
            if self.peek() == Some('*') {
                self.pos += 1;
                if self.peek() != Some('s') {
                    return Err(self.error("expected 's' after '*'"));
                }
            }
            if self.peek() != Some('s') {
                return Ok((0, c));
            }
            c
        } else {
            BigInt::one()
        };
        if self.peek() != Some('s') {
            return Err(self.error("expected a coefficient or 's'"));
        }
        self.pos += 1;
        if self.peek() != Some('^') {
            return Ok((1, coeff));
        }
        self.pos += 1;
        let braced = self.peek() == Some('{');
        if braced {
            self.pos += 1;
        }
        let negative = self.peek() == Some('-');
        if negative {
            self.pos += 1;
        }
        let mag = self.digits()?;
        if braced {
            if self.peek() != Some('}') {
                return Err(self.error("expected '}'"));
            }
            self.pos += 1;
        }
        let mag: i64 = mag
            .try_into()
            .map_err(|_| self.error("exponent out of range"))?;
        Ok((if negative { -mag } else { mag }, coeff))
    }
}

// JSON form: `[[exp, "coeff"], ...]` in ascending exponent order. Coefficients
// are strings so that arbitrary precision survives every JSON reader.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, String)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.to_string()))
            .collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, String)> = Vec::deserialize(deserializer)?;
        let mut out = LaurentPoly::zero();
        for (e, c) in pairs {
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}
