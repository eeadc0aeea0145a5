//! The truncated ring `S_n`.
//!
//! `S_n` is generated over `Z` by an invertible `s` and a nilpotent `t` subject
//! to
//!
//! ```text
//! t s      = s (t + t^2 + ... + t^n)
//! t s^-1   = s^-1 (t - t^2 + ... ± t^n)
//! t^(n+1)  = 0
//! ```
//!
//! Every element has a unique normal form `sum_{m=0..n} f_m(s) t^m` with
//! `f_m` in `Z[s, s^-1]`, and [`SElem`] stores exactly that. Products are
//! brought back to normal form by moving powers of `t` to the right of powers
//! of `s`. The rewrite `t s = s t (1 - t)^-1` iterates to
//! `t^b s^c = s^c (t / (1 - c t))^b`, so
//!
//! ```text
//! t^b g(s) = sum_{j >= 0} C(b + j - 1, j) (s d/ds)^j g(s) t^(b + j)
//! ```
//!
//! which is what [`SElem::checked_mul`] evaluates. [`SRing::mul_by_rewriting`]
//! is the literal one-`s`-at-a-time rewriting with cached tables and is kept as
//! an independent reference.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("t-degree {degree} exceeds the truncation order {order}")]
    OrderExceeded { degree: usize, order: usize },
    #[error("cannot embed an element of order {from} into order {to}")]
    EmbedBelowOrder { from: usize, to: usize },
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("{0} is not a unit of S_n")]
    NotUnit(String),
}

/// An element `sum_{m=0..n} f_m(s) t^m` of `S_n` in normal form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SElemRepr", into = "SElemRepr")]
pub struct SElem {
    coeffs: Vec<LaurentPoly>,
}

#[derive(Serialize, Deserialize)]
struct SElemRepr {
    order: usize,
    coeffs: Vec<LaurentPoly>,
}

impl TryFrom<SElemRepr> for SElem {
    type Error = String;

    fn try_from(r: SElemRepr) -> Result<Self, String> {
        if r.coeffs.len() != r.order + 1 {
            return Err(format!(
                "order {} needs {} coefficient lists, got {}",
                r.order,
                r.order + 1,
                r.coeffs.len()
            ));
        }
        Ok(SElem { coeffs: r.coeffs })
    }
}

impl From<SElem> for SElemRepr {
    fn from(x: SElem) -> Self {
        SElemRepr {
            order: x.order(),
            coeffs: x.coeffs,
        }
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

impl SElem {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![LaurentPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::from_laurent(LaurentPoly::one(), order)
    }

    /// A Laurent polynomial placed at t-degree zero.
    pub fn from_laurent(p: LaurentPoly, order: usize) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[0] = p;
        x
    }

    pub fn from_int(c: i64, order: usize) -> Self {
        Self::from_laurent(LaurentPoly::constant(c), order)
    }

    /// Builds `sum f_m t^m` from its coefficients; the order is `len - 1`.
    ///
    /// Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<LaurentPoly>) -> Self {
        assert!(!coeffs.is_empty(), "an element of S_n has n + 1 coefficients");
        Self { coeffs }
    }

    /// The basis element `s^l t^m`.
    pub fn monomial(l: i64, m: usize, order: usize) -> Result<Self, RingError> {
        Self::term(LaurentPoly::monomial(1, l), m, order)
    }

    /// `p(s) t^m`.
    pub fn term(p: LaurentPoly, m: usize, order: usize) -> Result<Self, RingError> {
        if m > order {
            return Err(RingError::OrderExceeded { degree: m, order });
        }
        let mut x = Self::zero(order);
        x.coeffs[m] = p;
        Ok(x)
    }

    pub fn s(order: usize) -> Self {
        Self::from_laurent(LaurentPoly::s(), order)
    }

    pub fn s_inv(order: usize) -> Self {
        Self::from_laurent(LaurentPoly::s_inv(), order)
    }

    /// The generator `t`, which is zero in `S_0`.
    pub fn t(order: usize) -> Self {
        Self::monomial(0, 1, order).unwrap_or_else(|_| Self::zero(order))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^m`, zero beyond the order.
    pub fn coeff(&self, m: usize) -> LaurentPoly {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    /// `pi_{0,n}`: the t-degree-zero coefficient.
    pub fn pi0(&self) -> &LaurentPoly {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(LaurentPoly::is_zero)
    }

    /// t-adic valuation: least `m` with `f_m != 0`, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_order(&self, other: &SElem) -> Result<(), RingError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(RingError::OrderMismatch(self.order(), other.order()))
        }
    }

    pub fn checked_add(&self, other: &SElem) -> Result<SElem, RingError> {
        self.check_order(other)?;
        Ok(SElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &SElem) -> Result<SElem, RingError> {
        self.check_order(other)?;
        Ok(SElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &SElem) -> Result<SElem, RingError> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![LaurentPoly::zero(); n + 1];
        for (d, g) in other.coeffs.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            // (s d/ds)^j g for j = 0..=n-d, computed once per coefficient of `other`.
            let derivs: Vec<LaurentPoly> = (0..=(n - d) as u32)
                .map(|j| g.euler_derivative(j))
                .collect();
            for (b, f) in self.coeffs.iter().enumerate().take(n - d + 1) {
                if f.is_zero() {
                    continue;
                }
                if b == 0 {
                    out[d] += f * g;
                    continue;
                }
                for j in 0..=(n - d - b) {
                    let dj = &derivs[j];
                    if dj.is_zero() {
                        continue;
                    }
                    let c = binomial((b + j - 1) as u64, j as u64);
                    out[b + j + d] += (f * dj).scale(&c);
                }
            }
        }
        Ok(SElem { coeffs: out })
    }

    /// `p(s) * self`, which acts coefficient-wise.
    pub fn left_mul_laurent(&self, p: &LaurentPoly) -> SElem {
        SElem {
            coeffs: self.coeffs.iter().map(|c| p * c).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> SElem {
        let mut acc = SElem::one(self.order());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `pi_{m,n}`: drop every `t^i` with `i > m`. A ring homomorphism.
    pub fn project(&self, m: usize) -> Result<SElem, RingError> {
        if m > self.order() {
            return Err(RingError::OrderExceeded {
                degree: m,
                order: self.order(),
            });
        }
        Ok(SElem {
            coeffs: self.coeffs[..=m].to_vec(),
        })
    }

    /// Zero-padded inclusion of `S_n` into `S_m` as a module. This is not
    /// multiplicative: `t * t^n` vanishes in `S_n` but not in `S_{n+1}`.
    pub fn embed(&self, m: usize) -> Result<SElem, RingError> {
        if m < self.order() {
            return Err(RingError::EmbedBelowOrder {
                from: self.order(),
                to: m,
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(m + 1, LaurentPoly::zero());
        Ok(SElem { coeffs })
    }

    /// A unit exactly when `pi_{0,n}` is `±s^k`.
    pub fn is_unit(&self) -> bool {
        self.coeffs[0].is_unit()
    }

    /// Two-sided inverse, by the iteration `y <- y + y (1 - x y)` starting
    /// from the inverse of the degree-zero part. The valuation of `1 - x y`
    /// at least doubles each round.
    pub fn inverse(&self) -> Result<SElem, RingError> {
        let n = self.order();
        let f0_inv = self.coeffs[0]
            .inverse()
            .map_err(|_| RingError::NotUnit(self.to_string()))?;
        let one = SElem::one(n);
        let mut y = SElem::from_laurent(f0_inv, n);
        let mut precision = 1usize;
        while precision <= n {
            let residual = &one - &(self * &y);
            if residual.is_zero() {
                break;
            }
            y = &y + &(&y * &residual);
            precision *= 2;
        }
        debug_assert!((self * &y).is_one(), "right inverse failed");
        debug_assert!((&y * self).is_one(), "left inverse failed");
        Ok(y)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics if the truncation orders differ; use the `checked_*` form
        /// to get a `RingError` instead.
        impl<'a> $trait<&'a SElem> for &'a SElem {
            type Output = SElem;

            fn $method(self, rhs: &'a SElem) -> SElem {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait for SElem {
            type Output = SElem;

            fn $method(self, rhs: SElem) -> SElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &SElem {
    type Output = SElem;

    fn neg(self) -> SElem {
        SElem {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for SElem {
    type Output = SElem;

    fn neg(self) -> SElem {
        -&self
    }
}

impl fmt::Display for SElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{m}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[S_{}] {}", self.order(), self)
    }
}

/// Context for one truncation order: constructors plus the cached rewriting
/// tables `t^d s` and `t^d s^-1` (for `d = 1..=n`) in normal form.
#[derive(Debug, Clone)]
pub struct SRing {
    order: usize,
    // t_s[d][m]: coefficient of s t^m in t^d s. Row 0 is the identity row.
    t_s: Vec<Vec<BigInt>>,
    t_s_inv: Vec<Vec<BigInt>>,
}

impl SRing {
    pub fn new(order: usize) -> Self {
        let n = order;
        // t s = s T with T = t + ... + t^n, hence t^d s = s T^d.
        let forward: Vec<BigInt> = (0..=n)
            .map(|m| if m == 0 { BigInt::zero() } else { BigInt::one() })
            .collect();
        // t s^-1 = s^-1 T' with T' = t - t^2 + ... ± t^n.
        let backward: Vec<BigInt> = (0..=n)
            .map(|m| match m {
                0 => BigInt::zero(),
                m if m % 2 == 1 => BigInt::one(),
                _ => -BigInt::one(),
            })
            .collect();
        Self {
            order,
            t_s: power_table(&forward, n),
            t_s_inv: power_table(&backward, n),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> SElem {
        SElem::zero(self.order)
    }

    pub fn one(&self) -> SElem {
        SElem::one(self.order)
    }

    pub fn s(&self) -> SElem {
        SElem::s(self.order)
    }

    pub fn s_inv(&self) -> SElem {
        SElem::s_inv(self.order)
    }

    pub fn t(&self) -> SElem {
        SElem::t(self.order)
    }

    pub fn constant(&self, c: i64) -> SElem {
        SElem::from_int(c, self.order)
    }

    pub fn laurent(&self, p: LaurentPoly) -> SElem {
        SElem::from_laurent(p, self.order)
    }

    /// The basis element `s^l t^m`.
    pub fn monomial(&self, l: i64, m: usize) -> Result<SElem, RingError> {
        SElem::monomial(l, m, self.order)
    }

    /// Normal form of `t^d s` as the list of coefficients of `s t^m`.
    pub fn t_pow_times_s(&self, d: usize) -> &[BigInt] {
        &self.t_s[d]
    }

    /// Normal form of `t^d s^-1` as the list of coefficients of `s^-1 t^m`.
    pub fn t_pow_times_s_inv(&self, d: usize) -> &[BigInt] {
        &self.t_s_inv[d]
    }

    /// Reference multiplication: every product of basis monomials
    /// `(s^a t^b)(s^c t^d)` is normalised by pushing the t-part across `s^c`
    /// one factor of `s^{±1}` at a time using the cached tables, truncating
    /// above degree `n` after every step.
    pub fn mul_by_rewriting(&self, x: &SElem, y: &SElem) -> Result<SElem, RingError> {
        x.check_order(y)?;
        x.check_order(&self.zero())?;
        let n = self.order;
        let mut out = vec![LaurentPoly::zero(); n + 1];
        for (b, f) in x.coeffs.iter().enumerate() {
            for (a, fa) in f.terms() {
                for (d, g) in y.coeffs.iter().enumerate() {
                    if b + d > n {
                        continue;
                    }
                    for (c, gc) in g.terms() {
                        // t^b s^c = s^c * sum_m q[m] t^m
                        let mut q = vec![BigInt::zero(); n + 1];
                        q[b] = BigInt::one();
                        let table = if c >= 0 { &self.t_s } else { &self.t_s_inv };
                        for _ in 0..c.unsigned_abs() {
                            let mut next = vec![BigInt::zero(); n + 1];
                            for (m, qm) in q.iter().enumerate() {
                                if qm.is_zero() {
                                    continue;
                                }
                                for (r, tr) in table[m].iter().enumerate() {
                                    if !tr.is_zero() {
                                        next[r] += qm * tr;
                                    }
                                }
                            }
                            q = next;
                        }
                        let coeff = fa * gc;
                        for (m, qm) in q.iter().enumerate() {
                            if qm.is_zero() || m + d > n {
                                continue;
                            }
                            out[m + d] += LaurentPoly::monomial(&coeff * qm, a + c);
                        }
                    }
                }
            }
        }
        Ok(SElem { coeffs: out })
    }
}

// Rows d = 0..=n of the truncated powers P^d of a t-series P without constant
// term; row 0 is `1`.
fn power_table(p: &[BigInt], n: usize) -> Vec<Vec<BigInt>> {
    let mut rows = Vec::with_capacity(n + 1);
    let mut current: Vec<BigInt> = (0..=n)
        .map(|m| if m == 0 { BigInt::one() } else { BigInt::zero() })
        .collect();
    rows.push(current.clone());
    for _ in 1..=n {
        let mut next = vec![BigInt::zero(); n + 1];
        for (i, ci) in current.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, pj) in p.iter().enumerate() {
                if i + j <= n && !pj.is_zero() {
                    next[i + j] += ci * pj;
                }
            }
        }
        current = next;
        rows.push(current.clone());
    }
    rows
}
