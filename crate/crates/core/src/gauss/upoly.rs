use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{endpoint_sign, GaussDiagram, Slot};
use crate::laurent::LaurentPoly;

/// Which of the two arcs cut out by an arrow's endpoints is summed for n(e).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// From the tail forward to the head.
    TailToHead,
    /// From the head forward to the tail.
    HeadToTail,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::TailToHead => Side::HeadToTail,
            Side::HeadToTail => Side::TailToHead,
        }
    }
}

/// The convention under which `f1 = u(s) - u(1/s)` holds for the coloring
/// matrix built in `coloring`.
impl Default for Side {
    fn default() -> Self {
        Side::HeadToTail
    }
}

/// Sum of endpoint signs strictly inside the chosen arc of `arrow`.
/// Returns `None` when the arrow does not exist.
pub fn n_of_arrow(d: &GaussDiagram, arrow: usize, side: Side) -> Option<i64> {
    let (tail, head) = d.endpoints(arrow)?;
    let (from, to) = match side {
        Side::TailToHead => (tail, head),
        Side::HeadToTail => (head, tail),
    };
    Some(arc_sum(d.slots(), from, to))
}

fn arc_sum(slots: &[Slot], from: usize, to: usize) -> i64 {
    let k = slots.len();
    let mut i = (from + 1) % k;
    let mut total = 0;
    while i != to {
        if let Some(role) = slots[i].role() {
            total += endpoint_sign(role);
        }
        i = (i + 1) % k;
    }
    total
}

pub fn u_polynomial(d: &GaussDiagram, side: Side) -> UPoly {
    let mut u = LaurentPoly::zero();
    for a in 1..=d.arrow_count() {
        let n = n_of_arrow(d, a, side).expect("arrow ids are 1..=c");
        if n != 0 {
            u += LaurentPoly::monomial(BigInt::from(n.signum()), n.abs());
        }
    }
    UPoly(u)
}

/// A polynomial in `s` with no constant term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "LaurentPoly", into = "LaurentPoly")]
pub struct UPoly(LaurentPoly);

impl UPoly {
    pub fn new(p: LaurentPoly) -> Result<Self, String> {
        if p.min_exp().is_some_and(|e| e < 0) {
            return Err(format!("{p} has negative powers of s"));
        }
        if !p.constant_term().is_zero() {
            return Err(format!("{p} has a nonzero constant term"));
        }
        Ok(UPoly(p))
    }

    pub fn as_laurent(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn into_laurent(self) -> LaurentPoly {
        self.0
    }

    /// `u(s) - u(1/s)`.
    pub fn antisymmetrized(&self) -> LaurentPoly {
        &self.0 - &self.0.bar()
    }
}

impl TryFrom<LaurentPoly> for UPoly {
    type Error = String;

    fn try_from(p: LaurentPoly) -> Result<Self, String> {
        UPoly::new(p)
    }
}

impl From<UPoly> for LaurentPoly {
    fn from(u: UPoly) -> Self {
        u.0
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
