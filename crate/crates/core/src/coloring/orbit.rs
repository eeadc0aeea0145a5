//! Bounded search for units relating two representatives of the invariant.

use serde::Serialize;

use crate::laurent::LaurentPoly;
use crate::sring::SElem;

/// Units with `left * f * right == g` and `pi0(left * right) == 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitWitness {
    pub left: SElem,
    pub right: SElem,
}

/// Looks for `U`, `V` with `U f V = g` and `pi0(U V) = 1`.
///
/// `pi0(U) = ±s^a` with `|a| <= window`. Higher coefficients are solved one
/// degree at a time: at each degree the mismatch must be divisible by the
/// leading coefficient of `f`, and the quotient is placed entirely in `U` or
/// entirely in `V`. A returned witness is always verified exactly; `None`
/// only means that no witness of this shape exists.
pub fn orbit_search(f: &SElem, g: &SElem, window: i64) -> Option<OrbitWitness> {
    let order = f.order();
    if g.order() != order {
        return None;
    }
    let Some(p) = f.valuation() else {
        return g.is_zero().then(|| OrbitWitness {
            left: SElem::one(order),
            right: SElem::one(order),
        });
    };
    if g.valuation() != Some(p) || f.coeff(p) != g.coeff(p) {
        return None;
    }
    for a in -window..=window {
        for sign in [1, -1] {
            let u0 = LaurentPoly::monomial(sign, a);
            let v0 = LaurentPoly::monomial(sign, -a);
            let left = SElem::from_laurent(u0.clone(), order);
            let right = SElem::from_laurent(v0.clone(), order);
            let search = Search { f, g, p, u0, v0 };
            if let Some(w) = search.extend(1, left, right) {
                return Some(w);
            }
        }
    }
    None
}

struct Search<'a> {
    f: &'a SElem,
    g: &'a SElem,
    p: usize,
    u0: LaurentPoly,
    v0: LaurentPoly,
}

impl Search<'_> {
    fn extend(&self, m: usize, left: SElem, right: SElem) -> Option<OrbitWitness> {
        let order = self.f.order();
        let product = &(&left * self.f) * &right;
        if self.p + m > order {
            return (product == *self.g).then_some(OrbitWitness { left, right });
        }
        let degree = self.p + m;
        let mismatch = &self.g.coeff(degree) - &product.coeff(degree);
        let w = mismatch.div_exact(&self.f.coeff(self.p))?;
        if w.is_zero() {
            return self.extend(m + 1, left, right);
        }
        let du = SElem::term(&w * &self.u0, m, order).expect("m <= order");
        if let Some(found) = self.extend(m + 1, &left + &du, right.clone()) {
            return Some(found);
        }
        let dv = SElem::term(&w * &self.v0, m, order).expect("m <= order");
        self.extend(m + 1, left, &right + &dv)
    }
}
