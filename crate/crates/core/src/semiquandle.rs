//! The semiquandle structure on `S_n`:
//!
//! ```text
//! x ◁o y = s x + t y
//! x ◁u y = s^-1 (1 - t^2) x - s^-1 t s y
//! ```
//!
//! together with a randomized exact checker for the semiquandle axioms that
//! works against any [`Semiquandle`] implementation.

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::laurent::LaurentPoly;
use crate::sring::{RingError, SElem, SRing};

/// A set with the two semiquandle operations and their right inverses.
pub trait Semiquandle {
    type Elem: Clone + PartialEq + fmt::Display;

    fn op_o(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn op_u(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// The unique `v` with `v ◁o y = x`.
    fn inv_o(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// The unique `w` with `w ◁u y = x`.
    fn inv_u(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
}

/// What the axiom checker needs beyond the operations themselves.
pub trait AxiomSampler: Semiquandle {
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Some `x` with `y ◁o x = x`, if the instance can construct one.
    fn fixed_point_for(&self, y: &Self::Elem) -> Option<Self::Elem>;
}

/// `S_n` with its semiquandle operations. The constant coefficients are
/// computed once.
#[derive(Debug, Clone)]
pub struct SnSemiquandle {
    ring: SRing,
    s: SElem,
    t: SElem,
    s_inv: SElem,
    // s^-1 (1 - t^2)
    u_left: SElem,
    // s^-1 t s
    u_right: SElem,
    // (1 - t^2)^-1 s and (1 - t^2)^-1 t s
    inv_u_left: SElem,
    inv_u_right: SElem,
    // (1 - t)^-1 s
    fixed: SElem,
}

impl SnSemiquandle {
    pub fn new(order: usize) -> Self {
        let ring = SRing::new(order);
        let one = ring.one();
        let s = ring.s();
        let t = ring.t();
        let s_inv = ring.s_inv();
        let one_minus_t2 = &one - &(&t * &t);
        let inv_1mt2 = one_minus_t2.inverse().expect("1 - t^2 is a unit");
        let inv_1mt = (&one - &t).inverse().expect("1 - t is a unit");
        Self {
            u_left: &s_inv * &one_minus_t2,
            u_right: &(&s_inv * &t) * &s,
            inv_u_left: &inv_1mt2 * &s,
            inv_u_right: &(&inv_1mt2 * &t) * &s,
            fixed: &inv_1mt * &s,
            ring,
            s,
            t,
            s_inv,
        }
    }

    pub fn order(&self) -> usize {
        self.ring.order()
    }

    pub fn ring(&self) -> &SRing {
        &self.ring
    }
}

impl Semiquandle for SnSemiquandle {
    type Elem = SElem;

    fn op_o(&self, x: &SElem, y: &SElem) -> SElem {
        &(&self.s * x) + &(&self.t * y)
    }

    fn op_u(&self, x: &SElem, y: &SElem) -> SElem {
        &(&self.u_left * x) - &(&self.u_right * y)
    }

    fn inv_o(&self, x: &SElem, y: &SElem) -> SElem {
        &(&self.s_inv * x) - &(&(&self.s_inv * &self.t) * y)
    }

    fn inv_u(&self, x: &SElem, y: &SElem) -> SElem {
        &(&self.inv_u_left * x) + &(&self.inv_u_right * y)
    }
}

impl AxiomSampler for SnSemiquandle {
    fn random_element(&self, rng: &mut dyn RngCore) -> SElem {
        random_selem(rng, self.order())
    }

    fn fixed_point_for(&self, y: &SElem) -> Option<SElem> {
        // y ◁o x = x  <=>  (1 - t) x = s y
        Some(&self.fixed * y)
    }
}

/// A random element with small sparse Laurent coefficients (exponents in
/// `[-3, 3]`, coefficients in `[-4, 4]`).
pub fn random_selem(rng: &mut dyn RngCore, order: usize) -> SElem {
    use rand::Rng;
    let coeffs = (0..=order)
        .map(|_| {
            let terms = rng.gen_range(0..4);
            LaurentPoly::from_terms(
                (0..terms).map(|_| (rng.gen_range(-3i64..=3), rng.gen_range(-4i64..=4))),
            )
        })
        .collect();
    SElem::from_coeffs(coeffs)
}

fn same_order(x: &SElem, y: &SElem) -> Result<SnSemiquandle, RingError> {
    if x.order() != y.order() {
        return Err(RingError::OrderMismatch(x.order(), y.order()));
    }
    Ok(SnSemiquandle::new(x.order()))
}

/// `s x + t y`
pub fn op_o(x: &SElem, y: &SElem) -> Result<SElem, RingError> {
    Ok(same_order(x, y)?.op_o(x, y))
}

/// `s^-1 (1 - t^2) x - s^-1 t s y`
pub fn op_u(x: &SElem, y: &SElem) -> Result<SElem, RingError> {
    Ok(same_order(x, y)?.op_u(x, y))
}

/// `s^-1 x - s^-1 t y`, the unique `v` with `v ◁o y = x`.
pub fn inv_o(x: &SElem, y: &SElem) -> Result<SElem, RingError> {
    Ok(same_order(x, y)?.inv_o(x, y))
}

/// `(1 - t^2)^-1 s x + (1 - t^2)^-1 t s y`, the unique `w` with `w ◁u y = x`.
pub fn inv_u(x: &SElem, y: &SElem) -> Result<SElem, RingError> {
    Ok(same_order(x, y)?.inv_u(x, y))
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomOutcome {
    pub axiom: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub trials: usize,
    pub seed: u64,
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(AxiomOutcome::passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomOutcome> {
        self.outcomes.iter().find(|o| !o.passed())
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let status = if o.passed() { "ok  " } else { "FAIL" };
            writeln!(f, "{status} {:<28} {} checked", o.axiom, o.checked)?;
            if let Some(c) = &o.counterexample {
                writeln!(f, "     counterexample: {c}")?;
            }
        }
        Ok(())
    }
}

const AXIOMS: [&str; 10] = [
    "(0) o-division",
    "(0) u-division",
    "(1) fixed-point witness",
    "(1) biconditional",
    "(2) (x◁u y)◁o(y◁o x) = x",
    "(2) (x◁o y)◁u(y◁u x) = x",
    "(3) first",
    "(3) second",
    "(3) third",
    "(1) reverse witness",
];

/// Evaluates every semiquandle axiom on `trials` random triples drawn from a
/// `ChaCha8` stream seeded with `seed`. Equality is exact.
pub fn check_axioms<Q: AxiomSampler>(q: &Q, trials: usize, seed: u64) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes: Vec<AxiomOutcome> = AXIOMS
        .iter()
        .map(|&axiom| AxiomOutcome {
            axiom,
            checked: 0,
            failures: 0,
            counterexample: None,
        })
        .collect();

    let mut record = |idx: usize, ok: bool, witness: &dyn Fn() -> String| {
        let o = &mut outcomes[idx];
        o.checked += 1;
        if !ok {
            o.failures += 1;
            if o.counterexample.is_none() {
                o.counterexample = Some(witness());
            }
        }
    };

    for _ in 0..trials {
        let x = q.random_element(&mut rng);
        let y = q.random_element(&mut rng);
        let z = q.random_element(&mut rng);
        let show = || format!("x = {x}; y = {y}; z = {z}");

        // (0): v ↦ v ◁ y is a bijection, with the stated inverse.
        let ok = q.op_o(&q.inv_o(&x, &y), &y) == x && q.inv_o(&q.op_o(&z, &y), &y) == z;
        record(0, ok, &show);
        let ok = q.op_u(&q.inv_u(&x, &y), &y) == x && q.inv_u(&q.op_u(&z, &y), &y) == z;
        record(1, ok, &show);

        // (1): x ◁u y = y  <=>  y ◁o x = x
        if let Some(w) = q.fixed_point_for(&y) {
            let ok = q.op_o(&y, &w) == w && q.op_u(&w, &y) == y;
            record(2, ok, &|| format!("y = {y}; witness x = {w}"));
        }
        let lhs = q.op_u(&x, &y) == y;
        let rhs = q.op_o(&y, &x) == x;
        record(3, lhs == rhs, &show);
        // Reverse direction: start from a pair satisfying the left side.
        let w = q.inv_u(&y, &y);
        let ok = q.op_u(&w, &y) == y && q.op_o(&y, &w) == w;
        record(9, ok, &|| format!("y = {y}; x = {w}"));

        // (2)
        let ok = q.op_o(&q.op_u(&x, &y), &q.op_o(&y, &x)) == x;
        record(4, ok, &show);
        let ok = q.op_u(&q.op_o(&x, &y), &q.op_u(&y, &x)) == x;
        record(5, ok, &show);

        // (3)
        let z_u_y = q.op_u(&z, &y);
        let x_o_y = q.op_o(&x, &y);
        let y_o_z = q.op_o(&y, &z);
        let x_o_zuy = q.op_o(&x, &z_u_y);
        let ok = q.op_o(&x_o_y, &z) == q.op_o(&x_o_zuy, &y_o_z);
        record(6, ok, &show);
        let z_u_xoy = q.op_u(&z, &x_o_y);
        let ok = q.op_o(&q.op_u(&y, &x), &z_u_xoy) == q.op_u(&y_o_z, &x_o_zuy);
        record(7, ok, &show);
        let ok = q.op_u(&z_u_xoy, &q.op_u(&y, &x)) == q.op_u(&z_u_y, &x);
        record(8, ok, &show);
    }

    AxiomReport {
        trials,
        seed,
        outcomes,
    }
}
