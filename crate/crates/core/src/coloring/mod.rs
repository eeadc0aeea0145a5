//! Coloring matrices of Gauss diagrams and the `S_n`-coloring invariant.
//!
//! Cutting the circle at every slot gives `k` arcs; arc `r` begins at slot
//! `start + r` (mod `k`) and ends at the next slot. The equation for the arc
//! leaving slot `p` is
//!
//! ```text
//! head of an arrow:  x_r = s x_{r-1} + t x_j
//! tail of an arrow:  x_r = s^-1 (1 - t^2) x_{r-1} - s^-1 t s x_j
//! fake vertex:       x_r = x_{r-1}
//! ```
//!
//! where `x_{r-1}` is the arc arriving at `p` and `x_j` the arc arriving at
//! the other endpoint of the same arrow. The invariant is the `(k, k)`
//! quasideterminant `F` of the resulting matrix, well defined up to
//! `F -> U F V` with units `U`, `V` such that `pi0(U V) = 1`.

mod orbit;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gauss::{random_diagram_with, u_polynomial, GaussDiagram, Role, Side, Slot, UPoly};
use crate::laurent::LaurentPoly;
use crate::ncmatrix::{MatrixError, NcMatrix};
use crate::sring::SElem;

pub use orbit::{orbit_search, OrbitWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("pivot {step} is not a unit")]
    PivotFailure { step: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone)]
pub struct ColoringSystem {
    diagram: GaussDiagram,
    order: usize,
    start: usize,
    matrix: NcMatrix,
}

impl ColoringSystem {
    /// The diagram the matrix was built from, including the fake vertex
    /// added to an arrowless diagram with no slots.
    pub fn diagram(&self) -> &GaussDiagram {
        &self.diagram
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Slot at which arc 0 begins.
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn matrix(&self) -> &NcMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }
}

// The three coefficients of a row: on x_r, x_{r-1}, x_j.
struct RowCoefficients {
    head_prev: SElem,
    head_other: SElem,
    tail_prev: SElem,
    tail_other: SElem,
}

impl RowCoefficients {
    fn new(order: usize) -> Self {
        let s = SElem::s(order);
        let s_inv = SElem::s_inv(order);
        let t = SElem::t(order);
        let one = SElem::one(order);
        Self {
            head_prev: -&s,
            head_other: -&t,
            tail_prev: -&(&s_inv * &(&one - &(&t * &t))),
            tail_other: &(&s_inv * &t) * &s,
        }
    }
}

pub fn build_matrix(d: &GaussDiagram, order: usize, start: usize) -> ColoringSystem {
    let diagram = if d.is_empty() { d.with_fake_at(0) } else { d.clone() };
    let k = diagram.len();
    let start = start % k;
    let coeff = RowCoefficients::new(order);
    let partners = diagram.partners();
    let row_of = |slot: usize| (slot + k - start) % k;
    let mut a = NcMatrix::zeros(k, k, order);
    let mut add = |i: usize, j: usize, x: &SElem| {
        let v = a.get(i, j) + x;
        a.set(i, j, v).expect("indices in range");
    };
    for r in 0..k {
        let slot = (start + r) % k;
        let prev = (r + k - 1) % k;
        add(r, r, &SElem::one(order));
        match diagram.slot(slot) {
            Slot::Fake => add(r, prev, &-SElem::one(order)),
            Slot::Passage { role, .. } => {
                let partner = partners[slot].expect("passages have partners");
                let j = (row_of(partner) + k - 1) % k;
                let (p, o) = match role {
                    Role::Head => (&coeff.head_prev, &coeff.head_other),
                    Role::Tail => (&coeff.tail_prev, &coeff.tail_other),
                };
                add(r, prev, p);
                add(r, j, o);
            }
        }
    }
    ColoringSystem {
        diagram,
        order,
        start,
        matrix: a,
    }
}

/// Runs the first `pivots` elimination steps: for each `p` in order, clears
/// column `p` below the diagonal by adding left multiples of row `p` to later
/// rows. No row is rescaled, and the last row is never added to another.
pub fn eliminate(a: &NcMatrix, pivots: usize) -> Result<NcMatrix, ColoringError> {
    let k = a.rows();
    let mut a = a.clone();
    for p in 0..pivots.min(k.saturating_sub(1)) {
        let inv = a
            .get(p, p)
            .inverse()
            .map_err(|_| ColoringError::PivotFailure { step: p })?;
        for r in p + 1..k {
            let x = a.get(r, p);
            if x.is_zero() {
                continue;
            }
            let mu = -&(x * &inv);
            a.add_row_multiple(r, p, &mu)?;
        }
    }
    Ok(a)
}

/// `F = |A|_{k,k}` by elimination with pivots `0..k-1`.
pub fn quasidet_kk(sys: &ColoringSystem) -> Result<SElem, ColoringError> {
    let k = sys.size();
    let reduced = eliminate(&sys.matrix, k - 1)?;
    Ok(reduced.get(k - 1, k - 1).clone())
}

/// `f_1`, and then `f_i` for as long as every earlier coefficient vanishes.
pub fn defined_polys(f: &SElem) -> Vec<LaurentPoly> {
    let mut out = Vec::new();
    for i in 1..=f.order() {
        let fi = f.coeff(i);
        let stop = !fi.is_zero();
        out.push(fi);
        if stop {
            break;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantResult {
    pub order: usize,
    pub representative: SElem,
    pub defined_polys: Vec<LaurentPoly>,
    pub upoly: UPoly,
}

pub fn invariant(d: &GaussDiagram, order: usize) -> InvariantResult {
    invariant_with_side(d, order, Side::default())
}

/// As [`invariant`], with the u-polynomial computed under `side`.
pub fn invariant_with_side(d: &GaussDiagram, order: usize, side: Side) -> InvariantResult {
    let sys = build_matrix(d, order, 0);
    let f = quasidet_kk(&sys).expect("coloring matrices have unit pivots");
    debug_assert!(f.pi0().is_zero());
    InvariantResult {
        order,
        defined_polys: defined_polys(&f),
        representative: f,
        upoly: u_polynomial(d, side),
    }
}

fn polys_at_start(d: &GaussDiagram, order: usize, start: usize) -> Vec<LaurentPoly> {
    let f = quasidet_kk(&build_matrix(d, order, start)).expect("coloring matrices have unit pivots");
    defined_polys(&f)
}

/// `f_1 = u(s) - u(1/s)`, with `f_1` from the matrix at order 1.
pub fn f1_equals_u_identity(d: &GaussDiagram, side: Side) -> bool {
    let f1 = invariant(d, 1).defined_polys.remove(0);
    f1 == u_polynomial(d, side).antisymmetrized()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConsistencyConfig {
    pub order: usize,
    pub fake_trials: usize,
    pub max_fakes: usize,
    pub move_sequences: usize,
    pub max_moves: usize,
    pub seed: u64,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        Self {
            order: 2,
            fake_trials: 20,
            max_fakes: 4,
            move_sequences: 30,
            max_moves: 5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub check: &'static str,
    pub diagram: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub code: String,
    pub reference: Vec<LaurentPoly>,
    pub start_arcs: usize,
    pub fake_trials: usize,
    pub move_sequences: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn render(polys: &[LaurentPoly]) -> String {
    let parts: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Recomputes the defined coloring polynomials over every start arc, random
/// fake-vertex insertions and random move sequences, recording each
/// disagreement with the default computation. Move sequences also check the
/// u-polynomial.
pub fn check_consistency(d: &GaussDiagram, cfg: &ConsistencyConfig) -> ConsistencyReport {
    let reference = polys_at_start(d, cfg.order, 0);
    let mut mismatches = Vec::new();
    let mut compare = |check: &'static str, diagram: &GaussDiagram, got: Vec<LaurentPoly>, what: String| {
        if got != reference {
            mismatches.push(Mismatch {
                check,
                diagram: diagram.to_string(),
                detail: format!("{what}: expected {}, got {}", render(&reference), render(&got)),
            });
        }
    };

    let k = d.len().max(1);
    for start in 1..k {
        compare("start-arc", d, polys_at_start(d, cfg.order, start), format!("start {start}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for trial in 0..cfg.fake_trials {
        let mut e = d.clone();
        for _ in 0..rng.gen_range(1..=cfg.max_fakes.max(1)) {
            e = e.with_fake_at(rng.gen_range(0..=e.len()));
        }
        let start = rng.gen_range(0..e.len());
        compare("fake", &e, polys_at_start(&e, cfg.order, start), format!("trial {trial}, start {start}"));
    }

    let u = u_polynomial(d, Side::default());
    let mut upoly_mismatches = Vec::new();
    for trial in 0..cfg.move_sequences {
        let len = rng.gen_range(1..=cfg.max_moves.max(1));
        let (e, moves) = d.random_move_sequence(len, &mut rng);
        compare("moves", &e, polys_at_start(&e, cfg.order, 0), format!("sequence {trial} {moves:?}"));
        let ue = u_polynomial(&e, Side::default());
        if ue != u {
            upoly_mismatches.push(Mismatch {
                check: "upoly",
                diagram: e.to_string(),
                detail: format!("sequence {trial} {moves:?}: expected {u}, got {ue}"),
            });
        }
    }
    mismatches.extend(upoly_mismatches);

    ConsistencyReport {
        code: d.to_string(),
        reference,
        start_arcs: k,
        fake_trials: cfg.fake_trials,
        move_sequences: cfg.move_sequences,
        mismatches,
    }
}

/// Consistency checks over `count` random diagrams with at most
/// `max_arrows` arrows.
pub fn fuzz_random(count: usize, max_arrows: usize, cfg: &ConsistencyConfig) -> Vec<ConsistencyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..count)
        .map(|i| {
            let d = random_diagram_with(rng.gen_range(0..=max_arrows), &mut rng);
            let cfg = ConsistencyConfig {
                seed: cfg.seed.wrapping_add(i as u64 + 1),
                ..*cfg
            };
            check_consistency(&d, &cfg)
        })
        .collect()
}
