//! Flat Reidemeister moves acting on Gauss diagrams.
//!
//! A "segment" is a pair of cyclically consecutive slots `(i, i + 1 mod k)`,
//! named by its first index. Patterns are matched on segments only, so a fake
//! vertex between two endpoints blocks a removal or FR3 move there. Insertion
//! positions run over `0..=k` and index the slot sequence before insertion.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{GaussDiagram, Role, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("pattern not found: {0}")]
    PatternNotFound(String),
    #[error("position {index} out of range for a diagram with {len} slots")]
    OutOfRange { index: usize, len: usize },
}

/// Order of the two endpoints of a new kink along the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chirality {
    HeadFirst,
    TailFirst,
}

/// Shape of an inserted bigon. The two new arrows meet the first strand as
/// `(p, q)`, with `p` having role `first_role` there and `q` the opposite
/// role. On the second strand the order is `(p, q)` when `parallel` and
/// `(q, p)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fr2Variant {
    pub first_role: Role,
    pub parallel: bool,
}

impl Fr2Variant {
    pub const ALL: [Fr2Variant; 4] = [
        Fr2Variant { first_role: Role::Tail, parallel: true },
        Fr2Variant { first_role: Role::Tail, parallel: false },
        Fr2Variant { first_role: Role::Head, parallel: true },
        Fr2Variant { first_role: Role::Head, parallel: false },
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "kebab-case")]
pub enum Move {
    Fr1Insert { at: usize, chirality: Chirality },
    Fr1Remove { segment: usize },
    /// Requires `at_a <= at_b`. The first strand's pair is placed before the
    /// second's when both share a position.
    Fr2Insert { at_a: usize, at_b: usize, variant: Fr2Variant },
    Fr2Remove { a: usize, b: usize },
    /// Swaps the two endpoints inside each of three segments that form a
    /// triangle of arrows.
    Fr3 { segments: [usize; 3] },
}

impl Move {
    pub fn apply(&self, d: &GaussDiagram) -> Result<GaussDiagram, MoveError> {
        match *self {
            Move::Fr1Insert { at, chirality } => fr1_insert(d, at, chirality),
            Move::Fr1Remove { segment } => fr1_remove(d, segment),
            Move::Fr2Insert { at_a, at_b, variant } => fr2_insert(d, at_a, at_b, variant),
            Move::Fr2Remove { a, b } => fr2_remove(d, a, b),
            Move::Fr3 { segments } => fr3(d, segments),
        }
    }

    /// For an insertion, the removal that undoes it on the resulting diagram.
    pub fn undo(&self) -> Option<Move> {
        match *self {
            Move::Fr1Insert { at, .. } => Some(Move::Fr1Remove { segment: at }),
            Move::Fr2Insert { at_a, at_b, .. } => Some(Move::Fr2Remove { a: at_a, b: at_b + 2 }),
            Move::Fr3 { segments } => Some(Move::Fr3 { segments }),
            _ => None,
        }
    }
}

fn check_insert(d: &GaussDiagram, at: usize) -> Result<(), MoveError> {
    if at > d.len() {
        return Err(MoveError::OutOfRange { index: at, len: d.len() });
    }
    Ok(())
}

fn check_segment(d: &GaussDiagram, i: usize) -> Result<(Slot, Slot), MoveError> {
    let k = d.len();
    if i >= k || k < 2 {
        return Err(MoveError::OutOfRange { index: i, len: k });
    }
    Ok((d.slot(i), d.slot((i + 1) % k)))
}

fn remove_indices(d: &GaussDiagram, idx: &[usize]) -> GaussDiagram {
    let slots = d
        .slots()
        .iter()
        .enumerate()
        .filter(|(i, _)| !idx.contains(i))
        .map(|(_, s)| *s)
        .collect();
    GaussDiagram::compacted(slots)
}

fn fr1_insert(d: &GaussDiagram, at: usize, chirality: Chirality) -> Result<GaussDiagram, MoveError> {
    check_insert(d, at)?;
    let e = d.arrow_count() + 1;
    let pair = match chirality {
        Chirality::HeadFirst => [Slot::passage(e, Role::Head), Slot::passage(e, Role::Tail)],
        Chirality::TailFirst => [Slot::passage(e, Role::Tail), Slot::passage(e, Role::Head)],
    };
    let mut slots = d.slots().to_vec();
    slots.splice(at..at, pair);
    Ok(GaussDiagram::from_parts_unchecked(slots, e))
}

fn fr1_remove(d: &GaussDiagram, i: usize) -> Result<GaussDiagram, MoveError> {
    let (x, y) = check_segment(d, i)?;
    match (x.arrow(), y.arrow()) {
        (Some(a), Some(b)) if a == b => Ok(remove_indices(d, &[i, (i + 1) % d.len()])),
        _ => Err(MoveError::PatternNotFound(format!("no kink at segment {i}"))),
    }
}

fn fr2_insert(
    d: &GaussDiagram,
    at_a: usize,
    at_b: usize,
    v: Fr2Variant,
) -> Result<GaussDiagram, MoveError> {
    check_insert(d, at_a)?;
    check_insert(d, at_b)?;
    if at_a > at_b {
        return Err(MoveError::PatternNotFound(format!(
            "first strand position {at_a} is after second strand position {at_b}"
        )));
    }
    let c = d.arrow_count();
    let (p, q) = (c + 1, c + 2);
    let r = v.first_role;
    let block_a = [Slot::passage(p, r), Slot::passage(q, r.opposite())];
    let block_b = if v.parallel {
        [Slot::passage(p, r.opposite()), Slot::passage(q, r)]
    } else {
        [Slot::passage(q, r), Slot::passage(p, r.opposite())]
    };
    let mut slots = d.slots().to_vec();
    slots.splice(at_b..at_b, block_b);
    slots.splice(at_a..at_a, block_a);
    Ok(GaussDiagram::from_parts_unchecked(slots, c + 2))
}

// Checks segments `a` and `b` form a removable bigon.
fn is_fr2_site(d: &GaussDiagram, a: usize, b: usize) -> bool {
    let k = d.len();
    if k < 4 || a >= k || b >= k || a == b || (a + 1) % k == b || (b + 1) % k == a {
        return false;
    }
    let (a0, a1) = (d.slot(a), d.slot((a + 1) % k));
    let (b0, b1) = (d.slot(b), d.slot((b + 1) % k));
    let (Some(e), Some(f)) = (a0.arrow(), a1.arrow()) else {
        return false;
    };
    let (Some(g), Some(h)) = (b0.arrow(), b1.arrow()) else {
        return false;
    };
    e != f && a0.role() != a1.role() && ((g == e && h == f) || (g == f && h == e))
}

fn fr2_remove(d: &GaussDiagram, a: usize, b: usize) -> Result<GaussDiagram, MoveError> {
    check_segment(d, a)?;
    check_segment(d, b)?;
    if !is_fr2_site(d, a, b) {
        return Err(MoveError::PatternNotFound(format!("no bigon at segments {a}, {b}")));
    }
    let k = d.len();
    Ok(remove_indices(d, &[a, (a + 1) % k, b, (b + 1) % k]))
}

// Orientation data of a candidate triangle. Returns None if the segments do
// not form a triangle of three distinct arrows.
fn triangle(d: &GaussDiagram, segs: [usize; 3]) -> Option<bool> {
    let k = d.len();
    if k < 6 || segs.iter().any(|&s| s >= k) {
        return None;
    }
    let mut covered = Vec::with_capacity(6);
    for &s in &segs {
        covered.push(s);
        covered.push((s + 1) % k);
    }
    covered.sort_unstable();
    covered.dedup();
    if covered.len() != 6 {
        return None;
    }
    let pair = |s: usize| -> Option<[(usize, Role); 2]> {
        let x = d.slot(s);
        let y = d.slot((s + 1) % k);
        Some([(x.arrow()?, x.role()?), (y.arrow()?, y.role()?)])
    };
    let segs_data = [pair(segs[0])?, pair(segs[1])?, pair(segs[2])?];
    // The arrow shared by segments x and y, with its role in x, and whether
    // it is the first endpoint in x and in y.
    let shared = |x: usize, y: usize| -> Option<(Role, bool, bool)> {
        let mut found = None;
        for (ix, &(ax, rx)) in segs_data[x].iter().enumerate() {
            for (iy, &(ay, _)) in segs_data[y].iter().enumerate() {
                if ax == ay {
                    if found.is_some() {
                        return None;
                    }
                    found = Some((rx, ix == 0, iy == 0));
                }
            }
        }
        found
    };
    let (r_ab, ab_first_in_a, ab_first_in_b) = shared(0, 1)?;
    let (r_bc, bc_first_in_b, bc_first_in_c) = shared(1, 2)?;
    let (r_ca, ca_first_in_c, ca_first_in_a) = shared(2, 0)?;
    if segs_data.iter().any(|p| p[0].0 == p[1].0) {
        return None;
    }
    debug_assert_eq!(ab_first_in_a, !ca_first_in_a);
    debug_assert_eq!(bc_first_in_b, !ab_first_in_b);
    debug_assert_eq!(ca_first_in_c, !bc_first_in_c);
    let sign = |b: bool| if b { 1i8 } else { -1 };
    let sigma = |r: Role| sign(r == Role::Tail);
    let eps_a = sign(ca_first_in_a);
    let eps_b = sign(ab_first_in_b);
    let eps_c = sign(bc_first_in_c);
    let x = sigma(r_ab) * eps_a * eps_b;
    let y = sigma(r_bc) * eps_b * eps_c;
    let z = sigma(r_ca) * eps_c * eps_a;
    Some(x == y && y == z)
}

#[cfg(test)]
/// Whether the three segments carry a triangle of arrows, regardless of
/// whether it can be realized by a move.
pub(crate) fn is_triangle(d: &GaussDiagram, segs: [usize; 3]) -> bool {
    triangle(d, segs).is_some()
}

fn fr3(d: &GaussDiagram, segs: [usize; 3]) -> Result<GaussDiagram, MoveError> {
    match triangle(d, segs) {
        Some(true) => Ok(swap_segments(d, segs)),
        Some(false) => Err(MoveError::PatternNotFound(format!(
            "segments {segs:?} form a triangle with no realizing move"
        ))),
        None => Err(MoveError::PatternNotFound(format!("segments {segs:?} do not form a triangle"))),
    }
}

pub(crate) fn swap_segments(d: &GaussDiagram, segs: [usize; 3]) -> GaussDiagram {
    let k = d.len();
    let mut slots = d.slots().to_vec();
    for s in segs {
        slots.swap(s, (s + 1) % k);
    }
    GaussDiagram::from_parts_unchecked(slots, d.arrow_count())
}

impl GaussDiagram {
    pub fn fr1_sites(&self) -> Vec<Move> {
        let k = self.len();
        (0..k)
            .filter(|&i| {
                k >= 2
                    && self.slot(i).arrow().is_some()
                    && self.slot(i).arrow() == self.slot((i + 1) % k).arrow()
            })
            .map(|segment| Move::Fr1Remove { segment })
            .collect()
    }

    pub fn fr2_sites(&self) -> Vec<Move> {
        let k = self.len();
        let mut out = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                if is_fr2_site(self, a, b) {
                    out.push(Move::Fr2Remove { a, b });
                }
            }
        }
        out
    }

    pub fn fr3_sites(&self) -> Vec<Move> {
        let k = self.len();
        let mut out = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    if triangle(self, [a, b, c]) == Some(true) {
                        out.push(Move::Fr3 { segments: [a, b, c] });
                    }
                }
            }
        }
        out
    }

    /// Every removal and FR3 move applicable to this diagram.
    pub fn applicable_moves(&self) -> Vec<Move> {
        let mut out = self.fr1_sites();
        out.extend(self.fr2_sites());
        out.extend(self.fr3_sites());
        out
    }

    /// A random applicable move. Kinds are drawn uniformly among those
    /// available, so removals balance insertions on average.
    pub fn random_move<R: Rng + ?Sized>(&self, rng: &mut R) -> Move {
        let k = self.len();
        let fr1 = self.fr1_sites();
        let fr2 = self.fr2_sites();
        let fr3 = self.fr3_sites();
        let mut kinds = vec![0u8, 1];
        if !fr1.is_empty() {
            kinds.push(2);
        }
        if !fr2.is_empty() {
            kinds.push(3);
        }
        if !fr3.is_empty() {
            kinds.push(4);
        }
        match kinds[rng.gen_range(0..kinds.len())] {
            0 => Move::Fr1Insert {
                at: rng.gen_range(0..=k),
                chirality: if rng.gen() { Chirality::HeadFirst } else { Chirality::TailFirst },
            },
            1 => {
                let x = rng.gen_range(0..=k);
                let y = rng.gen_range(0..=k);
                Move::Fr2Insert {
                    at_a: x.min(y),
                    at_b: x.max(y),
                    variant: Fr2Variant::ALL[rng.gen_range(0..4)],
                }
            }
            2 => fr1[rng.gen_range(0..fr1.len())],
            3 => fr2[rng.gen_range(0..fr2.len())],
            _ => fr3[rng.gen_range(0..fr3.len())],
        }
    }

    /// Applies `len` random moves; returns the final diagram and the moves.
    pub fn random_move_sequence<R: Rng + ?Sized>(
        &self,
        len: usize,
        rng: &mut R,
    ) -> (GaussDiagram, Vec<Move>) {
        let mut d = self.clone();
        let mut moves = Vec::with_capacity(len);
        for _ in 0..len {
            let m = d.random_move(rng);
            d = m.apply(&d).expect("random moves are applicable");
            moves.push(m);
        }
        (d, moves)
    }
}

/// Test helper: a diagram built from `base` by inserting a triangle of three
/// new arrows at the three insertion points, with the given orientation bits.
/// The result may or may not be an FR3 site depending on the bits.
#[cfg(test)]
pub(crate) fn with_triangle(
    base: &GaussDiagram,
    mut at: [usize; 3],
    sigma: [bool; 3],
    eps: [bool; 3],
) -> (GaussDiagram, [usize; 3]) {
    at.sort_unstable();
    let c = base.arrow_count();
    let (ab, bc, ca) = (c + 1, c + 2, c + 3);
    let role = |forward: bool, from_side: bool| {
        if forward == from_side {
            Role::Tail
        } else {
            Role::Head
        }
    };
    // Segment A holds ca and ab; B holds ab and bc; C holds bc and ca.
    let seg = |first: (usize, Role), second: (usize, Role), eps: bool| {
        let (x, y) = if eps { (first, second) } else { (second, first) };
        [Slot::passage(x.0, x.1), Slot::passage(y.0, y.1)]
    };
    let seg_a = seg((ca, role(sigma[2], false)), (ab, role(sigma[0], true)), eps[0]);
    let seg_b = seg((ab, role(sigma[0], false)), (bc, role(sigma[1], true)), eps[1]);
    let seg_c = seg((bc, role(sigma[1], false)), (ca, role(sigma[2], true)), eps[2]);
    let mut slots = base.slots().to_vec();
    slots.splice(at[2]..at[2], seg_c);
    slots.splice(at[1]..at[1], seg_b);
    slots.splice(at[0]..at[0], seg_a);
    let starts = [at[0], at[1] + 2, at[2] + 4];
    (GaussDiagram::from_parts_unchecked(slots, c + 3), starts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{random_diagram, u_polynomial, Side};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gd(s: &str) -> GaussDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn fr1_examples() {
        assert_eq!(Move::Fr1Remove { segment: 0 }.apply(&gd("-1 1")).unwrap(), GaussDiagram::trivial());
        assert_eq!(Move::Fr1Remove { segment: 1 }.apply(&gd("-1 1")).unwrap(), GaussDiagram::trivial());
        assert_eq!(
            Move::Fr1Remove { segment: 1 }.apply(&gd("1 -2 2 -1")).unwrap(),
            gd("1 -1")
        );
        assert_eq!(Move::Fr1Remove { segment: 3 }.apply(&gd("-1 2 -2 1")).unwrap(), gd("1 -1"));
        assert!(Move::Fr1Remove { segment: 0 }.apply(&gd("1 2 -1 -2")).is_err());
        assert!(Move::Fr1Remove { segment: 0 }.apply(&gd("1 * -1")).is_err());
        let ins = Move::Fr1Insert { at: 1, chirality: Chirality::TailFirst };
        assert_eq!(ins.apply(&gd("-1 1")).unwrap(), gd("-1 2 -2 1"));
        assert!(Move::Fr1Insert { at: 3, chirality: Chirality::TailFirst }.apply(&gd("-1 1")).is_err());
    }

    #[test]
    fn fr2_examples() {
        let d = gd("1 -2 -1 2");
        assert_eq!(d.fr2_sites(), vec![Move::Fr2Remove { a: 0, b: 2 }]);
        assert_eq!(Move::Fr2Remove { a: 0, b: 2 }.apply(&d).unwrap(), GaussDiagram::trivial());
        let ins = Move::Fr2Insert {
            at_a: 0,
            at_b: 0,
            variant: Fr2Variant { first_role: Role::Tail, parallel: true },
        };
        assert_eq!(ins.apply(&GaussDiagram::trivial()).unwrap(), d);
        let anti = Move::Fr2Insert {
            at_a: 0,
            at_b: 0,
            variant: Fr2Variant { first_role: Role::Tail, parallel: false },
        };
        assert_eq!(anti.apply(&GaussDiagram::trivial()).unwrap(), gd("1 -2 2 -1"));
        // Two tails on one strand do not cancel.
        assert!(Move::Fr2Remove { a: 0, b: 2 }.apply(&gd("1 2 -1 -2")).is_err());
    }

    #[test]
    fn triangle_patterns() {
        let base = GaussDiagram::trivial();
        let mut valid = 0;
        for bits in 0u32..64 {
            let b = |i: u32| bits & (1 << i) != 0;
            let (d, segs) = with_triangle(&base, [0, 0, 0], [b(0), b(1), b(2)], [b(3), b(4), b(5)]);
            assert!(is_triangle(&d, segs), "{d}");
            if triangle(&d, segs) == Some(true) {
                valid += 1;
                let moved = Move::Fr3 { segments: segs }.apply(&d).unwrap();
                assert_eq!(triangle(&moved, segs), Some(true));
                assert_eq!(Move::Fr3 { segments: segs }.apply(&moved).unwrap(), d);
            }
        }
        assert_eq!(valid, 16);
    }

    #[test]
    fn triangle_validity_ignores_labelling() {
        // Rotating the segment labels or reading from another base point
        // must not change whether a triangle is movable.
        for bits in 0u32..64 {
            let b = |i: u32| bits & (1 << i) != 0;
            let base = gd("1 -1");
            let (d, [x, y, z]) = with_triangle(&base, [0, 1, 2], [b(0), b(1), b(2)], [b(3), b(4), b(5)]);
            let v = triangle(&d, [x, y, z]);
            assert_eq!(triangle(&d, [y, z, x]), v);
            assert_eq!(triangle(&d, [x, z, y]), v);
            let r = d.rotated(3);
            let k = d.len();
            let shift = |s: usize| (s + k - 3) % k;
            assert_eq!(triangle(&r, [shift(x), shift(y), shift(z)]), v);
        }
    }

    #[test]
    fn random_sequences_stay_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..30 {
            let d = random_diagram(seed as usize % 5, seed);
            let (end, moves) = d.random_move_sequence(6, &mut rng);
            assert_eq!(moves.len(), 6);
            let reparsed: GaussDiagram = end.to_string().parse().unwrap();
            assert_eq!(reparsed, end);
        }
    }

    fn insert_move() -> impl Strategy<Value = (usize, u64, usize, usize, usize, bool)> {
        (0usize..6, any::<u64>(), 0usize..20, 0usize..20, 0usize..4, any::<bool>())
    }

    proptest! {
        #[test]
        fn inserts_are_undone((arrows, seed, x, y, v, fr1) in insert_move()) {
            let d = random_diagram(arrows, seed);
            let k = d.len();
            let (x, y) = (x % (k + 1), y % (k + 1));
            let m = if fr1 {
                Move::Fr1Insert { at: x, chirality: if v % 2 == 0 { Chirality::HeadFirst } else { Chirality::TailFirst } }
            } else {
                Move::Fr2Insert { at_a: x.min(y), at_b: x.max(y), variant: Fr2Variant::ALL[v] }
            };
            let up = m.apply(&d).unwrap();
            prop_assert_eq!(m.undo().unwrap().apply(&up).unwrap(), d);
        }

        #[test]
        fn upoly_invariant_under_moves(arrows in 0usize..6, seed in any::<u64>()) {
            let d = random_diagram(arrows, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = d.random_move(&mut rng);
            let e = m.apply(&d).unwrap();
            for side in [Side::TailToHead, Side::HeadToTail] {
                prop_assert_eq!(u_polynomial(&d, side), u_polynomial(&e, side), "{:?}", m);
            }
        }

        #[test]
        fn upoly_invariant_under_triangle_moves(arrows in 0usize..4, seed in any::<u64>(), at in proptest::array::uniform3(0usize..9), bits in 0u32..64) {
            let base = random_diagram(arrows, seed);
            let k = base.len();
            let at = at.map(|a| a % (k + 1));
            let b = |i: u32| bits & (1 << i) != 0;
            let (d, segs) = with_triangle(&base, at, [b(0), b(1), b(2)], [b(3), b(4), b(5)]);
            if let Ok(e) = (Move::Fr3 { segments: segs }).apply(&d) {
                prop_assert_eq!(u_polynomial(&d, Side::default()), u_polynomial(&e, Side::default()));
            }
        }
    }
}
