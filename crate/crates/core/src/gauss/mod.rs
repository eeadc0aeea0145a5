//! Gauss diagrams of flat virtual knots.
//!
//! A diagram is the cyclic sequence of slots met while travelling once around
//! the oriented circle. A slot is either one endpoint of an arrow (its tail or
//! its head) or a fake vertex, which only cuts the circle and carries no
//! crossing.
//!
//! Text format: whitespace-separated tokens, `+k`/`k` for the tail of arrow
//! `k`, `-k` for its head, `*` for a fake vertex. Arrow ids must be exactly
//! `1..=c`, each with one tail and one head. `"-1 -2 -3 1 3 2"` is a
//! three-arrow diagram whose first three slots are heads.

mod moves;
mod upoly;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use moves::{Chirality, Fr2Variant, Move, MoveError};
#[cfg(test)]
pub(crate) use moves::with_triangle;
pub use upoly::{n_of_arrow, u_polynomial, Side, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("bad token '{token}' at position {position}")]
    Parse { token: String, position: usize },
    #[error("{0}")]
    Structure(String),
    #[error("only one-component diagrams (knots) are supported")]
    MultiComponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Tail,
    Head,
}

impl Role {
    pub fn opposite(self) -> Role {
        match self {
            Role::Tail => Role::Head,
            Role::Head => Role::Tail,
        }
    }
}

/// Tails count `+1`, heads `-1`.
pub fn endpoint_sign(role: Role) -> i64 {
    match role {
        Role::Tail => 1,
        Role::Head => -1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Passage { arrow: usize, role: Role },
    Fake,
}

impl Slot {
    pub fn passage(arrow: usize, role: Role) -> Self {
        Slot::Passage { arrow, role }
    }

    pub fn arrow(&self) -> Option<usize> {
        match self {
            Slot::Passage { arrow, .. } => Some(*arrow),
            Slot::Fake => None,
        }
    }

    pub fn role(&self) -> Option<Role> {
        match self {
            Slot::Passage { role, .. } => Some(*role),
            Slot::Fake => None,
        }
    }

    pub fn is_fake(&self) -> bool {
        matches!(self, Slot::Fake)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Passage { arrow, role: Role::Tail } => write!(f, "{arrow}"),
            Slot::Passage { arrow, role: Role::Head } => write!(f, "-{arrow}"),
            Slot::Fake => write!(f, "*"),
        }
    }
}

/// An arrow's endpoints as slot indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr", into = "DiagramRepr")]
pub struct GaussDiagram {
    slots: Vec<Slot>,
    arrow_count: usize,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    code: String,
    #[serde(default, skip_deserializing)]
    arrow_count: usize,
    #[serde(default, skip_deserializing)]
    fake_count: usize,
    #[serde(default, skip_deserializing)]
    arrows: Vec<Arrow>,
}

impl TryFrom<DiagramRepr> for GaussDiagram {
    type Error = GaussError;

    fn try_from(r: DiagramRepr) -> Result<Self, GaussError> {
        r.code.parse()
    }
}

impl From<GaussDiagram> for DiagramRepr {
    fn from(d: GaussDiagram) -> Self {
        DiagramRepr {
            code: d.to_string(),
            arrow_count: d.arrow_count,
            fake_count: d.fake_count(),
            arrows: d.arrows(),
        }
    }
}

impl GaussDiagram {
    /// The diagram with no arrows: the trivial knot.
    pub fn trivial() -> Self {
        Self {
            slots: Vec::new(),
            arrow_count: 0,
        }
    }

    /// Validates that the arrow ids are exactly `1..=c`, each with one tail
    /// and one head.
    pub fn from_slots(slots: Vec<Slot>) -> Result<Self, GaussError> {
        let max_id = slots.iter().filter_map(Slot::arrow).max().unwrap_or(0);
        let mut seen = vec![(0usize, 0usize); max_id + 1];
        for slot in &slots {
            if let Slot::Passage { arrow, role } = *slot {
                if arrow == 0 {
                    return Err(GaussError::Structure("arrow id 0 is not allowed".into()));
                }
                match role {
                    Role::Tail => seen[arrow].0 += 1,
                    Role::Head => seen[arrow].1 += 1,
                }
            }
        }
        for (id, &(tails, heads)) in seen.iter().enumerate().skip(1) {
            if tails != 1 || heads != 1 {
                return Err(GaussError::Structure(format!(
                    "arrow {id} has {tails} tail(s) and {heads} head(s); expected one of each"
                )));
            }
        }
        Ok(Self {
            slots,
            arrow_count: max_id,
        })
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_count
    }

    pub fn fake_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_fake()).count()
    }

    /// Number of slots, `2 * arrows + fakes`.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot(&self, index: usize) -> Slot {
        self.slots[index]
    }

    /// Slot indices of the tail and head of `arrow`.
    pub fn endpoints(&self, arrow: usize) -> Option<(usize, usize)> {
        let mut tail = None;
        let mut head = None;
        for (i, slot) in self.slots.iter().enumerate() {
            match *slot {
                Slot::Passage { arrow: a, role: Role::Tail } if a == arrow => tail = Some(i),
                Slot::Passage { arrow: a, role: Role::Head } if a == arrow => head = Some(i),
                _ => {}
            }
        }
        Some((tail?, head?))
    }

    pub fn arrows(&self) -> Vec<Arrow> {
        let mut tails = vec![0; self.arrow_count + 1];
        let mut heads = vec![0; self.arrow_count + 1];
        for (i, slot) in self.slots.iter().enumerate() {
            match *slot {
                Slot::Passage { arrow, role: Role::Tail } => tails[arrow] = i,
                Slot::Passage { arrow, role: Role::Head } => heads[arrow] = i,
                Slot::Fake => {}
            }
        }
        (1..=self.arrow_count)
            .map(|id| Arrow {
                id,
                tail: tails[id],
                head: heads[id],
            })
            .collect()
    }

    /// For each slot, the index of the other endpoint of its arrow.
    pub fn partners(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.slots.len()];
        for a in self.arrows() {
            out[a.tail] = Some(a.head);
            out[a.head] = Some(a.tail);
        }
        out
    }

    /// Inserts a fake vertex so that it becomes slot `index`.
    pub fn with_fake_at(&self, index: usize) -> Self {
        let mut slots = self.slots.clone();
        slots.insert(index.min(slots.len()), Slot::Fake);
        Self {
            slots,
            arrow_count: self.arrow_count,
        }
    }

    pub fn without_fakes(&self) -> Self {
        Self {
            slots: self.slots.iter().copied().filter(|s| !s.is_fake()).collect(),
            arrow_count: self.arrow_count,
        }
    }

    /// Same diagram read from a different base point: slot `k` becomes slot 0.
    pub fn rotated(&self, k: usize) -> Self {
        let mut slots = self.slots.clone();
        if !slots.is_empty() {
            let k = k % slots.len();
            slots.rotate_left(k);
        }
        Self {
            slots,
            arrow_count: self.arrow_count,
        }
    }

    // Renumbers the arrows present in `slots` to 1..=c, keeping their
    // relative order.
    pub(crate) fn compacted(slots: Vec<Slot>) -> Self {
        let mut ids: Vec<usize> = slots.iter().filter_map(Slot::arrow).collect();
        ids.sort_unstable();
        ids.dedup();
        let slots = slots
            .into_iter()
            .map(|s| match s {
                Slot::Passage { arrow, role } => Slot::Passage {
                    arrow: ids.binary_search(&arrow).expect("present") + 1,
                    role,
                },
                Slot::Fake => Slot::Fake,
            })
            .collect();
        Self {
            slots,
            arrow_count: ids.len(),
        }
    }

    pub(crate) fn from_parts_unchecked(slots: Vec<Slot>, arrow_count: usize) -> Self {
        Self { slots, arrow_count }
    }
}

impl FromStr for GaussDiagram {
    type Err = GaussError;

    fn from_str(text: &str) -> Result<Self, GaussError> {
        let mut slots = Vec::new();
        for (position, token) in text.split_whitespace().enumerate() {
            if matches!(token, "|" | ";" | "/") {
                return Err(GaussError::MultiComponent);
            }
            if token == "*" {
                slots.push(Slot::Fake);
                continue;
            }
            let bad = || GaussError::Parse {
                token: token.to_string(),
                position: position + 1,
            };
            let value: i64 = token.parse().map_err(|_| bad())?;
            if value == 0 {
                return Err(bad());
            }
            let role = if value > 0 { Role::Tail } else { Role::Head };
            slots.push(Slot::Passage {
                arrow: value.unsigned_abs() as usize,
                role,
            });
        }
        GaussDiagram::from_slots(slots)
    }
}

impl fmt::Display for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, slot) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{slot}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaussDiagram(\"{self}\")")
    }
}

/// A uniformly random placement of the `2c` endpoints of `c` arrows.
pub fn random_diagram(arrows: usize, seed: u64) -> GaussDiagram {
    random_diagram_with(arrows, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_diagram_with<R: Rng + ?Sized>(arrows: usize, rng: &mut R) -> GaussDiagram {
    let mut slots: Vec<Slot> = (1..=arrows)
        .flat_map(|a| [Slot::passage(a, Role::Tail), Slot::passage(a, Role::Head)])
        .collect();
    slots.shuffle(rng);
    GaussDiagram::from_parts_unchecked(slots, arrows)
}
