//! Bipartitions (A, E∖A) of a ground set, identified with their side A.

use std::collections::BTreeSet;

use crate::connsys::{GroundSet, SubsetMask};
use crate::error::{input, Result};

/// The separation (A, E∖A). `A ≤ B` iff `A ⊆ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedSep {
    pub side: SubsetMask,
    pub full: SubsetMask,
}

impl OrientedSep {
    pub fn new(side: SubsetMask, full: SubsetMask) -> OrientedSep {
        debug_assert!(side.is_subset_of(full));
        OrientedSep { side, full }
    }

    pub fn inverse(self) -> OrientedSep {
        OrientedSep { side: self.side.complement(self.full), full: self.full }
    }

    pub fn le(self, other: OrientedSep) -> bool {
        self.side.is_subset_of(other.side)
    }

    /// The orientation whose side omits element 0.
    pub fn canonical(self) -> OrientedSep {
        if self.side.contains(0) {
            self.inverse()
        } else {
            self
        }
    }

    pub fn is_small(self) -> bool {
        self.le(self.inverse())
    }

    pub fn is_co_small(self) -> bool {
        self.inverse().le(self)
    }

    /// `A ⊆ B` or `A ⊆ E∖B`.
    pub fn points_towards(self, other: OrientedSep) -> bool {
        self.le(other) || self.le(other.inverse())
    }
}

/// Sorted label list of a side, the JSON form of a separation.
pub fn side_labels(ground: &GroundSet, side: SubsetMask) -> Vec<String> {
    let mut v = ground.labels_of(side);
    v.sort();
    v
}

pub fn nested(a: OrientedSep, b: OrientedSep) -> bool {
    let (x, y, e) = (a.side, b.side, a.full);
    x.is_subset_of(y) || x.intersection(y).is_empty() || y.is_subset_of(x) || x.union(y) == e
}

/// Nestedness via pointing: some orientation of `a` points towards `b`.
pub fn nested_by_pointing(a: OrientedSep, b: OrientedSep) -> bool {
    a.points_towards(b) || a.inverse().points_towards(b)
}

/// `(A∪B, A∪(E∖B), B∪(E∖A), E∖(A∩B))`.
pub fn corners(a: OrientedSep, b: OrientedSep) -> [OrientedSep; 4] {
    let e = a.full;
    let (x, y) = (a.side, b.side);
    [
        OrientedSep::new(x.union(y), e),
        OrientedSep::new(x.union(y.complement(e)), e),
        OrientedSep::new(y.union(x.complement(e)), e),
        OrientedSep::new(x.intersection(y).complement(e), e),
    ]
}

/// Pairwise `A ⊆ E∖B` for distinct members.
pub fn is_star(seps: &[OrientedSep]) -> bool {
    seps.iter().enumerate().all(|(i, a)| {
        seps[i + 1..].iter().all(|b| a.side == b.side || a.side.intersection(b.side).is_empty())
    })
}

/// Separations of one ground set, stored by side.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SepSystem {
    pub full: SubsetMask,
    pub sides: BTreeSet<SubsetMask>,
}

impl SepSystem {
    pub fn new(full: SubsetMask, sides: impl IntoIterator<Item = SubsetMask>) -> SepSystem {
        SepSystem { full, sides: sides.into_iter().collect() }
    }

    /// Adds the inverse of every member.
    pub fn closed(full: SubsetMask, sides: impl IntoIterator<Item = SubsetMask>) -> SepSystem {
        let mut s = SepSystem::new(full, sides);
        let inv: Vec<_> = s.sides.iter().map(|a| a.complement(full)).collect();
        s.sides.extend(inv);
        s
    }

    pub fn is_closed_under_inverse(&self) -> bool {
        self.sides.iter().all(|a| self.sides.contains(&a.complement(self.full)))
    }

    pub fn contains(&self, side: SubsetMask) -> bool {
        self.sides.contains(&side)
    }
}

/// Exactly one side from each inverse pair of a `SepSystem`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrientationSet {
    pub chosen: BTreeSet<SubsetMask>,
}

impl OrientationSet {
    pub fn new(chosen: impl IntoIterator<Item = SubsetMask>) -> OrientationSet {
        OrientationSet { chosen: chosen.into_iter().collect() }
    }

    pub fn is_orientation_of(&self, s: &SepSystem) -> bool {
        self.chosen.iter().all(|a| s.contains(*a))
            && s.sides.iter().all(|a| self.chosen.contains(a) != self.chosen.contains(&a.complement(s.full)))
    }
}

/// Down-closure of `O` within `S`: `r < s ∈ O` with `r ∈ S` forces `r ∈ O`.
pub fn is_consistent(s: &SepSystem, o: &OrientationSet) -> Result<bool> {
    if !o.is_orientation_of(s) {
        return input("not an orientation of the separation system");
    }
    Ok(o.chosen.iter().all(|&top| {
        s.sides
            .iter()
            .all(|&r| !(r != top && r.is_subset_of(top)) || o.chosen.contains(&r))
    }))
}

/// The paper's weaker notion: no `←r, →s ∈ O` with `r ≠ s` and `→r < →s`.
pub fn is_weakly_consistent(s: &SepSystem, o: &OrientationSet) -> Result<bool> {
    if !o.is_orientation_of(s) {
        return input("not an orientation of the separation system");
    }
    let full = s.full;
    Ok(o.chosen.iter().all(|&back| {
        let forward = back.complement(full);
        o.chosen.iter().all(|&t| {
            t == back || t.complement(full) == back || !(forward != t && forward.is_subset_of(t))
        })
    }))
}
