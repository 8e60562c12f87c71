//! Finite cyclic orders, their cuts and intervals.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{input, Result};

/// Items arranged on a ring. Equality is up to rotation.
#[derive(Clone, Debug, Eq, Serialize)]
pub struct CyclicOrder {
    ring: Vec<usize>,
}

/// Cut `i` is the gap just before `ring[i]`.
pub type Cut = usize;

impl CyclicOrder {
    pub fn new(ring: Vec<usize>) -> Result<CyclicOrder> {
        let distinct: BTreeSet<_> = ring.iter().collect();
        if distinct.len() != ring.len() {
            return input("cyclic order has repeated items");
        }
        Ok(CyclicOrder { ring })
    }

    /// `0, 1, .., n-1`.
    pub fn identity(n: usize) -> CyclicOrder {
        CyclicOrder { ring: (0..n).collect() }
    }

    pub fn ring(&self) -> &[usize] {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    /// Rotation with the minimum item first.
    pub fn canonical(&self) -> CyclicOrder {
        let Some(pos) = self.ring.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i) else {
            return self.clone();
        };
        let mut ring = self.ring[pos..].to_vec();
        ring.extend_from_slice(&self.ring[..pos]);
        CyclicOrder { ring }
    }

    pub fn mirror(&self) -> CyclicOrder {
        CyclicOrder { ring: self.ring.iter().rev().copied().collect() }
    }

    /// Smaller of the canonical forms of the order and its mirror.
    pub fn mirror_canonical(&self) -> CyclicOrder {
        let a = self.canonical();
        let b = self.mirror().canonical();
        if b.ring < a.ring {
            b
        } else {
            a
        }
    }

    pub fn same_up_to_mirror(&self, other: &CyclicOrder) -> bool {
        self.mirror_canonical() == other.mirror_canonical()
    }

    /// Position of each item.
    pub fn positions(&self) -> HashMap<usize, usize> {
        self.ring.iter().enumerate().map(|(i, &x)| (x, i)).collect()
    }

    /// Items walking forward from cut `from` up to cut `to`.
    pub fn interval(&self, from: Cut, to: Cut) -> Result<Vec<usize>> {
        let n = self.ring.len();
        if from >= n || to >= n {
            return input(format!("cut out of range for a ring of {n} items"));
        }
        if from == to {
            return input("interval needs two distinct cuts");
        }
        Ok(self.interval_by_len(from, (to + n - from) % n))
    }

    /// `len` items starting at ring position `start`.
    pub fn interval_by_len(&self, start: usize, len: usize) -> Vec<usize> {
        let n = self.ring.len();
        (0..len).map(|j| self.ring[(start + j) % n]).collect()
    }

    /// Nonempty proper contiguous arcs as (start position, length), by
    /// length and then start.
    pub fn nontrivial_arcs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.ring.len();
        (1..n).flat_map(move |len| (0..n).map(move |start| (start, len)))
    }

    /// `y` lies strictly inside the forward walk from `x` to `z`.
    pub fn strictly_between(pos: &HashMap<usize, usize>, n: usize, x: usize, y: usize, z: usize) -> bool {
        let (px, py, pz) = (pos[&x], pos[&y], pos[&z]);
        let dy = (py + n - px) % n;
        let dz = (pz + n - px) % n;
        px != py && py != pz && px != pz && dy < dz
    }

    /// Whether `items` is empty, everything, or a contiguous arc.
    pub fn is_interval(&self, items: &BTreeSet<usize>) -> bool {
        let n = self.ring.len();
        if items.is_empty() || items.len() == n {
            return true;
        }
        let starts = (0..n)
            .filter(|&i| items.contains(&self.ring[i]) && !items.contains(&self.ring[(i + n - 1) % n]))
            .count();
        starts == 1
    }
}

impl PartialEq for CyclicOrder {
    fn eq(&self, other: &Self) -> bool {
        self.canonical().ring == other.canonical().ring
    }
}

/// Whether `y ∈ ]x,z[` whenever `f(y) ∈ ]f(x),f(z)[`, over all triples.
pub fn is_monotone(f: &HashMap<usize, usize>, src: &CyclicOrder, dst: &CyclicOrder) -> bool {
    let (ps, pd) = (src.positions(), dst.positions());
    let (ns, nd) = (src.len(), dst.len());
    let items = src.ring();
    items.iter().all(|&x| {
        items.iter().all(|&y| {
            items.iter().all(|&z| {
                !CyclicOrder::strictly_between(&pd, nd, f[&x], f[&y], f[&z])
                    || CyclicOrder::strictly_between(&ps, ns, x, y, z)
            })
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Entry {
    Item(usize),
    Cut(Cut),
}

/// The alternating sequence `cut 0, ring[0], cut 1, ring[1], ..`.
#[derive(Clone, Debug)]
pub struct CycleCompletion {
    order: CyclicOrder,
    pos: HashMap<usize, usize>,
}

impl CycleCompletion {
    pub fn new(order: CyclicOrder) -> Result<CycleCompletion> {
        if order.is_empty() {
            return input("cycle completion of an empty order");
        }
        let pos = order.positions();
        Ok(CycleCompletion { order, pos })
    }

    pub fn sequence(&self) -> Vec<Entry> {
        self.order.ring().iter().enumerate().flat_map(|(i, &x)| [Entry::Cut(i), Entry::Item(x)]).collect()
    }

    pub fn successor(&self, x: Entry) -> Result<Entry> {
        let n = self.order.len();
        match x {
            Entry::Cut(c) if c < n => Ok(Entry::Item(self.order.ring()[c])),
            Entry::Item(i) => match self.pos.get(&i) {
                Some(&p) => Ok(Entry::Cut((p + 1) % n)),
                None => input(format!("item {i} is not on the ring")),
            },
            Entry::Cut(c) => input(format!("cut {c} out of range")),
        }
    }
}
