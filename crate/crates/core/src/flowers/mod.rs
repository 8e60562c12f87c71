//! Pseudoflowers: partitions of the ground set with a cyclic order on the
//! petals such that every interval union has order at most k−1.

mod anemone;
pub mod enumerate;
mod split;

pub use anemone::{is_strong, maximal_strong_anemone, petal_refinement, MuFunction};
pub use split::split_petal;

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::connsys::{ConnectivitySystem, GroundSet, Order, SubsetMask};
use crate::cyclic::{is_monotone, CyclicOrder};
use crate::error::{input, invariant, Error, Result};
use crate::profiles::Profile;

/// Largest petal count for which every petal union is examined.
pub const EXHAUSTIVE_PETALS: usize = 20;
/// Random petal unions examined beyond `EXHAUSTIVE_PETALS`.
pub const SAMPLED_UNIONS: usize = 1 << 16;

/// Petal index set, bit `i` is petal `i`.
pub type PetalSet = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FlowerKind {
    FlowerTooSmall,
    /// The candidate is not even a pseudoflower.
    NotFlower,
    /// A pseudoflower with some non-trivial interval union of order below k−1.
    PseudoOnly,
    Anemone,
    Daisy,
}

#[derive(Clone, Debug)]
pub struct Pseudoflower {
    k: u32,
    petals: Vec<SubsetMask>,
    order: CyclicOrder,
    /// Ring position of each petal.
    pos: Vec<usize>,
}

impl PartialEq for Pseudoflower {
    /// Equal modulo renaming of petal indices and rotation.
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.canonical_ring() == other.canonical_ring()
    }
}

impl Eq for Pseudoflower {}

impl Pseudoflower {
    /// Validates the partition and every interval union, empty and full
    /// included; the first violation in (length, start) order is reported.
    pub fn new(sys: &ConnectivitySystem, k: u32, petals: Vec<SubsetMask>, order: CyclicOrder) -> Result<Pseudoflower> {
        let f = Pseudoflower::unchecked(sys.ground(), k, petals, order)?;
        let p = f.petals.len();
        let arcs = std::iter::once((0, 0)).chain(f.order.nontrivial_arcs()).chain(std::iter::once((0, p)));
        for (start, len) in arcs {
            let side = f.arc_union(start, len);
            let o = sys.order(side);
            if !o.below(k) {
                return Err(Error::NotPseudoflower { k, interval: f.order.interval_by_len(start, len), side, order: o });
            }
        }
        Ok(f)
    }

    /// Petals in ring order `0, 1, ..`.
    pub fn from_ring(sys: &ConnectivitySystem, k: u32, petals: Vec<SubsetMask>) -> Result<Pseudoflower> {
        let p = petals.len();
        Pseudoflower::new(sys, k, petals, CyclicOrder::identity(p))
    }

    /// Partition and order checks only.
    fn unchecked(ground: &GroundSet, k: u32, petals: Vec<SubsetMask>, order: CyclicOrder) -> Result<Pseudoflower> {
        let mut seen = SubsetMask::EMPTY;
        for &pt in &petals {
            ground.check(pt)?;
            if pt.is_empty() {
                return input("petals must be nonempty");
            }
            if !pt.intersection(seen).is_empty() {
                return input("petals must be disjoint");
            }
            seen = seen.union(pt);
        }
        if seen != ground.full() {
            return input("petals must cover the ground set");
        }
        if petals.len() > 32 {
            return input("too many petals");
        }
        let mut ring: Vec<usize> = order.ring().to_vec();
        ring.sort_unstable();
        if ring != (0..petals.len()).collect::<Vec<_>>() {
            return input("the cyclic order must list every petal index exactly once");
        }
        let mut pos = vec![0; petals.len()];
        for (i, &x) in order.ring().iter().enumerate() {
            pos[x] = i;
        }
        Ok(Pseudoflower { k, petals, order, pos })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn petals(&self) -> &[SubsetMask] {
        &self.petals
    }

    pub fn petal(&self, i: usize) -> SubsetMask {
        self.petals[i]
    }

    pub fn num_petals(&self) -> usize {
        self.petals.len()
    }

    pub fn order(&self) -> &CyclicOrder {
        &self.order
    }

    /// Ring position of petal `i`.
    pub fn position(&self, i: usize) -> usize {
        self.pos[i]
    }

    /// Petal index at ring position `r`.
    pub fn at(&self, r: usize) -> usize {
        self.order.ring()[r % self.petals.len()]
    }

    pub fn full(&self) -> SubsetMask {
        self.petals.iter().fold(SubsetMask::EMPTY, |a, &b| a.union(b))
    }

    /// Union of `len` petals starting at ring position `start`.
    pub fn arc_union(&self, start: usize, len: usize) -> SubsetMask {
        (0..len).fold(SubsetMask::EMPTY, |m, j| m.union(self.petals[self.at(start + j)]))
    }

    /// Petal indices of the arc.
    pub fn arc_set(&self, start: usize, len: usize) -> PetalSet {
        (0..len).fold(0, |m, j| m | 1 << self.at(start + j))
    }

    pub fn union_of(&self, set: PetalSet) -> SubsetMask {
        SubsetMask(set).iter().fold(SubsetMask::EMPTY, |m, i| m.union(self.petals[i]))
    }

    /// Whether the petal index set is contiguous on the ring (or trivial).
    pub fn is_interval_set(&self, set: PetalSet) -> bool {
        let p = self.petals.len();
        let r: u32 = SubsetMask(set).iter().fold(0, |m, i| m | 1 << self.pos[i]);
        let full = if p == 32 { u32::MAX } else { (1u32 << p) - 1 };
        if r == 0 || r == full {
            return true;
        }
        let prev = ((r << 1) | (r >> (p - 1))) & full;
        (r & !prev).count_ones() == 1
    }

    /// Non-trivial interval unions, each once per arc.
    pub fn displayed(&self) -> Vec<SubsetMask> {
        self.order.nontrivial_arcs().map(|(s, l)| self.arc_union(s, l)).collect()
    }

    /// Non-trivial petal unions.
    pub fn all_unions(&self) -> Vec<SubsetMask> {
        let p = self.petals.len();
        (1..(1u32 << p) - 1).map(|s| self.union_of(s)).collect()
    }

    /// Petals in ring order, rotated so the petal holding element 0 leads.
    pub fn canonical_ring(&self) -> Vec<SubsetMask> {
        let p = self.petals.len();
        let first = (0..p).find(|&r| self.petals[self.at(r)].contains(0)).unwrap_or(0);
        (0..p).map(|j| self.petals[self.at(first + j)]).collect()
    }

    /// Same petals in ring order `0, 1, ..`.
    pub fn relabelled(&self) -> Pseudoflower {
        let petals: Vec<SubsetMask> = (0..self.petals.len()).map(|r| self.petals[self.at(r)]).collect();
        let p = petals.len();
        Pseudoflower { k: self.k, petals, order: CyclicOrder::identity(p), pos: (0..p).collect() }
    }

    pub fn to_json(&self, ground: &GroundSet) -> serde_json::Value {
        let petals: Vec<Vec<String>> = self.petals.iter().map(|&p| ground.labels_of(p)).collect();
        json!({"k": self.k, "petals": petals, "order": self.order.ring()})
    }

    pub fn from_json(sys: &ConnectivitySystem, value: &serde_json::Value) -> Result<Pseudoflower> {
        #[derive(Deserialize)]
        struct Raw {
            k: u32,
            petals: Vec<Vec<String>>,
            order: Option<Vec<usize>>,
        }
        let raw: Raw = serde_json::from_value(value.clone())?;
        let petals = raw.petals.iter().map(|p| sys.ground().mask(p)).collect::<Result<Vec<_>>>()?;
        let order = CyclicOrder::new(raw.order.unwrap_or_else(|| (0..petals.len()).collect()))?;
        Pseudoflower::new(sys, raw.k, petals, order)
    }
}

/// Kind of a candidate partition with cyclic order.
pub fn classify_candidate(sys: &ConnectivitySystem, k: u32, petals: Vec<SubsetMask>, order: CyclicOrder) -> Result<FlowerKind> {
    match Pseudoflower::new(sys, k, petals, order) {
        Ok(f) => classify(sys, &f),
        Err(Error::NotPseudoflower { .. }) => Ok(FlowerKind::NotFlower),
        Err(e) => Err(e),
    }
}

pub fn classify(sys: &ConnectivitySystem, f: &Pseudoflower) -> Result<FlowerKind> {
    classify_with_seed(sys, f, 0)
}

/// Anemone when every non-trivial petal union has order k−1, daisy when
/// exactly the interval unions do. Beyond `EXHAUSTIVE_PETALS` petals the
/// unions are sampled from `seed`.
pub fn classify_with_seed(sys: &ConnectivitySystem, f: &Pseudoflower, seed: u64) -> Result<FlowerKind> {
    let p = f.num_petals();
    if p < 4 {
        return Ok(FlowerKind::FlowerTooSmall);
    }
    let target = Order::Finite(f.k - 1);
    if f.displayed().into_iter().any(|x| sys.order(x) != target) {
        return Ok(FlowerKind::PseudoOnly);
    }
    let sets: Vec<PetalSet> = if p <= EXHAUSTIVE_PETALS {
        (1..(1u32 << p) - 1).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = SubsetMask::full(p).0;
        (0..SAMPLED_UNIONS).map(|_| rng.gen_range(1..full)).collect()
    };
    let (all_k, exact_intervals) = sets
        .par_iter()
        .map(|&s| {
            let at = sys.order(f.union_of(s)) == target;
            (at, at == f.is_interval_set(s))
        })
        .reduce(|| (true, true), |a, b| (a.0 && b.0, a.1 && b.1));
    match (all_k, exact_intervals) {
        (true, _) => Ok(FlowerKind::Anemone),
        (false, true) => Ok(FlowerKind::Daisy),
        (false, false) => invariant(format!(
            "flower with {p} petals is neither an anemone nor a daisy; λ is not a connectivity function"
        )),
    }
}

/// Whether the preimage of each target petal is an interval of `g`.
fn preimages_are_intervals(g: &Pseudoflower, f_map: &[usize], targets: &BTreeSet<usize>) -> bool {
    targets.iter().all(|&t| {
        let pre: PetalSet = f_map.iter().enumerate().filter(|(_, &x)| x == t).fold(0, |m, (j, _)| m | 1 << j);
        g.is_interval_set(pre)
    })
}

/// `coarse ≤ fine`: each petal of `coarse` is a union of petals of `fine`
/// and the induced map on petal indices is monotone.
pub fn is_concatenation(coarse: &Pseudoflower, fine: &Pseudoflower) -> bool {
    if coarse.k != fine.k || coarse.full() != fine.full() {
        return false;
    }
    let mut f_map = Vec::with_capacity(fine.num_petals());
    for &pt in fine.petals() {
        match coarse.petals.iter().position(|&q| pt.is_subset_of(q)) {
            Some(i) => f_map.push(i),
            None => return false,
        }
    }
    let image: BTreeSet<usize> = f_map.iter().copied().collect();
    if image.len() == 2 {
        return preimages_are_intervals(fine, &f_map, &image);
    }
    let f: HashMap<usize, usize> = f_map.iter().copied().enumerate().collect();
    is_monotone(&f, fine.order(), coarse.order())
}

/// Which sides decide distinguishability.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Displayed {
    Intervals,
    AllUnions,
}

fn displayed_sides(f: &Pseudoflower, mode: Displayed) -> Vec<SubsetMask> {
    match mode {
        Displayed::Intervals => f.displayed(),
        Displayed::AllUnions => f.all_unions(),
    }
}

/// Pairs `(i, j)`, `i < j`, of members distinguished by a displayed side.
pub fn distinguished_pairs(f: &Pseudoflower, fam: &[Profile], mode: Displayed) -> BTreeSet<(usize, usize)> {
    let sides = displayed_sides(f, mode);
    let sig: Vec<Vec<bool>> = fam.iter().map(|p| sides.iter().map(|&s| p.contains(s)).collect()).collect();
    let mut out = BTreeSet::new();
    for i in 0..fam.len() {
        for j in i + 1..fam.len() {
            if sig[i] != sig[j] {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Size of a largest set of members pairwise distinguished by interval unions.
pub fn distinguished_count(f: &Pseudoflower, fam: &[Profile]) -> usize {
    let sides = f.displayed();
    fam.iter()
        .map(|p| sides.iter().map(|&s| p.contains(s)).collect::<Vec<bool>>())
        .collect::<BTreeSet<_>>()
        .len()
}

/// `F ≼ G`: every pair distinguished by an interval union of F is
/// distinguished by one of G.
pub fn preceq(f: &Pseudoflower, g: &Pseudoflower, fam: &[Profile]) -> bool {
    distinguished_pairs(f, fam, Displayed::Intervals).is_subset(&distinguished_pairs(g, fam, Displayed::Intervals))
}

/// `F ≼_A G`, using arbitrary petal unions.
pub fn preceq_a(f: &Pseudoflower, g: &Pseudoflower, fam: &[Profile]) -> bool {
    distinguished_pairs(f, fam, Displayed::AllUnions).is_subset(&distinguished_pairs(g, fam, Displayed::AllUnions))
}

/// Every k-flower of `sys` with at least `min_petals` petals, one per
/// rotation and mirror class, in enumeration order.
pub fn search_flowers(sys: &ConnectivitySystem, min_petals: usize) -> Vec<Pseudoflower> {
    let candidates: Vec<(Vec<SubsetMask>, Vec<usize>)> = enumerate::set_partitions(sys.full())
        .into_iter()
        .filter(|blocks| blocks.len() >= min_petals.max(4))
        .flat_map(|blocks| {
            enumerate::cyclic_orders_up_to_mirror(blocks.len()).into_iter().map(move |ring| (blocks.clone(), ring))
        })
        .collect();
    candidates
        .into_par_iter()
        .filter_map(|(blocks, ring)| {
            let first = sys.order(blocks[ring[0]]);
            let k = first.finite()? + 1;
            let f = Pseudoflower::new(sys, k, blocks, CyclicOrder::new(ring).ok()?).ok()?;
            f.displayed().into_iter().all(|x| sys.order(x) == first).then_some(f)
        })
        .collect()
}
