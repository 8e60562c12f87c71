//! Abstraction of separations onto bipartitions of a profile family.
//!
//! A side A of order below k maps to φ(A), the members of the family that
//! contain E∖A. The nontrivial images form a system 𝓑 of bipartitions of
//! the family, closed under unions of crossing members, which splits into
//! the members crossing nothing and the classes of the crossing graph.

mod tree;

pub use tree::{
    build_tree, check_distinct_orientations, orientation_tree, theorem_cases, AbstractTree, TreeEdge, TreeVertex,
    VertexKind,
};

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::connsys::{ConnectivitySystem, SubsetMask};
use crate::cyclic::CyclicOrder;
use crate::error::{input, invariant, precondition, Result};
use crate::profiles::{is_profile, s_k, Profile, ProfileFamily};

/// Largest family the abstraction handles.
pub const MAX_FAMILY: usize = 64;

/// Set of family members, bit `i` is member `i`.
pub type PSet = u64;

pub fn pset_full(n: usize) -> PSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn pset_members(x: PSet) -> Vec<usize> {
    (0..64).filter(|i| x >> i & 1 == 1).collect()
}

/// All four corners nonempty.
pub fn crosses(x: PSet, y: PSet, full: PSet) -> bool {
    x & y != 0 && x & !y != 0 && y & !x != 0 && x | y != full
}

/// φ(A) = members containing E∖A.
pub fn phi(sys: &ConnectivitySystem, fam: &ProfileFamily, a: SubsetMask) -> Result<PSet> {
    sys.ground().check(a)?;
    if !sys.order(a).below(fam.k()) {
        return precondition(format!("side {a:?} has order at least k = {}", fam.k()));
    }
    Ok(image(fam.profiles(), a.complement(sys.full())))
}

fn image(profiles: &[Profile], co: SubsetMask) -> PSet {
    profiles.iter().enumerate().filter(|(_, p)| p.contains(co)).fold(0, |m, (i, _)| m | 1 << i)
}

/// Classes of the relation "no member of `seps` distinguishes", sorted by
/// smallest member.
pub fn boundary_classes(seps: &[PSet], n: usize) -> Vec<PSet> {
    let mut classes: BTreeMap<Vec<bool>, PSet> = BTreeMap::new();
    for i in 0..n {
        let sig = seps.iter().map(|x| x >> i & 1 == 1).collect();
        *classes.entry(sig).or_default() |= 1 << i;
    }
    let mut out: Vec<PSet> = classes.into_values().collect();
    out.sort_by_key(|c| c.trailing_zeros());
    out
}

/// Whether `x` is a union of `classes`.
pub fn is_class_union(x: PSet, classes: &[PSet]) -> bool {
    classes.iter().all(|&c| c & x == 0 || c & x == c)
}

/// Indices of the classes inside `x`.
fn class_indices(x: PSet, classes: &[PSet]) -> u32 {
    classes.iter().enumerate().filter(|(_, &c)| c & x == c).fold(0, |m, (i, _)| m | 1 << i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PreflowerKind {
    PreAnemone,
    PreDaisy,
}

/// A pre-flower's boundary classes, type, and for daisies the cyclic order
/// on class indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Preflower {
    pub kind: PreflowerKind,
    pub classes: Vec<PSet>,
    pub order: Option<CyclicOrder>,
}

#[derive(Clone, Debug)]
pub struct AbstractSystem {
    n: usize,
    k: u32,
    fam: Option<ProfileFamily>,
    /// Image of each side of order below k, with its sorted preimages.
    images: BTreeMap<PSet, Vec<SubsetMask>>,
    b: Vec<PSet>,
    nested: Vec<PSet>,
    classes: Vec<Vec<PSet>>,
    boundaries: Vec<Vec<PSet>>,
    e_prime: Vec<PSet>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl AbstractSystem {
    /// 𝓑 given directly as bipartitions of `n` points.
    pub fn from_bipartitions(n: usize, sides: impl IntoIterator<Item = PSet>) -> Result<AbstractSystem> {
        if n == 0 || n > MAX_FAMILY {
            return input(format!("ground of {n} points is outside 1..={MAX_FAMILY}"));
        }
        let full = pset_full(n);
        let mut b = BTreeSet::new();
        for x in sides {
            if x & !full != 0 {
                return input(format!("bipartition side {x:#x} leaves the ground"));
            }
            if x != 0 && x != full {
                b.insert(x);
                b.insert(full & !x);
            }
        }
        AbstractSystem::assemble(n, 0, None, BTreeMap::new(), b.into_iter().collect())
    }

    fn assemble(
        n: usize,
        k: u32,
        fam: Option<ProfileFamily>,
        images: BTreeMap<PSet, Vec<SubsetMask>>,
        b: Vec<PSet>,
    ) -> Result<AbstractSystem> {
        let full = pset_full(n);
        let members: BTreeSet<PSet> = b.iter().copied().collect();
        let bad = b.par_iter().find_map_any(|&x| {
            b.iter().find_map(|&y| {
                let corners = x & y != 0 && x | y != full;
                (corners && !(members.contains(&(x | y)) && members.contains(&(x & y)))).then_some((x, y))
            })
        });
        if let Some((x, y)) = bad {
            return invariant(format!("𝓑 misses a corner of {x:#x} and {y:#x}"));
        }
        let m = b.len();
        let crossing: Vec<Vec<usize>> =
            (0..m).into_par_iter().map(|i| (0..m).filter(|&j| crosses(b[i], b[j], full)).collect()).collect();
        let nested: Vec<PSet> = (0..m).filter(|&i| crossing[i].is_empty()).map(|i| b[i]).collect();
        let mut parent: Vec<usize> = (0..m).collect();
        for (i, row) in crossing.iter().enumerate() {
            for &j in row {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut groups: BTreeMap<usize, Vec<PSet>> = BTreeMap::new();
        for i in (0..m).filter(|&i| !crossing[i].is_empty()) {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(b[i]);
        }
        let classes: Vec<Vec<PSet>> = groups.into_values().collect();
        let boundaries: Vec<Vec<PSet>> = classes.iter().map(|v| boundary_classes(v, n)).collect();
        let mut e_prime: BTreeSet<PSet> = nested.iter().copied().collect();
        for d in &boundaries {
            for &a in d {
                e_prime.insert(a);
                e_prime.insert(full & !a);
            }
        }
        Ok(AbstractSystem { n, k, fam, images, b, nested, classes, boundaries, e_prime: e_prime.into_iter().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn full(&self) -> PSet {
        pset_full(self.n)
    }

    pub fn family(&self) -> Option<&ProfileFamily> {
        self.fam.as_ref()
    }

    /// 𝓑, increasing.
    pub fn b(&self) -> &[PSet] {
        &self.b
    }

    pub fn contains(&self, x: PSet) -> bool {
        self.b.binary_search(&x).is_ok()
    }

    /// 𝓔: members of 𝓑 crossing no member.
    pub fn nested(&self) -> &[PSet] {
        &self.nested
    }

    /// 𝒱: components of the crossing graph, ordered by smallest member.
    pub fn classes(&self) -> &[Vec<PSet>] {
        &self.classes
    }

    /// ∂(V) for each class.
    pub fn boundaries(&self) -> &[Vec<PSet>] {
        &self.boundaries
    }

    /// 𝓔′ = 𝓔 with both orientations of every boundary class.
    pub fn e_prime(&self) -> &[PSet] {
        &self.e_prime
    }

    /// 𝓑′ = 𝓑 ∪ 𝓔′.
    pub fn b_prime(&self) -> Vec<PSet> {
        let all: BTreeSet<PSet> = self.b.iter().chain(&self.e_prime).copied().collect();
        all.into_iter().collect()
    }

    /// Images of sides of order below k, each with its sorted preimages.
    pub fn images(&self) -> &BTreeMap<PSet, Vec<SubsetMask>> {
        &self.images
    }

    /// Members of 𝓑 that are unions of the given classes.
    pub fn sepclos(&self, classes: &[PSet]) -> Vec<PSet> {
        self.b.iter().copied().filter(|&x| is_class_union(x, classes)).collect()
    }

    /// Class index of a member of 𝓑∖𝓔.
    pub fn class_of(&self, x: PSet) -> Option<usize> {
        self.classes.iter().position(|v| v.binary_search(&x).is_ok())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let sets = |xs: &[PSet]| xs.iter().map(|&x| pset_members(x)).collect::<Vec<_>>();
        let classes: Vec<serde_json::Value> = (0..self.classes.len())
            .map(|v| {
                let pre = classify_preflower(self, &self.classes[v]).ok();
                json!({
                    "members": sets(&self.classes[v]),
                    "boundary": sets(&self.boundaries[v]),
                    "type": pre.as_ref().map(|p| p.kind),
                    "order": pre.and_then(|p| p.order).map(|o| o.ring().to_vec()),
                })
            })
            .collect();
        json!({
            "k": self.k,
            "profiles": self.n,
            "B": sets(&self.b),
            "E": sets(&self.nested),
            "V": classes,
            "E_prime": sets(&self.e_prime),
        })
    }
}

/// 𝓑 for a family of at most 64 profiles with common truncation, built
/// from every side of order below k.
pub fn build_abstract(sys: &ConnectivitySystem, fam: &ProfileFamily) -> Result<AbstractSystem> {
    let n = fam.len();
    if n > MAX_FAMILY {
        return precondition(format!("families above {MAX_FAMILY} profiles are not supported"));
    }
    let full = pset_full(n);
    let sides = s_k(sys, fam.k());
    let imgs: Vec<(PSet, SubsetMask)> =
        sides.par_iter().map(|&a| (image(fam.profiles(), a.complement(sys.full())), a)).collect();
    let mut images: BTreeMap<PSet, Vec<SubsetMask>> = BTreeMap::new();
    for (x, a) in imgs {
        images.entry(x).or_default().push(a);
    }
    let b = images.keys().copied().filter(|&x| x != 0 && x != full).collect();
    AbstractSystem::assemble(n, fam.k(), Some(fam.clone()), images, b)
}

/// Whether any two members are joined by a chain of crossing members.
fn crossing_connected(f: &[PSet], full: PSet) -> bool {
    let mut seen = vec![false; f.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..f.len() {
            if !seen[j] && crosses(f[i], f[j], full) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Unique cycle through every class using the two-class unions present
/// in 𝓑, if the union graph is a single cycle.
fn cycle_from_pairs(unions: &BTreeSet<u32>, c: usize) -> Option<CyclicOrder> {
    let adj: Vec<Vec<usize>> =
        (0..c).map(|i| (0..c).filter(|&j| j != i && unions.contains(&(1 << i | 1 << j))).collect()).collect();
    if adj.iter().any(|a| a.len() != 2) {
        return None;
    }
    let mut ring = vec![0];
    let (mut prev, mut cur) = (0, adj[0][0]);
    while cur != 0 {
        ring.push(cur);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        (prev, cur) = (cur, next);
    }
    (ring.len() == c).then(|| CyclicOrder::new(ring).ok()).flatten()
}

/// Whether the class indices form an arc of `order`.
fn is_arc(order: &CyclicOrder, set: u32) -> bool {
    let items: BTreeSet<usize> = SubsetMask(set).iter().collect();
    order.is_interval(&items)
}

/// Pre-anemone when ⟨F⟩ holds every nontrivial union of ∂(F)-classes,
/// pre-daisy when it holds exactly the unions of nontrivial arcs of a
/// cyclic order.
pub fn classify_preflower(asys: &AbstractSystem, f: &[PSet]) -> Result<Preflower> {
    let full = asys.full();
    let f: Vec<PSet> = f.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if f.len() < 2 || f.iter().any(|&x| !asys.contains(x)) || !crossing_connected(&f, full) {
        return input("not a pre-flower: needs at least two members of 𝓑 joined by crossing chains");
    }
    let classes = boundary_classes(&f, asys.n());
    let c = classes.len();
    if c > 31 {
        return precondition("pre-flowers with more than 31 boundary classes are not supported");
    }
    let closure: BTreeSet<u32> = asys.sepclos(&classes).into_iter().map(|x| class_indices(x, &classes)).collect();
    if closure.len() as u64 == (1u64 << c) - 2 {
        return Ok(Preflower { kind: PreflowerKind::PreAnemone, classes, order: None });
    }
    let pairs: BTreeSet<u32> = closure.iter().copied().filter(|s| s.count_ones() == 2).collect();
    if let Some(order) = cycle_from_pairs(&pairs, c) {
        if closure.len() == c * (c - 1) && closure.iter().all(|&s| is_arc(&order, s)) {
            return Ok(Preflower { kind: PreflowerKind::PreDaisy, classes, order: Some(order.mirror_canonical()) });
        }
    }
    invariant(format!("pre-flower with {c} boundary classes is neither a pre-anemone nor a pre-daisy"))
}

/// Cyclic order on ∂(V) for a daisy-type class, mirror-canonical.
pub fn boundary_cyclic_order(asys: &AbstractSystem, v: usize) -> Result<CyclicOrder> {
    let Some(class) = asys.classes().get(v) else {
        return input(format!("class index {v} out of range"));
    };
    let pre = classify_preflower(asys, class)?;
    match (pre.kind, pre.order) {
        (PreflowerKind::PreDaisy, Some(order)) => {
            let d = &asys.boundaries()[v];
            if let Some(x) = asys.sepclos(d).into_iter().find(|&x| !is_arc(&order, class_indices(x, d))) {
                return invariant(format!("member {x:#x} of ⟨V⟩ is not an interval union"));
            }
            Ok(order)
        }
        _ => precondition("the class is of anemone type and has no boundary cyclic order"),
    }
}

/// The class V whose closure holds the image of every displayed side of a
/// flower distinguishing at least four members of the family.
pub fn flower_class(sys: &ConnectivitySystem, asys: &AbstractSystem, f: &crate::flowers::Pseudoflower) -> Result<usize> {
    let Some(fam) = asys.family() else {
        return precondition("flower classes need an abstraction built from a profile family");
    };
    if crate::flowers::distinguished_count(f, fam.profiles()) < 4 {
        return precondition("the flower distinguishes fewer than four members of the family");
    }
    let full = asys.full();
    let imgs: Vec<PSet> = f
        .displayed()
        .into_iter()
        .map(|s| phi(sys, fam, s))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&x| x != 0 && x != full)
        .collect();
    let hits: Vec<usize> = (0..asys.classes().len())
        .filter(|&v| imgs.iter().all(|&x| is_class_union(x, &asys.boundaries()[v]) && asys.contains(x)))
        .collect();
    let [v] = hits.as_slice() else {
        return invariant(format!("the flower's images lie in the closure of {} classes", hits.len()));
    };
    let kind = crate::flowers::classify(sys, f)?;
    let pre = classify_preflower(asys, &asys.classes()[*v])?.kind;
    match (kind, pre) {
        (crate::flowers::FlowerKind::Anemone, PreflowerKind::PreAnemone)
        | (crate::flowers::FlowerKind::Daisy, PreflowerKind::PreDaisy) => Ok(*v),
        (crate::flowers::FlowerKind::Anemone | crate::flowers::FlowerKind::Daisy, _) => {
            invariant(format!("flower is {kind:?} but its class is {pre:?}"))
        }
        _ => precondition(format!("the partition is not a flower ({kind:?})")),
    }
}

fn preimages(asys: &AbstractSystem, r: PSet) -> Result<&[SubsetMask]> {
    match asys.images().get(&r) {
        Some(v) => Ok(v),
        None => input(format!("{r:#x} is not in the image of φ")),
    }
}

/// Preimages p ⊆ q of R ⊆ T, replacing p by p∩q or q by p∪q when the
/// first preimages are not nested.
pub fn nested_preimages(
    sys: &ConnectivitySystem,
    asys: &AbstractSystem,
    r: PSet,
    t: PSet,
) -> Result<(SubsetMask, SubsetMask)> {
    if r & !t != 0 {
        return precondition("R is not contained in T");
    }
    let (p, q) = (preimages(asys, r)?[0], preimages(asys, t)?[0]);
    let k = asys.k();
    let (p, q) = if r == t {
        (p, p)
    } else if p.is_subset_of(q) {
        (p, q)
    } else if sys.order(p.intersection(q)).below(k) {
        (p.intersection(q), q)
    } else if sys.order(p.union(q)).below(k) {
        (p, p.union(q))
    } else {
        return invariant("neither corner of the preimages has order below k");
    };
    let fam = asys.family().expect("images imply a family");
    if !p.is_subset_of(q) || phi(sys, fam, p)? != r || phi(sys, fam, q)? != t {
        return invariant("corner replacement left preimages that are not nested or change images");
    }
    Ok((p, q))
}

/// Largest side with image R: the union of all preimages, which is itself
/// a preimage.
pub fn biggest_preimage(asys: &AbstractSystem, r: PSet) -> Result<SubsetMask> {
    let pre = preimages(asys, r)?;
    let top = pre.iter().fold(SubsetMask::EMPTY, |m, &a| m.union(a));
    if pre.binary_search(&top).is_err() {
        return invariant(format!("the union of the preimages of {r:#x} is not a preimage"));
    }
    Ok(top)
}

/// Smallest side with image R.
pub fn smallest_preimage(asys: &AbstractSystem, r: PSet) -> Result<SubsetMask> {
    let pre = preimages(asys, r)?;
    let full = pre.iter().fold(SubsetMask::EMPTY, |m, &a| m.union(a));
    let bottom = pre.iter().fold(full, |m, &a| m.intersection(a));
    if pre.binary_search(&bottom).is_err() {
        return invariant(format!("the intersection of the preimages of {r:#x} is not a preimage"));
    }
    Ok(bottom)
}

/// φ respects inverses, inclusion and unions: checked on every pair of
/// sides below k, together with corner existence whenever the images
/// meet without covering the family. Returns the number of pairs.
pub fn check_phi_laws(sys: &ConnectivitySystem, fam: &ProfileFamily) -> Result<u64> {
    let k = fam.k();
    let full = sys.full();
    let pfull = pset_full(fam.len());
    let sides = s_k(sys, k);
    let img: BTreeMap<SubsetMask, PSet> = sides.iter().map(|&a| (a, image(fam.profiles(), a.complement(full)))).collect();
    for &a in &sides {
        if img[&a.complement(full)] != pfull & !img[&a] {
            return invariant(format!("φ does not respect the inverse at {a:?}"));
        }
    }
    let bad = sides.par_iter().find_map_any(|&p| {
        sides.iter().find_map(|&q| {
            let (fp, fq) = (img[&p], img[&q]);
            let join = p.union(q);
            let fails = (p.is_subset_of(q) && fp & !fq != 0)
                || img.get(&join).is_some_and(|&fj| fj != fp | fq)
                || (fp & fq != 0 && fp & fq != pfull && !sys.order(join).below(k));
            fails.then_some((p, q))
        })
    });
    if let Some((p, q)) = bad {
        return invariant(format!("φ law fails at {p:?}, {q:?}"));
    }
    Ok((sides.len() * sides.len()) as u64)
}

/// Members of 𝓑 not containing member `i`.
pub fn push_forward(asys: &AbstractSystem, i: usize) -> Vec<PSet> {
    asys.b().iter().copied().filter(|&x| x >> i & 1 == 0).collect()
}

/// Sides below k whose image lies in the orientation or is empty.
pub fn pull_back(asys: &AbstractSystem, orientation: &BTreeSet<PSet>) -> Profile {
    let sides = asys
        .images()
        .iter()
        .filter(|(x, _)| **x == 0 || orientation.contains(x))
        .flat_map(|(_, pre)| pre.iter().copied());
    Profile::from_sides(asys.k(), sides)
}

/// Consistent orientations of the bipartitions `pairs` (one side each)
/// that contain `forced`, optionally with the profile property relative
/// to the member set `universe`. Stops after `limit` results.
pub fn consistent_orientations(
    full: PSet,
    pairs: &[PSet],
    forced: &[PSet],
    universe: Option<&BTreeSet<PSet>>,
    limit: usize,
) -> Vec<Vec<PSet>> {
    fn admits(full: PSet, chosen: &[PSet], x: PSet, universe: Option<&BTreeSet<PSet>>, set: &BTreeSet<PSet>) -> bool {
        if chosen.iter().any(|&y| y | x == full) {
            return false;
        }
        let Some(u) = universe else { return true };
        chosen.iter().chain(std::iter::once(&x)).all(|&y| {
            let un = x | y;
            !(u.contains(&un) && (set.contains(&(full & !un)) || full & !un == x))
        }) && chosen.iter().all(|&y| {
            chosen.iter().all(|&z| {
                let un = y | z;
                !(u.contains(&un) && full & !un == x)
            })
        })
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        full: PSet,
        pairs: &[PSet],
        forced: &BTreeSet<PSet>,
        universe: Option<&BTreeSet<PSet>>,
        limit: usize,
        chosen: &mut Vec<PSet>,
        set: &mut BTreeSet<PSet>,
        out: &mut Vec<Vec<PSet>>,
    ) {
        if out.len() >= limit {
            return;
        }
        let Some((&x, rest)) = pairs.split_first() else {
            let mut o = chosen.clone();
            o.sort_unstable();
            out.push(o);
            return;
        };
        for side in [x, full & !x] {
            if forced.contains(&(full & !side)) || !admits(full, chosen, side, universe, set) {
                continue;
            }
            chosen.push(side);
            set.insert(side);
            go(full, rest, forced, universe, limit, chosen, set, out);
            set.remove(&side);
            chosen.pop();
        }
    }
    let forced: BTreeSet<PSet> = forced.iter().copied().collect();
    let mut out = Vec::new();
    go(full, pairs, &forced, universe, limit, &mut Vec::new(), &mut BTreeSet::new(), &mut out);
    out.sort();
    out
}

/// One side of each bipartition in `members`: the numerically smaller.
pub fn unoriented(full: PSet, members: &[PSet]) -> Vec<PSet> {
    let reps: BTreeSet<PSet> = members.iter().map(|&x| x.min(full & !x)).collect();
    reps.into_iter().collect()
}

/// Profiles of 𝓑: consistent orientations with the profile property.
pub fn b_profiles(asys: &AbstractSystem, limit: usize) -> Vec<Vec<PSet>> {
    let full = asys.full();
    let mut pairs = unoriented(full, asys.b());
    pairs.sort_by_key(|&x| (x.count_ones().min((full & !x).count_ones()), x));
    let universe: BTreeSet<PSet> = asys.b().iter().copied().collect();
    consistent_orientations(full, &pairs, &[], Some(&universe), limit)
}

/// Each member pushes forward to a profile of 𝓑 and pulls back to
/// itself; every profile of 𝓑 pulls back to a regular k-profile with the
/// common truncation. Returns the number of profiles of 𝓑.
pub fn check_profile_correspondence(sys: &ConnectivitySystem, asys: &AbstractSystem, limit: usize) -> Result<usize> {
    let Some(fam) = asys.family() else {
        return precondition("the correspondence needs an abstraction built from a profile family");
    };
    let all = b_profiles(asys, limit);
    let as_sets: BTreeSet<Vec<PSet>> = all.iter().cloned().collect();
    for (i, p) in fam.profiles().iter().enumerate() {
        let fwd = push_forward(asys, i);
        if !as_sets.contains(&fwd) && all.len() < limit {
            return invariant(format!("member {i} does not push forward to a profile of 𝓑"));
        }
        if &pull_back(asys, &fwd.iter().copied().collect()) != p {
            return invariant(format!("member {i} does not survive the round trip"));
        }
    }
    let k = asys.k();
    let base = fam.profiles()[0].truncate(sys, k - 1)?;
    for o in &all {
        let back = pull_back(asys, &o.iter().copied().collect());
        let sides: BTreeSet<SubsetMask> = back.sides().iter().copied().collect();
        if !is_profile(sys, k, &sides) || !back.is_regular() || back.truncate(sys, k - 1)? != base {
            return invariant("a profile of 𝓑 pulls back to something other than a regular k-profile");
        }
    }
    Ok(all.len())
}

/// Every member of 𝓑′ outside a class V has an orientation inside some
/// ∂(V)-class. Returns the number of checks.
pub fn check_boundary_containment(asys: &AbstractSystem) -> Result<u64> {
    let full = asys.full();
    let mut checks = 0;
    for (v, class) in asys.classes().iter().enumerate() {
        for x in asys.b_prime().into_iter().filter(|x| class.binary_search(x).is_err()) {
            let ok = asys.boundaries()[v].iter().any(|&a| x & !a == 0 || (full & !x) & !a == 0);
            if !ok {
                return invariant(format!("member {x:#x} has no orientation inside a boundary class of class {v}"));
            }
            checks += 1;
        }
    }
    Ok(checks)
}
