//! k-profiles: consistent orientations of S_k = {A : λ(A) < k} with the
//! profile property.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::connsys::{ConnectivitySystem, GroundSet, SubsetMask};
use crate::error::{invariant, precondition, Result};
use crate::flowers::Pseudoflower;
use crate::seps::side_labels;

/// Decision depth at which enumeration fans out to parallel workers.
const SPLIT_DEPTH: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    k: u32,
    /// Chosen sides, sorted by mask.
    sides: Vec<SubsetMask>,
}

impl Profile {
    /// Wraps sides without checking the profile axioms.
    pub fn from_sides(k: u32, sides: impl IntoIterator<Item = SubsetMask>) -> Profile {
        let mut sides: Vec<SubsetMask> = sides.into_iter().collect();
        sides.sort_unstable();
        sides.dedup();
        Profile { k, sides }
    }

    /// Sides not containing element `e`, restricted to S_k.
    pub fn principal(sys: &ConnectivitySystem, k: u32, e: usize) -> Profile {
        Profile::from_sides(k, s_k(sys, k).into_iter().filter(|a| !a.contains(e)))
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn sides(&self) -> &[SubsetMask] {
        &self.sides
    }

    pub fn contains(&self, side: SubsetMask) -> bool {
        self.sides.binary_search(&side).is_ok()
    }

    pub fn is_regular(&self) -> bool {
        self.k == 0 || self.contains(SubsetMask::EMPTY)
    }

    /// Restriction to S_l.
    pub fn truncate(&self, sys: &ConnectivitySystem, l: u32) -> Result<Profile> {
        if l > self.k {
            return precondition(format!("cannot truncate a {}-profile to order {l}", self.k));
        }
        Ok(Profile { k: l, sides: self.sides.iter().copied().filter(|&a| sys.order(a).below(l)).collect() })
    }

    /// Sorted label lists of the chosen sides.
    pub fn to_json(&self, ground: &GroundSet) -> Vec<Vec<String>> {
        let mut v: Vec<Vec<String>> = self.sides.iter().map(|&a| side_labels(ground, a)).collect();
        v.sort();
        v
    }
}

/// S_k, in increasing mask order.
pub fn s_k(sys: &ConnectivitySystem, k: u32) -> Vec<SubsetMask> {
    (0..1u32 << sys.n()).map(SubsetMask).filter(|&a| sys.order(a).below(k)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Require strong consistency, which forces ∅ into every profile.
    pub regular_only: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { regular_only: true }
    }
}

/// All regular k-profiles, sorted by their sorted side lists.
pub fn enumerate_profiles(sys: &ConnectivitySystem, k: u32) -> Result<Vec<Profile>> {
    enumerate_profiles_with(sys, k, EnumOptions::default())
}

struct Search<'a> {
    full: SubsetMask,
    vars: &'a [SubsetMask],
    regular: bool,
}

struct State {
    chosen: Vec<SubsetMask>,
    inside: Vec<bool>,
}

impl Search<'_> {
    /// Whether adding `a` to the current orientation keeps it consistent
    /// and keeps the profile property.
    fn admits(&self, st: &State, a: SubsetMask) -> bool {
        let full = self.full;
        if self.regular && a == full {
            return false;
        }
        if st.chosen.iter().any(|&x| x.union(a) == full) {
            return false;
        }
        let in_o = |z: SubsetMask| z == a || st.inside[z.0 as usize];
        if st.chosen.iter().chain(std::iter::once(&a)).any(|&y| in_o(a.union(y).complement(full))) {
            return false;
        }
        let co = a.complement(full);
        let below: Vec<SubsetMask> = st.chosen.iter().copied().filter(|x| x.is_subset_of(co)).collect();
        !below.iter().enumerate().any(|(i, x)| below[i..].iter().any(|y| x.union(*y) == co))
    }

    fn push(&self, st: &mut State, a: SubsetMask) {
        st.inside[a.0 as usize] = true;
        st.chosen.push(a);
    }

    fn pop(&self, st: &mut State) {
        let a = st.chosen.pop().expect("pop on empty orientation");
        st.inside[a.0 as usize] = false;
    }

    /// Completions of `st` over `vars[from..]`.
    fn run(&self, st: &mut State, from: usize) -> Vec<Vec<SubsetMask>> {
        let m = self.vars.len();
        let mut out = Vec::new();
        let mut next = vec![0u8; m + 1];
        let mut i = from;
        loop {
            if i == m {
                out.push(st.chosen.clone());
                if i == from {
                    break;
                }
                i -= 1;
                self.pop(st);
                continue;
            }
            if next[i] == 2 {
                next[i] = 0;
                if i == from {
                    break;
                }
                i -= 1;
                self.pop(st);
                continue;
            }
            let a = if next[i] == 0 { self.vars[i] } else { self.vars[i].complement(self.full) };
            next[i] += 1;
            if self.admits(st, a) {
                self.push(st, a);
                i += 1;
            }
        }
        out
    }

    /// Consistent partial orientations of the first `depth` variables.
    fn prefixes(&self, depth: usize) -> Vec<Vec<SubsetMask>> {
        let mut partial: Vec<Vec<SubsetMask>> = vec![vec![]];
        for &v in &self.vars[..depth] {
            let mut next = Vec::new();
            for p in partial {
                let mut st = self.state_from(&p);
                for a in [v, v.complement(self.full)] {
                    if self.admits(&st, a) {
                        self.push(&mut st, a);
                        next.push(st.chosen.clone());
                        self.pop(&mut st);
                    }
                }
            }
            partial = next;
        }
        partial
    }

    fn state_from(&self, chosen: &[SubsetMask]) -> State {
        let mut inside = vec![false; self.full.0 as usize + 1];
        for a in chosen {
            inside[a.0 as usize] = true;
        }
        State { chosen: chosen.to_vec(), inside }
    }
}

/// Backtracking over unoriented separations sorted by (order, canonical
/// side), pruning on consistency and the profile property.
pub fn enumerate_profiles_with(sys: &ConnectivitySystem, k: u32, opts: EnumOptions) -> Result<Vec<Profile>> {
    let full = sys.full();
    let mut vars: Vec<SubsetMask> = Vec::new();
    for a in (0..1u32 << sys.n()).map(SubsetMask).filter(|a| !a.contains(0)) {
        let (oa, ob) = (sys.order(a), sys.order(a.complement(full)));
        if oa.below(k) != ob.below(k) {
            return invariant(format!("λ is not symmetric at {a:?}"));
        }
        if oa.below(k) {
            vars.push(a);
        }
    }
    vars.sort_by_key(|&a| (sys.order(a), a));
    let search = Search { full, vars: &vars, regular: opts.regular_only };
    let depth = SPLIT_DEPTH.min(vars.len());
    let mut found: Vec<Vec<SubsetMask>> = search
        .prefixes(depth)
        .into_par_iter()
        .flat_map_iter(|p| {
            let mut st = search.state_from(&p);
            search.run(&mut st, depth)
        })
        .collect();
    for f in &mut found {
        f.sort_unstable();
    }
    found.sort();
    Ok(found.into_iter().map(|sides| Profile { k, sides }).collect())
}

/// Direct check of the profile axioms for a set of sides of S_k.
pub fn is_profile(sys: &ConnectivitySystem, k: u32, sides: &BTreeSet<SubsetMask>) -> bool {
    let full = sys.full();
    let sk = s_k(sys, k);
    let orients = sides.iter().all(|&a| sys.order(a).below(k))
        && sk.iter().all(|&a| sides.contains(&a) != sides.contains(&a.complement(full)));
    let consistent = sides.iter().all(|&x| sides.iter().all(|&y| x.union(y) != full));
    let profile = sides.iter().all(|&x| sides.iter().all(|&y| !sides.contains(&x.union(y).complement(full))));
    orients && consistent && profile
}

/// Whether exactly one of `p`, `q` contains `a`.
pub fn distinguishes(sys: &ConnectivitySystem, a: SubsetMask, p: &Profile, q: &Profile) -> Result<bool> {
    sys.ground().check(a)?;
    if !sys.order(a).below(p.k.min(q.k)) {
        return precondition("side has order too high to be oriented by both profiles");
    }
    Ok(p.contains(a) != q.contains(a))
}

/// Where a profile sits relative to a pseudoflower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Location {
    /// The profile contains the complement of this petal.
    Petal(usize),
    /// Ring position of the cut.
    Cut(usize),
}

/// Petal the profile points to, or else the unique cut v with
/// S(x,v) ∈ P for all x ≠ v or S(v,x) ∈ P for all x ≠ v.
pub fn locate(p: &Profile, f: &Pseudoflower) -> Result<Location> {
    let n = f.num_petals();
    if n < 3 {
        return precondition("locating a profile needs at least three petals");
    }
    let full = f.full();
    for (start, len) in f.order().nontrivial_arcs() {
        let side = f.arc_union(start, len);
        if p.contains(side) == p.contains(side.complement(full)) {
            return precondition("the profile does not orient every interval union");
        }
    }
    if let Some(i) = (0..n).find(|&i| p.contains(f.petal(i).complement(full))) {
        return Ok(Location::Petal(i));
    }
    let arc = |from: usize, to: usize| f.arc_union(from, (to + n - from) % n);
    let cuts: Vec<usize> = (0..n)
        .filter(|&v| {
            let others = || (0..n).filter(move |&x| x != v);
            others().all(|x| p.contains(arc(x, v))) || others().all(|x| p.contains(arc(v, x)))
        })
        .collect();
    match cuts.as_slice() {
        [v] => Ok(Location::Cut(*v)),
        _ => invariant(format!("profile sits at {} cuts instead of exactly one", cuts.len())),
    }
}

/// Each of the four orientation pairs of `a` and `b` lies in a common member.
pub fn crosses_properly(a: SubsetMask, b: SubsetMask, full: SubsetMask, fam: &[Profile]) -> bool {
    [a, a.complement(full)].iter().all(|&x| {
        [b, b.complement(full)].iter().all(|&y| fam.iter().any(|p| p.contains(x) && p.contains(y)))
    })
}

/// Distinct k-profiles with a common truncation to k−1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileFamily {
    k: u32,
    profiles: Vec<Profile>,
}

impl ProfileFamily {
    pub fn new(sys: &ConnectivitySystem, profiles: Vec<Profile>) -> Result<ProfileFamily> {
        let Some(first) = profiles.first() else {
            return precondition("a profile family needs at least one member");
        };
        let k = first.k;
        if k == 0 {
            return precondition("a profile family needs k ≥ 1");
        }
        if profiles.iter().any(|p| p.k != k) {
            return precondition("family members have different k");
        }
        let distinct: BTreeSet<&Profile> = profiles.iter().collect();
        if distinct.len() != profiles.len() {
            return precondition("family members must be distinct");
        }
        let base = first.truncate(sys, k - 1)?;
        for p in &profiles {
            if p.truncate(sys, k - 1)? != base {
                return precondition("family members have different truncations");
            }
        }
        Ok(ProfileFamily { k, profiles })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

/// Families of equal truncation, ordered by truncation.
pub fn group_by_truncation(sys: &ConnectivitySystem, profiles: &[Profile]) -> Result<Vec<ProfileFamily>> {
    let mut groups: BTreeMap<Profile, Vec<Profile>> = BTreeMap::new();
    for p in profiles {
        if p.k == 0 {
            continue;
        }
        groups.entry(p.truncate(sys, p.k - 1)?).or_default().push(p.clone());
    }
    groups.into_values().map(|ps| ProfileFamily::new(sys, ps)).collect()
}
