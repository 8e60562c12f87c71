//! The μ function of an anemone petal and the finest strong refinement.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::{classify, FlowerKind, PetalSet, Pseudoflower};
use crate::connsys::{ConnectivitySystem, Order, SubsetMask};
use crate::error::{input, invariant, precondition, Result};

/// Every union of petals has order at most k−1.
pub fn is_strong(sys: &ConnectivitySystem, f: &Pseudoflower) -> bool {
    let p = f.num_petals();
    (0..1u32 << p).into_par_iter().all(|s| sys.order(f.union_of(s)).below(f.k()))
}

/// At least three petals and every non-trivial petal union of order k−1.
fn is_anemone_like(sys: &ConnectivitySystem, f: &Pseudoflower) -> bool {
    let target = Order::Finite(f.k() - 1);
    f.num_petals() >= 3 && f.all_unions().par_iter().all(|&x| sys.order(x) == target)
}

/// μ(S) = λ(S ∪ R) on subsets S of petal Q, for R the first other petal.
#[derive(Clone, Debug)]
pub struct MuFunction {
    k: u32,
    petal: SubsetMask,
    values: HashMap<SubsetMask, Order>,
}

impl MuFunction {
    /// With `audit`, every admissible reference R (a nonempty union of
    /// other petals with R ∪ Q ≠ E) is checked to give the same values.
    pub fn new(sys: &ConnectivitySystem, host: &Pseudoflower, q: usize, audit: bool) -> Result<MuFunction> {
        if q >= host.num_petals() {
            return input(format!("petal index {q} out of range"));
        }
        if host.k() == 0 || !is_anemone_like(sys, host) {
            return precondition("μ needs an anemone host with at least three petals");
        }
        let petal = host.petal(q);
        let r = host.petal(if q == 0 { 1 } else { 0 });
        let values: HashMap<SubsetMask, Order> = petal.subsets().map(|s| (s, sys.order(s.union(r)))).collect();
        if audit {
            let others: PetalSet = ((1u32 << host.num_petals()) - 1) & !(1 << q);
            for refs in SubsetMask(others).subsets().filter(|&t| !t.is_empty() && t.0 != others) {
                let rr = host.union_of(refs.0);
                if let Some(s) = petal.subsets().find(|&s| sys.order(s.union(rr)) != values[&s]) {
                    return invariant(format!(
                        "μ depends on the reference petals: S = {s:?}, reference {rr:?} gives {} instead of {}",
                        sys.order(s.union(rr)),
                        values[&s]
                    ));
                }
            }
        }
        Ok(MuFunction { k: host.k(), petal, values })
    }

    pub fn petal(&self) -> SubsetMask {
        self.petal
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn mu(&self, s: SubsetMask) -> Result<Order> {
        match self.values.get(&s) {
            Some(&o) => Ok(o),
            None => input("μ is only defined on subsets of its petal"),
        }
    }

    /// Subsets S ⊆ Q with μ(S) = k−1, increasing.
    pub fn low_sets(&self) -> Vec<SubsetMask> {
        let target = Order::Finite(self.k - 1);
        self.petal.subsets().filter(|s| self.values[s] == target).collect()
    }
}

/// Finest partition of petal `q` whose unions are exactly the sets of
/// μ-value k−1; the class of e is Q minus every such set avoiding e.
pub fn petal_refinement(sys: &ConnectivitySystem, host: &Pseudoflower, q: usize) -> Result<Vec<SubsetMask>> {
    let mu = MuFunction::new(sys, host, q, false)?;
    let petal = mu.petal();
    let low = mu.low_sets();
    let classes: BTreeSet<(usize, SubsetMask)> = petal
        .iter()
        .map(|e| {
            let cover = low.iter().filter(|a| !a.contains(e)).fold(SubsetMask::EMPTY, |m, &a| m.union(a));
            let class = petal.difference(cover);
            (class.min_element().unwrap_or(e), class)
        })
        .collect();
    let classes: Vec<SubsetMask> = classes.into_iter().map(|(_, c)| c).collect();
    let covered = classes.iter().fold(SubsetMask::EMPTY, |m, &c| m.union(c));
    let total: usize = classes.iter().map(|c| c.len()).sum();
    if covered != petal || total != petal.len() {
        return invariant("refinement classes do not partition the petal");
    }
    let is_union = |s: SubsetMask| classes.iter().all(|&c| c.is_subset_of(s) || c.intersection(s).is_empty());
    let low: BTreeSet<SubsetMask> = low.into_iter().collect();
    if let Some(s) = petal.subsets().find(|&s| low.contains(&s) != is_union(s)) {
        return invariant(format!("μ(S) = k−1 does not match unions of classes at S = {s:?}"));
    }
    Ok(classes)
}

/// Common refinement of all petal refinements of an anemone with at least
/// k+1 petals; sub-petals stay in their petal's place on the ring,
/// ordered by smallest element.
pub fn maximal_strong_anemone(sys: &ConnectivitySystem, f: &Pseudoflower) -> Result<Pseudoflower> {
    if classify(sys, f)? != FlowerKind::Anemone {
        return precondition("the finest refinement needs an anemone");
    }
    if (f.num_petals() as u32) < f.k() + 1 {
        return precondition(format!("the finest refinement needs at least k+1 = {} petals", f.k() + 1));
    }
    let mut petals = Vec::new();
    for r in 0..f.num_petals() {
        petals.extend(petal_refinement(sys, f, f.at(r))?);
    }
    let refined = Pseudoflower::from_ring(sys, f.k(), petals)?;
    if !is_strong(sys, &refined) {
        return invariant("the common refinement is not a strong pseudoanemone");
    }
    Ok(refined)
}
