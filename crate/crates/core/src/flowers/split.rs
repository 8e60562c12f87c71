//! Dividing one petal of a pseudoflower along a properly crossing side.

use super::{distinguished_count, is_concatenation, Pseudoflower};
use crate::connsys::{ConnectivitySystem, SubsetMask};
use crate::cyclic::CyclicOrder;
use crate::error::{invariant, precondition, Result};
use crate::profiles::{crosses_properly, Profile};

/// Arcs avoiding petal `i` and touching it, as (start, length, ends before i).
fn arcs_beside(f: &Pseudoflower, i: usize) -> Vec<(usize, usize, bool)> {
    let p = f.num_petals();
    let at = f.position(i);
    (1..p)
        .flat_map(|len| [((at + p - len) % p, len, true), ((at + 1) % p, len, false)])
        .collect()
}

/// Splits petal `i` into `P_i ∩ S′` and `P_i ∖ S′`, where S′ combines `a`
/// with an interval T next to `i` that separates two members of `fam`
/// lying on either side of `a`. The part `P_i ∩ S′` is placed next to T.
pub fn split_petal(
    sys: &ConnectivitySystem,
    f: &Pseudoflower,
    i: usize,
    a: SubsetMask,
    fam: &[Profile],
) -> Result<Pseudoflower> {
    sys.ground().check(a)?;
    if i >= f.num_petals() {
        return precondition(format!("petal index {i} out of range"));
    }
    let full = f.full();
    let pi = f.petal(i);
    if !crosses_properly(a, pi, full, fam) {
        return precondition("the side does not cross the petal properly");
    }
    if distinguished_count(f, fam) < 3 {
        return precondition("the pseudoflower distinguishes fewer than three profiles");
    }
    let co_a = a.complement(full);
    let arcs = arcs_beside(f, i);
    let found = fam
        .iter()
        .filter(|p2| p2.contains(a) && p2.contains(pi))
        .flat_map(|p2| fam.iter().filter(|p3| p3.contains(co_a) && p3.contains(pi)).map(move |p3| (p2, p3)))
        .find_map(|(p2, p3)| {
            arcs.iter().find_map(|&(start, len, before)| {
                let t = f.arc_union(start, len);
                (p2.contains(t) != p3.contains(t)).then_some((p2.contains(t), t, before))
            })
        });
    let Some((t_in_p2, t, before)) = found else {
        return invariant("no interval next to the petal separates profiles on both sides of the crossing side");
    };
    let s_prime = if t_in_p2 { t.union(a.intersection(pi)) } else { t.union(pi.difference(a)) };
    let near = pi.intersection(s_prime);
    let far = pi.difference(s_prime);
    if near.is_empty() || far.is_empty() {
        return invariant("the split leaves an empty part");
    }
    let mut petals = f.petals().to_vec();
    petals[i] = near;
    petals.push(far);
    let new_index = petals.len() - 1;
    let mut ring = Vec::with_capacity(petals.len());
    for &x in f.order().ring() {
        match (x == i, before) {
            (true, true) => ring.extend([i, new_index]),
            (true, false) => ring.extend([new_index, i]),
            (false, _) => ring.push(x),
        }
    }
    let split = match Pseudoflower::new(sys, f.k(), petals, CyclicOrder::new(ring)?) {
        Ok(g) => g,
        Err(e) => return invariant(format!("split result is not a pseudoflower: {e}")),
    };
    if !is_concatenation(f, &split) {
        return invariant("the original is not a concatenation of the split result");
    }
    Ok(split)
}
