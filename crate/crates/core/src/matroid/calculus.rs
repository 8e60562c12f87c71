//! Local connectivity calculus for matroid flowers and class reductions.

use std::sync::Arc;

use serde::Serialize;

use super::Matroid;
use crate::connsys::{ConnectivitySystem, SubsetMask};
use crate::error::{invariant, precondition, Result};
use crate::flowers::{classify, FlowerKind, Pseudoflower};

/// Positions of `x` within the sorted elements of `kept`.
fn project(x: SubsetMask, kept: SubsetMask) -> SubsetMask {
    SubsetMask::from_elements(kept.iter().enumerate().filter(|(_, e)| x.contains(*e)).map(|(j, _)| j))
}

/// Bases B of M|X and B′ of M.X, greedy in ground order, with
/// λ(X) = |B∖B′| − |B′∖B|.
#[derive(Clone, Debug, Serialize)]
pub struct BasePair {
    pub restriction_base: SubsetMask,
    pub contraction_base: SubsetMask,
    pub lambda: u32,
}

pub fn base_pair_connectivity(m: &Arc<Matroid>, x: SubsetMask) -> Result<BasePair> {
    m.ground().check(x)?;
    if x.is_empty() {
        return Ok(BasePair { restriction_base: x, contraction_base: x, lambda: 0 });
    }
    let full = m.full();
    let b = m.greedy_base(x);
    let onto = m.contract(x.complement(full))?;
    let b2_local = onto.greedy_base(onto.full());
    let b2 = SubsetMask::from_elements(x.iter().enumerate().filter(|(j, _)| b2_local.contains(*j)).map(|(_, e)| e));
    let value = b.difference(b2).len() as i64 - b2.difference(b).len() as i64;
    if value != m.lambda(x) as i64 {
        return invariant(format!("base pair gives {value} but λ(X) = {}", m.lambda(x)));
    }
    Ok(BasePair { restriction_base: b, contraction_base: b2, lambda: value as u32 })
}

/// λ_M(C∪D) = λ_{M/C}(D) + λ_{M∖D}(C) on every disjoint pair, and
/// λ_M = λ_{M*} on every subset. Returns the number of checks.
pub fn check_connectivity_identities(m: &Arc<Matroid>) -> Result<u64> {
    let full = m.full();
    let dual = m.dual();
    let mut checks = 0;
    for x in full.subsets() {
        if m.lambda(x) != dual.lambda(x) {
            return invariant(format!("λ differs from the dual at {x:?}"));
        }
        checks += 1;
    }
    for cd in full.subsets() {
        for c in cd.subsets() {
            let d = cd.difference(c);
            if c.is_empty() && d.is_empty() || cd == full {
                continue;
            }
            let mc = m.contract(c)?;
            let md = m.delete(d)?;
            let lhs = m.lambda(cd);
            let rhs = mc.lambda(m.translate(d, &mc)?) + md.lambda(m.translate(c, &md)?);
            if lhs != rhs {
                return invariant(format!("λ(C∪D) = {lhs} but the split gives {rhs} at C = {c:?}, D = {d:?}"));
            }
            checks += 1;
        }
    }
    Ok(checks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlowerParameters {
    pub k: u32,
    /// Local connectivity of adjacent petals.
    pub c: u32,
    /// Local connectivity of non-adjacent petals.
    pub d: u32,
}

impl FlowerParameters {
    pub fn is_anemone(&self) -> bool {
        self.c == self.d
    }
}

/// Every non-trivial interval union has λ_M = k−1.
fn check_intervals(m: &Matroid, f: &Pseudoflower) -> Result<()> {
    let target = f.k().checked_sub(1);
    match f.displayed().into_iter().find(|&x| Some(m.lambda(x)) != target) {
        Some(x) => precondition(format!("interval union {x:?} does not have order k−1")),
        None => Ok(()),
    }
}

/// Local connectivities of petal pairs: `c` for adjacent, `d` otherwise.
fn check_pairs(m: &Matroid, f: &Pseudoflower, c: u32, d: u32) -> Result<()> {
    let p = f.num_petals();
    for r in 0..p {
        for s in r + 1..p {
            let adjacent = s - r == 1 || (r == 0 && s == p - 1);
            let want = if adjacent { c } else { d };
            let got = m.local_conn(f.petal(f.at(r)), f.petal(f.at(s)))?;
            if got != want {
                return invariant(format!("petals at positions {r}, {s} have local connectivity {got}, expected {want}"));
            }
        }
    }
    Ok(())
}

/// The parameters (c, d) of a flower with at least five petals, after
/// checking every pair of petals and every interval against a subset of
/// the remaining petals (d with no neighbour of the interval, 2c−d with
/// both neighbours, c otherwise), and c = d exactly for anemones.
pub fn flower_parameters(m: &Arc<Matroid>, f: &Pseudoflower) -> Result<FlowerParameters> {
    let p = f.num_petals();
    if p < 5 {
        return precondition("flower parameters need at least five petals");
    }
    check_intervals(m, f)?;
    let c = m.local_conn(f.petal(f.at(0)), f.petal(f.at(1)))?;
    let d = m.local_conn(f.petal(f.at(0)), f.petal(f.at(2)))?;
    check_pairs(m, f, c, d)?;
    let both = (2 * c).checked_sub(d);
    for (start, len) in f.order().nontrivial_arcs().filter(|&(_, l)| l <= p - 2) {
        let inner = f.arc_union(start, len);
        let rest: Vec<usize> = (len..p).map(|j| (start + j) % p).collect();
        let (left, right) = ((start + p - 1) % p, (start + len) % p);
        for pick in 1..(1u32 << rest.len()) - 1 {
            let chosen: Vec<usize> = rest.iter().enumerate().filter(|(j, _)| pick >> j & 1 == 1).map(|(_, &r)| r).collect();
            let neighbours = chosen.iter().filter(|&&r| r == left || r == right).count();
            let want = match neighbours {
                0 => Some(d),
                2 => both,
                _ => Some(c),
            };
            let other = chosen.iter().fold(SubsetMask::EMPTY, |u, &r| u.union(f.petal(f.at(r))));
            let got = m.local_conn(inner, other)?;
            if Some(got) != want {
                return invariant(format!(
                    "⊓(S(I′), S(I″)) = {got} but {want:?} expected with {neighbours} neighbouring petals"
                ));
            }
        }
    }
    let kind = classify(&ConnectivitySystem::from_matroid(m.clone()), f)?;
    if (kind == FlowerKind::Anemone) != (c == d) {
        return invariant(format!("flower classifies {kind:?} but c = {c}, d = {d}"));
    }
    Ok(FlowerParameters { k: f.k(), c, d })
}

/// Parameters in M and in M*, checked against c + c* = k−1 and
/// c* − d* = c − d.
pub fn dual_flower_check(m: &Arc<Matroid>, f: &Pseudoflower) -> Result<(FlowerParameters, FlowerParameters)> {
    let primal = flower_parameters(m, f)?;
    let dual = flower_parameters(&m.dual(), f)?;
    let (c, d, cs, ds) = (primal.c as i64, primal.d as i64, dual.c as i64, dual.d as i64);
    if c + cs != f.k() as i64 - 1 || cs - ds != c - d {
        return invariant(format!("dual parameters ({cs}, {ds}) do not match ({c}, {d}) at k = {}", f.k()));
    }
    Ok((primal, dual))
}

/// A petal deletion or contraction with its resulting flower.
#[derive(Clone, Debug)]
pub struct PetalMinor {
    pub matroid: Arc<Matroid>,
    pub flower: Pseudoflower,
    pub params: FlowerParameters,
}

fn petal_minor(m: &Arc<Matroid>, f: &Pseudoflower, i: usize, contract: bool) -> Result<PetalMinor> {
    let params = flower_parameters(m, f)?;
    let p = f.num_petals();
    let pi = f.petal(i);
    let minor = if contract { m.contract(pi)? } else { m.delete(pi)? };
    let kept = m.full().difference(pi);
    let r = f.position(i);
    let mut petals = vec![project(f.petal(f.at(r + p - 1)).union(f.petal(f.at(r + 1))), kept)];
    petals.extend((2..p - 1).map(|j| project(f.petal(f.at(r + j)), kept)));
    let (k, c, d) = if contract {
        (params.k - params.d, params.c - params.d, 0)
    } else {
        (2 * params.c - params.d + 1, params.c, params.d)
    };
    let sys = ConnectivitySystem::from_matroid(minor.clone());
    let flower = match Pseudoflower::from_ring(&sys, k, petals) {
        Ok(g) => g,
        Err(e) => return invariant(format!("petal minor is not a {k}-pseudoflower: {e}")),
    };
    if let Err(e) = check_intervals(&minor, &flower) {
        return invariant(format!("petal minor is not a {k}-flower: {e}"));
    }
    check_pairs(&minor, &flower, c, d)?;
    Ok(PetalMinor { matroid: minor, flower, params: FlowerParameters { k, c, d } })
}

/// M∖P_i with the neighbours of P_i merged: a (2c−d+1)-flower with the
/// same c and d.
pub fn delete_petal(m: &Arc<Matroid>, f: &Pseudoflower, i: usize) -> Result<PetalMinor> {
    petal_minor(m, f, i, false)
}

/// M/P_i with the neighbours of P_i merged: a (k−d)-flower with
/// parameters (c−d, 0).
pub fn contract_petal(m: &Arc<Matroid>, f: &Pseudoflower, i: usize) -> Result<PetalMinor> {
    petal_minor(m, f, i, true)
}

/// N = M/C∖D shrinking X to F with |F| = λ(X).
#[derive(Clone, Debug)]
pub struct ClassReduction {
    pub contracted: SubsetMask,
    pub deleted: SubsetMask,
    pub kept: SubsetMask,
    pub minor: Arc<Matroid>,
    /// Identities checked.
    pub checks: u64,
}

/// B a greedy base of M|X, C ⊆ B a base of M.X, D = X∖B, F = X∖(C∪D).
/// Checks M/X = N/F and M∖X = N∖F on all subsets of E∖X, and λ, ⊓ on
/// all disjoint Y, Z ⊆ E∖X. X must be proper.
pub fn reduce_class(m: &Arc<Matroid>, x: SubsetMask) -> Result<ClassReduction> {
    m.ground().check(x)?;
    let full = m.full();
    if x == full {
        return precondition("the reduced class must leave some element outside it");
    }
    let rest = x.complement(full);
    let b = m.greedy_base(x);
    let local = |e: usize| x.iter().position(|y| y == e).expect("element of X");
    let c = if x.is_empty() {
        x
    } else {
        let onto = m.contract(rest)?;
        b.iter().fold(SubsetMask::EMPTY, |c, e| {
            let trial = c.insert(e);
            if onto.is_independent(SubsetMask::from_elements(trial.iter().map(local))) {
                trial
            } else {
                c
            }
        })
    };
    let d = x.difference(b);
    let f = x.difference(c.union(d));
    if f.len() as u32 != m.lambda(x) {
        return invariant(format!("|F| = {} but λ(X) = {}", f.len(), m.lambda(x)));
    }
    let n = m.minor(c, d)?;
    let kept = full.difference(c.union(d));
    let to_n = |s: SubsetMask| project(s, kept);
    let fx = to_n(f);
    let mut checks = 0u64;
    for s in rest.subsets() {
        let (sn, rm) = (to_n(s), m.rank(s.union(x)) - m.rank(x));
        if rm != n.rank(sn.union(fx)) - n.rank(fx) || m.rank(s) != n.rank(sn) {
            return invariant(format!("minors over X and F disagree at {s:?}"));
        }
        checks += 2;
    }
    for yz in rest.subsets() {
        for y in yz.subsets() {
            let z = yz.difference(y);
            let (yn, zn) = (to_n(y), to_n(z));
            let ok = m.lambda(y) == n.lambda(yn)
                && m.local_conn(y, z)? == n.local_conn(yn, zn)?
                && m.local_conn(z, x.union(y))? == n.local_conn(zn, fx.union(yn))?;
            if !ok {
                return invariant(format!("reduction changes connectivity at Y = {y:?}, Z = {z:?}"));
            }
            checks += 3;
        }
    }
    Ok(ClassReduction { contracted: c, deleted: d, kept: f, minor: n, checks })
}
