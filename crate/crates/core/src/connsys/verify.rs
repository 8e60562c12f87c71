use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{ConnectivitySystem, Order, SubsetMask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Symmetry,
    Submodularity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub property: Property,
    pub a: SubsetMask,
    pub b: SubsetMask,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub witnesses: Vec<Witness>,
    pub exhaustive: bool,
    /// Symmetry checks plus submodularity pairs examined.
    pub checked: u64,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Largest n checked over all pairs; larger systems are sampled.
    pub exhaustive_limit: usize,
    pub sample_budget: u64,
    pub seed: u64,
    /// Witnesses kept per property.
    pub max_witnesses: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { exhaustive_limit: 14, sample_budget: 1 << 22, seed: 0, max_witnesses: 8 }
    }
}

pub fn verify(sys: &ConnectivitySystem) -> VerificationReport {
    verify_with(sys, &VerifyOptions::default())
}

fn submodular_at(t: &[Order], a: u32, b: u32) -> bool {
    t[a as usize] + t[b as usize] >= t[(a | b) as usize] + t[(a & b) as usize]
}

/// Symmetry on every mask; submodularity on every unordered pair when
/// n ≤ `exhaustive_limit`, otherwise on `sample_budget` random pairs.
/// Witnesses come in increasing (A, B) mask order.
pub fn verify_with(sys: &ConnectivitySystem, opts: &VerifyOptions) -> VerificationReport {
    let n = sys.n();
    let full = sys.full().0;
    let t = sys.table();
    let size = 1u32 << n;
    let cap = opts.max_witnesses;

    let mut witnesses: Vec<Witness> = (0..size)
        .filter(|&a| t[a as usize] != t[(full & !a) as usize])
        .take(cap)
        .map(|a| Witness { property: Property::Symmetry, a: SubsetMask(a), b: SubsetMask(full & !a) })
        .collect();
    let mut checked = size as u64;

    let exhaustive = n <= opts.exhaustive_limit;
    if exhaustive {
        let per_a: Vec<Vec<u32>> = (0..size)
            .into_par_iter()
            .map(|a| (a..size).filter(|&b| !submodular_at(&t, a, b)).take(cap).collect())
            .collect();
        let mut found = 0;
        'outer: for (a, bs) in per_a.into_iter().enumerate() {
            for b in bs {
                if found == cap {
                    break 'outer;
                }
                witnesses.push(Witness { property: Property::Submodularity, a: SubsetMask(a as u32), b: SubsetMask(b) });
                found += 1;
            }
        }
        checked += size as u64 * (size as u64 + 1) / 2;
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut fails: Vec<(u32, u32)> = (0..opts.sample_budget)
            .map(|_| {
                let a = rng.gen_range(0..size);
                let b = rng.gen_range(0..size);
                (a.min(b), a.max(b))
            })
            .filter(|&(a, b)| !submodular_at(&t, a, b))
            .collect();
        fails.sort_unstable();
        fails.dedup();
        witnesses.extend(fails.into_iter().take(cap).map(|(a, b)| Witness {
            property: Property::Submodularity,
            a: SubsetMask(a),
            b: SubsetMask(b),
        }));
        checked += opts.sample_budget;
    }

    VerificationReport { passed: witnesses.is_empty(), witnesses, exhaustive, checked }
}
