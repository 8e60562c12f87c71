//! Matroids as memoized rank oracles, with lazy duals and minors.

mod calculus;
pub mod linalg;

pub use calculus::{
    base_pair_connectivity, check_connectivity_identities, contract_petal, delete_petal, dual_flower_check,
    flower_parameters, reduce_class, BasePair, ClassReduction, FlowerParameters, PetalMinor,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num::BigRational;

use crate::connsys::{GroundSet, SubsetMask};
use crate::error::{input, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    /// GF(p), p prime and at most 2^31.
    Prime(u64),
    Rational,
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if !is_prime || p > 1 << 31 {
            return input(format!("field size {p} is not a prime at most 2^31"));
        }
        Ok(Field::Prime(p))
    }
}

enum Backend {
    LinearModP { p: u64, columns: Vec<Vec<u64>> },
    LinearRational { columns: Vec<Vec<BigRational>> },
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    Uniform { rank: usize },
    Dual(Arc<Matroid>),
    /// `base / contracted` restricted to the base elements listed in `map`.
    Minor { base: Arc<Matroid>, contracted: SubsetMask, map: Vec<usize> },
}

pub struct Matroid {
    ground: GroundSet,
    backend: Backend,
    cache: Mutex<HashMap<u32, u32>>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.backend {
            Backend::LinearModP { p, .. } => format!("linear over GF({p})"),
            Backend::LinearRational { .. } => "linear over Q".into(),
            Backend::Graphic { .. } => "graphic".into(),
            Backend::Uniform { rank } => format!("uniform of rank {rank}"),
            Backend::Dual(_) => "dual".into(),
            Backend::Minor { .. } => "minor".into(),
        };
        f.debug_struct("Matroid").field("kind", &kind).field("ground", &self.ground.labels()).finish()
    }
}

impl Matroid {
    fn wrap(ground: GroundSet, backend: Backend) -> Arc<Matroid> {
        Arc::new(Matroid { ground, backend, cache: Mutex::new(HashMap::new()) })
    }

    pub fn uniform(ground: GroundSet, rank: usize) -> Result<Arc<Matroid>> {
        if rank > ground.len() {
            return input(format!("uniform rank {rank} exceeds size {}", ground.len()));
        }
        Ok(Matroid::wrap(ground, Backend::Uniform { rank }))
    }

    /// `U_{r,n}` on labels `e0 .. e{n-1}`.
    pub fn uniform_n(rank: usize, n: usize) -> Result<Arc<Matroid>> {
        Matroid::uniform(GroundSet::numbered("e", n)?, rank)
    }

    /// Cycle matroid; `edges[i]` holds the endpoints of ground element `i`.
    pub fn graphic(ground: GroundSet, vertices: usize, edges: Vec<(usize, usize)>) -> Result<Arc<Matroid>> {
        if edges.len() != ground.len() {
            return input("graphic matroid needs one edge per ground element");
        }
        if edges.iter().any(|&(u, v)| u.max(v) >= vertices) {
            return input("edge endpoint out of range");
        }
        Ok(Matroid::wrap(ground, Backend::Graphic { vertices, edges }))
    }

    /// Column matroid; `columns[i]` is the vector of ground element `i`.
    pub fn linear(ground: GroundSet, field: Field, columns: Vec<Vec<BigRational>>) -> Result<Arc<Matroid>> {
        if columns.len() != ground.len() {
            return input("linear matroid needs one column per ground element");
        }
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return input("columns have different lengths");
        }
        let backend = match field {
            Field::Rational => Backend::LinearRational { columns },
            Field::Prime(p) => {
                let reduced = columns
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|x| linalg::reduce_mod_p(x, p).ok_or(()))
                            .collect::<std::result::Result<Vec<u64>, ()>>()
                    })
                    .collect::<std::result::Result<Vec<_>, ()>>();
                match reduced {
                    Ok(columns) => Backend::LinearModP { p, columns },
                    Err(()) => return input(format!("an entry has a denominator divisible by {p}")),
                }
            }
        };
        Ok(Matroid::wrap(ground, backend))
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn full(&self) -> SubsetMask {
        self.ground.full()
    }

    pub fn rank(&self, x: SubsetMask) -> u32 {
        debug_assert!(x.is_subset_of(self.full()));
        if let Some(&r) = self.cache.lock().expect("rank cache poisoned").get(&x.0) {
            return r;
        }
        let r = self.compute_rank(x);
        self.cache.lock().expect("rank cache poisoned").insert(x.0, r);
        r
    }

    fn compute_rank(&self, x: SubsetMask) -> u32 {
        match &self.backend {
            Backend::Uniform { rank } => x.len().min(*rank) as u32,
            Backend::LinearModP { p, columns } => {
                linalg::rank_mod_p(x.iter().map(|i| columns[i].as_slice()), *p) as u32
            }
            Backend::LinearRational { columns } => {
                linalg::rank_rational(x.iter().map(|i| columns[i].as_slice())) as u32
            }
            Backend::Graphic { vertices, edges } => {
                let mut parent: Vec<usize> = (0..*vertices).collect();
                fn root(p: &mut [usize], mut v: usize) -> usize {
                    while p[v] != v {
                        p[v] = p[p[v]];
                        v = p[v];
                    }
                    v
                }
                let mut r = 0;
                for i in x.iter() {
                    let (a, b) = (root(&mut parent, edges[i].0), root(&mut parent, edges[i].1));
                    if a != b {
                        parent[a] = b;
                        r += 1;
                    }
                }
                r
            }
            Backend::Dual(m) => {
                let full = m.full();
                x.len() as u32 + m.rank(x.complement(full)) - m.rank(full)
            }
            Backend::Minor { base, contracted, map } => {
                let lifted = SubsetMask::from_elements(x.iter().map(|i| map[i]));
                base.rank(lifted.union(*contracted)) - base.rank(*contracted)
            }
        }
    }

    /// λ(X) = r(X) + r(E∖X) − r(E).
    pub fn lambda(&self, x: SubsetMask) -> u32 {
        let full = self.full();
        self.rank(x) + self.rank(x.complement(full)) - self.rank(full)
    }

    /// ⊓(X, Y) = r(X) + r(Y) − r(X∪Y) for disjoint X, Y.
    pub fn local_conn(&self, x: SubsetMask, y: SubsetMask) -> Result<u32> {
        if !x.intersection(y).is_empty() {
            return input("local connectivity needs disjoint sets");
        }
        Ok(self.rank(x) + self.rank(y) - self.rank(x.union(y)))
    }

    pub fn is_independent(&self, x: SubsetMask) -> bool {
        self.rank(x) as usize == x.len()
    }

    /// Greedy base of M|X in ground order.
    pub fn greedy_base(&self, x: SubsetMask) -> SubsetMask {
        x.iter().fold(SubsetMask::EMPTY, |b, e| if self.is_independent(b.insert(e)) { b.insert(e) } else { b })
    }

    /// r*(X) = |X| − r(E) + r(E∖X); the dual of a dual is the original.
    pub fn dual(self: &Arc<Self>) -> Arc<Matroid> {
        if let Backend::Dual(inner) = &self.backend {
            return inner.clone();
        }
        Matroid::wrap(self.ground.clone(), Backend::Dual(self.clone()))
    }

    /// M / C ∖ D on the remaining elements, labels kept.
    pub fn minor(self: &Arc<Self>, contract: SubsetMask, delete: SubsetMask) -> Result<Arc<Matroid>> {
        self.ground.check(contract)?;
        self.ground.check(delete)?;
        if !contract.intersection(delete).is_empty() {
            return input("contracted and deleted sets overlap");
        }
        let map: Vec<usize> = self.full().difference(contract.union(delete)).iter().collect();
        let ground = GroundSet::new(map.iter().map(|&i| self.ground.label(i).to_string()))?;
        Ok(Matroid::wrap(ground, Backend::Minor { base: self.clone(), contracted: contract, map }))
    }

    /// r_{M/C}(X) = r(X ∪ C) − r(C).
    pub fn contract(self: &Arc<Self>, c: SubsetMask) -> Result<Arc<Matroid>> {
        self.minor(c, SubsetMask::EMPTY)
    }

    pub fn delete(self: &Arc<Self>, d: SubsetMask) -> Result<Arc<Matroid>> {
        self.minor(SubsetMask::EMPTY, d)
    }

    /// Mask in `other`'s ground set with the same labels as `x`.
    pub fn translate(&self, x: SubsetMask, other: &Matroid) -> Result<SubsetMask> {
        other.ground.mask(&self.ground.labels_of(x))
    }
}
