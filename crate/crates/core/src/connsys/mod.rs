//! Connectivity systems: a finite ground set with a symmetric submodular
//! order function λ into ℕ ∪ {∞}.

mod format;
mod verify;

pub use format::{parse_connsys, parse_connsys_value, ConnsysFile};
pub use verify::{verify, verify_with, Property, VerificationReport, VerifyOptions, Witness};

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, invariant, precondition, Result};
use crate::matroid::Matroid;

pub const MAX_GROUND: usize = 24;

/// Subset of a ground set; bit `i` is element `i` of the ground order.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: usize) -> SubsetMask {
        debug_assert!(n <= 32);
        if n == 32 {
            SubsetMask(u32::MAX)
        } else {
            SubsetMask((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> SubsetMask {
        SubsetMask(1 << i)
    }

    pub fn from_elements(elems: impl IntoIterator<Item = usize>) -> SubsetMask {
        SubsetMask(elems.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    pub fn difference(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    pub fn insert(self, i: usize) -> SubsetMask {
        SubsetMask(self.0 | 1 << i)
    }

    pub fn remove(self, i: usize) -> SubsetMask {
        SubsetMask(self.0 & !(1 << i))
    }

    /// Complement relative to `full`.
    pub fn complement(self, full: SubsetMask) -> SubsetMask {
        SubsetMask(full.0 & !self.0)
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            Some(i as usize)
        })
    }

    /// All subsets of `self`, in increasing numeric order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        let m = self.0;
        let mut cur = Some(0u32);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == m { None } else { Some(((c | !m).wrapping_add(1)) & m) };
            Some(SubsetMask(c))
        })
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Value of λ: a natural number or infinity. `Finite(_) < Infinite`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub const ZERO: Order = Order::Finite(0);

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(v) => Some(v),
            Order::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }

    /// `self < k`, the membership test for S_k.
    pub fn below(self, k: u32) -> bool {
        matches!(self, Order::Finite(v) if v < k)
    }
}

impl Add for Order {
    type Output = Order;
    fn add(self, rhs: Order) -> Order {
        match (self, rhs) {
            (Order::Finite(a), Order::Finite(b)) => {
                a.checked_add(b).map_or(Order::Infinite, Order::Finite)
            }
            _ => Order::Infinite,
        }
    }
}

impl From<u32> for Order {
    fn from(v: u32) -> Order {
        Order::Finite(v)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(v) => s.serialize_u32(*v),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Order, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Order::Finite(v)),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "∞") => Ok(Order::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad order value {t:?}"))),
        }
    }
}

/// Ordered, duplicate-free list of element labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<GroundSet> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return input("ground set must be nonempty");
        }
        if labels.len() > MAX_GROUND {
            return input(format!("ground set has {} elements, at most {MAX_GROUND} supported", labels.len()));
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return input(format!("duplicate ground label {l:?}"));
            }
        }
        Ok(GroundSet { labels, index })
    }

    /// Labels `prefix0 .. prefix{n-1}`.
    pub fn numbered(prefix: &str, n: usize) -> Result<GroundSet> {
        GroundSet::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask::full(self.len())
    }

    pub fn mask<S: AsRef<str>>(&self, labels: &[S]) -> Result<SubsetMask> {
        let mut m = SubsetMask::EMPTY;
        for l in labels {
            match self.index_of(l.as_ref()) {
                Some(i) => m = m.insert(i),
                None => return input(format!("unknown label {:?}", l.as_ref())),
            }
        }
        Ok(m)
    }

    /// Labels of `m` in ground order.
    pub fn labels_of(&self, m: SubsetMask) -> Vec<String> {
        m.iter().map(|i| self.labels[i].clone()).collect()
    }

    pub fn check(&self, m: SubsetMask) -> Result<()> {
        if m.is_subset_of(self.full()) {
            Ok(())
        } else {
            input(format!("mask {:#x} is wider than the ground set of size {}", m.0, self.len()))
        }
    }
}

/// Graph whose edges form the ground set; λ(X) counts vertices incident
/// with an edge of X and an edge of E∖X.
#[derive(Clone, Debug)]
pub struct EdgeGraph {
    pub vertex_labels: Vec<String>,
    /// Endpoints of ground element `i`.
    pub ends: Vec<(usize, usize)>,
}

impl EdgeGraph {
    fn boundary(&self, x: SubsetMask) -> u32 {
        let mut inside = vec![false; self.vertex_labels.len()];
        let mut outside = vec![false; self.vertex_labels.len()];
        for (i, &(u, v)) in self.ends.iter().enumerate() {
            let side = if x.contains(i) { &mut inside } else { &mut outside };
            side[u] = true;
            side[v] = true;
        }
        inside.iter().zip(&outside).filter(|(a, b)| **a && **b).count() as u32
    }
}

#[derive(Clone, Debug)]
pub enum Backend {
    /// Full table indexed by mask; not necessarily symmetric.
    Table(Arc<Vec<Order>>),
    Graph(Arc<EdgeGraph>),
    Matroid(Arc<Matroid>),
}

#[derive(Clone, Debug)]
pub struct ConnectivitySystem {
    ground: GroundSet,
    backend: Backend,
}

impl ConnectivitySystem {
    /// Table system from a full table of length 2^n; no axiom is enforced.
    pub fn from_table(ground: GroundSet, table: Vec<Order>) -> Result<Self> {
        if table.len() != 1usize << ground.len() {
            return input(format!("table has {} entries, expected {}", table.len(), 1usize << ground.len()));
        }
        Ok(ConnectivitySystem { ground, backend: Backend::Table(Arc::new(table)) })
    }

    /// Table system from a function evaluated once per mask.
    pub fn from_fn(ground: GroundSet, f: impl Fn(SubsetMask) -> Order) -> Self {
        let table = (0..1u32 << ground.len()).map(|m| f(SubsetMask(m))).collect();
        ConnectivitySystem { ground, backend: Backend::Table(Arc::new(table)) }
    }

    /// Graph-edges system; `edges[i]` holds the endpoints of ground element `i`.
    pub fn from_graph(ground: GroundSet, vertex_labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.len() != ground.len() {
            return input("graph must have exactly one edge per ground element");
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u.max(v) >= vertex_labels.len()) {
            return input(format!("edge endpoint out of range: ({u}, {v})"));
        }
        let g = EdgeGraph { vertex_labels, ends: edges };
        Ok(ConnectivitySystem { ground, backend: Backend::Graph(Arc::new(g)) })
    }

    /// λ_M(X) = r(X) + r(E∖X) − r(E).
    pub fn from_matroid(m: Arc<Matroid>) -> Self {
        ConnectivitySystem { ground: m.ground().clone(), backend: Backend::Matroid(m) }
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

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn matroid(&self) -> Option<&Arc<Matroid>> {
        match &self.backend {
            Backend::Matroid(m) => Some(m),
            _ => None,
        }
    }

    pub fn lambda(&self, x: SubsetMask) -> Result<Order> {
        self.ground.check(x)?;
        Ok(self.order(x))
    }

    /// λ without the width check; `x` must lie within the ground set.
    pub fn order(&self, x: SubsetMask) -> Order {
        debug_assert!(x.is_subset_of(self.full()));
        match &self.backend {
            Backend::Table(t) => t[x.0 as usize],
            Backend::Graph(g) => Order::Finite(g.boundary(x)),
            Backend::Matroid(m) => Order::Finite(m.lambda(x)),
        }
    }

    /// λ of every mask, indexed by mask.
    pub fn table(&self) -> Vec<Order> {
        use rayon::prelude::*;
        match &self.backend {
            Backend::Table(t) => t.as_ref().clone(),
            _ => (0..1u32 << self.n()).into_par_iter().map(|m| self.order(SubsetMask(m))).collect(),
        }
    }

    /// Copy of this system as a table system with one entry replaced.
    pub fn with_entry(&self, x: SubsetMask, value: Order) -> Result<Self> {
        self.ground.check(x)?;
        let mut t = self.table();
        t[x.0 as usize] = value;
        ConnectivitySystem::from_table(self.ground.clone(), t)
    }

    /// Subset Y ⊆ X with λ(Y) ≥ k and |Y| ≤ k.
    ///
    /// Elements are dropped in ground order while λ stays ≥ k, until no
    /// single removal keeps λ ≥ k. For such a minimal Y with |Y| > k the
    /// prefix telescoping λ(Y_{i−1}) ≥ λ(Y_i) exhibits a removable element,
    /// so this only fails when λ is not submodular.
    pub fn small_witness(&self, x: SubsetMask, k: u32) -> Result<SubsetMask> {
        self.ground.check(x)?;
        let kk = Order::Finite(k);
        if self.order(x) < kk {
            return precondition(format!("λ(X) = {} < k = {k}", self.order(x)));
        }
        let mut y = x;
        loop {
            let before = y;
            for e in y.iter() {
                if self.order(y.remove(e)) >= kk {
                    y = y.remove(e);
                }
            }
            if y == before {
                break;
            }
        }
        if y.len() > k as usize {
            let elems: Vec<usize> = y.iter().collect();
            let mut prefix = SubsetMask::EMPTY;
            for &e in &elems[..elems.len() - 1] {
                let next = prefix.insert(e);
                if self.order(prefix) >= self.order(next) {
                    return invariant(format!(
                        "submodularity fails: λ({:?}) < k although λ({:?}) ≥ λ({:?})",
                        y.remove(e),
                        prefix,
                        next
                    ));
                }
                prefix = next;
            }
            return invariant(format!("minimal witness {y:?} has more than {k} elements"));
        }
        Ok(y)
    }

    /// Greedy maximal Z with Y ⊆ Z ⊆ X and λ(Z) ≤ λ(Y).
    pub fn extend_low_order(&self, y: SubsetMask, x: SubsetMask) -> Result<SubsetMask> {
        self.ground.check(x)?;
        self.ground.check(y)?;
        if !y.is_subset_of(x) {
            return input("extend_low_order requires Y ⊆ X");
        }
        let bound = self.order(y);
        let mut z = y;
        loop {
            let before = z;
            for e in x.difference(z).iter() {
                if self.order(z.insert(e)) <= bound {
                    z = z.insert(e);
                }
            }
            if z == before {
                return Ok(z);
            }
        }
    }
}
