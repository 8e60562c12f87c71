#![allow(dead_code)]

use std::collections::BTreeSet;

use flowerdeck::connsys::{ConnectivitySystem, SubsetMask};
use flowerdeck::corpus;
use flowerdeck::flowers::enumerate::{cyclic_orders_up_to_mirror, set_partitions};
use flowerdeck::{Order, Pseudoflower};

pub fn mask(sys: &ConnectivitySystem, labels: &[&str]) -> SubsetMask {
    sys.ground().mask(labels).expect("known labels")
}

pub fn singletons(n: usize) -> Vec<SubsetMask> {
    (0..n).map(SubsetMask::singleton).collect()
}

pub fn fin(x: u32) -> Order {
    Order::Finite(x)
}

/// Profiles by brute force: every orientation of the separations below k,
/// kept when it is down-closed within S_k and never contains the
/// complement of the union of two of its members.
pub fn naive_profiles(sys: &ConnectivitySystem, k: u32) -> BTreeSet<Vec<SubsetMask>> {
    let full = sys.full();
    let below = |x: SubsetMask| sys.order(x).below(k);
    let pairs: Vec<SubsetMask> = (0..1u32 << sys.n()).map(SubsetMask).filter(|x| !x.contains(0) && below(*x)).collect();
    assert!(pairs.len() <= 20, "naive oracle is exponential in |S_k|");
    let mut out = BTreeSet::new();
    for choice in 0u64..1 << pairs.len() {
        let sides: Vec<SubsetMask> = pairs
            .iter()
            .enumerate()
            .map(|(i, &x)| if choice >> i & 1 == 1 { x.complement(full) } else { x })
            .collect();
        let set: BTreeSet<SubsetMask> = sides.iter().copied().collect();
        let down_closed = sides.iter().all(|&a| {
            a.subsets().filter(|&b| below(b)).all(|b| set.contains(&b))
        });
        let profile = sides.iter().all(|&a| {
            sides.iter().all(|&b| {
                let u = a.union(b);
                !below(u) || !set.contains(&u.complement(full))
            })
        });
        if down_closed && profile {
            let mut v = sides;
            v.sort();
            out.insert(v);
        }
    }
    out
}

/// Systems on at most eight elements used by the exhaustive theorem checks.
pub fn small_corpus() -> Vec<(String, ConnectivitySystem)> {
    let mut out = vec![
        ("Example-A".to_string(), corpus::example_a()),
        ("C6".to_string(), corpus::c6()),
        ("C5".to_string(), corpus::cycle_edges(5)),
        ("C7".to_string(), corpus::cycle_edges(7)),
        ("U(1,5)".to_string(), ConnectivitySystem::from_matroid(corpus::uniform(1, 5))),
        ("U(2,6)".to_string(), ConnectivitySystem::from_matroid(corpus::uniform(2, 6))),
        ("M(C6)".to_string(), ConnectivitySystem::from_matroid(corpus::cycle_matroid(6))),
        ("M(K4)".to_string(), ConnectivitySystem::from_matroid(corpus::k4())),
        ("M(W4)".to_string(), ConnectivitySystem::from_matroid(corpus::wheel(4))),
    ];
    for seed in 0..3 {
        out.push((format!("cut 6/{seed}"), corpus::random_cut_function(6, seed)));
        out.push((format!("hypergraph 7/{seed}"), corpus::random_hypergraph_cut(7, 6, seed)));
        out.push((format!("graph 5x7/{seed}"), corpus::random_graph_edges(5, 7, seed).0));
    }
    out
}

/// Every partition with at least `min` blocks under every cyclic order up
/// to rotation and mirroring.
pub fn candidates(full: SubsetMask, min: usize) -> Vec<(Vec<SubsetMask>, Vec<usize>)> {
    set_partitions(full)
        .into_iter()
        .filter(|b| b.len() >= min)
        .flat_map(|b| cyclic_orders_up_to_mirror(b.len()).into_iter().map(move |r| (b.clone(), r)))
        .collect()
}

/// Pseudoflowers of every order k that extend `f`: partitions refining
/// its petals in any cyclic order that concatenates to it.
pub fn extensions(sys: &ConnectivitySystem, f: &Pseudoflower) -> Vec<Pseudoflower> {
    use flowerdeck::cyclic::CyclicOrder;
    use flowerdeck::flowers::is_concatenation;
    let mut out = Vec::new();
    for blocks in set_partitions(sys.full()) {
        if !blocks.iter().all(|b| f.petals().iter().any(|p| b.is_subset_of(*p))) {
            continue;
        }
        for ring in flowerdeck::flowers::enumerate::cyclic_orders(blocks.len()) {
            let Ok(g) = Pseudoflower::new(sys, f.k(), blocks.clone(), CyclicOrder::new(ring).unwrap()) else { continue };
            if is_concatenation(f, &g) {
                out.push(g);
            }
        }
    }
    out
}
