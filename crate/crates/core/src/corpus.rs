//! Named and seeded random instances shared by tests, benchmarks and the
//! command line.

use std::sync::Arc;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::connsys::{ConnectivitySystem, GroundSet, Order, SubsetMask};
use crate::matroid::{Field, Matroid};

/// E = {1..6}, λ = 0 on ∅ and E and 2 elsewhere.
pub fn example_a() -> ConnectivitySystem {
    let ground = GroundSet::new((1..=6).map(|i| i.to_string())).expect("six labels");
    let full = ground.full();
    ConnectivitySystem::from_fn(ground, |x| Order::Finite(if x.is_empty() || x == full { 0 } else { 2 }))
}

/// The `connsys-v1` table file of [`example_a`].
pub fn example_a_json() -> serde_json::Value {
    let labels: Vec<String> = (1..=6).map(|i| i.to_string()).collect();
    json!({
        "format": "connsys-v1",
        "ground": labels,
        "kind": "table",
        "empty": 0,
        "entries": [{"set": labels, "order": 0}],
        "default": 2,
    })
}

/// Edges e0..e{n−1} of the n-cycle on v0..v{n−1}, edge i joining vi and vi+1.
pub fn cycle_edges(n: usize) -> ConnectivitySystem {
    let ground = GroundSet::numbered("e", n).expect("small cycle");
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    ConnectivitySystem::from_graph(ground, vertices, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid cycle")
}

/// The graph-edges system on the 6-cycle.
pub fn c6() -> ConnectivitySystem {
    cycle_edges(6)
}

pub fn c6_json() -> serde_json::Value {
    let edges: Vec<(String, String, String)> =
        (0..6).map(|i| (format!("v{i}"), format!("v{}", (i + 1) % 6), format!("e{i}"))).collect();
    json!({
        "format": "connsys-v1",
        "ground": (0..6).map(|i| format!("e{i}")).collect::<Vec<_>>(),
        "kind": "graph-edges",
        "vertices": (0..6).map(|i| format!("v{i}")).collect::<Vec<_>>(),
        "edges": edges,
    })
}

/// U_{r,n} on e0..e{n−1}.
pub fn uniform(r: usize, n: usize) -> Arc<Matroid> {
    Matroid::uniform_n(r, n).expect("r ≤ n")
}

/// M(C_n) on e0..e{n−1}.
pub fn cycle_matroid(n: usize) -> Arc<Matroid> {
    let ground = GroundSet::numbered("e", n).expect("small cycle");
    Matroid::graphic(ground, n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid cycle")
}

/// M(K_4) on the six edges in lexicographic order of endpoints.
pub fn k4() -> Arc<Matroid> {
    let edges: Vec<(usize, usize)> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
    let ground = GroundSet::new(edges.iter().map(|(u, v)| format!("{u}{v}"))).expect("six edges");
    Matroid::graphic(ground, 4, edges).expect("valid K4")
}

/// M(W_n): hub 0, rim 1..n; ground s1, r1, s2, r2, ... with spoke s_i to
/// rim vertex i and rim edge r_i from i to i+1.
pub fn wheel(n: usize) -> Arc<Matroid> {
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=n {
        labels.push(format!("s{i}"));
        edges.push((0, i));
        labels.push(format!("r{i}"));
        edges.push((i, i % n + 1));
    }
    Matroid::graphic(GroundSet::new(labels).expect("distinct labels"), n + 1, edges).expect("valid wheel")
}

/// Cut function of a random weighted graph on the ground elements:
/// λ(X) is the total weight of edges leaving X.
pub fn random_cut_function(n: usize, seed: u64) -> ConnectivitySystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![vec![0u32; n]; n];
    for (u, row) in w.iter_mut().enumerate() {
        for cell in row.iter_mut().skip(u + 1) {
            if rng.gen_bool(0.5) {
                *cell = rng.gen_range(1..=3);
            }
        }
    }
    let ground = GroundSet::numbered("x", n).expect("small ground");
    ConnectivitySystem::from_fn(ground, |x| {
        let mut total = 0;
        for u in x.iter() {
            for v in (0..n).filter(|&v| !x.contains(v)) {
                total += w[u.min(v)][u.max(v)];
            }
        }
        Order::Finite(total)
    })
}

/// Hypergraph cut function: λ(X) counts random hyperedges meeting both X
/// and its complement.
pub fn random_hypergraph_cut(n: usize, edges: usize, seed: u64) -> ConnectivitySystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = SubsetMask::full(n).0;
    let hyper: Vec<u32> = (0..edges).map(|_| rng.gen_range(1..=full)).collect();
    let ground = GroundSet::numbered("x", n).expect("small ground");
    ConnectivitySystem::from_fn(ground, |x| {
        Order::Finite(hyper.iter().filter(|&&h| h & x.0 != 0 && h & !x.0 != 0).count() as u32)
    })
}

/// Random graph whose `m` edges form the ground set.
pub fn random_graph_edges(vertices: usize, m: usize, seed: u64) -> (ConnectivitySystem, Vec<(usize, usize)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ends: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..vertices), rng.gen_range(0..vertices))).collect();
    let ground = GroundSet::numbered("e", m).expect("small ground");
    let labels = (0..vertices).map(|i| format!("v{i}")).collect();
    (ConnectivitySystem::from_graph(ground, labels, ends.clone()).expect("endpoints in range"), ends)
}

/// Random column matroid over GF(p) with `rows` rows and `n` columns.
pub fn random_linear(p: u64, rows: usize, n: usize, seed: u64) -> Arc<Matroid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns = (0..n)
        .map(|_| (0..rows).map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(0..p)))).collect())
        .collect();
    let ground = GroundSet::numbered("e", n).expect("small ground");
    Matroid::linear(ground, Field::prime(p).expect("prime field"), columns).expect("well-formed columns")
}

/// Matroids of at most ten elements checked by the axiom and calculus
/// suites.
pub fn named_matroids() -> Vec<(String, Arc<Matroid>)> {
    let mut out = vec![
        ("U(1,5)".to_string(), uniform(1, 5)),
        ("U(2,4)".to_string(), uniform(2, 4)),
        ("U(3,6)".to_string(), uniform(3, 6)),
        ("M(C4)".to_string(), cycle_matroid(4)),
        ("M(C6)".to_string(), cycle_matroid(6)),
        ("M(K4)".to_string(), k4()),
        ("M(W3)".to_string(), wheel(3)),
        ("M(W4)".to_string(), wheel(4)),
        ("M(W5)".to_string(), wheel(5)),
    ];
    for seed in 0..3 {
        out.push((format!("GF(2) random {seed}"), random_linear(2, 3, 7, seed)));
        out.push((format!("GF(3) random {seed}"), random_linear(3, 3, 7, 100 + seed)));
    }
    out
}
