mod common;

use std::sync::Arc;

use common::{mask, singletons};
use flowerdeck::connsys::{verify, ConnectivitySystem, GroundSet, SubsetMask};
use flowerdeck::corpus;
use flowerdeck::flowers::search_flowers;
use flowerdeck::matroid::{
    base_pair_connectivity, check_connectivity_identities, contract_petal, delete_petal, dual_flower_check,
    flower_parameters, reduce_class, Field, Matroid,
};
use flowerdeck::{classify, FlowerKind, Pseudoflower};
use num::BigRational;
use proptest::prelude::*;

fn msk(m: &Matroid, labels: &[&str]) -> SubsetMask {
    m.ground().mask(labels).unwrap()
}

/// r(X) = |V| − components of (V, X), by depth-first search.
fn forest_rank(vertices: usize, edges: &[(usize, usize)], x: SubsetMask) -> u32 {
    let mut seen = vec![false; vertices];
    let mut components = 0;
    for s in 0..vertices {
        if seen[s] {
            continue;
        }
        components += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for (_, &(a, b)) in edges.iter().enumerate().filter(|(i, _)| x.contains(*i)) {
                for (u, w) in [(a, b), (b, a)] {
                    if u == v && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
    }
    (vertices - components) as u32
}

/// Rank over GF(2) of columns packed as bit rows.
fn gf2_rank(mut cols: Vec<u32>) -> u32 {
    let mut rank = 0;
    for bit in 0..32 {
        let Some(i) = (rank as usize..cols.len()).find(|&i| cols[i] >> bit & 1 == 1) else { continue };
        cols.swap(rank as usize, i);
        let pivot = cols[rank as usize];
        for (j, c) in cols.iter_mut().enumerate() {
            if j != rank as usize && *c >> bit & 1 == 1 {
                *c ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

fn columns(bits: &[u32], rows: usize) -> Vec<Vec<BigRational>> {
    bits.iter()
        .map(|&b| (0..rows).map(|r| BigRational::from_integer(((b >> r) & 1).into())).collect())
        .collect()
}

/// Matroids on at most eight elements.
fn small_matroids() -> Vec<(String, Arc<Matroid>)> {
    let mut out: Vec<(String, Arc<Matroid>)> =
        corpus::named_matroids().into_iter().filter(|(_, m)| m.n() <= 8).collect();
    out.push(("U(2,6)".into(), corpus::uniform(2, 6)));
    out.push(("U(2,7)".into(), corpus::uniform(2, 7)));
    out.push(("M(C5)".into(), corpus::cycle_matroid(5)));
    out.push(("M(C7)".into(), corpus::cycle_matroid(7)));
    out
}

#[test]
fn rank_examples() {
    let u = corpus::uniform(2, 4);
    assert_eq!(u.rank(msk(&u, &["e0"])), 1);
    assert_eq!(u.rank(msk(&u, &["e0", "e1", "e2"])), 2);
    let c = corpus::cycle_matroid(4);
    assert_eq!(c.rank(c.full()), 3);
    assert_eq!(c.rank(msk(&c, &["e0", "e1", "e2"])), 3);
    let k = corpus::k4();
    // A triangle has rank two, a spanning tree rank three.
    assert_eq!(k.rank(msk(&k, &["01", "02", "12"])), 2);
    assert_eq!(k.rank(msk(&k, &["01", "02", "03"])), 3);
}

#[test]
fn graphic_rank_matches_a_forest_count() {
    let wheel_edges = |n: usize| -> Vec<(usize, usize)> { (1..=n).flat_map(|i| [(0, i), (i, i % n + 1)]).collect() };
    let k4_edges: Vec<(usize, usize)> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
    let cases = [
        (corpus::cycle_matroid(6), 6, (0..6).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>()),
        (corpus::k4(), 4, k4_edges),
        (corpus::wheel(4), 5, wheel_edges(4)),
    ];
    for (m, v, edges) in cases {
        for x in m.full().subsets() {
            assert_eq!(m.rank(x), forest_rank(v, &edges, x), "{x:?}");
        }
    }
}

#[test]
fn uniform_rank_is_truncated_size() {
    for (r, n) in [(0, 3), (1, 5), (2, 4), (3, 6), (5, 5)] {
        let m = corpus::uniform(r, n);
        assert!(m.full().subsets().all(|x| m.rank(x) as usize == x.len().min(r)));
    }
    assert!(Matroid::uniform_n(4, 3).unwrap_err().is_input());
}

#[test]
fn dual_rank_formula() {
    for (name, m) in small_matroids() {
        let d = m.dual();
        let full = m.full();
        for x in full.subsets() {
            let expect = x.len() as i64 - m.rank(full) as i64 + m.rank(x.complement(full)) as i64;
            assert_eq!(d.rank(x) as i64, expect, "{name}");
            assert_eq!(m.lambda(x), d.lambda(x), "{name}");
        }
        assert!(Arc::ptr_eq(&d.dual(), &m));
    }
}

#[test]
fn local_connectivity_examples() {
    let u = corpus::uniform(2, 4);
    assert_eq!(u.local_conn(msk(&u, &["e0"]), msk(&u, &["e1"])).unwrap(), 0);
    assert_eq!(u.local_conn(msk(&u, &["e0", "e1"]), msk(&u, &["e2", "e3"])).unwrap(), 2);
    assert!(u.local_conn(msk(&u, &["e0"]), msk(&u, &["e0"])).unwrap_err().is_input());
    let c = corpus::cycle_matroid(4);
    assert_eq!(c.local_conn(msk(&c, &["e0", "e1"]), msk(&c, &["e2", "e3"])).unwrap(), 1);
}

#[test]
fn base_pair_examples() {
    let u = corpus::uniform(2, 4);
    let x = msk(&u, &["e0", "e1"]);
    let bp = base_pair_connectivity(&u, x).unwrap();
    assert_eq!(bp.lambda, 2);
    assert_eq!(bp.restriction_base, x);
    assert!(bp.contraction_base.is_empty());
    assert_eq!(base_pair_connectivity(&u, SubsetMask::EMPTY).unwrap().lambda, 0);
    assert_eq!(base_pair_connectivity(&u, u.full()).unwrap().lambda, 0);
}

#[test]
fn base_pair_formula_on_every_subset() {
    for (name, m) in small_matroids() {
        for x in m.full().subsets() {
            let bp = base_pair_connectivity(&m, x).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(bp.lambda, m.lambda(x));
            assert!(bp.restriction_base.is_subset_of(x) && bp.contraction_base.is_subset_of(x));
        }
    }
}

#[test]
fn connectivity_identities_hold() {
    for (name, m) in small_matroids().into_iter().filter(|(_, m)| m.n() <= 7) {
        let checks = check_connectivity_identities(&m).unwrap_or_else(|e| panic!("{name}: {e}"));
        let n = m.n() as u32;
        // Every subset, then every split of a nonempty proper C∪D.
        assert_eq!(checks, 2u64.pow(n) + (3u64.pow(n) - 1 - 2u64.pow(n)), "{name}");
    }
}

#[test]
fn matroid_connectivity_systems_verify() {
    for (name, m) in small_matroids() {
        assert!(verify(&ConnectivitySystem::from_matroid(m)).passed, "{name}");
    }
}

#[test]
fn flower_parameter_examples() {
    let u = corpus::uniform(1, 5);
    let sys = ConnectivitySystem::from_matroid(u.clone());
    let f = Pseudoflower::from_ring(&sys, 2, singletons(5)).unwrap();
    let p = flower_parameters(&u, &f).unwrap();
    assert_eq!((p.k, p.c, p.d), (2, 1, 1));
    assert!(p.is_anemone());
    let (_, dual) = dual_flower_check(&u, &f).unwrap();
    assert_eq!((dual.c, dual.d), (0, 0));

    let c6 = corpus::cycle_matroid(6);
    let sys = ConnectivitySystem::from_matroid(c6.clone());
    let f = Pseudoflower::from_ring(&sys, 2, singletons(6)).unwrap();
    let p = flower_parameters(&c6, &f).unwrap();
    assert_eq!((p.c, p.d), (0, 0));

    let four = Pseudoflower::from_ring(&sys, 2, vec![
        mask(&sys, &["e0", "e1"]),
        mask(&sys, &["e2"]),
        mask(&sys, &["e3"]),
        mask(&sys, &["e4", "e5"]),
    ])
    .unwrap();
    assert!(flower_parameters(&c6, &four).is_err());
}

fn w5_daisy() -> (Arc<Matroid>, Pseudoflower) {
    let m = corpus::wheel(5);
    let sys = ConnectivitySystem::from_matroid(m.clone());
    let petals = (1..=5).map(|i| mask(&sys, &[&format!("s{i}"), &format!("r{i}")])).collect();
    (m, Pseudoflower::from_ring(&sys, 3, petals).unwrap())
}

#[test]
fn w5_spoke_rim_pairs_form_a_daisy() {
    let (m, f) = w5_daisy();
    let sys = ConnectivitySystem::from_matroid(m.clone());
    assert_eq!(classify(&sys, &f).unwrap(), FlowerKind::Daisy);
    let p = flower_parameters(&m, &f).unwrap();
    assert_eq!((p.k, p.c, p.d), (3, 1, 0));
    let (_, dual) = dual_flower_check(&m, &f).unwrap();
    assert_eq!((dual.c, dual.d), (1, 0));
    for i in 0..5 {
        let del = delete_petal(&m, &f, i).unwrap();
        assert_eq!((del.params.k, del.params.c, del.params.d), (3, 1, 0));
        assert_eq!(del.flower.num_petals(), 3);
        let con = contract_petal(&m, &f, i).unwrap();
        assert_eq!((con.params.k, con.params.c, con.params.d), (3, 1, 0));
        assert_eq!(con.matroid.n(), 8);
    }
    // The other spoke-rim pairing is a daisy too.
    let other = (1..=5).map(|i| mask(&sys, &[&format!("s{}", i % 5 + 1), &format!("r{i}")])).collect();
    let g = Pseudoflower::from_ring(&sys, 3, other).unwrap();
    assert_eq!(classify(&sys, &g).unwrap(), FlowerKind::Daisy);
}

#[test]
fn petal_minor_examples() {
    let u = corpus::uniform(1, 5);
    let sys = ConnectivitySystem::from_matroid(u.clone());
    let f = Pseudoflower::from_ring(&sys, 2, singletons(5)).unwrap();
    let del = delete_petal(&u, &f, 0).unwrap();
    assert_eq!((del.params.k, del.params.c, del.params.d), (2, 1, 1));
    assert_eq!(del.matroid.ground().labels(), &["e1", "e2", "e3", "e4"]);
    let con = contract_petal(&u, &f, 0).unwrap();
    assert_eq!((con.params.k, con.params.c, con.params.d), (1, 0, 0));
    // The merged petal is the union of the two neighbours.
    let merged = con.matroid.ground().labels_of(con.flower.petal(con.flower.at(0)));
    assert_eq!(merged, vec!["e1".to_string(), "e4".to_string()]);
}

#[test]
fn class_reduction_examples() {
    let c4 = corpus::cycle_matroid(4);
    let x = msk(&c4, &["e0", "e1"]);
    let r = reduce_class(&c4, x).unwrap();
    assert_eq!((r.contracted, r.deleted, r.kept), (msk(&c4, &["e0"]), SubsetMask::EMPTY, msk(&c4, &["e1"])));
    assert!(r.checks > 0);
    assert!(reduce_class(&c4, c4.full()).is_err());
    let u = corpus::uniform(2, 4);
    let ab = msk(&u, &["e0", "e1"]);
    let r = reduce_class(&u, ab).unwrap();
    assert_eq!((r.contracted, r.deleted, r.kept), (SubsetMask::EMPTY, SubsetMask::EMPTY, ab));
    let r = reduce_class(&u, SubsetMask::EMPTY).unwrap();
    assert!(r.contracted.is_empty() && r.deleted.is_empty() && r.kept.is_empty());
    let u = corpus::uniform(2, 5);
    let r = reduce_class(&u, msk(&u, &["e0", "e1", "e2"])).unwrap();
    assert_eq!(r.kept.len(), 2);
    assert_eq!(r.minor.n(), 4);
}

#[test]
fn class_reduction_on_every_proper_subset() {
    for (name, m) in small_matroids().into_iter().filter(|(_, m)| m.n() <= 7) {
        let full = m.full();
        for x in full.subsets().filter(|&x| x != full) {
            let r = reduce_class(&m, x).unwrap_or_else(|e| panic!("{name} {x:?}: {e}"));
            assert_eq!(x.difference(r.contracted.union(r.deleted)).len() as u32, m.lambda(x), "{name}");
        }
    }
}

#[test]
fn exhaustive_flower_search_on_small_matroids() {
    let mut flowers = 0;
    let mut daisies = 0;
    for (name, m) in small_matroids() {
        let sys = ConnectivitySystem::from_matroid(m.clone());
        for f in search_flowers(&sys, 5) {
            let kind = classify(&sys, &f).unwrap();
            let (p, dual) = dual_flower_check(&m, &f).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(p.is_anemone(), kind == FlowerKind::Anemone, "{name}");
            assert_eq!(dual.c + p.c + 1, f.k(), "{name}");
            for i in 0..f.num_petals() {
                delete_petal(&m, &f, i).unwrap_or_else(|e| panic!("{name} delete {i}: {e}"));
                contract_petal(&m, &f, i).unwrap_or_else(|e| panic!("{name} contract {i}: {e}"));
            }
            flowers += 1;
            daisies += usize::from(kind == FlowerKind::Daisy);
        }
    }
    assert!(flowers > 100);
    // Five-petal daisies need more than eight elements.
    assert_eq!(daisies, 0);
}

#[test]
fn field_validation() {
    assert!(Field::prime(4).unwrap_err().is_input());
    assert!(Field::prime(1).is_err());
    assert_eq!(Field::prime(7).unwrap(), Field::Prime(7));
    let g = GroundSet::numbered("e", 2).unwrap();
    let half = vec![vec![BigRational::new(1.into(), 2.into())], vec![BigRational::from_integer(1.into())]];
    assert!(Matroid::linear(g.clone(), Field::prime(2).unwrap(), half.clone()).unwrap_err().is_input());
    assert!(Matroid::linear(g, Field::prime(3).unwrap(), half).is_ok());
}

proptest! {
    #[test]
    fn gf2_backend_matches_bit_elimination(rows in 1usize..=4, bits in prop::collection::vec(0u32..16, 1..=7)) {
        let bits: Vec<u32> = bits.into_iter().map(|b| b & ((1 << rows) - 1)).collect();
        let g = GroundSet::numbered("e", bits.len()).unwrap();
        let m = Matroid::linear(g, Field::prime(2).unwrap(), columns(&bits, rows)).unwrap();
        for x in m.full().subsets() {
            let picked: Vec<u32> = x.iter().map(|i| bits[i]).collect();
            prop_assert_eq!(m.rank(x), gf2_rank(picked));
        }
    }

    #[test]
    fn rational_rank_matches_large_prime(rows in 1usize..=4, bits in prop::collection::vec(0u32..16, 1..=7)) {
        // 0/1 matrices with at most four rows have minors of size at most 3.
        let bits: Vec<u32> = bits.into_iter().map(|b| b & ((1 << rows) - 1)).collect();
        let g = GroundSet::numbered("e", bits.len()).unwrap();
        let q = Matroid::linear(g.clone(), Field::Rational, columns(&bits, rows)).unwrap();
        let p = Matroid::linear(g, Field::prime(1_000_003).unwrap(), columns(&bits, rows)).unwrap();
        for x in q.full().subsets() {
            prop_assert_eq!(q.rank(x), p.rank(x));
        }
    }

    #[test]
    fn minors_follow_the_rank_formulas(n in 3usize..=7, seed in 0u64..200, c in 0u32..128, d in 0u32..128) {
        let m = corpus::random_linear(3, 3, n, seed);
        let full = m.full();
        let c = SubsetMask(c & full.0);
        let d = SubsetMask(d & full.0).difference(c);
        let rest = full.difference(c.union(d));
        prop_assume!(!rest.is_empty());
        let minor = m.minor(c, d).unwrap();
        for y in rest.subsets() {
            let local = m.translate(y, &minor).unwrap();
            prop_assert_eq!(minor.rank(local), m.rank(y.union(c)) - m.rank(c));
        }
    }
}
