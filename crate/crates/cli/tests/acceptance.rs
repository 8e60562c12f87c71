//! Acceptance run without the test harness so the per-criterion lines
//! always reach stdout; exits nonzero when any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{candidates, extensions, fin, mask, naive_profiles, singletons, small_corpus};
use flowerdeck::abstraction::{
    build_abstract, build_tree, check_distinct_orientations, check_phi_laws, theorem_cases, PSet, VertexKind,
};
use flowerdeck::connsys::{verify, ConnectivitySystem, GroundSet, SubsetMask};
use flowerdeck::corpus;
use flowerdeck::cyclic::CyclicOrder;
use flowerdeck::flowers::enumerate::{cyclic_orders_up_to_mirror, set_partitions};
use flowerdeck::flowers::{
    classify_candidate, is_concatenation, is_strong, maximal_strong_anemone, preceq_a, search_flowers, MuFunction,
};
use flowerdeck::matroid::{
    base_pair_connectivity, check_connectivity_identities, contract_petal, delete_petal, dual_flower_check, Matroid,
};
use flowerdeck::profiles::group_by_truncation;
use flowerdeck::{classify, enumerate_profiles, Error, FlowerKind, Profile, Pseudoflower};

fn anemones(sys: &ConnectivitySystem, limit: usize) -> Vec<Pseudoflower> {
    search_flowers(sys, 4).into_iter().filter(|f| classify(sys, f).unwrap() == FlowerKind::Anemone).take(limit).collect()
}

fn all_unions_below(sys: &ConnectivitySystem, k: u32, blocks: &[SubsetMask]) -> bool {
    (0..1u32 << blocks.len()).all(|s| {
        let u = (0..blocks.len()).filter(|i| s >> i & 1 == 1).fold(SubsetMask::EMPTY, |m, i| m.union(blocks[i]));
        sys.order(u).below(k)
    })
}

/// λ = 1 on proper sets, plus 1 when elements 4 and 5 are separated.
fn pinched() -> ConnectivitySystem {
    let g = GroundSet::new((1..=6).map(|i| i.to_string())).unwrap();
    let full = g.full();
    let pair = SubsetMask::from_elements([3, 4]);
    ConnectivitySystem::from_fn(g, |x| {
        let whole = u32::from(!x.is_empty() && x != full);
        let split = u32::from(!x.intersection(pair).is_empty() && !pair.is_subset_of(x));
        fin(whole + split)
    })
}

fn criterion_1() {
    let mut systems = vec![("Example-A".to_string(), corpus::example_a()), ("C6".to_string(), corpus::c6())];
    systems.extend(corpus::named_matroids().into_iter().map(|(n, m)| (n, ConnectivitySystem::from_matroid(m))));
    for (name, sys) in systems {
        assert!(sys.n() <= 10);
        let start = Instant::now();
        let r = verify(&sys);
        let size = 1u64 << sys.n();
        assert!(r.passed && r.exhaustive, "{name}");
        assert_eq!(r.checked, size + size * (size + 1) / 2, "{name}: not every pair checked");
        assert!(start.elapsed() < Duration::from_secs(10), "{name} took {:?}", start.elapsed());
    }
}

fn criterion_2() {
    let mut systems = 0;
    for n in 1..=5 {
        for seed in 0..6u64 {
            let mut batch = vec![
                corpus::random_cut_function(n, seed),
                corpus::random_hypergraph_cut(n, 4, seed),
                corpus::random_graph_edges(4, n, seed).0,
                ConnectivitySystem::from_matroid(corpus::uniform(seed as usize % (n + 1), n)),
            ];
            if seed == 0 && n >= 3 {
                batch.push(corpus::cycle_edges(n));
            }
            for sys in batch {
                for k in 0..=4 {
                    let got: BTreeSet<Vec<SubsetMask>> =
                        enumerate_profiles(&sys, k).unwrap().iter().map(|p| p.sides().to_vec()).collect();
                    assert_eq!(got, naive_profiles(&sys, k), "n={n} seed={seed} k={k}");
                }
                systems += 1;
            }
        }
    }
    assert!(systems >= 100);
}

fn criterion_3() {
    let sys = corpus::example_a();
    let ps = enumerate_profiles(&sys, 3).unwrap();
    assert_eq!(ps.len(), 6);
    assert!(ps.iter().all(Profile::is_regular));
    let mut checked = 0;
    for (blocks, ring) in candidates(sys.full(), 4) {
        let kind = classify_candidate(&sys, 3, blocks, CyclicOrder::new(ring).unwrap()).unwrap();
        assert_eq!(kind, FlowerKind::Anemone);
        checked += 1;
    }
    assert_eq!(checked, 435);
}

fn criterion_4() {
    let sys = corpus::c6();
    let f = Pseudoflower::new(&sys, 3, singletons(6), CyclicOrder::identity(6)).unwrap();
    assert_eq!(classify(&sys, &f).unwrap(), FlowerKind::Daisy);
    let mut rejected = 0;
    for ring in flowerdeck::flowers::enumerate::cyclic_orders(6) {
        let order = CyclicOrder::new(ring).unwrap();
        if order.same_up_to_mirror(&CyclicOrder::identity(6)) {
            continue;
        }
        match Pseudoflower::new(&sys, 3, singletons(6), order.clone()) {
            Err(Error::NotPseudoflower { interval, side, order: o, .. }) => {
                assert!(order.is_interval(&interval.iter().copied().collect()));
                assert_eq!(SubsetMask::from_elements(interval), side);
                assert_eq!(sys.order(side), o);
                assert!(!o.below(3));
            }
            other => panic!("non-cyclic order accepted: {other:?}"),
        }
        rejected += 1;
    }
    assert_eq!(rejected, 120 - 2);
}

fn criterion_5() {
    let mut flowers = 0;
    for (name, sys) in small_corpus() {
        assert!(sys.n() <= 8);
        for f in search_flowers(&sys, 4) {
            let kind = classify(&sys, &f).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(matches!(kind, FlowerKind::Anemone | FlowerKind::Daisy), "{name}: {kind:?}");
            flowers += 1;
        }
    }
    assert!(flowers > 100);
}

fn criterion_6() {
    let mut systems = small_corpus();
    systems.push(("pinched".into(), pinched()));
    let mut both = [0, 0];
    for (name, sys) in systems {
        let mut hosts = anemones(&sys, 6);
        if name == "pinched" {
            hosts.push(Pseudoflower::from_ring(&sys, 2, vec![
                mask(&sys, &["1"]),
                mask(&sys, &["2"]),
                mask(&sys, &["3"]),
                mask(&sys, &["4", "5", "6"]),
            ])
            .unwrap());
        }
        for f in hosts {
            let k = f.k();
            for i in 0..f.num_petals() {
                // Audit mode recomputes μ from every reference petal.
                let mu = MuFunction::new(&sys, &f, i, true).unwrap_or_else(|e| panic!("{name}: {e}"));
                let q = f.petal(i);
                for s in q.subsets() {
                    let v = mu.mu(s).unwrap();
                    assert!(v >= fin(k - 1), "{name}");
                    assert_eq!(v, mu.mu(q.difference(s)).unwrap(), "{name}");
                    for j in (0..f.num_petals()).filter(|&j| j != i) {
                        assert_eq!(sys.order(s.union(f.petal(j))), v, "{name}");
                    }
                }
                if q.len() < 2 {
                    continue;
                }
                let others: Vec<SubsetMask> = (0..f.num_petals()).filter(|&j| j != i).map(|j| f.petal(j)).collect();
                for parts in set_partitions(q).into_iter().filter(|p| p.len() >= 2) {
                    let mut blocks = others.clone();
                    blocks.extend(parts.iter().copied());
                    let any_order = cyclic_orders_up_to_mirror(blocks.len())
                        .into_iter()
                        .any(|r| Pseudoflower::new(&sys, k, blocks.clone(), CyclicOrder::new(r).unwrap()).is_ok());
                    let strong = all_unions_below(&sys, k, &blocks);
                    let low = parts.iter().all(|&s| mu.mu(s).unwrap() == fin(k - 1));
                    assert_eq!(any_order, strong, "{name}");
                    assert_eq!(strong, low, "{name}");
                    both[low as usize] += 1;
                }
            }
        }
    }
    assert!(both[0] > 0 && both[1] > 0, "{both:?}");
}

fn criterion_7() {
    let mut checked = 0;
    let mut systems = small_corpus();
    systems.push(("U(2,7)".into(), ConnectivitySystem::from_matroid(corpus::uniform(2, 7))));
    for (name, sys) in systems {
        let mut hosts = anemones(&sys, 4);
        if name == "Example-A" {
            let p = |ls: &[&str]| mask(&sys, ls);
            hosts.push(Pseudoflower::from_ring(&sys, 3, vec![p(&["1", "2"]), p(&["3"]), p(&["4"]), p(&["5", "6"])]).unwrap());
        }
        for f in hosts.into_iter().filter(|f| f.num_petals() as u32 > f.k()) {
            let psi = maximal_strong_anemone(&sys, &f).unwrap();
            assert!(is_strong(&sys, &psi) && is_concatenation(&f, &psi), "{name}");
            let fam = enumerate_profiles(&sys, f.k()).unwrap();
            for ext in extensions(&sys, &f) {
                let coarser = psi.petals().iter().all(|c| ext.petals().iter().any(|b| c.is_subset_of(*b)));
                assert!(coarser, "{name}: extension is finer than the maximal strong anemone");
                assert!(preceq_a(&ext, &psi, &fam), "{name}");
                checked += 1;
            }
        }
    }
    assert!(checked > 20);
}

fn corpus_families(max_k: u32) -> Vec<(String, ConnectivitySystem, flowerdeck::ProfileFamily)> {
    let mut out = Vec::new();
    for (name, sys) in small_corpus() {
        for k in 1..=max_k {
            for fam in group_by_truncation(&sys, &enumerate_profiles(&sys, k).unwrap()).unwrap() {
                if (2..=64).contains(&fam.len()) {
                    out.push((format!("{name} k={k}"), sys.clone(), fam));
                }
            }
        }
    }
    out
}

fn criterion_8() {
    let mut pairs = 0;
    for (name, sys, fam) in corpus_families(4) {
        pairs += check_phi_laws(&sys, &fam).unwrap_or_else(|e| panic!("{name}: {e}"));
        let asys = build_abstract(&sys, &fam).unwrap_or_else(|e| panic!("{name}: {e}"));
        let full = asys.full();
        for &x in asys.b() {
            for &y in asys.b() {
                if x & y != 0 && x | y != full {
                    assert!(asys.contains(x & y) && asys.contains(x | y), "{name}: corner of {x:#x}, {y:#x}");
                }
            }
        }
    }
    assert!(pairs > 10_000);
}

fn criterion_9() {
    let sys = corpus::example_a();
    let fam = group_by_truncation(&sys, &enumerate_profiles(&sys, 3).unwrap()).unwrap().remove(0);
    let asys = build_abstract(&sys, &fam).unwrap();
    let tree = build_tree(&asys).unwrap();
    let kinds: Vec<VertexKind> = tree.vertices.iter().map(|v| v.kind).collect();
    assert_eq!(kinds.iter().filter(|&&k| k == VertexKind::Anemone).count(), 1);
    assert_eq!(kinds.iter().filter(|&&k| k == VertexKind::Element).count(), 6);
    assert_eq!(kinds.len(), 7);
    let centre = kinds.iter().position(|&k| k == VertexKind::Anemone).unwrap();
    assert!(tree.edges.iter().all(|e| e.a == centre || e.b == centre));

    let fams = corpus_families(4);
    assert!(fams.len() > 20);
    for (name, sys, fam) in fams {
        let asys = build_abstract(&sys, &fam).unwrap();
        let tree = build_tree(&asys).unwrap_or_else(|e| panic!("{name}: {e}"));
        for v in &tree.vertices {
            assert_eq!(theorem_cases(&asys, v).len(), 1, "{name}: {:?}", v.kind);
        }
        let full = asys.full();
        let pairs: BTreeSet<PSet> = asys.e_prime().iter().map(|&x| x.min(full & !x)).collect();
        for x in &pairs {
            let n = tree.edges.iter().filter(|e| e.side.min(full & !e.side) == *x).count();
            assert_eq!(n, 1, "{name}: member {x:#x}");
        }
        assert_eq!(tree.edges.len(), pairs.len(), "{name}");
        check_distinct_orientations(&asys).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

/// M/C∖D against r(Y∪C) − r(C), and (M/C)* against M*∖C.
fn minor_formulas(m: &Arc<Matroid>) {
    let full = m.full();
    for cd in full.subsets().filter(|&s| s != full) {
        for c in cd.subsets() {
            let d = cd.difference(c);
            let minor = m.minor(c, d).unwrap();
            let dual_side = m.dual().minor(d, c).unwrap();
            for y in full.difference(cd).subsets() {
                let local = m.translate(y, &minor).unwrap();
                assert_eq!(minor.rank(local), m.rank(y.union(c)) - m.rank(c));
                assert_eq!(minor.dual().rank(local), dual_side.rank(local));
            }
        }
    }
}

fn criterion_10() {
    let start = Instant::now();
    let named = [
        ("U(1,5)", corpus::uniform(1, 5)),
        ("U(2,4)", corpus::uniform(2, 4)),
        ("M(C4)", corpus::cycle_matroid(4)),
        ("M(C6)", corpus::cycle_matroid(6)),
    ];
    for (name, m) in &named {
        check_connectivity_identities(m).unwrap_or_else(|e| panic!("{name}: {e}"));
        for x in m.full().subsets() {
            assert_eq!(m.lambda(x), m.dual().lambda(x), "{name}");
            base_pair_connectivity(m, x).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        minor_formulas(m);
    }
    let mut matroids: Vec<(String, Arc<Matroid>)> =
        corpus::named_matroids().into_iter().filter(|(_, m)| m.n() <= 8).collect();
    matroids.push(("U(2,7)".into(), corpus::uniform(2, 7)));
    matroids.push(("M(C7)".into(), corpus::cycle_matroid(7)));
    let mut flowers = 0;
    for (name, m) in &matroids {
        let sys = ConnectivitySystem::from_matroid(m.clone());
        for f in search_flowers(&sys, 5) {
            dual_flower_check(m, &f).unwrap_or_else(|e| panic!("{name}: {e}"));
            for i in 0..f.num_petals() {
                delete_petal(m, &f, i).unwrap_or_else(|e| panic!("{name}: {e}"));
                contract_petal(m, &f, i).unwrap_or_else(|e| panic!("{name}: {e}"));
            }
            flowers += 1;
        }
    }
    assert!(flowers > 100);
    // A daisy needs ten elements; its spoke-rim pairing in W5 is checked directly.
    let w5 = corpus::wheel(5);
    let sys = ConnectivitySystem::from_matroid(w5.clone());
    let petals = (1..=5).map(|i| mask(&sys, &[&format!("s{i}"), &format!("r{i}")])).collect();
    let daisy = Pseudoflower::from_ring(&sys, 3, petals).unwrap();
    let (p, _) = dual_flower_check(&w5, &daisy).unwrap();
    assert!(!p.is_anemone());
    for i in 0..5 {
        delete_petal(&w5, &daisy, i).unwrap();
        contract_petal(&w5, &daisy, i).unwrap();
    }
    assert!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
}

fn run_cli(args: &[&str], jobs: Option<usize>) -> (Option<i32>, Vec<u8>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_flowerdeck"));
    cmd.args(args).env("FLOWERDECK_SEED", "11");
    if let Some(j) = jobs {
        cmd.args(["--jobs", &j.to_string()]);
    }
    let out = cmd.output().expect("binary runs");
    (out.status.code(), out.stdout)
}

fn write_json(dir: &Path, name: &str, value: serde_json::Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_vec_pretty(&value).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn criterion_11() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_json(dir.path(), "a.json", corpus::example_a_json());
    let c = write_json(dir.path(), "c6.json", corpus::c6_json());
    let u = write_json(
        dir.path(),
        "u15.json",
        serde_json::json!({"format": "connsys-v1", "ground": ["a", "b", "c", "d", "e"], "kind": "uniform", "rank": 1, "size": 5}),
    );
    let big = write_json(
        dir.path(),
        "u16.json",
        serde_json::json!({"format": "connsys-v1", "ground": (0..16).map(|i| format!("x{i}")).collect::<Vec<_>>(),
            "kind": "uniform", "rank": 3, "size": 16}),
    );
    let dot = dir.path().join("tree.dot").to_string_lossy().into_owned();
    let singles = r#"[["e0"],["e1"],["e2"],["e3"],["e4"],["e5"]]"#;
    let runs: Vec<Vec<&str>> = vec![
        vec!["verify", &a],
        vec!["verify", &big],
        vec!["profiles", "--k", "3", &a],
        vec!["classify", "--k", "3", "--partition", singles, &c],
        vec!["flower", "--k", "3", "--partition", singles, "--order", "[0,4,2,3,1,5]", &c],
        vec!["refine", "--k", "3", "--audit", "--partition", r#"[["1","2"],["3"],["4"],["5","6"]]"#, &a],
        vec!["abstract", "--k", "3", "--dot", &dot, &a],
        vec!["abstract", "--k", "3", &c],
        vec!["matroid-checks", &u],
    ];
    for args in runs {
        let (code, first) = run_cli(&args, None);
        assert!(code.is_some_and(|c| c <= 1), "{args:?} exited {code:?}");
        let dot_first = std::fs::read(&dot).ok();
        for jobs in [None, Some(1), Some(2), Some(4)] {
            let again = run_cli(&args, jobs);
            assert_eq!(again, (code, first.clone()), "{args:?} with --jobs {jobs:?}");
            assert_eq!(std::fs::read(&dot).ok(), dot_first, "{args:?} DOT output");
        }
    }
}

fn main() {
    let criteria: [(u32, &str, fn()); 11] = [
        (1, "axiom suite", criterion_1),
        (2, "profile oracle equivalence", criterion_2),
        (3, "Example-A reproduction", criterion_3),
        (4, "C6 daisy", criterion_4),
        (5, "flower dichotomy", criterion_5),
        (6, "mu suite", criterion_6),
        (7, "finest refinement", criterion_7),
        (8, "phi homomorphism and corner closure", criterion_8),
        (9, "decomposition conformance", criterion_9),
        (10, "matroid calculus", criterion_10),
        (11, "determinism", criterion_11),
    ];
    let mut failed = Vec::new();
    for (n, name, run) in criteria {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(run)).is_ok();
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} ({name}): {verdict} in {:.2?}", start.elapsed());
        if !ok {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
