//! Decomposition tree whose vertices are the consistent orientations of 𝓔′
//! and whose edges flip a single member.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use super::{
    classify_preflower, consistent_orientations, crosses, pset_members, unoriented, AbstractSystem, PSet,
    PreflowerKind,
};
use crate::cyclic::CyclicOrder;
use crate::error::{invariant, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VertexKind {
    Element,
    Anemone,
    Daisy,
    Simple,
    Empty,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeVertex {
    /// Sides of 𝓔′ pointing towards this vertex, increasing.
    pub orientation: Vec<PSet>,
    /// Members not covered by the orientation.
    pub part: PSet,
    /// Maximal sides of the orientation, then the part as singletons.
    pub partition: Vec<PSet>,
    pub kind: VertexKind,
    /// Class of 𝒱 whose orientation this is.
    pub class: Option<usize>,
}

/// Edge between vertices `a < b`; `side` is the member of `a`'s
/// orientation that `b` flips, the members beyond the edge seen from `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub side: PSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct AbstractTree {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<TreeEdge>,
}

/// Consistent orientations of a nested set of bipartitions with the edges
/// joining orientations that differ in exactly one member. Each member
/// must be induced by exactly one edge.
pub fn orientation_tree(full: PSet, e_prime: &[PSet]) -> Result<(Vec<Vec<PSet>>, Vec<TreeEdge>)> {
    if let Some((x, y)) =
        e_prime.iter().find_map(|&x| e_prime.iter().find(|&&y| crosses(x, y, full)).map(|&y| (x, y)))
    {
        return invariant(format!("𝓔′ is not nested: {x:#x} crosses {y:#x}"));
    }
    let pairs = unoriented(full, e_prime);
    let verts = consistent_orientations(full, &pairs, &[], None, usize::MAX);
    let sets: Vec<BTreeSet<PSet>> = verts.iter().map(|o| o.iter().copied().collect()).collect();
    let mut edges = Vec::new();
    for a in 0..verts.len() {
        for b in a + 1..verts.len() {
            let diff: Vec<PSet> = sets[a].difference(&sets[b]).copied().collect();
            if let [side] = diff.as_slice() {
                edges.push(TreeEdge { a, b, side: *side });
            }
        }
    }
    for &x in &pairs {
        let n = edges.iter().filter(|e| e.side == x || e.side == full & !x).count();
        if n != 1 {
            return invariant(format!("member {x:#x} is induced by {n} edges"));
        }
    }
    if edges.len() + 1 != verts.len() {
        return invariant(format!("{} orientations and {} edges do not form a tree", verts.len(), edges.len()));
    }
    Ok((verts, edges))
}

fn maximal(orientation: &[PSet]) -> Vec<PSet> {
    let mut out: Vec<PSet> =
        orientation.iter().copied().filter(|&x| !orientation.iter().any(|&y| y != x && x & !y == 0)).collect();
    out.sort_by_key(|c| c.trailing_zeros());
    out
}

/// O_V: members of 𝓔′ inside some ∂(V)-class.
fn class_orientation(asys: &AbstractSystem, v: usize) -> Vec<PSet> {
    let d = &asys.boundaries()[v];
    asys.e_prime().iter().copied().filter(|&x| d.iter().any(|&a| x & !a == 0)).collect()
}

/// O_e: members of 𝓔′ not containing member `e`.
fn element_orientation(asys: &AbstractSystem, e: usize) -> Vec<PSet> {
    asys.e_prime().iter().copied().filter(|&x| x >> e & 1 == 0).collect()
}

/// Tree of consistent orientations of 𝓔′ with vertex kinds: ELEMENT for
/// nonempty parts, ANEMONE or DAISY for the orientations of the classes
/// of 𝒱, SIMPLE for at least four maximal sides with a unique extending
/// consistent orientation of 𝓑, EMPTY otherwise.
pub fn build_tree(asys: &AbstractSystem) -> Result<AbstractTree> {
    let full = asys.full();
    let (verts, edges) = orientation_tree(full, asys.e_prime())?;
    let class_orients: Vec<Vec<PSet>> = (0..asys.classes().len()).map(|v| class_orientation(asys, v)).collect();
    let b_pairs = unoriented(full, asys.b());
    let mut vertices = Vec::with_capacity(verts.len());
    for o in verts {
        let covered = o.iter().fold(0, |m, &x| m | x);
        let part = full & !covered;
        let mut partition = maximal(&o);
        partition.extend(pset_members(part).into_iter().map(|i| 1u64 << i));
        let class = class_orients.iter().position(|c| *c == o);
        let kind = if part != 0 {
            VertexKind::Element
        } else if let Some(v) = class {
            match classify_preflower(asys, &asys.classes()[v])?.kind {
                PreflowerKind::PreAnemone => VertexKind::Anemone,
                PreflowerKind::PreDaisy => VertexKind::Daisy,
            }
        } else if partition.len() >= 4 {
            let ext = consistent_orientations(full, &b_pairs, &o, None, 2);
            if ext.len() != 1 {
                return invariant(format!("a vertex of degree {} has {} extending orientations", partition.len(), ext.len()));
            }
            VertexKind::Simple
        } else {
            VertexKind::Empty
        };
        vertices.push(TreeVertex { orientation: o, part, partition, kind, class });
    }
    Ok(AbstractTree { vertices, edges })
}

/// Cyclic order on `d` classes from the two-class unions in 𝓑.
fn pair_cycle(asys: &AbstractSystem, classes: &[PSet]) -> Option<CyclicOrder> {
    let d = classes.len();
    let adj: Vec<Vec<usize>> =
        (0..d).map(|i| (0..d).filter(|&j| j != i && asys.contains(classes[i] | classes[j])).collect()).collect();
    if adj.iter().any(|a| a.len() != 2) {
        return None;
    }
    let mut ring = vec![0];
    let (mut prev, mut cur) = (0, adj[0][0]);
    while cur != 0 && ring.len() <= d {
        ring.push(cur);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        (prev, cur) = (cur, next);
    }
    (ring.len() == d).then(|| CyclicOrder::new(ring).ok()).flatten()
}

/// Which decomposition cases hold at a vertex, from 1 to 4: a nonempty
/// part; no member of 𝓑 splits the partition into two unions of at least
/// two classes each; every such split in 𝓑; or exactly the arc splits of
/// a cyclic order in 𝓑. The last two need at least four classes.
pub fn theorem_cases(asys: &AbstractSystem, v: &TreeVertex) -> Vec<u8> {
    if v.part != 0 {
        return vec![1];
    }
    let p = &v.partition;
    let d = p.len();
    let inner: Vec<u64> = (1u64..(1 << d) - 1).filter(|s| s.count_ones() >= 2 && s.count_ones() as usize <= d - 2).collect();
    let union = |s: u64| (0..d).filter(|i| s >> i & 1 == 1).fold(0, |m, i| m | p[i]);
    let present: Vec<bool> = inner.iter().map(|&s| asys.contains(union(s))).collect();
    let mut cases = Vec::new();
    if !present.iter().any(|&b| b) {
        cases.push(2);
    }
    if d >= 4 && present.iter().all(|&b| b) {
        cases.push(3);
    }
    if d >= 4 {
        if let Some(order) = pair_cycle(asys, p) {
            let arc = |s: u64| order.is_interval(&(0..d).filter(|i| s >> i & 1 == 1).collect());
            if inner.iter().zip(&present).all(|(&s, &b)| b == arc(s)) {
                cases.push(4);
            }
        }
    }
    cases
}

/// Orientations O_X for X a class of 𝒱 or a member of the family are
/// distinct, except for two members separated by no member of 𝓑′.
pub fn check_distinct_orientations(asys: &AbstractSystem) -> Result<usize> {
    let n = asys.n();
    let b_prime = asys.b_prime();
    let mut orients: Vec<(String, Vec<PSet>)> =
        (0..asys.classes().len()).map(|v| (format!("class {v}"), class_orientation(asys, v))).collect();
    orients.extend((0..n).map(|e| (format!("member {e}"), element_orientation(asys, e))));
    let nv = asys.classes().len();
    for i in 0..orients.len() {
        for j in i + 1..orients.len() {
            if orients[i].1 != orients[j].1 {
                continue;
            }
            let both_members = i >= nv && j >= nv;
            let separated = both_members && {
                let (x, y) = (i - nv, j - nv);
                b_prime.iter().any(|&s| (s >> x & 1) != (s >> y & 1))
            };
            if !both_members || separated {
                return invariant(format!("{} and {} induce the same orientation", orients[i].0, orients[j].0));
            }
        }
    }
    Ok(orients.len())
}

impl AbstractTree {
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .map(|v| {
                json!({
                    "kind": v.kind,
                    "part": pset_members(v.part),
                    "partition": v.partition.iter().map(|&x| pset_members(x)).collect::<Vec<_>>(),
                    "class": v.class,
                })
            })
            .collect();
        let edges: Vec<serde_json::Value> =
            self.edges.iter().map(|e| json!({"a": e.a, "b": e.b, "side": pset_members(e.side)})).collect();
        json!({"vertices": vertices, "edges": edges})
    }

    /// Graphviz rendering; edges at a daisy vertex follow its cyclic order.
    pub fn to_dot(&self, asys: &AbstractSystem) -> String {
        let mut out = String::from("graph abstract_tree {\n  node [label=\"\", width=0.25];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let style = match v.kind {
                VertexKind::Element => "shape=circle, style=filled, fillcolor=black",
                VertexKind::Anemone => "shape=doublecircle, color=blue",
                VertexKind::Daisy => "shape=doublecircle, color=green",
                VertexKind::Simple => "shape=circle, color=red",
                VertexKind::Empty => "shape=circle",
            };
            let part = pset_members(v.part).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
            let xlabel = if part.is_empty() { String::new() } else { format!(", xlabel=\"{part}\"") };
            let _ = writeln!(out, "  v{i} [{style}{xlabel}];");
        }
        let full = asys.full();
        let mut emitted = vec![false; self.edges.len()];
        let mut order: Vec<usize> = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let Some(c) = v.class.filter(|_| v.kind == VertexKind::Daisy) else { continue };
            let Ok(ring) = super::boundary_cyclic_order(asys, c) else { continue };
            for &pos in ring.ring() {
                let class = asys.boundaries()[c][pos];
                let hit = self.edges.iter().position(|e| (e.a == i || e.b == i) && edge_class(e, i, full) == class);
                if let Some(e) = hit.filter(|&e| !emitted[e]) {
                    emitted[e] = true;
                    order.push(e);
                }
            }
        }
        order.extend((0..self.edges.len()).filter(|&e| !emitted[e]));
        for e in order {
            let _ = writeln!(out, "  v{} -- v{};", self.edges[e].a, self.edges[e].b);
        }
        out.push_str("}\n");
        out
    }
}

/// Members beyond the edge as seen from vertex `i`.
fn edge_class(e: &TreeEdge, i: usize, full: PSet) -> PSet {
    if e.a == i {
        e.side
    } else {
        full & !e.side
    }
}
