//! Exhaustive enumerators for small partitions and cyclic orders.

use crate::connsys::SubsetMask;

/// All set partitions of `ground`, blocks ordered by smallest element.
pub fn set_partitions(ground: SubsetMask) -> Vec<Vec<SubsetMask>> {
    let elems: Vec<usize> = ground.iter().collect();
    let mut out = Vec::new();
    let mut blocks: Vec<SubsetMask> = Vec::new();
    fn go(elems: &[usize], blocks: &mut Vec<SubsetMask>, out: &mut Vec<Vec<SubsetMask>>) {
        let Some((&e, rest)) = elems.split_first() else {
            out.push(blocks.clone());
            return;
        };
        for i in 0..blocks.len() {
            blocks[i] = blocks[i].insert(e);
            go(rest, blocks, out);
            blocks[i] = blocks[i].remove(e);
        }
        blocks.push(SubsetMask::singleton(e));
        go(rest, blocks, out);
        blocks.pop();
    }
    go(&elems, &mut blocks, &mut out);
    out
}

/// All orderings of `items`, lexicographic in input positions.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Rings on `0..p` with 0 first: one per rotation class.
pub fn cyclic_orders(p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return vec![vec![]];
    }
    let rest: Vec<usize> = (1..p).collect();
    permutations(&rest)
        .into_iter()
        .map(|mut t| {
            t.insert(0, 0);
            t
        })
        .collect()
}

/// One ring per rotation-and-mirror class.
pub fn cyclic_orders_up_to_mirror(p: usize) -> Vec<Vec<usize>> {
    cyclic_orders(p).into_iter().filter(|r| r.len() < 3 || r[1] < r[r.len() - 1]).collect()
}

/// Ordered set partitions of `ground`: every way to split it into a
/// sequence of nonempty blocks.
pub fn ordered_partitions(ground: SubsetMask) -> Vec<Vec<SubsetMask>> {
    set_partitions(ground)
        .into_iter()
        .flat_map(|blocks| {
            let idx: Vec<usize> = (0..blocks.len()).collect();
            permutations(&idx).into_iter().map(move |perm| perm.iter().map(|&i| blocks[i]).collect::<Vec<_>>())
        })
        .collect()
}
