//! Color refinement with individualization, shared by the unoriented and
//! the oriented canonical forms.
//!
//! The search enumerates every leaf of the individualization tree (no
//! automorphism pruning), so callers see every automorphism of the input
//! as a pair of leaves with equal encodings. That is what makes zero-graph
//! detection exact.

/// A vertex-colored multigraph seen through out- and in-adjacency lists.
pub(crate) struct ColoredAdjacency<'a> {
    pub colors: Vec<u64>,
    pub out: &'a [Vec<usize>],
    pub inn: &'a [Vec<usize>],
}

fn rank(keys: &[Vec<u64>]) -> Vec<u32> {
    let mut sorted: Vec<&Vec<u64>> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).unwrap() as u32)
        .collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn refine(adj: &ColoredAdjacency, mut colors: Vec<u32>) -> Vec<u32> {
    let n = colors.len();
    let mut cells = distinct(&colors);
    loop {
        if cells == n {
            return colors;
        }
        let keys: Vec<Vec<u64>> = (0..n)
            .map(|v| {
                let mut out: Vec<u64> = adj.out[v].iter().map(|&u| colors[u] as u64).collect();
                out.sort_unstable();
                let mut inn: Vec<u64> = adj.inn[v].iter().map(|&u| colors[u] as u64).collect();
                inn.sort_unstable();
                let mut key = Vec::with_capacity(3 + out.len() + inn.len());
                key.push(colors[v] as u64);
                key.push(out.len() as u64);
                key.extend(out);
                key.push(u64::MAX);
                key.extend(inn);
                key
            })
            .collect();
        let next = rank(&keys);
        let next_cells = distinct(&next);
        colors = next;
        if next_cells == cells {
            return colors;
        }
        cells = next_cells;
    }
}

fn search(adj: &ColoredAdjacency, colors: Vec<u32>, leaves: &mut Vec<Vec<usize>>, limit: usize) {
    let colors = refine(adj, colors);
    let n = colors.len();
    // first non-singleton cell, by color
    let mut counts = vec![0usize; n];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    match (0..n).find(|&c| counts[c] > 1) {
        None => {
            let mut order = vec![0usize; n];
            for (v, &c) in colors.iter().enumerate() {
                order[c as usize] = v;
            }
            leaves.push(order);
        }
        Some(cell) => {
            let members: Vec<usize> = (0..n).filter(|&v| colors[v] as usize == cell).collect();
            for &v in &members {
                if leaves.len() >= limit {
                    return;
                }
                let keys: Vec<Vec<u64>> = (0..n)
                    .map(|u| {
                        let c = colors[u] as u64 * 2;
                        vec![if colors[u] as usize == cell && u != v { c + 1 } else { c }]
                    })
                    .collect();
                search(adj, rank(&keys), leaves, limit);
            }
        }
    }
}

/// All leaf orderings of the search tree: `order[new_position] = old_vertex`.
pub(crate) fn leaf_orderings(adj: &ColoredAdjacency) -> Vec<Vec<usize>> {
    let keys: Vec<Vec<u64>> = adj.colors.iter().map(|&c| vec![c]).collect();
    let mut leaves = Vec::new();
    search(adj, rank(&keys), &mut leaves, usize::MAX);
    leaves
}

/// Parity of the permutation that sorts `items` (all items distinct).
pub(crate) fn sort_parity<T: Ord>(items: &[T]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if items[i] > items[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All permutations of `0..n` paired with their signs, in lexicographic order.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push((perm.clone(), sort_parity(&perm)));
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_of_three() {
        let perms = signed_permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().map(|p| p.1).sum::<i32>(), 0);
        assert_eq!(perms[0], (vec![0, 1, 2], 1));
        assert_eq!(perms[1], (vec![0, 2, 1], -1));
    }

    #[test]
    fn cycle_has_symmetric_leaves() {
        // 4-cycle: 8 automorphisms, all vertices equivalent
        let out = vec![vec![1, 3], vec![0, 2], vec![1, 3], vec![0, 2]];
        let inn = vec![vec![]; 4];
        let adj = ColoredAdjacency { colors: vec![0; 4], out: &out, inn: &inn };
        assert_eq!(leaf_orderings(&adj).len(), 8);
    }
}
