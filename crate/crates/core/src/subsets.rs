//! Enumeration of connected vertex subsets.

use std::ops::ControlFlow;

use crate::graph::Graph;

/// Calls `visit` once for every connected vertex set of size `1..=max_size`.
///
/// Each set is produced exactly once, as a sorted slice. Sets are generated
/// by growing from their minimum vertex with an exclusive-neighborhood
/// extension rule, so no deduplication is needed.
pub fn for_each_connected_subset<F>(g: &Graph, max_size: usize, mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if max_size == 0 {
        return;
    }
    let n = g.n();
    // 0 = outside, 1 = in subset, 2 = in closed neighborhood of subset
    let mut state = vec![0u8; n];
    let mut sub = Vec::with_capacity(max_size);
    let mut sorted = Vec::with_capacity(max_size);
    for root in 0..n {
        sub.clear();
        sub.push(root);
        let ext: Vec<usize> = g
            .neighbors(root)
            .iter()
            .copied()
            .filter(|&u| u > root)
            .collect();
        if extend(
            g,
            root,
            max_size,
            &mut sub,
            ext,
            &mut state,
            &mut sorted,
            &mut visit,
        )
        .is_break()
        {
            return;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn extend<F>(
    g: &Graph,
    root: usize,
    max_size: usize,
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    state: &mut [u8],
    sorted: &mut Vec<usize>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    sorted.clear();
    sorted.extend_from_slice(sub);
    sorted.sort_unstable();
    visit(sorted)?;
    if sub.len() == max_size {
        return ControlFlow::Continue(());
    }
    // mark N[sub]
    let mut marked = Vec::new();
    for &v in sub.iter() {
        for &x in std::iter::once(&v).chain(g.neighbors(v)) {
            if state[x] == 0 {
                state[x] = 2;
                marked.push(x);
            }
        }
    }
    let mut flow = ControlFlow::Continue(());
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &u in g.neighbors(w) {
            if u > root && state[u] == 0 {
                next.push(u);
            }
        }
        for &x in &marked {
            state[x] = 0;
        }
        sub.push(w);
        flow = extend(g, root, max_size, sub, next, state, sorted, visit);
        sub.pop();
        for &x in &marked {
            state[x] = 2;
        }
        if flow.is_break() {
            break;
        }
    }
    for &x in &marked {
        state[x] = 0;
    }
    flow
}

/// Whether the vertices of `mask` induce a connected subgraph (false for 0).
pub(crate) fn mask_connected(masks: &[u64], mask: u64) -> bool {
    if mask == 0 {
        return false;
    }
    let mut seen = mask & mask.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = masks[v] & mask & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == mask
}

/// Splits `mask` into the vertex masks of its connected components,
/// ordered by lowest vertex.
pub(crate) fn mask_components(masks: &[u64], mut mask: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while mask != 0 {
        let mut comp = mask & mask.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = masks[v] & mask & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        mask &= !comp;
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn collect(g: &Graph, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for_each_connected_subset(g, k, |s| {
            out.push(s.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    fn by_masks(g: &Graph, k: usize) -> BTreeSet<Vec<usize>> {
        let masks = g.neighbor_masks().unwrap();
        (1u64..1 << g.n())
            .filter(|&m| m.count_ones() as usize <= k && mask_connected(&masks, m))
            .map(|m| (0..g.n()).filter(|&i| m >> i & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn matches_mask_enumeration() {
        let graphs = [
            Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap(),
            Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap(),
            Graph::new(6, [(0, 1), (0, 2), (0, 3), (3, 4), (1, 2)]).unwrap(),
            Graph::new(6, (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v)))).unwrap(),
        ];
        for g in &graphs {
            for k in 0..=g.n() {
                let listed = collect(g, k);
                let unique: BTreeSet<_> = listed.iter().cloned().collect();
                assert_eq!(unique.len(), listed.len(), "duplicate set produced");
                assert_eq!(unique, by_masks(g, k));
            }
        }
    }

    #[test]
    fn stops_on_break() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let mut seen = 0;
        for_each_connected_subset(&g, 3, |_| {
            seen += 1;
            ControlFlow::Break(())
        });
        assert_eq!(seen, 1);
    }

    #[test]
    fn mask_components_split() {
        let g = Graph::new(5, [(0, 1), (3, 4)]).unwrap();
        let masks = g.neighbor_masks().unwrap();
        assert_eq!(
            mask_components(&masks, 0b11111),
            vec![0b00011, 0b00100, 0b11000]
        );
    }
}
