//! Refinement search for violating connected sets.
//!
//! Any violating connected set `H` with color set `T` lies inside a
//! component `C` of the subgraph induced by the `T`-colored vertices, and a
//! color unique in `C` would be unique in `H`. So it suffices to examine
//! components of color-restricted subgraphs. Rather than iterating over all
//! color sets `T`, the search starts from the components of the whole graph
//! and refines them:
//!
//! * a color appearing exactly once in a set `D` cannot occur in any
//!   violating `H ⊆ D`, so its vertices are removed and `D` splits into the
//!   components of what is left;
//! * a set with no unique color is a violation if its color profile fits the
//!   budget; otherwise every violating `H ⊆ D` misses at least one of the
//!   over-budget colors, and the search branches on which one.
//!
//! Visited sets are memoized, so every distinct vertex set is examined once.

use std::collections::HashSet;

use crate::graph::{components_marked, Graph, VertexSet};

use super::{Palette, SplitColoring};

/// Color budget of a centeredness condition.
pub(crate) trait Budget {
    /// `None` when a set with the given (sorted, distinct) colors is within
    /// budget; otherwise the colors of which a violating subset must drop
    /// at least one.
    fn excess(&self, present: &[usize]) -> Option<Vec<usize>>;
}

/// At most `p` distinct colors.
pub(crate) struct Plain(pub usize);

impl Budget for Plain {
    fn excess(&self, present: &[usize]) -> Option<Vec<usize>> {
        (present.len() > self.0).then(|| present.to_vec())
    }
}

/// At most `p1` colors of `A1` and at most `p2` of `A2`.
pub(crate) struct Split<'a> {
    pub coloring: &'a SplitColoring,
    pub p1: usize,
    pub p2: usize,
}

impl Budget for Split<'_> {
    fn excess(&self, present: &[usize]) -> Option<Vec<usize>> {
        let (a1, a2): (Vec<usize>, Vec<usize>) = present
            .iter()
            .partition(|&&c| self.coloring.palette_of(c) == Palette::A1);
        if a1.len() > self.p1 {
            Some(a1)
        } else if a2.len() > self.p2 {
            Some(a2)
        } else {
            None
        }
    }
}

/// Returns the first violating set found in deterministic depth-first order
/// (children explored by increasing minimum vertex, branches by increasing
/// color), or `None` if no connected subgraph of `start` violates `budget`.
pub(crate) fn find_violation<B: Budget>(
    g: &Graph,
    colors: &[usize],
    k: usize,
    start: Vec<VertexSet>,
    budget: &B,
) -> Option<VertexSet> {
    let mut count = vec![0u32; k];
    let mut inside = vec![false; g.n()];
    let mut visited: HashSet<VertexSet> = HashSet::new();
    let mut stack: Vec<VertexSet> = Vec::new();
    for s in start.into_iter().rev() {
        if visited.insert(s.clone()) {
            stack.push(s);
        }
    }
    let mut children: Vec<VertexSet> = Vec::new();
    let mut members: Vec<usize> = Vec::new();

    while let Some(set) = stack.pop() {
        for &v in &set {
            count[colors[v]] += 1;
        }
        let mut present: Vec<usize> = set.iter().map(|&v| colors[v]).collect();
        present.sort_unstable();
        present.dedup();
        let has_unique = present.iter().any(|&c| count[c] == 1);

        children.clear();
        if has_unique {
            members.clear();
            members.extend(set.iter().copied().filter(|&v| count[colors[v]] != 1));
            for &v in &members {
                inside[v] = true;
            }
            children.extend(components_marked(g, &members, &mut inside));
        } else {
            match budget.excess(&present) {
                None => return Some(set),
                Some(branch) => {
                    for c in branch {
                        members.clear();
                        members.extend(set.iter().copied().filter(|&v| colors[v] != c));
                        for &v in &members {
                            inside[v] = true;
                        }
                        children.extend(components_marked(g, &members, &mut inside));
                    }
                }
            }
        }
        for &c in &present {
            count[c] = 0;
        }
        for child in children.drain(..).rev() {
            if child.len() >= 2 && visited.insert(child.clone()) {
                stack.push(child);
            }
        }
    }
    None
}
