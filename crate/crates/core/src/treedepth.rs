//! Exact treedepth for small graphs.

use std::collections::HashMap;

use crate::error::Result;
use crate::graph::Graph;
use crate::limits::OracleLimits;
use crate::subsets::mask_components;

/// Minimum height of an elimination forest of `g`, by the recursion
/// `td(G) = max over components`, `td(connected G) = 1 + min_v td(G - v)`,
/// memoized on vertex subsets. The empty graph has treedepth 0.
pub fn treedepth_exact(g: &Graph, limits: &OracleLimits) -> Result<usize> {
    OracleLimits::check("treedepth oracle", g.n(), limits.vertices.min(64))?;
    let masks = g.neighbor_masks().expect("at most 64 vertices");
    let full = if g.n() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n()) - 1
    };
    let mut memo = HashMap::new();
    Ok(td(&masks, full, &mut memo))
}

fn td(masks: &[u64], set: u64, memo: &mut HashMap<u64, usize>) -> usize {
    if set == 0 {
        return 0;
    }
    if set.count_ones() == 1 {
        return 1;
    }
    if let Some(&d) = memo.get(&set) {
        return d;
    }
    let comps = mask_components(masks, set);
    let depth = if comps.len() > 1 {
        comps
            .into_iter()
            .map(|c| td(masks, c, memo))
            .max()
            .unwrap_or(0)
    } else {
        let mut best = usize::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            best = best.min(1 + td(masks, set & !(1 << v), memo));
        }
        best
    };
    memo.insert(set, depth);
    depth
}
