use std::ops::ControlFlow;

use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::limits::OracleLimits;
use crate::subsets::for_each_connected_subset;

use super::{Palette, SplitColoring, Witness, WitnessKind};

/// The threat predicate applied to an arbitrary vertex set: if `set` is an
/// `i`-threat (color `i` is the only color appearing exactly once), returns
/// its load, the numbers of distinct `A1` and `A2` colors on it.
/// Connectivity is not checked here.
pub fn threat_load(f: &SplitColoring, set: &[usize], i: usize) -> Option<(usize, usize)> {
    let hist = f.base().histogram(set);
    if hist.get(&i) != Some(&1) || hist.iter().any(|(&c, &m)| m == 1 && c != i) {
        return None;
    }
    let a1 = hist
        .keys()
        .filter(|&&c| f.palette_of(c) == Palette::A1)
        .count();
    Some((a1, hist.len() - a1))
}

/// All connected `i`-threats of load at most `(k1, k2)` with at most
/// `max_size` vertices, sorted by size and then vertex order.
pub fn find_threats(
    g: &Graph,
    f: &SplitColoring,
    i: usize,
    k1: usize,
    k2: usize,
    max_size: usize,
    limits: &OracleLimits,
) -> Result<Vec<Witness>> {
    f.check_for(g)?;
    OracleLimits::check("threat subgraph size", max_size, limits.threat_size)?;
    let mut out = Vec::new();
    if !f.base().colors().contains(&i) {
        return Ok(out);
    }
    for_each_connected_subset(g, max_size, |set| {
        if let Some(load) = threat_load(f, set, i) {
            if load.0 <= k1 && load.1 <= k2 {
                out.push(Witness {
                    kind: WitnessKind::Threat { color: i, load },
                    vertices: VertexSet::from_sorted(set.to_vec()),
                    colors: f.base().histogram(set),
                });
            }
        }
        ControlFlow::Continue(())
    });
    out.sort_by(|a, b| (a.vertices.len(), &a.vertices).cmp(&(b.vertices.len(), &b.vertices)));
    Ok(out)
}
