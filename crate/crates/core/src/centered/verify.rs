use crate::error::{Error, Result};
use crate::graph::{components_marked, connected_components, Graph, VertexKind, VertexSet};
use crate::limits::OracleLimits;
use crate::subsets::mask_connected;

use super::search::{find_violation, Plain, Split};
use super::{Coloring, Palette, SplitColoring, Verdict, Witness};

fn require_p(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    Ok(())
}

/// Decides whether `f` is p-centered on `g`.
///
/// Uses the component refinement search (see the `search` module): only
/// components of color-restricted subgraphs are examined, and only those
/// reachable by dropping colors that are unique or over budget. The witness
/// is the first violating component in that deterministic order.
pub fn is_p_centered(g: &Graph, f: &Coloring, p: usize) -> Result<Verdict> {
    require_p(p)?;
    f.check_for(g)?;
    let start = connected_components(g, &VertexSet::full(g.n()))?;
    Ok(
        match find_violation(g, f.colors(), f.k(), start, &Plain(p)) {
            None => Verdict::Centered,
            Some(set) => Verdict::Violated {
                witness: Witness::violation(f, set),
            },
        },
    )
}

/// The color-subset method taken literally: for every set `S` of used colors
/// with `1 ≤ |S| ≤ p`, in order of size and then lexicographically, every
/// component of the `S`-colored subgraph must contain a unique color. The
/// witness is the first failing component.
pub fn is_p_centered_by_color_subsets(g: &Graph, f: &Coloring, p: usize) -> Result<Verdict> {
    require_p(p)?;
    f.check_for(g)?;
    let used = f.used_colors();
    let mut in_s = vec![false; f.k()];
    let mut inside = vec![false; g.n()];
    let mut count = vec![0u32; f.k()];
    for size in 1..=p.min(used.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            for &i in &idx {
                in_s[used[i]] = true;
            }
            let members: Vec<usize> = (0..g.n()).filter(|&v| in_s[f.color(v)]).collect();
            for &v in &members {
                inside[v] = true;
            }
            for comp in components_marked(g, &members, &mut inside) {
                for &v in &comp {
                    count[f.color(v)] += 1;
                }
                let unique = comp.iter().any(|&v| count[f.color(v)] == 1);
                for &v in &comp {
                    count[f.color(v)] = 0;
                }
                if !unique {
                    return Ok(Verdict::Violated {
                        witness: Witness::violation(f, comp),
                    });
                }
            }
            for &i in &idx {
                in_s[used[i]] = false;
            }
            if !next_combination(&mut idx, used.len()) {
                break;
            }
        }
    }
    Ok(Verdict::Centered)
}

/// Advances `idx` to the next `idx.len()`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The definition applied literally: every connected vertex subset is
/// checked. The witness is the smallest violating set by size, then by
/// lexicographic vertex order.
pub fn is_p_centered_bruteforce(
    g: &Graph,
    f: &Coloring,
    p: usize,
    limits: &OracleLimits,
) -> Result<Verdict> {
    require_p(p)?;
    f.check_for(g)?;
    OracleLimits::check("brute-force verifier", g.n(), limits.vertices.min(63))?;
    let masks = g.neighbor_masks().expect("at most 63 vertices");
    let mut count = vec![0u32; f.k()];
    let mut best: Option<(usize, Vec<usize>)> = None;
    for mask in 1u64..1 << g.n() {
        let size = mask.count_ones() as usize;
        if size < 2 || best.as_ref().is_some_and(|(s, _)| size > *s) {
            continue;
        }
        if !mask_connected(&masks, mask) {
            continue;
        }
        let verts: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
        let mut distinct = 0;
        for &v in &verts {
            let c = f.color(v);
            if count[c] == 0 {
                distinct += 1;
            }
            count[c] += 1;
        }
        let unique = verts.iter().any(|&v| count[f.color(v)] == 1);
        for &v in &verts {
            count[f.color(v)] = 0;
        }
        if !unique && distinct <= p {
            let better = match &best {
                None => true,
                Some((s, b)) => (size, &verts) < (*s, b),
            };
            if better {
                best = Some((size, verts));
            }
        }
    }
    Ok(match best {
        None => Verdict::Centered,
        Some((_, verts)) => Verdict::Violated {
            witness: Witness::violation(f, VertexSet::from_sorted(verts)),
        },
    })
}

/// Moves a coloring of a labeled graph onto two disjoint palettes: color `c`
/// on a root becomes `c` (palette `A1`), on a fresh vertex `k + c` (`A2`).
pub fn split_palette(g: &Graph, f: &Coloring) -> Result<SplitColoring> {
    f.check_for(g)?;
    let labels = g.labels().ok_or(Error::Unlabeled)?;
    let k = f.k();
    let colors = f
        .colors()
        .iter()
        .zip(labels)
        .map(|(&c, kind)| match kind {
            VertexKind::Root => c,
            VertexKind::Fresh => k + c,
        })
        .collect();
    let mut palette = vec![Palette::A1; k];
    palette.resize(2 * k, Palette::A2);
    SplitColoring::new(Coloring::new(2 * k, colors)?, palette)
}

/// Decides the split condition: every connected subgraph sees more than `p1`
/// colors of `A1`, more than `p2` colors of `A2`, or a unique color.
pub fn is_p1p2_centered(g: &Graph, f: &SplitColoring, p1: usize, p2: usize) -> Result<Verdict> {
    f.check_for(g)?;
    let base = f.base();
    let start = connected_components(g, &VertexSet::full(g.n()))?;
    let budget = Split {
        coloring: f,
        p1,
        p2,
    };
    Ok(
        match find_violation(g, base.colors(), base.k(), start, &budget) {
            None => Verdict::Centered,
            Some(set) => Verdict::Violated {
                witness: Witness::violation(base, set),
            },
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{standard, Standard};
    use crate::graph::subdivide;

    fn path(n: usize) -> Graph {
        standard(Standard::Path { n }).unwrap()
    }

    fn col(c: &[usize]) -> Coloring {
        Coloring::from_colors(c.to_vec())
    }

    fn witness_vertices(v: &Verdict) -> Vec<usize> {
        v.witness().unwrap().vertices.as_slice().to_vec()
    }

    #[test]
    fn verdict_examples() {
        assert!(is_p_centered(&path(3), &col(&[1, 2, 1]), 1)
            .unwrap()
            .is_centered());
        let v = is_p_centered(&path(2), &col(&[1, 1]), 1).unwrap();
        assert_eq!(witness_vertices(&v), vec![0, 1]);
        let v = is_p_centered(&path(4), &col(&[1, 2, 1, 2]), 2).unwrap();
        assert_eq!(witness_vertices(&v), vec![0, 1, 2, 3]);
        assert!(is_p_centered(&path(4), &col(&[1, 2, 1, 2]), 1)
            .unwrap()
            .is_centered());
    }

    #[test]
    fn bruteforce_examples() {
        let lim = OracleLimits::default();
        for p in 1..4 {
            assert!(is_p_centered_bruteforce(&path(1), &col(&[3]), p, &lim)
                .unwrap()
                .is_centered());
        }
        let c5 = standard(Standard::Cycle { n: 5 }).unwrap();
        assert!(
            is_p_centered_bruteforce(&c5, &col(&[0, 1, 2, 3, 4]), 5, &lim)
                .unwrap()
                .is_centered()
        );
        let v = is_p_centered_bruteforce(&path(2), &col(&[1, 1]), 1, &lim).unwrap();
        assert_eq!(witness_vertices(&v), vec![0, 1]);
        assert!(is_p_centered_bruteforce(&path(13), &col(&[0; 13]), 1, &lim).is_err());
    }

    #[test]
    fn all_routes_agree_on_p4() {
        let lim = OracleLimits::default();
        let g = path(4);
        for code in 0..81usize {
            let c: Vec<usize> = (0..4).map(|i| code / 3usize.pow(i) % 3).collect();
            let f = Coloring::new(3, c).unwrap();
            for p in 1..=3 {
                let a = is_p_centered(&g, &f, p).unwrap().is_centered();
                let b = is_p_centered_bruteforce(&g, &f, p, &lim)
                    .unwrap()
                    .is_centered();
                let s = is_p_centered_by_color_subsets(&g, &f, p)
                    .unwrap()
                    .is_centered();
                assert_eq!((a, s), (b, b), "{f:?} p={p}");
            }
        }
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            is_p_centered(&path(3), &col(&[0, 1]), 1),
            Err(Error::InvalidColoring(_))
        ));
        assert!(is_p_centered(&path(3), &col(&[0, 1, 0]), 0).is_err());
        assert!(Coloring::new(2, vec![0, 2]).is_err());
    }

    #[test]
    fn split_palette_tags_by_label() {
        let g = subdivide(&path(2), 1).unwrap();
        let s = split_palette(&g, &col(&[0, 0, 0])).unwrap();
        assert_eq!(s.base().colors(), &[0, 0, 1]);
        assert_eq!(s.palette_of(0), Palette::A1);
        assert_eq!(s.palette_of(1), Palette::A2);
        assert_eq!(s.palette_sizes(), (1, 1));

        let roots = subdivide(&path(3), 0).unwrap();
        let s = split_palette(&roots, &Coloring::new(3, vec![0, 1, 2]).unwrap()).unwrap();
        assert!(s
            .base()
            .used_colors()
            .iter()
            .all(|&c| s.palette_of(c) == Palette::A1));
        assert!(s.base().used_count() <= 6);

        assert_eq!(
            split_palette(&path(2), &col(&[0, 0])),
            Err(Error::Unlabeled)
        );
    }

    #[test]
    fn split_condition_examples() {
        // P3 subdivided once: roots 0,1,2; fresh 3 (on 0-1), 4 (on 1-2)
        let g = subdivide(&path(3), 1).unwrap();
        let f = split_palette(&g, &Coloring::new(2, vec![1, 1, 1, 0, 0]).unwrap()).unwrap();
        let v = is_p1p2_centered(&g, &f, 1, 1).unwrap();
        assert_eq!(witness_vertices(&v), vec![0, 1, 2, 3, 4]);

        let edgeless = subdivide(&Graph::edgeless(4), 3).unwrap();
        let f = split_palette(&edgeless, &col(&[0, 0, 1, 1])).unwrap();
        assert!(is_p1p2_centered(&edgeless, &f, 5, 5).unwrap().is_centered());
        assert!(is_p1p2_centered(&edgeless, &f, 0, 0).unwrap().is_centered());
    }

    #[test]
    fn split_condition_subsumed_by_total_budget() {
        // centered at p = p1 + p2 with both budgets covering everything used
        let g = subdivide(&path(3), 1).unwrap();
        let f = Coloring::from_colors(vec![0, 1, 2, 3, 4]);
        assert!(is_p_centered(&g, &f, 5).unwrap().is_centered());
        let s = split_palette(&g, &f).unwrap();
        assert!(is_p1p2_centered(&g, &s, 3, 2).unwrap().is_centered());
    }

    #[test]
    fn split_rejects_inconsistent_palette() {
        let g = subdivide(&path(2), 1).unwrap();
        let bad = SplitColoring::new(
            Coloring::new(2, vec![0, 0, 0]).unwrap(),
            vec![Palette::A1, Palette::A2],
        )
        .unwrap();
        assert!(matches!(
            is_p1p2_centered(&g, &bad, 1, 1),
            Err(Error::InvalidColoring(_))
        ));
    }
}
