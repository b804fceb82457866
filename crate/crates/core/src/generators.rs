//! Graph constructors: the recursive lower-bound family, its subdivision,
//! G(n, q) random graphs, standard shapes and a small exhaustive corpus.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{subdivide, Graph};
use crate::limits::OracleLimits;

/// Parameters of the recursive family `G_{p,t}` with base size `b` and
/// subdivision length `s` (conventionally `6t`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub p: u32,
    pub t: u32,
    #[serde(rename = "b")]
    pub base_size: u64,
    pub s: u32,
}

impl FamilyParams {
    /// Parameters with the default subdivision length `6t`.
    pub fn new(p: u32, t: u32, base_size: u64) -> Self {
        Self {
            p,
            t,
            base_size,
            s: 6 * t,
        }
    }

    pub fn with_subdivision(mut self, s: u32) -> Self {
        self.s = s;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.base_size < 2 {
            return Err(Error::InvalidParameter(format!(
                "base size must be at least 2, got {}",
                self.base_size
            )));
        }
        Ok(())
    }
}

/// Vertex and edge counts of `G_{p,t}` with base size `b`, without building it.
///
/// `N(π,τ) = N(π−1,τ)·(1 + N(π,τ−1))` and
/// `E(π,τ) = E(π−1,τ) + N(π−1,τ)·(E(π,τ−1) + N(π,τ−1))`, with `N = b`,
/// `E = 0` whenever `π = 0` or `τ = 0`.
pub fn debski_size(params: &FamilyParams) -> (BigUint, BigUint) {
    let (p, t) = (params.p as usize, params.t as usize);
    let b = BigUint::from(params.base_size);
    let mut verts = vec![vec![BigUint::zero(); t + 1]; p + 1];
    let mut edges = vec![vec![BigUint::zero(); t + 1]; p + 1];
    for pi in 0..=p {
        for tau in 0..=t {
            if pi == 0 || tau == 0 {
                verts[pi][tau] = b.clone();
                continue;
            }
            let bottom_n = &verts[pi - 1][tau];
            let attached_n = &verts[pi][tau - 1];
            let n = bottom_n * (BigUint::one() + attached_n);
            let e = &edges[pi - 1][tau] + bottom_n * (&edges[pi][tau - 1] + attached_n);
            verts[pi][tau] = n;
            edges[pi][tau] = e;
        }
    }
    (verts[p][t].clone(), edges[p][t].clone())
}

fn materializable(params: &FamilyParams, limits: &OracleLimits) -> Result<(usize, usize)> {
    params.validate()?;
    let (n, m) = debski_size(params);
    let total = &n + &m * BigUint::from(params.s);
    if total > BigUint::from(limits.materialize) {
        return Err(Error::OverLimit {
            what: "family graph vertex count",
            size: total.to_u128().unwrap_or(u128::MAX),
            limit: limits.materialize as u128,
        });
    }
    Ok((
        n.to_usize().expect("checked"),
        m.to_usize().expect("checked"),
    ))
}

/// Materializes `G_{p,t}`. The ⊥-copy occupies the first ids; the copies
/// attached to its vertices follow in the order of those vertices.
pub fn debski_graph(params: &FamilyParams, limits: &OracleLimits) -> Result<Graph> {
    let (n, m) = materializable(params, limits)?;
    let mut edges = Vec::with_capacity(m);
    let built = build(params.p, params.t, params.base_size as usize, 0, &mut edges);
    debug_assert_eq!(built, n);
    Graph::new(n, edges)
}

/// Appends `G_{pi,tau}` at ids starting from `offset`; returns its size.
fn build(pi: u32, tau: u32, base: usize, offset: usize, edges: &mut Vec<(usize, usize)>) -> usize {
    if pi == 0 || tau == 0 {
        return base;
    }
    let bottom = build(pi - 1, tau, base, offset, edges);
    let mut next = offset + bottom;
    for u in offset..offset + bottom {
        let size = build(pi, tau - 1, base, next, edges);
        edges.extend((next..next + size).map(|w| (u, w)));
        next += size;
    }
    next - offset
}

/// `G_{p,t}` with every edge subdivided `params.s` times.
pub fn debski_subdivided(params: &FamilyParams, limits: &OracleLimits) -> Result<Graph> {
    subdivide(&debski_graph(params, limits)?, params.s as usize)
}

/// Erdős–Rényi graph G(n, q).
///
/// A ChaCha8 stream seeded with `seed` (via `SeedableRng::seed_from_u64`)
/// yields one uniform `f64` in `[0, 1)` per candidate pair, pairs taken in
/// lexicographic order `(0,1), (0,2), …, (n−2,n−1)`; the pair becomes an edge
/// iff its draw is below `q`. Raising `q` under a fixed seed only adds edges.
pub fn gnp(n: usize, q: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {q} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < q {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Named test shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Standard {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Clique {
        n: usize,
    },
    /// Center 0 joined to `leaves` leaves.
    Star {
        leaves: usize,
    },
    /// Row-major `rows × cols` grid.
    Grid {
        rows: usize,
        cols: usize,
    },
}

pub fn standard(kind: Standard) -> Result<Graph> {
    match kind {
        Standard::Path { n } => {
            positive(n)?;
            Graph::new(n, (1..n).map(|i| (i - 1, i)))
        }
        Standard::Cycle { n } => {
            positive(n)?;
            let closing = (n >= 3).then_some((0, n - 1));
            Graph::new(n, (1..n).map(|i| (i - 1, i)).chain(closing))
        }
        Standard::Clique { n } => {
            positive(n)?;
            Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        }
        Standard::Star { leaves } => Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i))),
        Standard::Grid { rows, cols } => {
            positive(rows)?;
            positive(cols)?;
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            Graph::new(rows * cols, edges)
        }
    }
}

fn positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("size must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// One representative per isomorphism class of graphs on `n ≤ 6` vertices.
///
/// Representatives are the graphs whose edge bitmask is minimal over all
/// vertex relabelings, returned in increasing bitmask order.
pub fn nonisomorphic_graphs(n: usize) -> Result<Vec<Graph>> {
    OracleLimits::check("isomorphism-class enumeration", n, 6)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut index = vec![vec![0usize; n]; n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        index[u][v] = i;
        index[v][u] = i;
    }
    let perms = permutations(n);
    let mut out = Vec::new();
    'graphs: for mask in 0u32..1 << pairs.len() {
        for perm in &perms {
            let mut image = 0u32;
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    image |= 1 << index[perm[u]][perm[v]];
                }
            }
            if image < mask {
                continue 'graphs;
            }
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        out.push(Graph::new(n, edges)?);
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut current, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, a, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;

    fn lim() -> OracleLimits {
        OracleLimits::default()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn size_recurrence_examples() {
        assert_eq!(debski_size(&FamilyParams::new(1, 1, 2)), (big(6), big(4)));
        assert_eq!(debski_size(&FamilyParams::new(0, 5, 7)), (big(7), big(0)));
        // N(1,1)=6, E(1,1)=4; N(1,2)=2·7=14, E(1,2)=0+2·(4+6)=20;
        // N(2,1)=6·3=18, E(2,1)=4+6·2=16; N(2,2)=14·19=266, E(2,2)=20+14·(16+18)=496
        assert_eq!(
            debski_size(&FamilyParams::new(2, 2, 2)),
            (big(266), big(496))
        );
        assert_eq!(debski_size(&FamilyParams::new(2, 1, 2)), (big(18), big(16)));
    }

    #[test]
    fn size_is_exact_beyond_u64() {
        let (n, _) = debski_size(&FamilyParams::new(6, 6, 1 << 20));
        assert!(n.bits() > 64);
    }

    #[test]
    fn g11_unfolds_to_two_stars() {
        let g = debski_graph(&FamilyParams::new(1, 1, 2), &lim()).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![(0, 2), (0, 3), (1, 4), (1, 5)]
        );
    }

    #[test]
    fn base_case_is_edgeless() {
        let g = debski_graph(&FamilyParams::new(0, 3, 4), &lim()).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 0));
        let s = debski_subdivided(&FamilyParams::new(0, 2, 3), &lim()).unwrap();
        assert_eq!((s.n(), s.edge_count(), s.root_count()), (3, 0, 3));
    }

    #[test]
    fn materialized_counts_match_recurrence() {
        for p in 0..=3 {
            for t in 0..=3 {
                for b in [2, 3] {
                    let params = FamilyParams::new(p, t, b);
                    let (n, m) = debski_size(&params);
                    match debski_graph(&params, &lim()) {
                        Ok(g) => {
                            assert_eq!(big(g.n() as u64), n, "{params:?}");
                            assert_eq!(big(g.edge_count() as u64), m, "{params:?}");
                        }
                        Err(Error::OverLimit { .. }) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn bottom_copy_is_previous_level() {
        for (p, t, b) in [(1, 1, 2), (2, 1, 2), (2, 2, 2), (3, 1, 2), (2, 2, 3)] {
            let g = debski_graph(&FamilyParams::new(p, t, b), &lim()).unwrap();
            let prev = debski_graph(&FamilyParams::new(p - 1, t, b), &lim()).unwrap();
            let sub = g.induced_subgraph(&VertexSet::full(prev.n())).unwrap();
            assert_eq!(sub, prev);
        }
    }

    #[test]
    fn subdivided_family_counts() {
        let g = debski_subdivided(&FamilyParams::new(1, 1, 2), &lim()).unwrap();
        assert_eq!((g.n(), g.edge_count(), g.root_count()), (30, 28, 6));
        let g0 =
            debski_subdivided(&FamilyParams::new(1, 1, 2).with_subdivision(0), &lim()).unwrap();
        assert_eq!((g0.n(), g0.edge_count(), g0.root_count()), (6, 4, 6));
    }

    #[test]
    fn refuses_oversized_family() {
        let small = OracleLimits {
            materialize: 100,
            ..lim()
        };
        let err = debski_graph(&FamilyParams::new(2, 2, 2), &small).unwrap_err();
        assert!(matches!(err, Error::OverLimit { size, .. } if size == 266 + 496 * 12));
        assert!(debski_graph(&FamilyParams::new(1, 1, 1), &lim()).is_err());
    }

    #[test]
    fn gnp_extremes_and_errors() {
        assert_eq!(gnp(5, 0.0, 7).unwrap().edge_count(), 0);
        assert_eq!(gnp(5, 1.0, 7).unwrap().edge_count(), 10);
        assert!(gnp(5, 1.5, 7).is_err());
        assert!(gnp(5, -0.1, 7).is_err());
        assert_eq!(gnp(30, 0.3, 99).unwrap(), gnp(30, 0.3, 99).unwrap());
    }

    #[test]
    fn gnp_edge_count_is_binomial() {
        // C(200,2) = 19900 trials at q = 0.1: mean 1990, sd = sqrt(19900·0.1·0.9) ≈ 42.3
        let sd = (19900.0f64 * 0.1 * 0.9).sqrt();
        let mut total = 0.0;
        for seed in 0..100 {
            let m = gnp(200, 0.1, seed).unwrap().edge_count() as f64;
            assert!((m - 1990.0).abs() <= 4.0 * sd, "seed {seed}: {m}");
            total += m;
        }
        assert!((total / 100.0 - 1990.0).abs() <= 4.0 * sd / 10.0);
    }

    #[test]
    fn gnp_is_monotone_in_q() {
        for seed in 0..20 {
            let low = gnp(40, 0.2, seed).unwrap();
            let high = gnp(40, 0.35, seed).unwrap();
            assert!(low.edges().all(|(u, v)| high.has_edge(u, v)));
        }
    }

    #[test]
    fn standard_shapes() {
        let p4 = standard(Standard::Path { n: 4 }).unwrap();
        assert_eq!(p4.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(
            standard(Standard::Cycle { n: 3 }).unwrap(),
            standard(Standard::Clique { n: 3 }).unwrap()
        );
        let grid = standard(Standard::Grid { rows: 2, cols: 3 }).unwrap();
        assert_eq!((grid.n(), grid.edge_count()), (6, 7));
        assert_eq!(
            standard(Standard::Star { leaves: 5 }).unwrap().max_degree(),
            5
        );
        assert!(standard(Standard::Path { n: 0 }).is_err());
    }

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = (1..=6)
            .map(|n| nonisomorphic_graphs(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }
}
