//! Shallow-minor density ∇_r.
//!
//! Density here is `|E(H)| / |V(H)|`, edges per branch vertex, which is half
//! the average degree of `H`. Branch sets must be connected and have radius
//! at most `r` measured inside the subgraph they induce.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::limits::OracleLimits;
use crate::subsets::mask_connected;
use crate::Density;

/// Branch sets of an r-shallow minor model; branch vertex `i` of `H` is
/// realized by `parts[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub r: usize,
    pub parts: Vec<VertexSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelDefect {
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("part {part} contains vertex {vertex} outside the graph")]
    VertexOutOfRange { part: usize, vertex: usize },
    #[error("vertex {vertex} lies in parts {first} and {second}")]
    Overlap {
        vertex: usize,
        first: usize,
        second: usize,
    },
    #[error("part {0} is not connected")]
    Disconnected(usize),
    #[error("part {part} has radius {radius} > {r}")]
    RadiusExceeded {
        part: usize,
        radius: usize,
        r: usize,
    },
    #[error("minor edge {0:?} names a missing or repeated branch vertex")]
    BadEdge((usize, usize)),
    #[error("minor edge {0:?} has no host edge between its parts")]
    Unrealized((usize, usize)),
}

/// Checks a model against its invariants and that every edge of `H` is
/// realized by an edge of `g` between the two branch sets.
pub fn verify_model(
    g: &Graph,
    model: &MinorModel,
    h_edges: &[(usize, usize)],
) -> std::result::Result<(), ModelDefect> {
    let mut owner = vec![usize::MAX; g.n()];
    for (i, part) in model.parts.iter().enumerate() {
        if part.is_empty() {
            return Err(ModelDefect::EmptyPart(i));
        }
        for &v in part {
            if v >= g.n() {
                return Err(ModelDefect::VertexOutOfRange { part: i, vertex: v });
            }
            if owner[v] != usize::MAX {
                return Err(ModelDefect::Overlap {
                    vertex: v,
                    first: owner[v],
                    second: i,
                });
            }
            owner[v] = i;
        }
        match part_radius(g, part) {
            None => return Err(ModelDefect::Disconnected(i)),
            Some(radius) if radius > model.r => {
                return Err(ModelDefect::RadiusExceeded {
                    part: i,
                    radius,
                    r: model.r,
                })
            }
            Some(_) => {}
        }
    }
    let mut seen = BTreeSet::new();
    for &(a, b) in h_edges {
        let key = (a.min(b), a.max(b));
        if a == b || a >= model.parts.len() || b >= model.parts.len() || !seen.insert(key) {
            return Err(ModelDefect::BadEdge((a, b)));
        }
        let realized = model.parts[a]
            .iter()
            .any(|&v| g.neighbors(v).iter().any(|&w| owner[w] == b));
        if !realized {
            return Err(ModelDefect::Unrealized((a, b)));
        }
    }
    Ok(())
}

/// Radius of `g[part]`, or `None` if it is disconnected.
fn part_radius(g: &Graph, part: &VertexSet) -> Option<usize> {
    let mut best = None;
    let mut dist = vec![usize::MAX; g.n()];
    for &c in part {
        for &v in part {
            dist[v] = usize::MAX;
        }
        dist[c] = 0;
        let mut queue = VecDeque::from([c]);
        let mut reached = 1;
        let mut ecc = 0;
        while let Some(x) = queue.pop_front() {
            for &w in g.neighbors(x) {
                if part.contains(w) && dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    ecc = ecc.max(dist[w]);
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        if reached < part.len() {
            return None;
        }
        best = Some(best.map_or(ecc, |b: usize| b.min(ecc)));
    }
    best
}

/// A shallow minor with its density: the witness for a ∇_r value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShallowMinor {
    pub r: usize,
    pub parts: Vec<VertexSet>,
    pub h_edges: Vec<(usize, usize)>,
    #[serde(serialize_with = "ser_ratio", deserialize_with = "de_ratio")]
    pub density: Density,
}

impl ShallowMinor {
    fn from_parts(g: &Graph, r: usize, parts: Vec<VertexSet>) -> Self {
        let h_edges = quotient_edges(g, &parts);
        let density = if parts.is_empty() {
            Density::from_integer(0)
        } else {
            Density::new(h_edges.len() as u64, parts.len() as u64)
        };
        Self {
            r,
            parts,
            h_edges,
            density,
        }
    }

    pub fn model(&self) -> MinorModel {
        MinorModel {
            r: self.r,
            parts: self.parts.clone(),
        }
    }

    pub fn verify(&self, g: &Graph) -> std::result::Result<(), ModelDefect> {
        verify_model(g, &self.model(), &self.h_edges)
    }
}

fn ser_ratio<S: Serializer>(d: &Density, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", d.numer(), d.denom()))
}

fn de_ratio<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Density, D::Error> {
    use serde::de::Error as _;
    let text = String::deserialize(d)?;
    let (a, b) = text
        .split_once('/')
        .ok_or_else(|| D::Error::custom(format!("density {text:?} is not of the form p/q")))?;
    let numer: u64 = a.trim().parse().map_err(D::Error::custom)?;
    let denom: u64 = b.trim().parse().map_err(D::Error::custom)?;
    if denom == 0 {
        return Err(D::Error::custom("zero denominator"));
    }
    Ok(Density::new(numer, denom))
}

/// Edges of the quotient graph: pairs of parts joined by some host edge.
fn quotient_edges(g: &Graph, parts: &[VertexSet]) -> Vec<(usize, usize)> {
    let mut owner = vec![usize::MAX; g.n()];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            owner[v] = i;
        }
    }
    let mut edges = BTreeSet::new();
    for (u, v) in g.edges() {
        let (a, b) = (owner[u], owner[v]);
        if a != usize::MAX && b != usize::MAX && a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    edges.into_iter().collect()
}

/// Exact ∇_r by enumerating every family of disjoint connected branch sets
/// of radius at most `r`. Families are generated canonically (parts ordered
/// by minimum vertex) so each is visited once.
pub fn nabla_r_exact(g: &Graph, r: usize, limits: &OracleLimits) -> Result<ShallowMinor> {
    OracleLimits::check(
        "exact shallow-minor density",
        g.n(),
        limits.nabla_vertices.min(24),
    )?;
    let n = g.n();
    let masks = g.neighbor_masks().expect("at most 24 vertices");
    let mut by_min: Vec<Vec<(u64, u64)>> = vec![Vec::new(); n];
    for part in 1u64..1 << n {
        if !mask_connected(&masks, part) {
            continue;
        }
        let set = VertexSet::from_mask(part);
        if part_radius(g, &set).is_some_and(|rad| rad <= r) {
            let mut around = 0;
            for &v in &set {
                around |= masks[v];
            }
            by_min[part.trailing_zeros() as usize].push((part, around & !part));
        }
    }
    let mut state = Enumeration {
        by_min: &by_min,
        n,
        chosen: Vec::new(),
        best: (0, 1),
        best_parts: Vec::new(),
    };
    state.descend(0, 0, 0);
    let parts = state
        .best_parts
        .iter()
        .map(|&m| VertexSet::from_mask(m))
        .collect();
    Ok(ShallowMinor::from_parts(g, r, parts))
}

struct Enumeration<'a> {
    by_min: &'a [Vec<(u64, u64)>],
    n: usize,
    /// (part, neighborhood) of the parts chosen so far
    chosen: Vec<(u64, u64)>,
    /// best (edges, parts) seen
    best: (u64, u64),
    best_parts: Vec<u64>,
}

impl Enumeration<'_> {
    fn descend(&mut self, decided: u64, used: u64, edges: u64) {
        let v = (!decided).trailing_zeros() as usize;
        if v >= self.n {
            return;
        }
        // v stays outside the minor
        self.descend(decided | 1 << v, used, edges);
        for &(part, around) in &self.by_min[v] {
            if part & used != 0 {
                continue;
            }
            let added = self.chosen.iter().filter(|(q, _)| around & q != 0).count() as u64;
            let e = edges + added;
            self.chosen.push((part, around));
            let k = self.chosen.len() as u64;
            if e * self.best.1 > self.best.0 * k || self.best_parts.is_empty() {
                self.best = (e, k);
                self.best_parts = self.chosen.iter().map(|&(m, _)| m).collect();
            }
            self.descend(decided | part, used | part, e);
            self.chosen.pop();
        }
    }
}

/// Lower bound on ∇_r for graphs of any size.
///
/// For each radius `ρ ≤ r`, vertices are grouped greedily into BFS balls of
/// radius `ρ` (centers by decreasing degree, balls grown only through
/// unassigned vertices). The resulting quotient is then peeled by repeatedly
/// dropping a minimum-degree branch vertex, and the densest stage over all
/// radii is reported. The model is re-verified before it is returned.
pub fn nabla_r_greedy(g: &Graph, r: usize) -> ShallowMinor {
    let mut best: Option<ShallowMinor> = None;
    let mut centers: Vec<usize> = (0..g.n()).collect();
    centers.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for radius in 0..=r {
        let parts = ball_partition(g, &centers, radius);
        let kept = densest_peel(g, &parts);
        let parts: Vec<VertexSet> = kept.into_iter().map(|i| parts[i].clone()).collect();
        let candidate = ShallowMinor::from_parts(g, r, parts);
        if best.as_ref().is_none_or(|b| candidate.density > b.density) {
            best = Some(candidate);
        }
        if radius >= g.n() {
            break;
        }
    }
    let best = best.unwrap_or_else(|| ShallowMinor::from_parts(g, r, Vec::new()));
    if let Err(defect) = best.verify(g) {
        panic!("greedy shallow-minor model failed verification: {defect}");
    }
    best
}

fn ball_partition(g: &Graph, centers: &[usize], radius: usize) -> Vec<VertexSet> {
    let mut depth = vec![usize::MAX; g.n()];
    let mut parts = Vec::new();
    for &c in centers {
        if depth[c] != usize::MAX {
            continue;
        }
        depth[c] = 0;
        let mut part = vec![c];
        let mut i = 0;
        while i < part.len() {
            let x = part[i];
            i += 1;
            if depth[x] == radius {
                continue;
            }
            for &w in g.neighbors(x) {
                if depth[w] == usize::MAX {
                    depth[w] = depth[x] + 1;
                    part.push(w);
                }
            }
        }
        part.sort_unstable();
        parts.push(VertexSet::from_sorted(part));
    }
    parts
}

/// Indices of the densest prefix-complement found by min-degree peeling.
fn densest_peel(g: &Graph, parts: &[VertexSet]) -> Vec<usize> {
    let k = parts.len();
    let edges = quotient_edges(g, parts);
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..k).map(|i| (deg[i], i)).collect();
    let mut alive = vec![true; k];
    let (mut e, mut vcount) = (edges.len() as u64, k as u64);
    let mut best = (e, vcount.max(1));
    let mut removed = Vec::new();
    let mut best_removed = 0;
    while let Some((d, i)) = queue.pop_first() {
        if vcount == 1 {
            break;
        }
        alive[i] = false;
        removed.push(i);
        e -= d as u64;
        vcount -= 1;
        for &j in &adj[i] {
            if alive[j] {
                queue.remove(&(deg[j], j));
                deg[j] -= 1;
                queue.insert((deg[j], j));
            }
        }
        if e * best.1 > best.0 * vcount {
            best = (e, vcount);
            best_removed = removed.len();
        }
    }
    let dropped: BTreeSet<usize> = removed[..best_removed].iter().copied().collect();
    (0..k).filter(|i| !dropped.contains(i)).collect()
}
