//! Immutable simple undirected graphs with optional root/fresh labels.
//!
//! Vertices are dense ids `0..n`. Neighbor lists are kept sorted, so edge
//! iteration, serialization and DOT output are byte-stable for a given graph.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tag attached to every vertex of a subdivided graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Root,
    Fresh,
}

/// Where a fresh vertex came from: the root edge `(u, v)` (with `u < v`) it
/// subdivides and its 1-based position along the path starting at `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Origin {
    pub edge: (usize, usize),
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    labels: Option<Vec<VertexKind>>,
    origin: Option<Vec<Option<Origin>>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range ids.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Self {
            adj,
            edge_count,
            labels: None,
            origin: None,
        })
    }

    pub fn edgeless(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edge_count: 0,
            labels: None,
            origin: None,
        }
    }

    /// Attaches root/fresh labels (and optionally subdivision provenance).
    pub fn with_labels(
        mut self,
        labels: Vec<VertexKind>,
        origin: Option<Vec<Option<Origin>>>,
    ) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        if let Some(o) = &origin {
            if o.len() != self.n() {
                return Err(Error::InvalidParameter(format!(
                    "{} origin entries for {} vertices",
                    o.len(),
                    self.n()
                )));
            }
        }
        self.labels = Some(labels);
        self.origin = origin;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Maximum vertex degree; 0 for edgeless and empty graphs.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn labels(&self) -> Option<&[VertexKind]> {
        self.labels.as_deref()
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    pub fn kind(&self, v: usize) -> Option<VertexKind> {
        self.labels.as_ref().map(|l| l[v])
    }

    pub fn origin(&self, v: usize) -> Option<Origin> {
        self.origin.as_ref().and_then(|o| o[v])
    }

    pub fn root_count(&self) -> usize {
        match &self.labels {
            Some(l) => l.iter().filter(|&&k| k == VertexKind::Root).count(),
            None => self.n(),
        }
    }

    /// Neighbor bitmasks, available when the graph has at most 64 vertices.
    pub fn neighbor_masks(&self) -> Option<Vec<u64>> {
        if self.n() > 64 {
            return None;
        }
        Some(
            self.adj
                .iter()
                .map(|list| list.iter().fold(0u64, |m, &v| m | (1 << v)))
                .collect(),
        )
    }

    /// The subgraph induced by `s`, renumbered `0..|s|` in the order of `s`.
    /// Labels are carried over; subdivision provenance is not.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph> {
        s.check_bounds(self.n())?;
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in s.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in s.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && j > i {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::new(s.len(), edges)?;
        match &self.labels {
            Some(l) => g.with_labels(s.iter().map(|&v| l[v]).collect(), None),
            None => Ok(g),
        }
    }

    /// Graphviz rendering: roots as circles, fresh vertices as points.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.n() {
            match self.kind(v) {
                Some(VertexKind::Root) => writeln!(out, "  {v} [shape=circle];"),
                Some(VertexKind::Fresh) => writeln!(out, "  {v} [shape=point];"),
                None => writeln!(out, "  {v};"),
            }
            .expect("writing to a String cannot fail");
        }
        for (u, v) in self.edges() {
            writeln!(out, "  {u} -- {v};").expect("writing to a String cannot fail");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// On-disk form of a graph: `{"n", "edges", "labels"?, "origin"?}`.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<VertexKind>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    origin: Option<Vec<Option<[usize; 3]>>>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        GraphFile {
            n: self.n(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
            labels: self.labels.clone(),
            origin: self.origin.as_ref().map(|o| {
                o.iter()
                    .map(|e| e.map(|e| [e.edge.0, e.edge.1, e.position]))
                    .collect()
            }),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let file = GraphFile::deserialize(deserializer)?;
        let g = Graph::new(file.n, file.edges.iter().map(|e| (e[0], e[1])))
            .map_err(D::Error::custom)?;
        match file.labels {
            Some(labels) => {
                let origin = file.origin.map(|o| {
                    o.into_iter()
                        .map(|e| {
                            e.map(|[u, v, position]| Origin {
                                edge: (u, v),
                                position,
                            })
                        })
                        .collect()
                });
                g.with_labels(labels, origin).map_err(D::Error::custom)
            }
            None if file.origin.is_some() => Err(D::Error::custom("origin given without labels")),
            None => Ok(g),
        }
    }
}

/// Sorted set of distinct vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Sorts `ids`; duplicates are rejected.
    pub fn new(mut ids: Vec<usize>) -> Result<Self> {
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        Ok(Self(ids))
    }

    pub(crate) fn from_sorted(ids: Vec<usize>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        Self(ids)
    }

    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn check_bounds(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::InvalidVertex { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl TryFrom<Vec<usize>> for VertexSet {
    type Error = Error;
    fn try_from(ids: Vec<usize>) -> Result<Self> {
        Self::new(ids)
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Maximal connected pieces of `g[s]`, ordered by minimum vertex id.
pub fn connected_components(g: &Graph, s: &VertexSet) -> Result<Vec<VertexSet>> {
    s.check_bounds(g.n())?;
    let mut inside = vec![false; g.n()];
    for &v in s {
        inside[v] = true;
    }
    Ok(components_marked(g, s.as_slice(), &mut inside))
}

/// Components of the subgraph induced by `members`, where `inside[v]` is true
/// exactly for members. Clears `inside` for every member it visits.
pub(crate) fn components_marked(
    g: &Graph,
    members: &[usize],
    inside: &mut [bool],
) -> Vec<VertexSet> {
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for &start in members {
        if !inside[start] {
            continue;
        }
        inside[start] = false;
        queue.push_back(start);
        let mut part = Vec::new();
        while let Some(v) = queue.pop_front() {
            part.push(v);
            for &w in g.neighbors(v) {
                if inside[w] {
                    inside[w] = false;
                    queue.push_back(w);
                }
            }
        }
        part.sort_unstable();
        out.push(VertexSet::from_sorted(part));
    }
    out
}

/// Replaces every edge by a path with `s` internal fresh vertices.
///
/// Root ids are preserved. Fresh ids follow the roots, edge by edge in
/// lexicographic edge order, each path listed from its smaller endpoint.
pub fn subdivide(g: &Graph, s: usize) -> Result<Graph> {
    if g.is_labeled() {
        return Err(Error::AlreadyLabeled);
    }
    let n = g.n();
    let m = g.edge_count();
    let total = n + s * m;
    let mut edges = Vec::with_capacity((s + 1) * m);
    let mut labels = vec![VertexKind::Root; n];
    labels.resize(total, VertexKind::Fresh);
    let mut origin = vec![None; total];
    for (e, (u, v)) in g.edges().enumerate() {
        let mut prev = u;
        for j in 0..s {
            let f = n + e * s + j;
            origin[f] = Some(Origin {
                edge: (u, v),
                position: j + 1,
            });
            edges.push((prev, f));
            prev = f;
        }
        edges.push((prev, v));
    }
    Graph::new(total, edges)?.with_labels(labels, Some(origin))
}
