//! Minimum number of colors in a p-centered coloring (χ_p), exact and
//! greedy, together with the classical oracles it is checked against.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::centered::search::{find_violation, Plain};
use crate::centered::{is_p_centered, Coloring, Verdict};
use crate::error::{Error, Result};
use crate::graph::{components_marked, Graph};
use crate::limits::OracleLimits;

/// Work limits for the exact search. `None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveBudget {
    pub max_nodes: Option<u64>,
    pub max_millis: Option<u64>,
}

impl SolveBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes: Some(max_nodes),
            max_millis: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// `chi` is χ_p: a coloring with `chi` colors verifies and `chi − 1`
    /// colors are excluded by the clique bound or by exhaustive search.
    Exact,
    /// Budget ran out after at least one color count was refuted by search;
    /// `chi` is that certified lower bound.
    LowerBoundOnly,
    /// Budget ran out before any search refutation; `chi` is the clique bound.
    Timeout,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Color assignments tried.
    pub nodes: u64,
    /// Complete colorings reached.
    pub colorings_tested: u64,
    /// Wall-clock time; kept out of serialized output so results stay
    /// byte-reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub chi: usize,
    pub lower_bound: usize,
    pub upper_bound: usize,
    /// A p-centered coloring with `chi` colors; present only when exact.
    pub coloring: Option<Coloring>,
    pub stats: SolveStats,
}

/// Exact χ_p by iterative deepening from the greedy clique bound.
///
/// For each `k`, vertices are colored in a fixed BFS order (each component
/// started from its highest-degree vertex); vertex number `i` in that order
/// may only take a color at most one above the largest color used before it.
/// After each assignment, the component of the colored region containing
/// the new vertex is searched for a violating set. Colors of already-colored
/// vertices never change, so such a set violates every extension.
pub fn chi_p_exact(g: &Graph, p: usize, budget: &SolveBudget) -> Result<SolveResult> {
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    let started = Instant::now();
    let n = g.n();
    let greedy = compact(&chi_p_greedy(g, p, GreedyOrder::Natural)?);
    let upper = greedy.k();
    if n == 0 {
        return Ok(SolveResult {
            status: SolveStatus::Exact,
            chi: 0,
            lower_bound: 0,
            upper_bound: 0,
            coloring: Some(Coloring::from_colors(Vec::new())),
            stats: SolveStats::default(),
        });
    }
    let clique = greedy_clique(g).max(1);
    let mut search = Search {
        g,
        p,
        order: search_order(g),
        colors: vec![0; n],
        colored: vec![false; n],
        inside: vec![false; n],
        nodes: 0,
        colorings: 0,
        max_nodes: budget.max_nodes,
        deadline: budget
            .max_millis
            .map(|ms| started + Duration::from_millis(ms)),
    };
    let mut refuted_any = false;
    let mut k = clique;
    loop {
        if k >= upper {
            return Ok(SolveResult {
                status: SolveStatus::Exact,
                chi: upper,
                lower_bound: upper,
                upper_bound: upper,
                coloring: Some(greedy),
                stats: search.stats(started),
            });
        }
        match search.run(k) {
            Step::Found => {
                let coloring = Coloring::new(k, search.colors.clone())?;
                return Ok(SolveResult {
                    status: SolveStatus::Exact,
                    chi: k,
                    lower_bound: k,
                    upper_bound: k,
                    coloring: Some(coloring),
                    stats: search.stats(started),
                });
            }
            Step::Exhausted => {
                refuted_any = true;
                k += 1;
            }
            Step::OutOfBudget => {
                let status = if refuted_any {
                    SolveStatus::LowerBoundOnly
                } else {
                    SolveStatus::Timeout
                };
                return Ok(SolveResult {
                    status,
                    chi: k,
                    lower_bound: k,
                    upper_bound: upper.max(k),
                    coloring: None,
                    stats: search.stats(started),
                });
            }
        }
    }
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search<'a> {
    g: &'a Graph,
    p: usize,
    order: Vec<usize>,
    colors: Vec<usize>,
    colored: Vec<bool>,
    inside: Vec<bool>,
    nodes: u64,
    colorings: u64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl Search<'_> {
    fn stats(&self, started: Instant) -> SolveStats {
        SolveStats {
            nodes: self.nodes,
            colorings_tested: self.colorings,
            elapsed: started.elapsed(),
        }
    }

    fn run(&mut self, k: usize) -> Step {
        self.colored.iter_mut().for_each(|c| *c = false);
        self.assign(0, 0, k)
    }

    fn over_budget(&self) -> bool {
        if self.max_nodes.is_some_and(|m| self.nodes >= m) {
            return true;
        }
        // clock reads are comparatively expensive; sample them
        self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn assign(&mut self, pos: usize, used: usize, k: usize) -> Step {
        if pos == self.order.len() {
            self.colorings += 1;
            return Step::Found;
        }
        let v = self.order[pos];
        for c in 0..k.min(used + 1) {
            if self.over_budget() {
                return Step::OutOfBudget;
            }
            self.nodes += 1;
            self.colors[v] = c;
            self.colored[v] = true;
            if !self.violated_at(v) {
                match self.assign(pos + 1, used.max(c + 1), k) {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            self.colored[v] = false;
        }
        Step::Exhausted
    }

    fn violated_at(&mut self, v: usize) -> bool {
        let g = self.g;
        if g.neighbors(v)
            .iter()
            .any(|&w| self.colored[w] && self.colors[w] == self.colors[v])
        {
            return true;
        }
        if self.p == 1 {
            return false;
        }
        // component of v among colored vertices
        let mut comp = vec![v];
        self.inside[v] = true;
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for &w in g.neighbors(x) {
                if self.colored[w] && !self.inside[w] {
                    self.inside[w] = true;
                    comp.push(w);
                }
            }
        }
        let start = components_marked(g, &comp, &mut self.inside);
        let k = self.colors.iter().max().map_or(0, |&c| c + 1);
        find_violation(g, &self.colors, k, start, &Plain(self.p)).is_some()
    }
}

/// BFS order, each component started at its highest-degree vertex
/// (lowest id on ties), neighbors visited in id order.
fn search_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &s in &by_degree {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let head = order.len();
        order.push(s);
        let mut i = head;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &w in g.neighbors(x) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

/// Size of a clique grown greedily from each vertex in turn (neighbors tried
/// by decreasing degree); a lower bound on every χ_p.
/// Renumbers the used colors to `0..used_count` in order of first use.
fn compact(f: &Coloring) -> Coloring {
    let mut map = vec![usize::MAX; f.k()];
    let mut next = 0;
    let colors = f
        .colors()
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect();
    Coloring::from_colors(colors)
}

pub fn greedy_clique(g: &Graph) -> usize {
    let mut best = 0;
    for v in 0..g.n() {
        let mut cand: Vec<usize> = g.neighbors(v).to_vec();
        cand.sort_by_key(|&w| (std::cmp::Reverse(g.degree(w)), w));
        let mut clique = vec![v];
        for w in cand {
            if clique.iter().all(|&u| g.has_edge(u, w)) {
                clique.push(w);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// Clique number by exhaustive branching.
pub fn max_clique_exact(g: &Graph) -> usize {
    fn grow(g: &Graph, size: usize, cand: &[usize], best: &mut usize) {
        if size + cand.len() <= *best {
            return;
        }
        if cand.is_empty() {
            *best = size;
            return;
        }
        for (i, &v) in cand.iter().enumerate() {
            let next: Vec<usize> = cand[i + 1..]
                .iter()
                .copied()
                .filter(|&w| g.has_edge(v, w))
                .collect();
            grow(g, size + 1, &next, best);
        }
    }
    let all: Vec<usize> = (0..g.n()).collect();
    let mut best = 0;
    grow(g, 0, &all, &mut best);
    best
}

/// Vertex order for the greedy coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreedyOrder {
    Natural,
    DegreeDescending,
    /// Uniform shuffle driven by a ChaCha8 stream seeded with the value.
    Random(u64),
}

/// A p-centered coloring found greedily: a first-fit proper coloring in the
/// given order, repaired by giving the highest-numbered vertex of each
/// reported violation a brand-new color until the verifier accepts.
pub fn chi_p_greedy(g: &Graph, p: usize, order: GreedyOrder) -> Result<Coloring> {
    let mut seq: Vec<usize> = (0..g.n()).collect();
    match order {
        GreedyOrder::Natural => {}
        GreedyOrder::DegreeDescending => seq.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v)),
        GreedyOrder::Random(seed) => seq.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
    }
    let mut colors = vec![usize::MAX; g.n()];
    for &v in &seq {
        let mut taken: Vec<usize> = g
            .neighbors(v)
            .iter()
            .map(|&w| colors[w])
            .filter(|&c| c != usize::MAX)
            .collect();
        taken.sort_unstable();
        taken.dedup();
        colors[v] = taken
            .iter()
            .enumerate()
            .find(|(i, &c)| *i != c)
            .map_or(taken.len(), |(i, _)| i);
    }
    let mut f = Coloring::from_colors(colors);
    loop {
        match is_p_centered(g, &f, p)? {
            Verdict::Centered => return Ok(f),
            Verdict::Violated { witness } => {
                let v = *witness
                    .vertices
                    .as_slice()
                    .last()
                    .expect("witnesses are non-empty");
                let mut colors = f.colors().to_vec();
                colors[v] = f.k();
                f = Coloring::new(f.k() + 1, colors)?;
            }
        }
    }
}

/// Chromatic number by backtracking in id order with the same
/// first-new-color symmetry rule.
pub fn chromatic_number_exact(g: &Graph, limits: &OracleLimits) -> Result<usize> {
    OracleLimits::check("chromatic oracle", g.n(), limits.vertices)?;
    Ok(min_colors(g, |_, _, _| true))
}

/// Star chromatic number: proper colorings with no two-colored path on four
/// vertices, by backtracking in id order.
pub fn star_chromatic_exact(g: &Graph, limits: &OracleLimits) -> Result<usize> {
    OracleLimits::check("star chromatic oracle", g.n(), limits.vertices)?;
    Ok(min_colors(g, no_bicolored_p4_through))
}

fn min_colors(g: &Graph, ok: fn(&Graph, &[Option<usize>], usize) -> bool) -> usize {
    fn go(
        g: &Graph,
        v: usize,
        used: usize,
        k: usize,
        col: &mut Vec<Option<usize>>,
        ok: fn(&Graph, &[Option<usize>], usize) -> bool,
    ) -> bool {
        if v == g.n() {
            return true;
        }
        for c in 0..k.min(used + 1) {
            if g.neighbors(v).iter().any(|&w| col[w] == Some(c)) {
                continue;
            }
            col[v] = Some(c);
            if ok(g, col, v) && go(g, v + 1, used.max(c + 1), k, col, ok) {
                return true;
            }
            col[v] = None;
        }
        false
    }
    if g.n() == 0 {
        return 0;
    }
    (1..=g.n())
        .find(|&k| go(g, 0, 0, k, &mut vec![None; g.n()], ok))
        .expect("n colors always suffice")
}

fn no_bicolored_p4_through(g: &Graph, col: &[Option<usize>], v: usize) -> bool {
    let c = |x: usize| col[x];
    let bicolored = |a: usize, b: usize, x: usize, d: usize| c(a) == c(x) && c(b) == c(d);
    for &b in g.neighbors(v) {
        if c(b).is_none() {
            continue;
        }
        for &x in g.neighbors(b) {
            if x == v || c(x).is_none() {
                continue;
            }
            // v is an end: v - b - x - d
            for &d in g.neighbors(x) {
                if d != v && d != b && c(d).is_some() && bicolored(v, b, x, d) {
                    return false;
                }
            }
            // v is second: x' - v - b - x, with x' another colored neighbor of v
            for &a in g.neighbors(v) {
                if a != b && a != x && c(a).is_some() && bicolored(a, v, b, x) {
                    return false;
                }
            }
        }
    }
    true
}
