//! The random-graph lower bound: edge probability `q_n`, monochromatic pair
//! families, the path structures `E_{s,σ}`, Janson-bound arithmetic and the
//! Monte-Carlo experiment.
//!
//! All bound arithmetic is generic over [`Float`] and carried out in the log
//! domain. Sums are evaluated in increasing index order so results do not
//! depend on the platform or on thread scheduling.

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centered::{is_p_centered, Coloring};
use crate::error::{Error, Result};
use crate::generators::gnp;
use crate::graph::{Graph, VertexSet};
use crate::solver::{chi_p_exact, chi_p_greedy, GreedyOrder, SolveBudget, SolveStatus};

/// Constant in the target bound `c·Δ^{2−1/p}·p·ln^{−1/p} Δ`.
pub const TARGET_CONSTANT: f64 = 1.0 / (96.0 * std::f64::consts::E);

fn lit<T: Float>(x: f64) -> T {
    T::from(x).expect("finite constant")
}

fn int<T: Float>(x: u64) -> T {
    T::from(x).expect("integer fits the float type")
}

fn ln_q_threshold<T: Float>(n: u64, p: u32) -> T {
    let (nf, pf): (T, T) = (int(n), int(p as u64));
    let e = lit::<T>(std::f64::consts::E);
    let twelve_e_over_p = lit::<T>(12.0) * e / pf;
    (pf * twelve_e_over_p.ln() + (T::one() - pf) * nf.ln() + nf.ln().ln())
        / (lit::<T>(2.0) * pf - T::one())
}

fn check_p(p: u32) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "p must be at least 2, got {p}"
        )));
    }
    Ok(())
}

/// `q_n = ((12e/p)^p · n^{1−p} · ln n)^{1/(2p−1)}`, evaluated as the
/// exponential of its logarithm. Fails with a range error, naming the
/// smallest `n` for which `q_n ≤ 1`, when the value is not a probability.
pub fn q_threshold<T: Float>(n: u64, p: u32) -> Result<T> {
    check_p(p)?;
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "n must be at least 3, got {n}"
        )));
    }
    let ln_q: T = ln_q_threshold(n, p);
    if ln_q > T::zero() {
        return Err(Error::ProbabilityRange {
            n,
            p,
            q: ln_q.to_f64().unwrap_or(f64::INFINITY).exp(),
            min_n: min_valid_n(p),
        });
    }
    Ok(ln_q.exp())
}

/// Smallest `n ≥ 3` with `q_n ≤ 1` (in `f64`). For `p ≥ 2` and `n ≥ 3` the
/// threshold is decreasing in `n`, so a doubling search and bisection suffice.
pub fn min_valid_n(p: u32) -> u64 {
    let ok = |n: u64| ln_q_threshold::<f64>(n, p) <= 0.0;
    let mut hi = 3u64;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    if lo < 3 {
        return hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// The maximum-degree window `(n·q_n/2, 2·n·q_n)`.
pub fn degree_window<T: Float>(n: u64, p: u32) -> Result<(T, T)> {
    let q: T = q_threshold(n, p)?;
    let nq = int::<T>(n) * q;
    Ok((nq / lit(2.0), lit::<T>(2.0) * nq))
}

/// `ln C(a, b)`, or `None` when the coefficient is zero.
fn ln_binom<T: Float>(a: u64, b: u64) -> Option<T> {
    if b > a {
        return None;
    }
    let mut acc = T::zero();
    for j in 0..b {
        acc = acc + int::<T>(a - j).ln() - int::<T>(j + 1).ln();
    }
    Some(acc)
}

fn ln_factorial<T: Float>(k: u64) -> T {
    (1..=k).fold(T::zero(), |acc, j| acc + int::<T>(j).ln())
}

fn janson_inputs<T: Float>(n: u64, p: u32, q: T) -> Result<(u64, T)> {
    check_p(p)?;
    let m = n / 4;
    if m < p as u64 {
        return Err(Error::InvalidParameter(format!(
            "floor(n/4) = {m} pairs but p = {p} are needed"
        )));
    }
    if !(q > T::zero() && q <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {} outside (0, 1]",
            q.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok((m, q.ln()))
}

fn ln_mu<T: Float>(m: u64, p: u32, ln_q: T) -> T {
    let p = p as u64;
    let falling = (0..p).fold(T::zero(), |acc, j| acc + int::<T>(m - j).ln());
    falling + ln_factorial::<T>(p - 1) + int::<T>(2 * p - 1) * ln_q
}

/// Number of ordered pairs of structures `((s,σ),(s',σ'))` with
/// `|s ∩ s'| = i`, as a logarithm; `None` when there are none.
pub fn ln_pair_count<T: Float>(m: u64, p: u32, i: u32) -> Option<T> {
    let (p, i) = (p as u64, i as u64);
    if i > p {
        return None;
    }
    let a = ln_binom::<T>(m, i)?;
    let b = ln_binom::<T>(m - i, p - i)?;
    let c = ln_binom::<T>(m.checked_sub(p)?, p - i)?;
    let perms = ln_factorial::<T>(p) + ln_factorial::<T>(p - 1);
    Some(a + b + c + lit::<T>(2.0) * perms)
}

fn delta_upper<T: Float>(m: u64, p: u32, ln_q: T) -> T {
    let mut total = T::zero();
    for i in 2..=p {
        if let Some(ln_count) = ln_pair_count::<T>(m, p, i) {
            total = total + (ln_count + int::<T>(4 * p as u64 - 2 * i as u64) * ln_q).exp();
        }
    }
    total
}

/// `μ = (m)_p · (p−1)! · q^{2p−1}` with `m = ⌊n/4⌋`.
pub fn janson_mu<T: Float>(n: u64, p: u32, q: T) -> Result<T> {
    let (m, ln_q) = janson_inputs(n, p, q)?;
    Ok(ln_mu(m, p, ln_q).exp())
}

/// `Σ_{i=2}^{p} count(i) · q^{4p−2i}`, summed over ordered pairs of
/// structures (identical pairs at `i = p` included), which bounds the
/// dependency sum from above.
pub fn janson_delta_upper<T: Float>(n: u64, p: u32, q: T) -> Result<T> {
    let (m, ln_q) = janson_inputs(n, p, q)?;
    Ok(delta_upper(m, p, ln_q))
}

/// `exp(−μ + Δ/2)`.
pub fn janson_zero_prob<T: Float>(n: u64, p: u32, q: T) -> Result<T> {
    Ok(janson_report(n, p, q)?.zero_prob_upper)
}

/// `ln` of the bound `exp(−μ + Δ/2)` from given `μ`, `Δ`.
pub fn log_zero_prob_from<T: Float>(mu: T, delta: T) -> T {
    -mu + delta / lit(2.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JansonReport<T> {
    pub n: u64,
    pub p: u32,
    pub q: T,
    pub m: u64,
    pub mu: T,
    pub delta_upper: T,
    pub log_zero_prob_upper: T,
    pub zero_prob_upper: T,
    /// `ln n^{n/2}`: colorings with at most `n/2` colors.
    pub log_coloring_count_bound: T,
    pub log_union_bound: T,
    /// `n^{n/2} · exp(−μ + Δ/2)`, saturating at the largest finite value.
    pub union_bound_product: T,
    pub union_bound_succeeds: bool,
}

/// All bound quantities at `(n, p, q)`.
pub fn janson_report<T: Float>(n: u64, p: u32, q: T) -> Result<JansonReport<T>> {
    let (m, ln_q) = janson_inputs(n, p, q)?;
    let mu = ln_mu(m, p, ln_q).exp();
    let delta = delta_upper(m, p, ln_q);
    let log_zero = log_zero_prob_from(mu, delta);
    let nf = int::<T>(n);
    let log_colorings = nf / lit(2.0) * nf.ln();
    let log_union = log_colorings + log_zero;
    Ok(JansonReport {
        n,
        p,
        q,
        m,
        mu,
        delta_upper: delta,
        log_zero_prob_upper: log_zero,
        zero_prob_upper: log_zero.exp(),
        log_coloring_count_bound: log_colorings,
        log_union_bound: log_union,
        union_bound_product: log_union.exp().min(T::max_value()),
        union_bound_succeeds: log_union < T::zero(),
    })
}

/// Vertex-disjoint pairs `(x_i, y_i)`, each monochromatic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFamily {
    pub pairs: Vec<(usize, usize)>,
}

impl PairFamily {
    pub fn m(&self) -> usize {
        self.pairs.len()
    }
}

/// Scans color classes in color order, pairs up vertices of a class in id
/// order and keeps the first `m` pairs.
pub fn select_pairs(f: &Coloring, m: usize) -> Result<PairFamily> {
    let mut classes = vec![Vec::new(); f.k()];
    for (v, &c) in f.colors().iter().enumerate() {
        classes[c].push(v);
    }
    let pairs: Vec<(usize, usize)> = classes
        .iter()
        .flat_map(|class| class.chunks_exact(2).map(|w| (w[0], w[1])))
        .collect();
    if pairs.len() < m {
        return Err(Error::InsufficientPairs {
            available: pairs.len(),
            requested: m,
        });
    }
    Ok(PairFamily {
        pairs: pairs[..m].to_vec(),
    })
}

/// A realized structure `E_{s,σ}`. Indices are 0-based: `s` lists pair
/// indices, `sigma` is a permutation of `0..p` with `sigma[p−1] = 0`.
/// `path` is `x_{s_p}, …, x_{s_1}, y_{s_σ(1)}, …, y_{s_σ(p)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWitness {
    pub s: Vec<usize>,
    pub sigma: Vec<usize>,
    pub path: Vec<usize>,
}

impl PathWitness {
    pub fn vertices(&self) -> VertexSet {
        VertexSet::new(self.path.clone()).expect("pairs are disjoint")
    }
}

/// Edges of `E_{s,σ}` in path order.
pub fn structure_edges(pf: &PairFamily, s: &[usize], sigma: &[usize]) -> Vec<(usize, usize)> {
    let path = structure_path(pf, s, sigma);
    path.windows(2).map(|w| (w[0], w[1])).collect()
}

fn structure_path(pf: &PairFamily, s: &[usize], sigma: &[usize]) -> Vec<usize> {
    let xs = s.iter().rev().map(|&i| pf.pairs[i].0);
    let ys = sigma.iter().map(|&j| pf.pairs[s[j]].1);
    xs.chain(ys).collect()
}

/// Every `(s, σ)` for `m` pairs, in lexicographic order.
pub fn structures(m: usize, p: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let sigmas = sigmas(p);
    let mut out = Vec::new();
    let mut s = Vec::with_capacity(p);
    let mut used = vec![false; m];
    fn rec(
        m: usize,
        p: usize,
        s: &mut Vec<usize>,
        used: &mut [bool],
        sigmas: &[Vec<usize>],
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if s.len() == p {
            out.extend(sigmas.iter().map(|sig| (s.clone(), sig.clone())));
            return;
        }
        for i in 0..m {
            if !used[i] {
                used[i] = true;
                s.push(i);
                rec(m, p, s, used, sigmas, out);
                s.pop();
                used[i] = false;
            }
        }
    }
    rec(m, p, &mut s, &mut used, &sigmas, &mut out);
    out
}

/// Permutations of `0..p` ending in 0, lexicographic.
fn sigmas(p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    let mut used = vec![false; p];
    used[0] = true;
    fn rec(p: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == p {
            let mut done = cur.clone();
            done.push(0);
            out.push(done);
            return;
        }
        for j in 1..p {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(p, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    if p > 0 {
        rec(p, &mut cur, &mut used, &mut out);
    }
    out
}

/// Number of structures whose edges are all present: the variable `X`.
pub fn count_realized(g: &Graph, pf: &PairFamily, p: usize) -> u64 {
    structures(pf.m(), p)
        .iter()
        .filter(|(s, sig)| {
            structure_edges(pf, s, sig)
                .iter()
                .all(|&(a, b)| g.has_edge(a, b))
        })
        .count() as u64
}

/// Lexicographically first realized `(s, σ)`, by backtracking with the path
/// edges checked as soon as both endpoints are fixed.
pub fn find_pair_path(g: &Graph, pf: &PairFamily, p: usize) -> Option<PathWitness> {
    if p < 2 || pf.m() < p {
        return None;
    }
    let mut search = PathSearch {
        g,
        pf,
        p,
        s: Vec::with_capacity(p),
        sigma: Vec::with_capacity(p),
        used: vec![false; pf.m()],
    };
    search.choose_s().then(|| PathWitness {
        path: structure_path(pf, &search.s, &search.sigma),
        s: search.s,
        sigma: search.sigma,
    })
}

struct PathSearch<'a> {
    g: &'a Graph,
    pf: &'a PairFamily,
    p: usize,
    s: Vec<usize>,
    sigma: Vec<usize>,
    used: Vec<bool>,
}

impl PathSearch<'_> {
    fn x(&self, i: usize) -> usize {
        self.pf.pairs[i].0
    }

    fn y(&self, i: usize) -> usize {
        self.pf.pairs[i].1
    }

    fn choose_s(&mut self) -> bool {
        if self.s.len() == self.p {
            let mut sig_used = vec![false; self.p];
            sig_used[0] = true;
            return self.choose_sigma(&mut sig_used);
        }
        for i in 0..self.pf.m() {
            if self.used[i] {
                continue;
            }
            if let Some(&prev) = self.s.last() {
                if !self.g.has_edge(self.x(prev), self.x(i)) {
                    continue;
                }
            }
            self.used[i] = true;
            self.s.push(i);
            if self.choose_s() {
                return true;
            }
            self.s.pop();
            self.used[i] = false;
        }
        false
    }

    fn choose_sigma(&mut self, sig_used: &mut [bool]) -> bool {
        let prev = match self.sigma.last() {
            Some(&j) => self.y(self.s[j]),
            None => self.x(self.s[0]),
        };
        if self.sigma.len() + 1 == self.p {
            if self.g.has_edge(prev, self.y(self.s[0])) {
                self.sigma.push(0);
                return true;
            }
            return false;
        }
        for j in 1..self.p {
            if sig_used[j] || !self.g.has_edge(prev, self.y(self.s[j])) {
                continue;
            }
            sig_used[j] = true;
            self.sigma.push(j);
            if self.choose_sigma(sig_used) {
                return true;
            }
            self.sigma.pop();
            sig_used[j] = false;
        }
        false
    }
}

/// Parameters of [`lower_bound_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeParams {
    pub n: usize,
    pub p: u32,
    pub seed: u64,
    pub trials: u32,
    /// Edge probability; defaults to `min(q_n, 1)`.
    pub q: Option<f64>,
    /// Random colorings sampled per trial.
    pub colorings: u32,
    /// Largest `n` for which χ_p is solved exactly.
    pub exact_limit: usize,
    /// Node budget of each exact solve.
    pub solve_nodes: u64,
}

impl Default for ProbeParams {
    fn default() -> Self {
        Self {
            n: 16,
            p: 2,
            seed: 0,
            trials: 50,
            q: None,
            colorings: 20,
            exact_limit: 16,
            solve_nodes: 2_000_000,
        }
    }
}

impl ProbeParams {
    pub fn validate(&self) -> Result<()> {
        check_p(self.p)?;
        if self.n < 4 * self.p as usize {
            return Err(Error::InvalidParameter(format!(
                "n = {} is below 4p = {}",
                self.n,
                4 * self.p
            )));
        }
        if let Some(q) = self.q {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidParameter(format!("q = {q} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// The edge probability used by the experiment.
    pub fn edge_probability(&self) -> f64 {
        self.q
            .unwrap_or_else(|| ln_q_threshold::<f64>(self.n as u64, self.p).exp().min(1.0))
    }
}

/// One CSV row per trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub trial: u32,
    pub seed: u64,
    pub n: usize,
    pub p: u32,
    pub q: f64,
    pub max_degree: usize,
    pub target_bound: f64,
    pub chi_exact_or_bound: usize,
    /// `exact`, `lower_bound_only`, `timeout` or `greedy`.
    pub status: String,
    /// Fraction of sampled colorings with `⌈n/2⌉` colors that are violated.
    pub violated_fraction: f64,
    /// Sampled colorings whose violation was found as a pair path.
    pub witness_found: u32,
}

/// `c·Δ^{2−1/p}·p·ln^{−1/p} Δ`; zero when `Δ < 2`, where `ln Δ ≤ 0`.
pub fn target_bound(max_degree: usize, p: u32) -> f64 {
    if max_degree < 2 {
        return 0.0;
    }
    let (d, p) = (max_degree as f64, p as f64);
    TARGET_CONSTANT * d.powf(2.0 - 1.0 / p) * p * d.ln().powf(-1.0 / p)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u32) -> u64 {
    splitmix64(master ^ splitmix64(index as u64))
}

/// Runs the trials in parallel; rows come back ordered by trial index and
/// are identical for any thread count. Solver budget exhaustion is recorded
/// in the row's status.
pub fn lower_bound_experiment(params: &ProbeParams) -> Result<Vec<ExperimentRow>> {
    params.validate()?;
    let q = params.edge_probability();
    (0..params.trials)
        .into_par_iter()
        .map(|trial| run_trial(params, q, trial))
        .collect()
}

fn run_trial(params: &ProbeParams, q: f64, trial: u32) -> Result<ExperimentRow> {
    let (n, p) = (params.n, params.p as usize);
    let seed = trial_seed(params.seed, trial);
    let g = gnp(n, q, seed)?;
    let max_degree = g.max_degree();

    let (chi, status) = if n <= params.exact_limit {
        let r = chi_p_exact(&g, p, &SolveBudget::nodes(params.solve_nodes))?;
        let status = match r.status {
            SolveStatus::Exact => "exact",
            SolveStatus::LowerBoundOnly => "lower_bound_only",
            SolveStatus::Timeout => "timeout",
        };
        (r.chi, status)
    } else {
        let f = chi_p_greedy(&g, p, GreedyOrder::DegreeDescending)?;
        (f.used_count(), "greedy")
    };

    let k = n.div_ceil(2);
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed));
    let (mut violated, mut witnesses) = (0u32, 0u32);
    for _ in 0..params.colorings {
        let colors = (0..n).map(|_| rng.random_range(0..k)).collect();
        let f = Coloring::new(k, colors)?;
        let witness = select_pairs(&f, n / 4)
            .ok()
            .and_then(|pf| find_pair_path(&g, &pf, p));
        if let Some(w) = witness {
            let vs = w.vertices();
            let sub = g.induced_subgraph(&vs)?;
            let confirmed = !is_p_centered(&sub, &f.restrict(&vs), p)?.is_centered();
            assert!(confirmed, "pair path {w:?} is not a violation");
            violated += 1;
            witnesses += 1;
        } else if !is_p_centered(&g, &f, p)?.is_centered() {
            violated += 1;
        }
    }
    let violated_fraction = if params.colorings == 0 {
        0.0
    } else {
        violated as f64 / params.colorings as f64
    };

    Ok(ExperimentRow {
        trial,
        seed,
        n,
        p: params.p,
        q,
        max_degree,
        target_bound: target_bound(max_degree, params.p),
        chi_exact_or_bound: chi,
        status: status.to_string(),
        violated_fraction,
        witness_found: witnesses,
    })
}

/// Writes rows as CSV with a header line.
pub fn write_csv<W: std::io::Write>(rows: &[ExperimentRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}
