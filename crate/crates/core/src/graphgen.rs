//! Sampling the random edge set of a truncated hierarchical graph.
//!
//! Vertices `x != y` at ultrametric distance `k` are joined independently with
//! probability `c_k / N^(2k-1)`. Each level-`k` ball holds
//! `P_k = N^(2(k-1)) N (N-1) / 2` pairs at distance exactly `k`; the sampler
//! draws a binomial edge count per `(ball, class)` work item and then places
//! that many distinct pairs uniformly, so the cost is proportional to the
//! number of edges rather than the number of pairs.

use std::io::{BufRead, Write};

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hiergroup::{BallId, Hierarchy, VertexId};
use crate::rng::{self, Domain};
use crate::rule::CRule;

/// An undirected edge `(u, v)` with `u < v`.
pub type Edge = (VertexId, VertexId);

/// Pair spaces up to this size are sampled by exact index selection when dense.
const DENSE_PAIR_LIMIT: u128 = 1 << 22;

/// Parameters of one random graph ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraphConfig", into = "RawGraphConfig")]
pub struct GraphConfig {
    hierarchy: Hierarchy,
    rule: CRule,
    c: Vec<f64>,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct RawGraphConfig {
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "K")]
    k: u32,
    c: CRule,
    #[serde(default)]
    seed: u64,
}

impl TryFrom<RawGraphConfig> for GraphConfig {
    type Error = Error;

    fn try_from(raw: RawGraphConfig) -> Result<Self> {
        GraphConfig::new(raw.n, raw.k, raw.c, raw.seed)
    }
}

impl From<GraphConfig> for RawGraphConfig {
    fn from(cfg: GraphConfig) -> Self {
        RawGraphConfig {
            n: cfg.hierarchy.order(),
            k: cfg.hierarchy.depth(),
            c: cfg.rule,
            seed: cfg.seed,
        }
    }
}

impl GraphConfig {
    /// Validates `N >= 2`, `K >= 1`, `N^K < 2^63`, `c_k > 0` and
    /// `c_k / N^(2k-1) <= 1` for all `k <= K`.
    pub fn new(n: u64, k: u32, rule: CRule, seed: u64) -> Result<Self> {
        let hierarchy = Hierarchy::new(n, k)?;
        rule.validate()?;
        let c = rule.values(k as usize)?;
        for (i, &ck) in c.iter().enumerate() {
            let p = edge_probability(n, i as u32 + 1, ck);
            if !(p <= 1.0) {
                return Err(Error::Config(format!(
                    "edge probability c_{}/N^{} = {p} exceeds 1",
                    i + 1,
                    2 * i + 1
                )));
            }
        }
        Ok(Self {
            hierarchy,
            rule,
            c,
            seed,
        })
    }

    /// Convenience constructor from explicit constants.
    pub fn from_list(n: u64, k: u32, c: &[f64], seed: u64) -> Result<Self> {
        Self::new(n, k, CRule::list(c.to_vec()), seed)
    }

    pub fn hierarchy(&self) -> Hierarchy {
        self.hierarchy
    }

    pub fn order(&self) -> u64 {
        self.hierarchy.order()
    }

    pub fn depth(&self) -> u32 {
        self.hierarchy.depth()
    }

    pub fn rule(&self) -> &CRule {
        &self.rule
    }

    /// `c_1, ..., c_K`.
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// `c_k` for `1 <= k <= K`.
    pub fn c_k(&self, k: u32) -> f64 {
        self.c[k as usize - 1]
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Same ensemble with another master seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    /// Edge probability of class `k`.
    pub fn edge_probability(&self, k: u32) -> f64 {
        edge_probability(self.order(), k, self.c_k(k))
    }
}

/// `c / N^(2k-1)`.
pub fn edge_probability(n: u64, k: u32, c: f64) -> f64 {
    c / (n as f64).powi(2 * k as i32 - 1)
}

/// Number of vertex pairs at distance exactly `k` inside one `k`-ball.
pub fn pairs_in_class(n: u64, k: u32) -> u128 {
    let sub = (n as u128).pow(k - 1);
    sub * sub * (n as u128) * (n as u128 - 1) / 2
}

/// Which work items of a class to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Every ball of the truncation.
    All,
    /// Only what touches the `level`-ball containing vertex 0: for class
    /// `j <= level` the `j`-balls inside it, for `j > level` the single
    /// `j`-ball around it.
    Origin { level: u32 },
}

/// The classes (and balls) an experiment needs. Because every work item has
/// its own random stream, a partial sample is exactly the restriction of the
/// full sample with the same seed and trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    classes: Vec<(u32, Scope)>,
}

impl SamplePlan {
    /// All classes `1..=depth` over the whole truncation.
    pub fn full(depth: u32) -> Self {
        Self {
            classes: (1..=depth).map(|k| (k, Scope::All)).collect(),
        }
    }

    /// Classes `1..=level` inside the `level`-ball around vertex 0.
    pub fn origin_ball(level: u32) -> Self {
        Self {
            classes: (1..=level).map(|k| (k, Scope::Origin { level })).collect(),
        }
    }

    pub fn empty() -> Self {
        Self { classes: Vec::new() }
    }

    /// Adds (or replaces) one class.
    pub fn with_class(mut self, class: u32, scope: Scope) -> Self {
        self.classes.retain(|&(k, _)| k != class);
        self.classes.push((class, scope));
        self.classes.sort_by_key(|&(k, _)| k);
        self
    }

    pub fn classes(&self) -> &[(u32, Scope)] {
        &self.classes
    }

    pub fn scope_of(&self, class: u32) -> Option<Scope> {
        self.classes.iter().find(|&&(k, _)| k == class).map(|&(_, s)| s)
    }

    fn suffixes(h: Hierarchy, class: u32, scope: Scope) -> std::ops::Range<u64> {
        match scope {
            Scope::All => 0..h.ball_count(class),
            Scope::Origin { level } if class <= level => 0..h.order().pow(level - class),
            Scope::Origin { .. } => 0..1,
        }
    }
}

/// A sampled edge set, grouped by distance class and sorted within each class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledGraph {
    hierarchy: Hierarchy,
    /// `edges[k - 1]` holds class `k`.
    edges: Vec<Vec<Edge>>,
}

impl SampledGraph {
    /// Builds a graph from explicit edges; validates classes and ordering.
    pub fn from_edges(hierarchy: Hierarchy, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut by_class = vec![Vec::new(); hierarchy.depth() as usize];
        for (a, b) in edges {
            hierarchy.check_vertex(a)?;
            hierarchy.check_vertex(b)?;
            if a == b {
                return Err(Error::Config(format!("self-loop at vertex {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            let k = hierarchy.distance_ids(u, v);
            by_class[k as usize - 1].push((u, v));
        }
        for class in &mut by_class {
            class.sort_unstable();
            if class.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Config("duplicate edge".into()));
            }
        }
        Ok(Self {
            hierarchy,
            edges: by_class,
        })
    }

    /// A graph with no edges.
    pub fn empty(hierarchy: Hierarchy) -> Self {
        Self {
            hierarchy,
            edges: vec![Vec::new(); hierarchy.depth() as usize],
        }
    }

    pub fn hierarchy(&self) -> Hierarchy {
        self.hierarchy
    }

    pub fn vertex_count(&self) -> u64 {
        self.hierarchy.vertex_count()
    }

    /// Edges of class `k` (`1 <= k <= K`), sorted.
    pub fn edges(&self, k: u32) -> &[Edge] {
        &self.edges[k as usize - 1]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// All edges with their class, classes ascending.
    pub fn iter_edges(&self) -> impl Iterator<Item = (Edge, u32)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(i, es)| es.iter().map(move |&e| (e, i as u32 + 1)))
    }

    /// Class-`k` edges whose endpoints both lie in `ball`.
    pub fn edges_within(&self, ball: BallId, k: u32) -> impl Iterator<Item = Edge> + '_ {
        let range = self.hierarchy.members(ball);
        let es = self.edges(k);
        let start = es.partition_point(|&(u, _)| u < range.start);
        let end = es.partition_point(|&(u, _)| u < range.end);
        es[start..end]
            .iter()
            .copied()
            .filter(move |&(_, v)| v < range.end)
    }

    /// Degree of `v` in class `k`: a realisation of `Y^(k)` at `v`.
    pub fn degree_in_class(&self, v: VertexId, k: u32) -> Result<u64> {
        self.hierarchy.check_vertex(v)?;
        if k == 0 || k > self.hierarchy.depth() {
            return Err(Error::OutOfRange {
                what: "distance class",
                value: k as u64,
                allowed: format!("1..={}", self.hierarchy.depth()),
            });
        }
        let es = self.edges(k);
        let start = es.partition_point(|&(u, _)| u < v);
        let end = es.partition_point(|&(u, _)| u <= v);
        let as_low = (end - start) as u64;
        let as_high = es.iter().filter(|&&(_, w)| w == v).count() as u64;
        Ok(as_low + as_high)
    }

    /// Total degree of `v` over all classes.
    pub fn degree_of(&self, v: VertexId) -> Result<u64> {
        (1..=self.hierarchy.depth())
            .map(|k| self.degree_in_class(v, k))
            .sum()
    }

    /// Class-`k` degrees of the vertices of `ball`, indexed by offset in the ball.
    pub fn degree_table(&self, ball: BallId, k: u32) -> Vec<u32> {
        let range = self.hierarchy.members(ball);
        let mut deg = vec![0u32; (range.end - range.start) as usize];
        for &(u, v) in self.edges(k) {
            if range.contains(&u) {
                deg[(u - range.start) as usize] += 1;
            }
            if range.contains(&v) {
                deg[(v - range.start) as usize] += 1;
            }
        }
        deg
    }

    /// Checks that every class-`k` edge is at distance `k`, ordered and unique.
    pub fn validate(&self) -> Result<()> {
        for (i, es) in self.edges.iter().enumerate() {
            let k = i as u32 + 1;
            for &(u, v) in es {
                if u >= v || v >= self.vertex_count() {
                    return Err(Error::Config(format!("malformed edge ({u}, {v})")));
                }
                let d = self.hierarchy.distance_ids(u, v);
                if d != k {
                    return Err(Error::Config(format!(
                        "edge ({u}, {v}) listed in class {k} is at distance {d}"
                    )));
                }
            }
            if es.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config(format!("class {k} not strictly sorted")));
            }
        }
        Ok(())
    }

    /// Writes the edge-list format: a header `N K`, then `u v k` per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.hierarchy.order(), self.hierarchy.depth())?;
        for ((u, v), k) in self.iter_edges() {
            writeln!(out, "{u} {v} {k}")?;
        }
        out.flush()
    }

    /// Reads the edge-list format, validating that each line's class equals
    /// the ultrametric distance of its endpoints. Blank lines and lines
    /// starting with `#` after the header are ignored.
    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let parse_err = |line: usize, message: String| Error::Parse {
            line: line + 1,
            message,
        };
        let (i, header) = lines
            .next()
            .ok_or_else(|| parse_err(0, "missing header".into()))?;
        let header = header.map_err(|e| parse_err(i, e.to_string()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [n, k] = fields[..] else {
            return Err(parse_err(i, format!("header must be `N K`, got {header:?}")));
        };
        let n: u64 = n.parse().map_err(|e| parse_err(i, format!("N: {e}")))?;
        let k: u32 = k.parse().map_err(|e| parse_err(i, format!("K: {e}")))?;
        let hierarchy = Hierarchy::new(n, k)?;
        let mut graph = SampledGraph::empty(hierarchy);
        for (i, line) in lines {
            let line = line.map_err(|e| parse_err(i, e.to_string()))?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| parse_err(i, e.to_string()))?;
            let [u, v, class] = nums[..] else {
                return Err(parse_err(i, format!("expected `u v k`, got {line:?}")));
            };
            if u >= v || v >= hierarchy.vertex_count() {
                return Err(parse_err(i, format!("invalid endpoints ({u}, {v})")));
            }
            let d = hierarchy.distance_ids(u, v) as u64;
            if d != class || class == 0 || class > k as u64 {
                return Err(parse_err(
                    i,
                    format!("edge ({u}, {v}) is at distance {d}, listed as class {class}"),
                ));
            }
            graph.edges[class as usize - 1].push((u, v));
        }
        for (idx, es) in graph.edges.iter().enumerate() {
            if es.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("class {} edges not strictly sorted or duplicated", idx + 1),
                });
            }
        }
        Ok(graph)
    }
}

/// Samples every class over the whole truncation, as trial 0 of `cfg.seed`.
pub fn sample_graph(cfg: &GraphConfig) -> SampledGraph {
    sample_trial(cfg, 0, &SamplePlan::full(cfg.depth()))
}

/// Samples the work items named by `plan` for one trial.
pub fn sample_trial(cfg: &GraphConfig, trial: u64, plan: &SamplePlan) -> SampledGraph {
    let h = cfg.hierarchy();
    let mut graph = SampledGraph::empty(h);
    for &(class, scope) in plan.classes() {
        if class == 0 || class > h.depth() {
            continue;
        }
        let p = cfg.edge_probability(class);
        let items: Vec<Vec<Edge>> = SamplePlan::suffixes(h, class, scope)
            .into_par_iter()
            .map(|suffix| {
                let mut rng = rng::stream(cfg.seed(), Domain::Edges, trial, class as u64, suffix);
                sample_item(h, class, suffix, p, &mut rng)
            })
            .collect();
        let edges = &mut graph.edges[class as usize - 1];
        edges.reserve(items.iter().map(Vec::len).sum());
        for item in items {
            edges.extend(item);
        }
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| h.distance_ids(u, v) == class));
    }
    graph
}

/// Exact Binomial(`trials`, `p`) for `trials` beyond `u64` by summing chunks.
fn binomial_count(trials: u128, p: f64, rng: &mut ChaCha8Rng) -> u64 {
    if p <= 0.0 || trials == 0 {
        return 0;
    }
    let mut left = trials;
    let mut total = 0u64;
    while left > 0 {
        let chunk = left.min(u64::MAX as u128) as u64;
        left -= chunk as u128;
        total += Binomial::new(chunk, p.min(1.0))
            .expect("probability validated")
            .sample(rng);
    }
    total
}

/// Edges of class `k` inside the `k`-ball `suffix`, sorted.
fn sample_item(h: Hierarchy, k: u32, suffix: u64, p: f64, rng: &mut ChaCha8Rng) -> Vec<Edge> {
    let n = h.order();
    let pairs = pairs_in_class(n, k);
    let count = binomial_count(pairs, p, rng);
    if count == 0 {
        return Vec::new();
    }
    let sub = h.pow(k - 1);
    let base = suffix * h.pow(k);
    let place = |a: u64, b: u64, ra: u64, rb: u64| (base + a * sub + ra, base + b * sub + rb);

    if pairs <= DENSE_PAIR_LIMIT && (count as u128) * 4 > pairs {
        let sub2 = sub * sub;
        let mut out: Vec<Edge> = index::sample(rng, pairs as usize, count as usize)
            .into_iter()
            .map(|i| {
                let i = i as u64;
                let (a, b) = unrank_pair(n, i / sub2);
                let r = i % sub2;
                place(a, b, r / sub, r % sub)
            })
            .collect();
        out.sort_unstable();
        return out;
    }

    let mut out: Vec<Edge> = Vec::with_capacity(count as usize);
    while (out.len() as u64) < count {
        let missing = count - out.len() as u64;
        for _ in 0..missing {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            let ra = rng.random_range(0..sub);
            let rb = rng.random_range(0..sub);
            out.push(place(a, b, ra, rb));
        }
        out.sort_unstable();
        out.dedup();
    }
    out
}

/// The `q`-th unordered pair `(a, b)`, `a < b < n`, in lexicographic order.
fn unrank_pair(n: u64, mut q: u64) -> (u64, u64) {
    let mut a = 0;
    loop {
        let row = n - 1 - a;
        if q < row {
            return (a, a + 1 + q);
        }
        q -= row;
        a += 1;
    }
}
