//! Connected components and the cascade of giant components.
//!
//! Level 1 of the cascade is the giant component of each 1-ball under class-1
//! edges. At level `k` the vertices are the level-`(k-1)` giants of the `N`
//! sub-balls of a `k`-ball, two of them adjacent when a class-`k` edge joins
//! points of both; the level-`k` giant is the largest cluster. Edges touching
//! non-giant points are ignored at every level above 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphgen::SampledGraph;
use crate::hiergroup::{BallId, Hierarchy, VertexId};

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Size of the set containing `x`.
    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

/// Component labels over a contiguous range of vertex ids.
///
/// Components are numbered by their smallest vertex, so label order is
/// vertex order and ties for the largest component resolve to the one
/// containing the smallest id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    offset: VertexId,
    labels: Vec<u32>,
    sizes: Vec<u64>,
}

impl ComponentLabeling {
    /// Labels `0..n` (shifted by `offset`) under the given local edges.
    pub fn from_edges(offset: VertexId, n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::new(n);
        for (a, b) in edges {
            uf.union(a, b);
        }
        Self::from_union_find(offset, &mut uf)
    }

    pub fn from_union_find(offset: VertexId, uf: &mut UnionFind) -> Self {
        let n = uf.len();
        let mut root_label = vec![u32::MAX; n];
        let mut labels = Vec::with_capacity(n);
        let mut sizes = Vec::new();
        for i in 0..n {
            let r = uf.find(i);
            if root_label[r] == u32::MAX {
                root_label[r] = sizes.len() as u32;
                sizes.push(0);
            }
            let l = root_label[r];
            sizes[l as usize] += 1;
            labels.push(l);
        }
        Self {
            offset,
            labels,
            sizes,
        }
    }

    /// Smallest vertex id of the labelled range.
    pub fn offset(&self) -> VertexId {
        self.offset
    }

    pub fn universe_size(&self) -> u64 {
        self.labels.len() as u64
    }

    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    /// Component sizes indexed by label.
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn label_of(&self, v: VertexId) -> Option<usize> {
        let i = v.checked_sub(self.offset)?;
        self.labels.get(i as usize).map(|&l| l as usize)
    }

    pub fn component_size_of(&self, v: VertexId) -> Option<u64> {
        self.label_of(v).map(|l| self.sizes[l])
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        matches!((self.label_of(u), self.label_of(v)), (Some(a), Some(b)) if a == b)
    }

    /// Label and size of the largest component.
    pub fn giant(&self) -> Option<(usize, u64)> {
        let mut best: Option<(usize, u64)> = None;
        for (l, &s) in self.sizes.iter().enumerate() {
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((l, s));
            }
        }
        best
    }

    /// Size of the largest component other than the giant, 0 if there is none.
    pub fn second_largest(&self) -> u64 {
        let Some((g, _)) = self.giant() else { return 0 };
        self.sizes
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != g)
            .map(|(_, &s)| s)
            .max()
            .unwrap_or(0)
    }

    /// Vertex ids carrying label `l`.
    pub fn members(&self, l: usize) -> impl Iterator<Item = VertexId> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |&(_, &x)| x as usize == l)
            .map(|(i, _)| self.offset + i as u64)
    }
}

/// Components of the subgraph induced on `ball` by edges of classes `1..=max_class`.
pub fn components_within_ball(g: &SampledGraph, ball: BallId, max_class: u32) -> Result<ComponentLabeling> {
    let h = g.hierarchy();
    h.ball(ball.level, ball.suffix)?;
    if max_class > ball.level {
        return Err(Error::Config(format!(
            "edge class {max_class} exceeds the level {} of the ball",
            ball.level
        )));
    }
    let range = h.members(ball);
    let n = (range.end - range.start) as usize;
    let offset = range.start;
    let edges = (1..=max_class).flat_map(|k| {
        g.edges_within(ball, k)
            .map(move |(u, v)| ((u - offset) as usize, (v - offset) as usize))
    });
    Ok(ComponentLabeling::from_edges(offset, n, edges))
}

/// The giant of one ball at one cascade level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GiantSummary {
    /// Number of points (level 1) or member sub-ball giants (level >= 2).
    pub members: u64,
    /// Number of points.
    pub points: u64,
    /// Smallest vertex id in the giant.
    pub smallest: VertexId,
}

/// Per-level record for the ball containing the anchor vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: u32,
    pub giant_members: Option<u64>,
    pub points: Option<u64>,
    pub chain_intact: bool,
}

/// Giants of every ball at every level below a root ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeTree {
    hierarchy: Hierarchy,
    root: BallId,
    /// Deepest level whose giant contains the vertex, by local index.
    depth: Vec<u8>,
    /// `giants[k - 1][b]` is the level-`k` giant of the `b`-th `k`-ball of the root.
    giants: Vec<Vec<Option<GiantSummary>>>,
}

/// Cascade over the whole truncation.
pub fn build_cascade(g: &SampledGraph) -> CascadeTree {
    let h = g.hierarchy();
    build_cascade_in_ball(g, BallId {
        level: h.depth(),
        suffix: 0,
    })
    .expect("the top ball always exists")
}

/// Cascade of the giants inside `root`, levels `1..=root.level`.
pub fn build_cascade_in_ball(g: &SampledGraph, root: BallId) -> Result<CascadeTree> {
    let h = g.hierarchy();
    h.ball(root.level, root.suffix)?;
    let n = h.order() as usize;
    let range = h.members(root);
    let offset = range.start;
    let total = (range.end - range.start) as usize;
    let mut depth = vec![0u8; total];
    let mut giants = Vec::with_capacity(root.level as usize);

    if root.level >= 1 {
        let mut uf = UnionFind::new(total);
        for (u, v) in g.edges_within(root, 1) {
            uf.union((u - offset) as usize, (v - offset) as usize);
        }
        let mut level1 = Vec::with_capacity(total / n);
        for b in 0..total / n {
            let mut best: Option<(usize, usize)> = None;
            for i in b * n..(b + 1) * n {
                let s = uf.set_size(i);
                if best.is_none_or(|(_, bs)| s > bs) {
                    best = Some((i, s));
                }
            }
            let (first, size) = best.expect("balls are non-empty");
            if size < 2 {
                level1.push(None);
                continue;
            }
            let r = uf.find(first);
            for i in b * n..(b + 1) * n {
                if uf.find(i) == r {
                    depth[i] = 1;
                }
            }
            level1.push(Some(GiantSummary {
                members: size as u64,
                points: size as u64,
                smallest: offset + first as u64,
            }));
        }
        giants.push(level1);
    }

    for k in 2..=root.level {
        let unit = h.pow(k - 1) as usize;
        let units = total / unit;
        let prev: &Vec<Option<GiantSummary>> = &giants[k as usize - 2];
        let mut uf = UnionFind::new(units);
        let below = k as u8 - 1;
        for (u, v) in g.edges_within(root, k) {
            let (a, b) = ((u - offset) as usize, (v - offset) as usize);
            if depth[a] >= below && depth[b] >= below {
                uf.union(a / unit, b / unit);
            }
        }
        let mut level = Vec::with_capacity(units / n);
        let mut members = vec![0u64; n];
        let mut points = vec![0u64; n];
        for b in 0..units / n {
            let base = b * n;
            members.iter_mut().for_each(|x| *x = 0);
            points.iter_mut().for_each(|x| *x = 0);
            let mut best: Option<usize> = None;
            for u in base..base + n {
                let Some(sub) = prev[u] else { continue };
                let r = uf.find(u) - base;
                members[r] += 1;
                points[r] += sub.points;
                if best.is_none_or(|x| members[r] > members[x]) {
                    best = Some(r);
                }
            }
            // `best` tracks the first cluster to reach the running maximum,
            // which is the one with the smallest sub-ball index among ties
            let Some(r) = best.filter(|&r| members[r] >= 2) else {
                level.push(None);
                continue;
            };
            let mut smallest = None;
            for u in base..base + n {
                if prev[u].is_none() || uf.find(u) - base != r {
                    continue;
                }
                smallest.get_or_insert(prev[u].unwrap().smallest);
                for d in &mut depth[u * unit..(u + 1) * unit] {
                    if *d >= below {
                        *d = k as u8;
                    }
                }
            }
            level.push(Some(GiantSummary {
                members: members[r],
                points: points[r],
                smallest: smallest.expect("giant has members"),
            }));
        }
        giants.push(level);
    }

    Ok(CascadeTree {
        hierarchy: h,
        root,
        depth,
        giants,
    })
}

impl CascadeTree {
    pub fn hierarchy(&self) -> Hierarchy {
        self.hierarchy
    }

    pub fn root(&self) -> BallId {
        self.root
    }

    /// Smallest vertex of the root ball; vertex 0 when the root contains the origin.
    pub fn anchor(&self) -> VertexId {
        self.hierarchy.members(self.root).start
    }

    /// Deepest cascade level containing `v`, or `None` outside the root.
    pub fn depth_of(&self, v: VertexId) -> Option<u32> {
        let i = v.checked_sub(self.anchor())?;
        self.depth.get(i as usize).map(|&d| d as u32)
    }

    /// Level-`k` giant of a `k`-ball inside the root.
    pub fn giant(&self, ball: BallId) -> Option<GiantSummary> {
        if ball.level == 0 || ball.level > self.root.level {
            return None;
        }
        let first = self.anchor() / self.hierarchy.pow(ball.level);
        let idx = ball.suffix.checked_sub(first)?;
        self.giants[ball.level as usize - 1]
            .get(idx as usize)
            .copied()
            .flatten()
    }

    /// All level-`k` giants of the root, one slot per `k`-ball.
    pub fn level(&self, k: u32) -> &[Option<GiantSummary>] {
        &self.giants[k as usize - 1]
    }

    /// Members of the giant of `ball`: vertex ids at level 1, sub-ball
    /// suffixes above.
    pub fn giant_members(&self, ball: BallId) -> Vec<u64> {
        if self.giant(ball).is_none() {
            return Vec::new();
        }
        let h = self.hierarchy;
        let k = ball.level;
        if k == 1 {
            h.members(ball)
                .filter(|&v| self.depth_of(v).is_some_and(|d| d >= 1))
                .collect()
        } else {
            h.sub_balls(ball)
                .filter(|&sub| h.members(sub).any(|v| self.depth_of(v).is_some_and(|d| d >= k)))
                .map(|sub| sub.suffix)
                .collect()
        }
    }

    /// Point count of the level-`k` giant of the `k`-ball containing the anchor.
    pub fn cascade_size(&self, k: u32) -> Option<u64> {
        if k == 0 {
            return Some(1);
        }
        self.giants.get(k as usize - 1)?.first().copied().flatten().map(|g| g.points)
    }

    /// Whether the anchor belongs to the level-`k` giants for every level up to `depth`.
    pub fn chain_intact(&self, depth: u32) -> bool {
        depth == 0 || self.depth[0] as u32 >= depth
    }

    /// One record per level for the ball containing the anchor.
    pub fn summary(&self) -> Vec<LevelRecord> {
        (1..=self.root.level)
            .map(|k| {
                let g = self.giants[k as usize - 1][0];
                LevelRecord {
                    level: k,
                    giant_members: g.map(|g| g.members),
                    points: g.map(|g| g.points),
                    chain_intact: self.chain_intact(k),
                }
            })
            .collect()
    }
}

/// Whether the anchor's giant chain is unbroken through level `depth`.
pub fn cascade_percolates(t: &CascadeTree, depth: u32) -> Result<bool> {
    if depth > t.root.level {
        return Err(Error::OutOfRange {
            what: "cascade depth",
            value: depth as u64,
            allowed: format!("0..={}", t.root.level),
        });
    }
    Ok(t.chain_intact(depth))
}

/// `16 c / (c - 1)^2 * ln N`.
pub fn small_component_bound(c: f64, n: u64) -> Result<f64> {
    if !(c > 1.0) {
        return Err(Error::Domain(format!("small-component bound needs c > 1, got {c}")));
    }
    Ok(16.0 * c / ((c - 1.0) * (c - 1.0)) * (n as f64).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallComponentCheck {
    pub second_largest: u64,
    pub bound: f64,
    pub holds: bool,
}

/// Compares the second-largest component with the small-component bound.
pub fn small_component_bound_check(labeling: &ComponentLabeling, c: f64, n: u64) -> Result<SmallComponentCheck> {
    let bound = small_component_bound(c, n)?;
    let second_largest = labeling.second_largest();
    Ok(SmallComponentCheck {
        second_largest,
        bound,
        holds: second_largest as f64 <= bound,
    })
}

/// Aggregate of many bound checks; isolated violations are recorded, not fatal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallComponentSummary {
    pub trials: u64,
    pub satisfied: u64,
    pub fraction: f64,
    pub max_second_largest: u64,
    pub bound: f64,
}

impl SmallComponentSummary {
    pub fn from_checks(checks: &[SmallComponentCheck]) -> Self {
        let satisfied = checks.iter().filter(|c| c.holds).count() as u64;
        let trials = checks.len() as u64;
        Self {
            trials,
            satisfied,
            fraction: if trials == 0 { f64::NAN } else { satisfied as f64 / trials as f64 },
            max_second_largest: checks.iter().map(|c| c.second_largest).max().unwrap_or(0),
            bound: checks.first().map_or(f64::NAN, |c| c.bound),
        }
    }
}

/// How often edges at non-giant points would have merged level-`k` clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonGiantEffect {
    pub level: u32,
    /// `k`-balls with at least two sub-ball giants.
    pub balls_checked: u64,
    /// Of those, balls where full connectivity groups the sub-ball giants differently.
    pub balls_changed: u64,
}

/// Compares the cascade's level-`k` clustering of sub-ball giants with the
/// clustering induced by all intra-ball edges of classes `1..=k`.
pub fn non_giant_effect(g: &SampledGraph, t: &CascadeTree, k: u32) -> Result<NonGiantEffect> {
    if k < 2 || k > t.root.level {
        return Err(Error::OutOfRange {
            what: "cascade level",
            value: k as u64,
            allowed: format!("2..={}", t.root.level),
        });
    }
    let h = t.hierarchy;
    let n = h.order() as usize;
    let offset = t.anchor();
    let total = t.depth.len();
    let unit = h.pow(k - 1) as usize;
    let below = k as u8 - 1;

    let mut full = UnionFind::new(total);
    for class in 1..=k {
        for (u, v) in g.edges_within(t.root, class) {
            full.union((u - offset) as usize, (v - offset) as usize);
        }
    }
    let mut cascade = UnionFind::new(total / unit);
    for (u, v) in g.edges_within(t.root, k) {
        let (a, b) = ((u - offset) as usize, (v - offset) as usize);
        if t.depth[a] >= below && t.depth[b] >= below {
            cascade.union(a / unit, b / unit);
        }
    }

    let prev = &t.giants[k as usize - 2];
    let mut checked = 0;
    let mut changed = 0;
    for b in 0..total / unit / n {
        let subs: Vec<usize> = (b * n..(b + 1) * n).filter(|&u| prev[u].is_some()).collect();
        if subs.len() < 2 {
            continue;
        }
        checked += 1;
        let reps: Vec<usize> = subs
            .iter()
            .map(|&u| (prev[u].unwrap().smallest - offset) as usize)
            .collect();
        let differs = (0..subs.len()).any(|i| {
            (i + 1..subs.len()).any(|j| {
                let in_cascade = cascade.find(subs[i]) == cascade.find(subs[j]);
                let in_full = full.find(reps[i]) == full.find(reps[j]);
                in_cascade != in_full
            })
        });
        if differs {
            changed += 1;
        }
    }
    Ok(NonGiantEffect {
        level: k,
        balls_checked: checked,
        balls_changed: changed,
    })
}

/// Cascade percolation of the anchor against plain connectivity inside the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityComparison {
    pub cascade: bool,
    /// The anchor reaches a point at distance `root.level` using any intra-root edges.
    pub plain: bool,
}

pub fn compare_with_plain_connectivity(g: &SampledGraph, t: &CascadeTree) -> Result<ConnectivityComparison> {
    let labeling = components_within_ball(g, t.root, t.root.level)?;
    let h = t.hierarchy;
    let anchor = t.anchor();
    let plain = if t.root.level == 0 {
        true
    } else {
        let near = h.members(h.ball_of_id(anchor, t.root.level - 1));
        let label = labeling.label_of(anchor).expect("anchor lies in the root");
        labeling.members(label).any(|v| !near.contains(&v))
    };
    Ok(ConnectivityComparison {
        cascade: t.chain_intact(t.root.level),
        plain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::{sample_graph, GraphConfig};

    fn hier(n: u64, k: u32) -> Hierarchy {
        Hierarchy::new(n, k).unwrap()
    }

    #[test]
    fn no_edges_gives_singletons() {
        let g = SampledGraph::empty(hier(3, 2));
        let lab = components_within_ball(&g, BallId { level: 2, suffix: 0 }, 2).unwrap();
        assert_eq!(lab.component_count(), 9);
        assert_eq!(lab.giant(), Some((0, 1)));
        assert_eq!(lab.second_largest(), 1);
        let t = build_cascade(&g);
        assert!(!cascade_percolates(&t, 1).unwrap());
        assert!(cascade_percolates(&t, 0).unwrap());
        assert_eq!(t.cascade_size(1), None);
    }

    #[test]
    fn complete_graph_is_one_component() {
        let cfg = GraphConfig::from_list(4, 1, &[4.0], 0).unwrap();
        let g = sample_graph(&cfg);
        let lab = components_within_ball(&g, BallId { level: 1, suffix: 0 }, 1).unwrap();
        assert_eq!(lab.sizes(), &[4]);
        assert_eq!(lab.second_largest(), 0);
        let check = small_component_bound_check(&lab, 4.0, 4).unwrap();
        assert!(check.holds);
    }

    #[test]
    fn class_above_ball_level_is_rejected() {
        let g = SampledGraph::empty(hier(3, 2));
        assert!(components_within_ball(&g, BallId { level: 1, suffix: 0 }, 2).is_err());
        assert!(components_within_ball(&g, BallId { level: 1, suffix: 3 }, 1).is_err());
    }

    #[test]
    fn giant_tie_break_prefers_smallest_vertex() {
        // two components of size 2 inside one 1-ball: {1, 2} and {0, 3}
        let g = SampledGraph::from_edges(hier(4, 1), [(1, 2), (0, 3)]).unwrap();
        let t = build_cascade(&g);
        assert_eq!(t.giant_members(BallId { level: 1, suffix: 0 }), vec![0, 3]);
        let g = SampledGraph::from_edges(hier(4, 1), [(1, 2), (2, 3)]).unwrap();
        let t = build_cascade(&g);
        assert_eq!(t.giant_members(BallId { level: 1, suffix: 0 }), vec![1, 2, 3]);
        assert!(!cascade_percolates(&t, 1).unwrap());
    }

    /// N = 3, K = 2. 1-balls A = {0,1,2}, B = {3,4,5}, C = {6,7,8}.
    /// A's giant is {0,1}, B's is {3,4,5}, C's is {6,7}. A class-2 edge joins
    /// 1 and 4; another joins the non-giant point 2 to C.
    fn fixture() -> SampledGraph {
        SampledGraph::from_edges(
            hier(3, 2),
            [(0, 1), (3, 4), (4, 5), (6, 7), (1, 4), (2, 6)],
        )
        .unwrap()
    }

    #[test]
    fn hand_built_cascade() {
        let g = fixture();
        let t = build_cascade(&g);
        assert_eq!(t.cascade_size(1), Some(2));
        assert_eq!(t.cascade_size(2), Some(5));
        let top = BallId { level: 2, suffix: 0 };
        assert_eq!(t.giant_members(top), vec![0, 1]);
        assert_eq!(t.giant(top).unwrap().members, 2);
        assert!(cascade_percolates(&t, 2).unwrap());
        assert_eq!(t.depth_of(2), Some(0));
        assert_eq!(t.depth_of(6), Some(1));
        assert_eq!(t.depth_of(5), Some(2));
        assert!(cascade_percolates(&t, 3).is_err());
        let summary = t.summary();
        assert_eq!(summary.len(), 2);
        assert_eq!(summary[1].points, Some(5));
        assert!(summary[1].chain_intact);
    }

    #[test]
    fn non_giant_edges_are_diagnosed() {
        let g = fixture();
        let t = build_cascade(&g);
        let eff = non_giant_effect(&g, &t, 2).unwrap();
        assert_eq!(eff.balls_checked, 1);
        // 2 is joined to 0 by no edge, so the edge (2, 6) does not merge A and C
        assert_eq!(eff.balls_changed, 0);
        let mut edges: Vec<_> = g.iter_edges().map(|(e, _)| e).collect();
        // 2 now bridges B and C outside every giant
        edges.push((2, 5));
        let g2 = SampledGraph::from_edges(hier(3, 2), edges).unwrap();
        let t2 = build_cascade(&g2);
        let eff = non_giant_effect(&g2, &t2, 2).unwrap();
        assert_eq!(eff.balls_changed, 1);
        assert_eq!(t2.cascade_size(2), Some(5));
        let cmp = compare_with_plain_connectivity(&g2, &t2).unwrap();
        assert!(cmp.cascade && cmp.plain);
    }

    #[test]
    fn singleton_cluster_is_not_a_giant() {
        // every 1-ball has a giant but no class-2 edges
        let g = SampledGraph::from_edges(hier(3, 2), [(0, 1), (3, 4), (6, 7)]).unwrap();
        let t = build_cascade(&g);
        assert!(cascade_percolates(&t, 1).unwrap());
        assert!(!cascade_percolates(&t, 2).unwrap());
        assert_eq!(t.cascade_size(2), None);
        let cmp = compare_with_plain_connectivity(&g, &t).unwrap();
        assert!(!cmp.cascade && !cmp.plain);
    }

    #[test]
    fn bound_arithmetic() {
        assert!((small_component_bound(3.0, 2000).unwrap() - 91.2108).abs() < 1e-3);
        assert!((small_component_bound(1.5, 2000).unwrap() - 729.687).abs() < 1e-2);
        assert!(matches!(small_component_bound(1.0, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn find_is_idempotent() {
        let mut uf = UnionFind::new(10);
        uf.union(0, 1);
        uf.union(2, 3);
        uf.union(1, 3);
        let r = uf.find(3);
        assert_eq!(uf.find(r), r);
        assert_eq!(uf.find(3), r);
        assert_eq!(uf.set_size(0), 4);
        assert!(!uf.union(0, 2));
    }
}
