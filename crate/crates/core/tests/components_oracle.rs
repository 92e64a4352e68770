use std::collections::BTreeSet;

use hierperc::components::{build_cascade, cascade_percolates, components_within_ball, ComponentLabeling};
use hierperc::graphgen::{sample_graph, GraphConfig, SampledGraph};
use hierperc::hiergroup::{BallId, Hierarchy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Connected components by depth-first search over an adjacency matrix.
fn dfs_components(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            comp.insert(x);
            for y in 0..n {
                if adj[x][y] && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

fn partition_of(lab: &ComponentLabeling) -> Vec<BTreeSet<usize>> {
    let mut parts = vec![BTreeSet::new(); lab.component_count()];
    for i in 0..lab.universe_size() {
        parts[lab.label_of(lab.offset() + i).unwrap()].insert(i as usize);
    }
    parts
}

fn small_hierarchies() -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = (2..=12).map(|n| (n, 1)).collect();
    out.extend([(2, 2), (3, 2), (2, 3)]);
    out
}

fn random_config(rng: &mut ChaCha8Rng, seed: u64) -> GraphConfig {
    let shapes = small_hierarchies();
    let (n, k) = shapes[rng.random_range(0..shapes.len())];
    let c: Vec<f64> = (1..=k)
        .map(|j| {
            let max = (n as f64).powi(2 * j as i32 - 1);
            rng.random_range(0.05..=1.0) * max
        })
        .collect();
    GraphConfig::from_list(n, k, &c, seed).unwrap()
}

#[test]
fn union_find_matches_depth_first_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for seed in 0..10_000u64 {
        let cfg = random_config(&mut rng, seed);
        let g = sample_graph(&cfg);
        let h = cfg.hierarchy();
        let edges: Vec<(usize, usize)> = g.iter_edges().map(|((u, v), _)| (u as usize, v as usize)).collect();
        let top = BallId { level: h.depth(), suffix: 0 };
        let lab = components_within_ball(&g, top, h.depth()).unwrap();
        let mut got = partition_of(&lab);
        let mut want = dfs_components(h.vertex_count() as usize, &edges);
        got.sort();
        want.sort();
        assert_eq!(got, want, "seed {seed}, N = {}, K = {}", h.order(), h.depth());
        let total: u64 = lab.sizes().iter().sum();
        assert_eq!(total, h.vertex_count());
        let (_, giant) = lab.giant().unwrap();
        assert_eq!(giant as usize, want.iter().map(BTreeSet::len).max().unwrap());
    }
}

#[test]
fn sub_ball_labelings_use_only_allowed_classes() {
    let cfg = GraphConfig::from_list(3, 2, &[1.5, 6.0], 4).unwrap();
    for seed in 0..200 {
        let g = sample_graph(&cfg.with_seed(seed));
        for suffix in 0..3 {
            let ball = BallId { level: 1, suffix };
            let lab = components_within_ball(&g, ball, 1).unwrap();
            let edges: Vec<(usize, usize)> = g
                .edges(1)
                .iter()
                .filter(|&&(u, _)| u / 3 == suffix)
                .map(|&(u, v)| ((u - 3 * suffix) as usize, (v - 3 * suffix) as usize))
                .collect();
            let mut want = dfs_components(3, &edges);
            let mut got: Vec<BTreeSet<usize>> = partition_of(&lab);
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
        let class1_only = components_within_ball(&g, BallId { level: 2, suffix: 0 }, 1).unwrap();
        for u in 0..9 {
            for v in 0..9 {
                if u / 3 != v / 3 {
                    assert!(!class1_only.connected(u, v));
                }
            }
        }
    }
}

/// Independent cascade built from explicit point sets and graph search.
/// Returns, for every vertex, the deepest level whose giant contains it.
fn set_cascade(h: Hierarchy, g: &SampledGraph) -> Vec<u32> {
    let n = h.order() as usize;
    let total = h.vertex_count() as usize;
    let mut depth = vec![0u32; total];
    // giants[b] = point set of the current-level giant of ball b
    let mut giants: Vec<Option<BTreeSet<usize>>> = Vec::new();
    for b in 0..total / n {
        let edges: Vec<(usize, usize)> = g
            .edges(1)
            .iter()
            .filter(|&&(u, _)| u as usize / n == b)
            .map(|&(u, v)| (u as usize - b * n, v as usize - b * n))
            .collect();
        let comps = dfs_components(n, &edges);
        let best = comps.iter().max_by(|a, b| a.len().cmp(&b.len()).then(b.first().cmp(&a.first())));
        let giant = best
            .filter(|c| c.len() >= 2)
            .map(|c| c.iter().map(|&i| i + b * n).collect::<BTreeSet<_>>());
        if let Some(set) = &giant {
            for &v in set {
                depth[v] = 1;
            }
        }
        giants.push(giant);
    }
    for k in 2..=h.depth() {
        let mut next = Vec::new();
        for b in 0..giants.len() / n {
            let subs = &giants[b * n..(b + 1) * n];
            let mut edges = Vec::new();
            for &(u, v) in g.edges(k) {
                let (u, v) = (u as usize, v as usize);
                let find = |x: usize| subs.iter().position(|s| s.as_ref().is_some_and(|s| s.contains(&x)));
                if let (Some(i), Some(j)) = (find(u), find(v)) {
                    edges.push((i, j));
                }
            }
            let clusters: Vec<BTreeSet<usize>> = dfs_components(n, &edges)
                .into_iter()
                .map(|c| c.into_iter().filter(|&i| subs[i].is_some()).collect::<BTreeSet<_>>())
                .filter(|c| !c.is_empty())
                .collect();
            let best = clusters
                .iter()
                .max_by(|a, b| a.len().cmp(&b.len()).then(b.first().cmp(&a.first())));
            let giant = best.filter(|c| c.len() >= 2).map(|c| {
                c.iter()
                    .flat_map(|&i| subs[i].as_ref().unwrap().iter().copied())
                    .collect::<BTreeSet<_>>()
            });
            if let Some(set) = &giant {
                for &v in set {
                    depth[v] = k;
                }
            }
            next.push(giant);
        }
        giants = next;
    }
    depth
}

#[test]
fn cascade_matches_set_construction() {
    let shapes: [(u64, u32, f64); 5] = [(2, 3, 1.0), (3, 2, 0.6), (3, 3, 0.6), (4, 2, 0.5), (5, 2, 0.4)];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..2000u64 {
        let (n, k, scale) = shapes[(seed % shapes.len() as u64) as usize];
        let c: Vec<f64> = (1..=k)
            .map(|j| scale * rng.random_range(0.3..=1.0) * (n as f64).powi(2 * j as i32 - 1))
            .collect();
        let cfg = GraphConfig::from_list(n, k, &c, seed).unwrap();
        let g = sample_graph(&cfg);
        let tree = build_cascade(&g);
        let want = set_cascade(cfg.hierarchy(), &g);
        for (v, &d) in want.iter().enumerate() {
            assert_eq!(tree.depth_of(v as u64), Some(d), "seed {seed}, vertex {v}");
        }
        for level in 0..=k {
            assert_eq!(cascade_percolates(&tree, level).unwrap(), want[0] >= level);
        }
        // point counts add up through the levels
        for level in 2..=k {
            let h = cfg.hierarchy();
            for (b, giant) in tree.level(level).iter().enumerate() {
                let Some(giant) = giant else { continue };
                let ball = BallId { level, suffix: b as u64 };
                let members = tree.giant_members(ball);
                assert_eq!(members.len() as u64, giant.members);
                let points: u64 = members
                    .iter()
                    .map(|&s| tree.giant(BallId { level: level - 1, suffix: s }).unwrap().points)
                    .sum();
                assert_eq!(points, giant.points);
                assert!(giant.points <= h.pow(level));
                assert!(giant.points > 0);
            }
        }
    }
}
